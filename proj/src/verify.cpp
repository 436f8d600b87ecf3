#include "bandspec/verify.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "bandspec/chebyshev.hpp"
#include "bandspec/diagrams.hpp"
#include "bandspec/fourier_emb.hpp"
#include "bandspec/path_oracle.hpp"
#include "bandspec/regularizer.hpp"
#include "bandspec/spectral_estimator.hpp"

namespace bandspec {

namespace {

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
    try {
        CheckResult r = body();
        r.name = name;
        return r;
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

CheckResult path_identity() {
    for (int W = 1; W <= 3; ++W) {
        const auto t = build_table(W, 8);
        for (int n = 1; n <= 8; ++n)
            if (!t.identity_holds(n)) return {"", false, "identity fails at W=" + std::to_string(W)};
    }
    return {"", true, "W=1..3, n<=8"};
}

CheckResult exact_T2() {
    for (int W = 1; W <= 3; ++W) {
        const auto t = build_table(W, 2);
        if (exact_T_moment(t, 2) != Rational(-(W - 1), 2 * W - 1)) return {"", false, "W=" + std::to_string(W)};
    }
    return {"", true, "<T_2> = -(W-1)/(2W-1), W=1..3"};
}

CheckResult kernel_closed_forms() {
    double worst = 0.0;
    const auto p1 = KernelParams::make(1, 0.05);
    for (double t = -6.0; t <= 6.0; t += 0.5) worst = std::max(worst, std::abs(phi_q(p1, t) - std::exp(-t * t / 2)));
    for (double x = -2.0; x <= 2.0; x += 0.25)
        worst = std::max(worst, std::abs(F_q(p1, x) - std::sqrt(pi) * std::exp(-pi * pi * x * x)));
    for (int q : {1, 2, 4}) {
        const auto p = KernelParams::make(q, 0.05);
        worst = std::max(worst, std::abs(F_q(p, 0.0) - std::tgamma(1.0 / (2 * q)) / q));
    }
    return {"", worst < 1e-8, "max deviation " + fmt(worst)};
}

CheckResult poisson_point() {
    const auto k = DeltaKernel::make(std::cos(pi / 3), KernelParams::make(2, 0.05));
    const double d = std::abs(poisson_lhs(k, pi / 4) - poisson_rhs(k, pi / 4));
    return {"", d < 1e-8, "|lhs - rhs| = " + fmt(d)};
}

CheckResult simplex_point() {
    const std::vector<cplx> z{{0.3, 0.4}, {-0.5, 0.2}, {0.1, -0.7}};
    const int n = 7;
    cplx brute = 0.0;
    for (int a = 1; a <= n - 2; ++a)
        for (int b = 1; a + b <= n - 1; ++b) brute += std::pow(z[0], a) * std::pow(z[1], b) * std::pow(z[2], n - a - b);
    const double d = std::abs(simplex_moment_sum(z, n) - brute);
    return {"", d < 1e-10, "E=3, n=7: " + fmt(d)};
}

CheckResult w_dual_form() {
    double worst = 0.0;
    for (int W : {1, 7, 64})
        for (int k = 0; k < 1000; ++k) {
            const double xi = k / 1000.0;
            worst = std::max(worst, std::abs(w_eval(W, xi) - w_eval_sum(W, xi)));
        }
    return {"", worst < 1e-12, "max deviation " + fmt(worst)};
}

CheckResult loop_embedding() {
    EmbQuery q;
    q.graph = MultiGraph::loop();
    q.params = KernelParams::make(2, 0.05);
    q.W = 4;
    const double d = std::abs(emb_sharp(q).value - loop_lattice_sum(q.W, q.g, q.params));
    return {"", d < 1e-6, "W=4: " + fmt(d)};
}

CheckResult diagram_machinery() {
    const auto c = diagram_census(2, 8, PathKind::strengthened);
    std::set<std::string> genus1;
    for (const auto& [key, e] : c.entries) {
        e.diagram.validate();
        if (e.genus == 1) genus1.insert(e.graph_key);
        if (e.simple && (e.diagram.E() != 3 * e.genus - 2 || e.diagram.V() != 2 * e.genus - 1))
            return {"", false, "degree relation fails for " + key};
    }
    return {"", genus1.size() == 1, std::to_string(genus1.size()) + " genus-1 class(es)"};
}

CheckResult kirchhoff_dims() {
    const bool ok = kirchhoff_basis(MultiGraph::loop()).dimension() == 1 &&
                    kirchhoff_basis(MultiGraph::theta()).dimension() == 2 &&
                    kirchhoff_basis(MultiGraph{3, {{0, 1}, {1, 2}}}).dimension() == 0;
    return {"", ok, "loop 1, theta 2, tree 0"};
}

CheckResult moments_vs_paths(int workers) {
    const long samples = 2000;
    double worst = 0.0;
    for (int W = 1; W <= 3; ++W) {
        const auto t = build_table(W, 6);
        MomentOptions opt;
        opt.workers = workers;
        const auto m = estimate_moments(BandMatrixSpec::make(W, 6 * W, 11), PolyKind::UnW, 6, samples, opt);
        for (int n = 1; n <= 6; ++n) {
            const double exact = exact_UnW_moment(t, n);
            const double se = std::max(m.std_errors[n], 1e-9);
            worst = std::max(worst, std::abs(m.values[n] - exact) / se);
        }
    }
    return {"", worst < 4.5, "max deviation " + fmt(worst) + " standard errors"};
}

CheckResult resolvent_large_eps() {
    ResolventQuery q;
    q.W = 4;
    q.epsilon = 100.0;
    q.N = 64;
    q.samples = 10;
    const auto r = avg_resolvent_im(q);
    const double rel = std::abs(r.mean * 100.0 - 1.0);
    return {"", rel < 0.01, "relative deviation from 1/eps " + fmt(rel)};
}

CheckResult semicircle_closed_form() {
    double worst = 0.0;
    for (double E0 : {-0.6, 0.0, 0.3})
        for (double eps : {0.3, 0.05}) {
            const cplx z(E0, eps);
            worst = std::max(worst, std::abs(semicircle_stieltjes(E0, eps) - 2.0 * (-z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0))));
        }
    return {"", worst < 1e-8, "max deviation " + fmt(worst)};
}

CheckResult s_eps_methods() {
    const auto p = KernelParams::make(2, 0.05);
    double worst = 0.0;
    for (cplx z : {cplx(-1.0, 0.0), std::polar(1.0, 1.0), cplx(0.2, 0.5)})
        for (int j = 0; j <= 2; ++j)
            worst = std::max(worst, std::abs(S_eps(p, z, j) - S_eps(p, z, j, SEpsMethod::contour)));
    return {"", worst < 1e-8, "max deviation " + fmt(worst)};
}

CheckResult theta_embedding() {
    EmbQuery q;
    q.graph = MultiGraph::theta();
    q.params = KernelParams::make(2, 0.2);
    q.W = 8;
    const double d = std::abs(emb_sharp(q).value - emb_lattice_sum(q));
    return {"", d < 1e-4, "W=8: " + fmt(d)};
}

}  // namespace

std::vector<CheckResult> run_verify(bool fast, int workers) {
    std::vector<CheckResult> out;
    out.push_back(guarded("path_identity", path_identity));
    out.push_back(guarded("exact_T2", exact_T2));
    out.push_back(guarded("kernel_closed_forms", kernel_closed_forms));
    out.push_back(guarded("poisson_identity", poisson_point));
    out.push_back(guarded("simplex_sum", simplex_point));
    out.push_back(guarded("w_dual_form", w_dual_form));
    out.push_back(guarded("kirchhoff_dimension", kirchhoff_dims));
    out.push_back(guarded("diagram_machinery", diagram_machinery));
    if (fast) return out;
    out.push_back(guarded("loop_embedding", loop_embedding));
    out.push_back(guarded("theta_embedding", theta_embedding));
    out.push_back(guarded("s_eps_direct_vs_contour", s_eps_methods));
    out.push_back(guarded("semicircle_closed_form", semicircle_closed_form));
    out.push_back(guarded("resolvent_large_eps", resolvent_large_eps));
    out.push_back(guarded("moments_vs_paths", [workers] { return moments_vs_paths(workers); }));
    return out;
}

}  // namespace bandspec
