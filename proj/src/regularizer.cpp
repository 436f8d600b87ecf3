#include "bandspec/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bandspec/errors.hpp"
#include "bandspec/quadrature.hpp"

namespace bandspec {

namespace {

constexpr double pi = std::numbers::pi;

cplx cpow_int(cplx w, int e) {
    cplx r(1.0, 0.0);
    while (e) {
        if (e & 1) r *= w;
        w *= w;
        e >>= 1;
    }
    return r;
}

double tail_length(int q, double tol) { return std::pow(std::log(1.0 / tol), 1.0 / (2.0 * q)); }

// int exp(-s^{2q} - (t-s)^{2q}) ds, with s = t/2 + u (even in u).
double self_convolution(int q, double t, double tol) {
    const double h = 0.5 * std::abs(t);
    const double L = h + tail_length(q, tol * 1e-3) + 0.5;
    auto f = [q, h](double u) { return std::exp(-quad::pow2q(h + u, q) - quad::pow2q(h - u, q)); };
    quad::PanelOptions opt;
    opt.tol = tol;
    opt.scale = 0.0;
    opt.start_panels = 4 + static_cast<int>(std::ceil(2.0 * h));
    return 2.0 * quad::gl_adaptive(f, 0.0, L, opt);
}

}  // namespace

KernelParams KernelParams::make(int q, double epsilon, double eta, double quadrature_tolerance) {
    require(q >= 1, "q must be a positive integer");
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
    require(eta > 0.0 && std::isfinite(eta), "eta must be positive");
    require(quadrature_tolerance > 0.0 && quadrature_tolerance <= 1e-3, "quadrature_tolerance must lie in (0, 1e-3]");
    KernelParams p;
    p.q = q;
    p.epsilon = epsilon;
    p.eta = eta;
    p.quadrature_tolerance = quadrature_tolerance;
    p.A_q = self_convolution(q, 0.0, quadrature_tolerance);
    return p;
}

std::vector<std::string> KernelParams::regime_warnings() const {
    std::vector<std::string> out;
    if (!((2.0 * q - 1.0) / (2.0 * q) > 0.99)) {
        std::ostringstream os;
        os << "q = " << q << " gives (2q-1)/(2q) <= 0.99; the O(1/W) estimate needs q > 50";
        out.push_back(os.str());
    }
    if (!(q > (eta + 0.99) / (2.0 * eta))) {
        std::ostringstream os;
        os << "q = " << q << ", eta = " << eta << " violates 2 q eta > eta + 0.99";
        out.push_back(os.str());
    }
    if (q > 50) out.push_back("large q: kernel quadrature is slow");
    return out;
}

double phi_q(const KernelParams& p, double t) {
    require(p.A_q > 0.0, "KernelParams not initialised; use KernelParams::make");
    if (t == 0.0) return 1.0;
    return self_convolution(p.q, t, p.quadrature_tolerance) / p.A_q;
}

std::vector<double> phi_on_lattice(const KernelParams& p, double step, int n_max) {
    require(n_max >= 0, "n_max must be nonnegative");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) out[n] = phi_q(p, n * step);
    return out;
}

int phi_cutoff_index(const KernelParams& p, double step, double threshold) {
    require(step > 0.0, "step must be positive");
    require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
    int hi = 1;
    while (phi_q(p, hi * step) >= threshold) {
        require(hi < (1 << 26), "phi cutoff index overflow");
        hi *= 2;
    }
    int lo = hi / 2;  // phi(lo step) >= threshold, or lo == 0
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (phi_q(p, mid * step) >= threshold ? lo : hi) = mid;
    }
    return hi;
}

cplx F_q(const KernelParams& p, cplx xi) {
    const double a = xi.real(), b = xi.imag();
    require(std::abs(b) <= p.max_imag_xi, "F_q: |Im xi| outside the configured contour band");
    const int q = p.q, two_q = 2 * q;
    const double tol = p.quadrature_tolerance;

    // Integrate along x + i c; c is picked to minimise the peak modulus of the
    // integrand so the result keeps relative accuracy where |F_q| is small.
    auto expo = [&](double x, double c) { return cplx(0.0, -2.0 * pi) * cplx(x, c) * xi - cpow_int(cplx(x, c), two_q); };
    auto logmag = [&](double x, double c) { return 2.0 * pi * (x * b + c * a) - std::real(cpow_int(cplx(x, c), two_q)); };

    const double xs = std::pow(pi * std::abs(xi) / q, 1.0 / (two_q - 1));
    const double Lt = tail_length(q, tol);
    auto peak = [&](double c) {
        const double X = xs + std::abs(c) + Lt;
        double m = -1e300;
        const int K = std::max(120, static_cast<int>(std::ceil(X / 0.025)));
        for (int k = 0; k <= K; ++k) m = std::max(m, logmag(-X + 2.0 * X * k / K, c));
        return m;
    };
    double c = 0.0, M = peak(0.0);
    if (std::abs(xi) > 0.0) {
        const double R = xs + 0.5;
        double width = R;
        for (int round = 0; round < 3; ++round) {
            const double centre = c;
            const int K = 20;
            for (int k = 0; k <= K; ++k) {
                const double cc = centre - width + 2.0 * width * k / K;
                const double mm = peak(cc);
                if (mm < M) M = mm, c = cc;
            }
            width /= 8.0;
        }
    }

    if (M < -700.0) return 0.0;  // below double range
    const double drop = std::log(1.0 / tol) + 6.0;
    auto outside = [&](double x) { return logmag(x, c) < M - drop; };
    double lo = -(xs + std::abs(c) + 0.5), hi = -lo;
    while (!outside(lo) || !outside(lo - 0.25)) lo -= 0.25;
    while (!outside(hi) || !outside(hi + 0.25)) hi += 0.25;

    auto f = [&](double x) { return std::exp(expo(x, c) - M); };
    quad::PanelOptions opt;
    opt.tol = tol;
    opt.scale = 1.0;
    opt.start_panels = 4 + static_cast<int>(std::ceil((hi - lo) * (1.0 + std::abs(a))));
    const cplx I = quad::gl_adaptive(f, lo, hi, opt);
    return I * std::exp(M);
}

cplx phi_hat(const KernelParams& p, cplx xi) {
    const cplx F = F_q(p, xi);
    return F * F / p.A_q;
}

double phi_hat(const KernelParams& p, double xi) { return std::real(phi_hat(p, cplx(xi, 0.0))); }

double phi_truncated(const KernelParams& p, double t, int W) {
    require(W >= 1, "W must be >= 1");
    if (std::abs(t) > std::pow(static_cast<double>(W), p.eta)) return 0.0;
    return phi_q(p, t);
}

DeltaKernel DeltaKernel::make(double E0, const KernelParams& params, int n_max) {
    require(E0 > -1.0 && E0 < 1.0, "E0 must lie in (-1, 1)");
    require(params.A_q > 0.0, "KernelParams not initialised; use KernelParams::make");
    DeltaKernel k;
    k.E0 = E0;
    k.params = params;
    k.n_max = n_max > 0 ? n_max : phi_cutoff_index(params, params.epsilon);
    k.weights = phi_on_lattice(params, params.epsilon, k.n_max);
    return k;
}

double poisson_lhs(const DeltaKernel& k, double theta) {
    const double th0 = std::acos(k.E0);
    double s = 0.0;
    for (int n = k.n_max; n >= 1; --n) s += k.weights[n] * std::cos(n * th0) * std::cos(n * theta);
    return 1.0 + 2.0 * s;
}

namespace {

// X beyond which |phi^(x + i y)| stays below thr, from a scan with step 0.25.
// |phi^(x + i y)| is even in x, so only x >= 0 is scanned.
double phi_hat_extent(const KernelParams& p, double y, double thr) {
    int quiet = 0;
    double x = 0.0;
    while (quiet < 4) {
        x += 0.25;
        quiet = std::abs(phi_hat(p, cplx(x, y))) < thr ? quiet + 1 : 0;
        require(x < 1e3, "phi_hat does not decay");
    }
    return x - 1.0;
}

}  // namespace

cplx poisson_rhs(const DeltaKernel& k, cplx theta, int m_range) {
    const KernelParams& p = k.params;
    const double eps = p.epsilon;
    const double th0 = std::acos(k.E0);
    // Every argument has imaginary part -Im(theta) / (2 pi eps); terms with
    // real part beyond the decay extent on that line are dropped.
    const double y = -theta.imag() / (2.0 * pi * eps);
    const double X = phi_hat_extent(p, y, 1e-17 * eps);
    if (m_range <= 0) m_range = static_cast<int>(std::ceil(X * eps + std::abs(theta.real()) / (2.0 * pi) + 1.0)) + 1;
    cplx s = 0.0;
    for (int m = -m_range; m <= m_range; ++m) {
        for (double sign : {1.0, -1.0}) {
            const cplx arg = (cplx(m, 0.0) - (theta + sign * th0) / (2.0 * pi)) / eps;
            if (std::abs(arg.real()) <= X) s += phi_hat(p, arg);
        }
    }
    return s / (2.0 * eps);
}

double poisson_rhs(const DeltaKernel& k, double theta, int m_range) {
    return std::real(poisson_rhs(k, cplx(theta, 0.0), m_range));
}

double delta_kernel_eval(const DeltaKernel& k, double E) {
    require(std::abs(E) <= 1.1, "delta_kernel_eval: |E| must be <= 1.1");
    if (std::abs(E) <= 1.0) return poisson_lhs(k, std::acos(E));
    const double y = std::acosh(std::abs(E));
    const cplx theta = E > 0 ? cplx(0.0, y) : cplx(pi, y);
    return std::real(poisson_rhs(k, theta));
}

namespace {

void check_separation(std::span<const std::pair<cplx, cplx>> v, double floor) {
    require(!v.empty(), "divided difference needs at least one point");
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            require(std::abs(v[i].first - v[j].first) >= floor, "divided difference: points closer than the separation floor");
}

}  // namespace

cplx divided_difference(std::span<const std::pair<cplx, cplx>> values, double min_separation) {
    check_separation(values, min_separation);
    const std::size_t n = values.size();
    std::vector<cplx> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = values[i].second;
    // After pass k, d[i] = f[z_i, ..., z_{i+k}].
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i) d[i] = (d[i + 1] - d[i]) / (values[i + k].first - values[i].first);
    return d[0];
}

cplx divided_difference_explicit(std::span<const std::pair<cplx, cplx>> values, double min_separation) {
    check_separation(values, min_separation);
    cplx s = 0.0;
    for (std::size_t e = 0; e < values.size(); ++e) {
        cplx den = 1.0;
        for (std::size_t f = 0; f < values.size(); ++f)
            if (f != e) den *= values[e].first - values[f].first;
        s += values[e].second / den;
    }
    return s;
}

cplx simplex_moment_sum(std::span<const cplx> z, int n) {
    const int E = static_cast<int>(z.size());
    require(E >= 1, "simplex_moment_sum needs at least one point");
    require(n >= E, "simplex_moment_sum needs n >= number of points");
    std::vector<std::pair<cplx, cplx>> v;
    cplx prod = 1.0;
    for (const cplx& x : z) {
        v.emplace_back(x, cpow_int(x, n - 1));
        prod *= x;
    }
    return divided_difference(v) * prod;
}

std::vector<cplx> complete_homogeneous(std::span<const cplx> z, int k_max) {
    require(k_max >= 0, "k_max must be nonnegative");
    std::vector<cplx> h(static_cast<std::size_t>(k_max) + 1, cplx(0.0));
    h[0] = 1.0;
    for (const cplx& x : z)
        for (int k = 1; k <= k_max; ++k) h[k] += x * h[k - 1];
    return h;
}

SEpsSeries::SEpsSeries(const KernelParams& p, double threshold)
    : phi_(phi_on_lattice(p, p.epsilon, phi_cutoff_index(p, p.epsilon, threshold))) {}

cplx SEpsSeries::divided(std::span<const cplx> z) const {
    const int E = static_cast<int>(z.size());
    require(E >= 1, "S_eps divided difference needs at least one point");
    const int n_max = static_cast<int>(phi_.size()) - 1;
    if (n_max < E) return 0.0;
    const auto h = complete_homogeneous(z, n_max - E);
    cplx s = 0.0;
    for (int n = n_max; n >= E; --n) s += phi_[n] * h[n - E];
    return s;
}

cplx S_eps_divided(const KernelParams& p, std::span<const cplx> z) { return SEpsSeries(p).divided(z); }

namespace {

cplx S_eps_direct(const KernelParams& p, cplx z, int j) {
    const int n_max = phi_cutoff_index(p, p.epsilon, 1e-18);
    cplx s = 0.0;
    for (int n = n_max; n >= j + 1; --n) {
        double ff = 1.0;
        for (int i = 0; i < j; ++i) ff *= n - 1 - i;
        s += phi_q(p, n * p.epsilon) * ff * cpow_int(z, n - 1 - j);
    }
    return s;
}

cplx S_eps_contour(const KernelParams& p, cplx z, int j) {
    const double phi = pi / (8.0 * p.q);
    const cplx e1 = std::polar(1.0, phi), e2 = std::polar(1.0, pi - phi);
    double jfact = 1.0;
    for (int i = 2; i <= j; ++i) jfact *= i;
    auto G = [&](cplx xi) {
        const cplx a = std::exp(cplx(0.0, 2.0 * pi * p.epsilon) * xi);
        const cplx F = F_q(p, xi);
        return jfact * F * F / p.A_q * cpow_int(a / (1.0 - z * a), j + 1);
    };
    // F_q(rho e^{i(pi-phi)}) = conj F_q(rho e^{i phi}); G is still evaluated
    // directly because the kernel factor differs on the two rays.
    auto integrand = [&](double rho) { return G(rho * e1) * e1 - G(rho * e2) * e2; };
    const double small = p.quadrature_tolerance * 1e-3;
    double R = 2.0;
    int quiet = 0;
    while (quiet < 3) {
        R += 0.5;
        quiet = std::abs(integrand(R)) < small ? quiet + 1 : 0;
        if (R > 200.0) throw ConvergenceError("S_eps contour: integrand does not decay along the rays");
    }
    quad::PanelOptions opt;
    opt.tol = p.quadrature_tolerance;
    opt.scale = 1.0;
    opt.start_panels = 8;
    return quad::gl_adaptive(integrand, 0.0, R, opt);
}

}  // namespace

cplx S_eps(const KernelParams& p, cplx z, int j, SEpsMethod method, double min_distance_to_one) {
    require(p.A_q > 0.0, "KernelParams not initialised; use KernelParams::make");
    require(j >= 0, "derivative order must be nonnegative");
    require(std::abs(z) <= 1.0 + 1e-12, "S_eps requires |z| <= 1");
    require(std::abs(1.0 - z) >= min_distance_to_one, "S_eps: z too close to 1");
    return method == SEpsMethod::direct ? S_eps_direct(p, z, j) : S_eps_contour(p, z, j);
}

}  // namespace bandspec
