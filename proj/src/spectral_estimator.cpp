#include "bandspec/spectral_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "bandspec/errors.hpp"
#include "bandspec/parallel.hpp"
#include "bandspec/rng.hpp"

namespace bandspec {

namespace {

constexpr double pi = std::numbers::pi;

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe r;
    const double n = static_cast<double>(v.size());
    if (v.empty()) return r;
    for (double x : v) r.mean += x;
    r.mean /= n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return r;
}

}  // namespace

int resolvent_truncation(int W, double epsilon, double tol, double K) {
    require(W >= 1, "W must be >= 1");
    require(epsilon > 0.0, "epsilon must be positive");
    require(tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
    require(K > 0.0, "K must be positive");
    const double N = std::ceil(K * W * std::log(1.0 / tol) / epsilon);
    require(N < 5e7, "resolvent truncation too large");
    return std::max(W, static_cast<int>(N));
}

double resolvent_im_00(const SampledBandMatrix& m, double E0, double epsilon) {
    const int W = m.W(), N = m.N();
    const lapack_int n = 2 * N + 1, kl = W, ku = W, ldab = 2 * kl + ku + 1;
    std::vector<std::complex<double>> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    const std::complex<double> shift(E0, epsilon);
    // Column-major band storage: A(i, j) at ab[kl + ku + i - j + j * ldab].
    for (int j = 0; j < n; ++j) {
        const int v = j - N;
        for (int i = std::max(0, j - W); i <= std::min<int>(n - 1, j + W); ++i) {
            const int u = i - N;
            const std::complex<double> a = i == j ? -shift : std::complex<double>(m.entry(u, v), 0.0);
            ab[static_cast<std::size_t>(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab] = a;
        }
    }
    std::vector<std::complex<double>> b(n, 0.0);
    b[N] = 1.0;
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_zgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(), ldab, ipiv.data(), b.data(), n);
    if (info != 0)
        throw ConvergenceError("banded resolvent solve failed (info = " + std::to_string(info) +
                               "); retry with a larger N");
    return b[N].imag();
}

ResolventEstimate avg_resolvent_im(const ResolventQuery& q) {
    require(q.epsilon > 0.0, "epsilon must be positive");
    require(q.samples >= 1, "samples must be >= 1");
    require(q.W >= 1, "W must be >= 1");
    const int N = q.N > 0 ? q.N : resolvent_truncation(q.W, q.epsilon, 1e-6);
    require(N >= q.W, "N must be >= W");
    ResolventEstimate out;
    out.N = N;
    out.per_sample.assign(q.samples, 0.0);
    detail::parallel_for(q.samples, q.workers, [&](long i) {
        const auto spec = BandMatrixSpec::make(q.W, N, sample_seed(q.seed, static_cast<std::uint64_t>(i)));
        const double v = resolvent_im_00(SampledBandMatrix(spec), q.E0, q.epsilon);
        if (!(v > 0.0)) throw ConvergenceError("Im G(0,0) not positive for sample " + std::to_string(i));
        out.per_sample[i] = v;
    });
    const auto r = mean_se(out.per_sample);
    out.mean = r.mean;
    out.std_error = r.se;
    return out;
}

double resolvent_doubling_gap(int W, double epsilon, double tol, int seeds, std::uint64_t seed, double K) {
    const int N = resolvent_truncation(W, epsilon, tol, K);
    double gap = 0.0;
    for (int i = 0; i < seeds; ++i) {
        const auto s = sample_seed(seed, static_cast<std::uint64_t>(i));
        const double a = resolvent_im_00(SampledBandMatrix(BandMatrixSpec::make(W, N, s)), 0.0, epsilon);
        const double b = resolvent_im_00(SampledBandMatrix(BandMatrixSpec::make(W, 2 * N, s)), 0.0, epsilon);
        gap = std::max(gap, std::abs(a - b));
    }
    return gap;
}

double semicircle_density(double E) { return std::abs(E) >= 1.0 ? 0.0 : (2.0 / pi) * std::sqrt(1.0 - E * E); }

std::complex<double> semicircle_stieltjes(double E0, double epsilon) {
    require(epsilon > 0.0, "epsilon must be positive");
    using boost::math::quadrature::gauss_kronrod;
    // E = cos(theta): a0(E) dE = (2/pi) sin^2(theta) dtheta.
    auto denom = [&](double th) {
        const double d = std::cos(th) - E0;
        return d * d + epsilon * epsilon;
    };
    auto re = [&](double th) { const double s = std::sin(th); return (2.0 / pi) * s * s * (std::cos(th) - E0) / denom(th); };
    auto im = [&](double th) { const double s = std::sin(th); return (2.0 / pi) * s * s * epsilon / denom(th); };
    std::vector<double> cuts{0.0};
    if (std::abs(E0) < 1.0) {
        const double th0 = std::acos(E0);
        const double w = std::min(0.5, 8.0 * epsilon);
        for (double c : {th0 - w, th0, th0 + w})
            if (c > cuts.back() + 1e-12 && c < pi - 1e-12) cuts.push_back(c);
    }
    cuts.push_back(pi);
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        sr += gauss_kronrod<double, 31>::integrate(re, cuts[k], cuts[k + 1], 15, 1e-11);
        si += gauss_kronrod<double, 31>::integrate(im, cuts[k], cuts[k + 1], 15, 1e-11);
    }
    return {sr, si};
}

int kernel_cutoff_degree(int W, const KernelParams& params) {
    require(W >= 1, "W must be >= 1");
    return static_cast<int>(std::floor(std::pow(static_cast<double>(W), params.eta) / params.epsilon));
}

ReconstructionResult dos_from_moments(const MomentSeries& moments, const KernelParams& params, double E0,
                                      KernelCut cut) {
    require(moments.kind == PolyKind::T, "dos_from_moments needs T moments");
    require(E0 > -1.0 && E0 < 1.0, "E0 must lie in (-1, 1)");
    require(static_cast<int>(moments.values.size()) == moments.max_degree + 1, "moment series is inconsistent");
    const int n0 = kernel_cutoff_degree(moments.W, params);
    int n_used = moments.max_degree;
    if (cut == KernelCut::truncated) {
        require(moments.max_degree >= n0,
                "insufficient max_degree: truncated kernel needs degree " + std::to_string(n0));
        n_used = n0;
    }
    const auto phi = phi_on_lattice(params, params.epsilon, n_used);
    const double th0 = std::acos(E0);
    std::vector<double> coef(n_used + 1, 0.0);
    coef[0] = 1.0;
    for (int n = 1; n <= n_used; ++n) coef[n] = 2.0 * phi[n] * std::cos(n * th0);

    ReconstructionResult r;
    r.n_used = n_used;
    for (int n = 0; n <= n_used; ++n) r.value += coef[n] * moments.values[n];
    r.dos = r.value / (pi * std::sqrt(1.0 - E0 * E0));

    const std::size_t stride = moments.max_degree + 1;
    if (!moments.per_sample.empty()) {
        std::vector<double> per(moments.per_sample.size() / stride, 0.0);
        for (std::size_t s = 0; s < per.size(); ++s)
            for (int n = 0; n <= n_used; ++n) per[s] += coef[n] * moments.per_sample[s * stride + n];
        r.std_error = mean_se(per).se;
    } else {
        double v = 0.0;  // treats degrees as independent
        for (int n = 1; n <= n_used && n < static_cast<int>(moments.std_errors.size()); ++n)
            v += coef[n] * coef[n] * moments.std_errors[n] * moments.std_errors[n];
        r.std_error = std::sqrt(v);
    }

    // |mu_n| <= max |T_n| on the spectrum <= T_n(r) for r = ||H|| bound.
    const double rad = std::max(1.0, operator_norm_bound(moments.W));
    const double ach = std::acosh(rad);
    const int n_cut = phi_cutoff_index(params, params.epsilon, 1e-17);
    double tail = 0.0;
    for (int n = n_used + 1; n <= n_cut; ++n) {
        const double log_term = std::log(2.0 * phi_q(params, n * params.epsilon)) + n * ach;
        tail += std::exp(std::min(log_term, 700.0)) * std::abs(std::cos(n * th0));
    }
    r.tail_bound = tail;
    return r;
}

std::vector<DivergencePoint> exp_kernel_divergence_demo(const MomentSeries& moments, double E0,
                                                        const std::vector<double>& eps_grid) {
    require(moments.kind == PolyKind::T, "exp_kernel_divergence_demo needs T moments");
    require(E0 > -1.0 && E0 < 1.0, "E0 must lie in (-1, 1)");
    const double th0 = std::acos(E0);
    std::vector<DivergencePoint> out;
    for (double eps : eps_grid) {
        require(eps > 0.0, "epsilon must be positive");
        DivergencePoint p;
        p.epsilon = eps;
        double partial = 1.0, abs_sum = 1.0, max_partial = 1.0;
        for (int n = 1; n <= moments.max_degree; ++n) {
            const double term = 2.0 * std::exp(-n * eps) * std::cos(n * th0) * moments.values[n];
            partial += term;
            abs_sum += std::abs(term);
            max_partial = std::max(max_partial, std::abs(partial));
        }
        p.value = partial;
        p.max_partial = max_partial;
        p.abs_sum = abs_sum;
        out.push_back(p);
    }
    return out;
}

TheoremError theorem_error(int W, double E0, double epsilon, long samples, std::uint64_t seed, int workers, int N) {
    ResolventQuery q;
    q.W = W;
    q.E0 = E0;
    q.epsilon = epsilon;
    q.samples = samples;
    q.seed = seed;
    q.workers = workers;
    q.N = N;
    const auto est = avg_resolvent_im(q);
    TheoremError t;
    t.estimate = est.mean;
    t.reference = semicircle_stieltjes(E0, epsilon).imag();
    t.error = std::abs(t.estimate - t.reference);
    t.std_error = est.std_error;
    t.N = est.N;
    return t;
}

}  // namespace bandspec
