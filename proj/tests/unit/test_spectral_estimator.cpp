#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bandspec/errors.hpp"
#include "bandspec/path_oracle.hpp"
#include "bandspec/rng.hpp"
#include "bandspec/spectral_estimator.hpp"

using namespace bandspec;
using std::numbers::pi;

namespace {

// Dense complex Gaussian elimination for (H - z) x = delta_0.
std::complex<double> dense_resolvent_00(const SampledBandMatrix& m, std::complex<double> z) {
    const int N = m.N(), D = 2 * N + 1;
    std::vector<std::complex<double>> A(D * D), b(D, 0.0);
    for (int u = -N; u <= N; ++u)
        for (int v = -N; v <= N; ++v) A[(u + N) * D + v + N] = m.entry(u, v) - (u == v ? z : 0.0);
    b[N] = 1.0;
    for (int c = 0; c < D; ++c) {
        int piv = c;
        for (int r = c + 1; r < D; ++r)
            if (std::abs(A[r * D + c]) > std::abs(A[piv * D + c])) piv = r;
        if (piv != c) {
            for (int k = 0; k < D; ++k) std::swap(A[c * D + k], A[piv * D + k]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < D; ++r) {
            const auto f = A[r * D + c] / A[c * D + c];
            for (int k = c; k < D; ++k) A[r * D + k] -= f * A[c * D + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<std::complex<double>> x(D);
    for (int r = D - 1; r >= 0; --r) {
        auto s = b[r];
        for (int k = r + 1; k < D; ++k) s -= A[r * D + k] * x[k];
        x[r] = s / A[r * D + r];
    }
    return x[N];
}

MomentSeries ideal_semicircle(int W, int degree) {
    MomentSeries s;
    s.kind = PolyKind::T;
    s.W = W;
    s.max_degree = degree;
    s.values.assign(degree + 1, 0.0);
    s.std_errors.assign(degree + 1, 0.0);
    s.values[0] = 1.0;
    if (degree >= 2) s.values[2] = -0.5;
    s.sample_count = 1;
    return s;
}

}  // namespace

TEST_CASE("resolvent truncation formula") {
    CHECK(resolvent_truncation(8, 0.1, 1e-6) == static_cast<int>(std::ceil(4 * 8 * std::log(1e6) / 0.1)));
    CHECK(resolvent_truncation(16, 0.1, 1e-6) >= resolvent_truncation(8, 0.1, 1e-6));
    CHECK(resolvent_truncation(8, 0.05, 1e-6) >= resolvent_truncation(8, 0.1, 1e-6));
    CHECK(resolvent_truncation(8, 0.1, 1e-3) < resolvent_truncation(8, 0.1, 1e-9));
    CHECK_THROWS_AS(resolvent_truncation(8, 0.0, 1e-6), InvalidArgument);
}

TEST_CASE("doubling N changes Im G(0,0) by less than tol") {
    CHECK(resolvent_doubling_gap(8, 0.1, 1e-6, 10) < 1e-6);
}

TEST_CASE("banded solve matches dense elimination") {
    for (int W : {1, 3, 6}) {
        const auto m = sample_matrix(BandMatrixSpec::make(W, 40, 90 + W));
        for (double E0 : {-0.4, 0.0, 0.7})
            for (double eps : {0.05, 0.5}) {
                const double ref = dense_resolvent_00(m, {E0, eps}).imag();
                CHECK(resolvent_im_00(m, E0, eps) == doctest::Approx(ref).epsilon(1e-10));
            }
    }
}

TEST_CASE("large eps: Im G ~ 1/eps") {
    ResolventQuery q;
    q.W = 6;
    q.epsilon = 100.0;
    q.N = 64;
    q.samples = 20;
    const auto r = avg_resolvent_im(q);
    CHECK(std::abs(r.mean * 100.0 - 1.0) < 0.01);
}

TEST_CASE("every sample is positive and the mean is reproducible") {
    ResolventQuery q;
    q.W = 4;
    q.E0 = 0.3;
    q.epsilon = 0.2;
    q.samples = 40;
    q.seed = 5;
    const auto a = avg_resolvent_im(q);
    for (double v : a.per_sample) CHECK(v > 0.0);
    q.workers = 3;
    const auto b = avg_resolvent_im(q);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.N == resolvent_truncation(4, 0.2, 1e-6));
}

TEST_CASE("E0 -> -E0 symmetry of the mean") {
    ResolventQuery q;
    q.W = 8;
    q.epsilon = 0.1;
    q.samples = 200;
    q.E0 = 0.35;
    q.seed = 1;
    const auto plus = avg_resolvent_im(q);
    q.E0 = -0.35;
    q.seed = 2;
    const auto minus = avg_resolvent_im(q);
    const double joint = std::hypot(plus.std_error, minus.std_error);
    CHECK(std::abs(plus.mean - minus.mean) <= 4.0 * joint);
}

TEST_CASE("W = 32 resolvent near the semicircle value") {
    ResolventQuery q;
    q.W = 32;
    q.E0 = 0.0;
    q.epsilon = 0.1;
    q.samples = 40;
    q.seed = 11;
    const auto r = avg_resolvent_im(q);
    const double ref = semicircle_stieltjes(0.0, 0.1).imag();
    CHECK(std::abs(r.mean - ref) <= 4.0 * r.std_error + 0.2);
}

TEST_CASE("bounded estimate for eps >= W^-0.9") {
    for (int W : {4, 16, 64})
        for (double E0 : {0.0, 0.8}) {
            ResolventQuery q;
            q.W = W;
            q.E0 = E0;
            q.epsilon = std::pow(W, -0.9);
            q.samples = W == 64 ? 3 : 20;
            q.seed = 3;
            const auto r = avg_resolvent_im(q);
            CHECK(r.mean <= 5.0);
            CHECK(r.mean > 0.0);
        }
}

TEST_CASE("semicircle Stieltjes transform") {
    CHECK(std::abs(semicircle_stieltjes(0.0, 0.3).real()) < 1e-12);
    double prev = 0.0;
    for (double eps : {0.1, 0.01, 0.001}) {
        const double v = semicircle_stieltjes(0.0, eps).imag();
        CHECK(v > prev);
        CHECK(v < 2.0);
        prev = v;
    }
    CHECK(prev == doctest::Approx(2.0).epsilon(2e-3));
    CHECK(semicircle_stieltjes(0.5, 0.01).imag() == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(0.02));
}

TEST_CASE("semicircle quadrature against the closed-form Stieltjes transform") {
    for (double E0 : {-0.9, -0.3, 0.0, 0.45, 0.99, 1.3})
        for (double eps : {1.0, 0.1, 0.01}) {
            const std::complex<double> z(E0, eps);
            const auto closed = 2.0 * (-z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0));
            CHECK(std::abs(semicircle_stieltjes(E0, eps) - closed) <= 1e-8 * std::abs(closed));
        }
    CHECK(semicircle_density(0.0) == doctest::Approx(2.0 / pi));
    CHECK(semicircle_density(1.2) == 0.0);
}

TEST_CASE("reconstruction from ideal semicircle moments") {
    for (double E0 : {-0.8, -0.3, 0.0, 0.5, 0.9}) {
        const auto params = KernelParams::make(2, 1e-3);
        const auto s = ideal_semicircle(1, kernel_cutoff_degree(1, params));
        const auto r = dos_from_moments(s, params, E0);
        const double expected = 1.0 - phi_q(params, 2e-3) * (2 * E0 * E0 - 1.0);
        CHECK(r.value == doctest::Approx(expected).epsilon(1e-13));
        CHECK(r.value == doctest::Approx(2.0 * (1.0 - E0 * E0)).epsilon(1e-5));
        CHECK(r.dos == doctest::Approx(semicircle_density(E0)).epsilon(1e-5));
    }
}

TEST_CASE("arcsine baseline") {
    const auto params = KernelParams::make(2, 0.1);
    auto s = ideal_semicircle(4, 40);
    s.values[2] = 0.0;
    const auto r = dos_from_moments(s, params, 0.4);
    CHECK(r.value == 1.0);
    CHECK(r.dos == doctest::Approx(1.0 / (pi * std::sqrt(1 - 0.16))));
}

TEST_CASE("reconstruction preconditions and cutoffs") {
    const auto params = KernelParams::make(2, 0.05, 0.5);
    CHECK(kernel_cutoff_degree(16, params) == 80);
    auto s = ideal_semicircle(16, 79);
    CHECK_THROWS_AS(dos_from_moments(s, params, 0.3), InvalidArgument);
    CHECK_NOTHROW(dos_from_moments(s, params, 0.3, KernelCut::full));
    s = ideal_semicircle(16, 80);
    s.kind = PolyKind::U;
    CHECK_THROWS_AS(dos_from_moments(s, params, 0.3), InvalidArgument);
}

TEST_CASE("reconstruction error bar from per-sample moments") {
    const auto params = KernelParams::make(2, 0.25, 0.5);
    const int W = 4;
    const int n0 = kernel_cutoff_degree(W, params);
    MomentOptions opt;
    opt.keep_samples = true;
    const auto m = estimate_moments(BandMatrixSpec::make(W, truncation_radius_for_degree(n0, W), 3), PolyKind::T, n0,
                                    300, opt);
    const auto r = dos_from_moments(m, params, 0.2);
    std::vector<double> per(300);
    double mean = 0.0;
    for (int s = 0; s < 300; ++s) {
        per[s] = 1.0;
        for (int n = 1; n <= n0; ++n)
            per[s] += 2.0 * phi_q(params, n * 0.25) * std::cos(n * std::acos(0.2)) * m.per_sample[s * (n0 + 1) + n];
        mean += per[s] / 300;
    }
    double var = 0.0;
    for (double v : per) var += (v - mean) * (v - mean) / 299;
    CHECK(r.value == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r.std_error == doctest::Approx(std::sqrt(var / 300)).epsilon(1e-9));
    CHECK(r.tail_bound >= 0.0);
}

TEST_CASE("second-moment term of the bracket") {
    // Only the degree-2 moment contributes at first order; its exact value gives
    // -phi(2 eps)(2 E0^2 - 1)(W - 1)/(W - 1/2), within 1/W of phi(2 eps)(1 - 2 E0^2).
    for (int W : {1, 2, 3}) {
        const auto table = build_table(W, 2);
        const auto params = KernelParams::make(2, 0.05);
        auto s = ideal_semicircle(W, kernel_cutoff_degree(W, params));
        s.values[2] = static_cast<double>(exact_T_moment(table, 2));
        for (double E0 : {0.0, 0.3, 0.7}) {
            const double term = dos_from_moments(s, params, E0).value - 1.0;
            const double phi2 = phi_q(params, 0.1);
            CHECK(term == doctest::Approx(-phi2 * (2 * E0 * E0 - 1) * (W - 1.0) / (W - 0.5)).epsilon(1e-12));
            CHECK(std::abs(term - phi2 * (1 - 2 * E0 * E0)) <= 1.0 / W);
        }
    }
}

TEST_CASE("exponential kernel demonstration") {
    const int W = 8, degree = 200;
    const auto m = estimate_moments(BandMatrixSpec::make(W, degree * W, 21), PolyKind::T, degree, 200);
    const std::vector<double> grid{1.0, 0.5, 0.2, 0.1, 0.05, 0.02};
    const auto pts = exp_kernel_divergence_demo(m, 0.3, grid);
    REQUIRE(pts.size() == grid.size());
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].abs_sum >= pts[i - 1].abs_sum);
    CHECK(std::isfinite(pts[0].value));

    const auto params = KernelParams::make(2, 1.0);
    const double phi_value = dos_from_moments(m, params, 0.3, KernelCut::full).value;
    CHECK(std::abs(pts[0].value - phi_value) <= 0.2 * std::abs(phi_value));

    const auto ideal = exp_kernel_divergence_demo(ideal_semicircle(W, 10), 0.3, grid);
    for (const auto& p : ideal) CHECK(p.value == doctest::Approx(1.0 - std::exp(-2 * p.epsilon) * (2 * 0.09 - 1)));
}

TEST_CASE("theorem error in the large-eps regime") {
    const auto t = theorem_error(4, 0.3, 10.0, 20, 1);
    CHECK(t.error < 1e-2);
    CHECK(t.reference == doctest::Approx(semicircle_stieltjes(0.3, 10.0).imag()));
}

TEST_CASE("theorem error is even in E0 within noise") {
    const auto a = theorem_error(8, 0.4, 0.2, 200, 1);
    const auto b = theorem_error(8, -0.4, 0.2, 200, 2);
    CHECK(std::abs(a.error - b.error) <= 4.0 * std::hypot(a.std_error, b.std_error));
}
