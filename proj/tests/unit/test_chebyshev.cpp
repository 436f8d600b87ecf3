#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "bandspec/band_model.hpp"
#include "bandspec/chebyshev.hpp"
#include "bandspec/errors.hpp"
#include "bandspec/path_oracle.hpp"

using namespace bandspec;

namespace {

// Dense T_n(H)(0,0) by the matrix three-term recursion.
double dense_T_at_00(const SampledBandMatrix& m, int n) {
    const int N = m.N(), D = 2 * N + 1;
    std::vector<double> H(D * D);
    for (int u = -N; u <= N; ++u)
        for (int v = -N; v <= N; ++v) H[(u + N) * D + v + N] = m.entry(u, v);
    auto mul = [&](const std::vector<double>& A) {
        std::vector<double> C(D * D, 0.0);
        for (int i = 0; i < D; ++i)
            for (int k = 0; k < D; ++k)
                for (int j = 0; j < D; ++j) C[i * D + j] += H[i * D + k] * A[k * D + j];
        return C;
    };
    std::vector<double> prev(D * D, 0.0), cur = H;
    for (int i = 0; i < D; ++i) prev[i * D + i] = 1.0;
    if (n == 0) return prev[N * D + N];
    for (int k = 1; k < n; ++k) {
        auto next = mul(cur);
        for (int i = 0; i < D * D; ++i) next[i] = 2.0 * next[i] - prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur[N * D + N];
}

// Closed walks of length k at 0 on Z(W) in which every edge is used an even
// number of times (backtracking allowed).
long even_walks(int W, int k) {
    std::map<std::pair<int, int>, int> used;
    long count = 0;
    auto rec = [&](auto&& self, int at, int left) -> void {
        if (std::abs(at) > left * W) return;
        if (left == 0) {
            bool even = true;
            for (const auto& [e, c] : used) even = even && c % 2 == 0;
            count += even;
            return;
        }
        for (int d = -W; d <= W; ++d) {
            if (d == 0) continue;
            const std::pair<int, int> e = std::minmax(at, at + d);
            ++used[e];
            self(self, at + d, left - 1);
            if (--used[e] == 0) used.erase(e);
        }
    };
    rec(rec, 0, k);
    return count;
}

// <T_n(H)(0,0)> as sum_k c_k <H^k(0,0)>, with <H^k(0,0)> = s^k * even_walks.
double expected_T(int W, int n) {
    std::vector<std::vector<double>> c{{1.0}, {0.0, 1.0}};
    for (int k = 2; k <= n; ++k) {
        std::vector<double> next(k + 1, 0.0);
        for (int i = 0; i < k; ++i) next[i + 1] += 2.0 * c[k - 1][i];
        for (int i = 0; i < k - 1; ++i) next[i] -= c[k - 2][i];
        c.push_back(next);
    }
    const double s = 1.0 / (2.0 * std::sqrt(2.0 * W - 1.0));
    double e = 0.0;
    for (int k = 0; k <= n; k += 2) e += c[n][k] * std::pow(s, k) * even_walks(W, k);
    return e;
}

}  // namespace

TEST_CASE("cheb_eval examples") {
    CHECK(cheb_eval(ChebKind::T, 0, 0.37) == 1.0);
    CHECK(cheb_eval(ChebKind::T, 2, 0.5) == doctest::Approx(-0.5));
    CHECK(cheb_eval(ChebKind::U, 2, 0.5) == doctest::Approx(0.0));
    CHECK(cheb_eval(ChebKind::U, -1, 0.3) == 0.0);
    CHECK(cheb_eval(ChebKind::U, -2, 0.3) == 0.0);
    CHECK_THROWS_AS(cheb_eval(ChebKind::T, -1, 0.3), InvalidArgument);
    CHECK_THROWS_AS(cheb_eval(ChebKind::U, -3, 0.3), InvalidArgument);
}

TEST_CASE("recursion matches the trigonometric closed forms for n <= 200") {
    double worst_T = 0.0, worst_U = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double theta = (i + 0.5) * std::numbers::pi / 1000;
        const double x = std::cos(theta);
        for (int n = 0; n <= 200; ++n) {
            worst_T = std::max(worst_T, std::abs(cheb_eval(ChebKind::T, n, x) - std::cos(n * theta)));
            worst_U = std::max(worst_U, std::abs(cheb_eval(ChebKind::U, n, x) -
                                                 std::sin((n + 1) * theta) / std::sin(theta)) /
                                            (n + 1));
        }
    }
    CHECK(worst_T <= 1e-10);
    CHECK(worst_U <= 1e-10);
}

TEST_CASE("low-degree matrix moments") {
    const auto m = sample_matrix(BandMatrixSpec::make(3, 12, 8));
    CHECK(poly_of_H_at_00(m, PolyKind::UnW, 0) == 1.0);
    CHECK(poly_of_H_at_00(m, PolyKind::UnW, 1) == 0.0);
    CHECK(poly_of_H_at_00(m, PolyKind::T, 1) == 0.0);
    CHECK_THROWS_AS(poly_of_H_at_00(m, PolyKind::T, 5), InvalidArgument);
}

TEST_CASE("vector recursion agrees with the dense matrix recursion") {
    for (int W : {1, 2, 3}) {
        const int n = 6;
        const auto m = sample_matrix(BandMatrixSpec::make(W, n * W, 100 + W));
        const auto v = poly_moments_at_00(m, PolyKind::T, n);
        for (int k = 0; k <= n; ++k) CHECK(v[k] == doctest::Approx(dense_T_at_00(m, k)).epsilon(1e-12));
    }
}

TEST_CASE("U_{n,W} combination") {
    const int W = 2;
    const auto m = sample_matrix(BandMatrixSpec::make(W, 8 * W, 3));
    const auto U = poly_moments_at_00(m, PolyKind::U, 8);
    const auto UnW = poly_moments_at_00(m, PolyKind::UnW, 8);
    for (int n = 2; n <= 8; ++n) CHECK(UnW[n] == doctest::Approx(U[n] - U[n - 2] / (2 * W - 1)));
}

TEST_CASE("<T_2> is exactly -(W-1)/(2W-1) in every realization") {
    for (int W : {1, 2, 3, 10}) {
        const auto s = estimate_moments(BandMatrixSpec::make(W, 2 * W, 5), PolyKind::T, 2, 50);
        CHECK(s.values[2] == doctest::Approx(-(W - 1.0) / (2.0 * W - 1.0)).epsilon(1e-12));
        CHECK(s.std_errors[2] < 1e-12);
    }
}

TEST_CASE("Monte Carlo moments match exact even-walk expectations") {
    for (int W : {1, 2, 3}) {
        const int n_max = 6;
        const auto s = estimate_moments(BandMatrixSpec::make(W, n_max * W, 17), PolyKind::T, n_max, 4000);
        for (int n = 0; n <= n_max; ++n) {
            const double exact = expected_T(W, n);
            const double se = std::max(s.std_errors[n], 1e-12);
            INFO("W=" << W << " n=" << n << " exact=" << exact << " mc=" << s.values[n]);
            CHECK(std::abs(s.values[n] - exact) <= 4.0 * se);
        }
    }
}

TEST_CASE("U_{2,W} averages to zero and odd T moments vanish") {
    for (int W : {2, 3}) {
        const auto u = estimate_moments(BandMatrixSpec::make(W, 2 * W, 9), PolyKind::UnW, 2, 2000);
        CHECK(std::abs(u.values[2]) <= 4.0 * u.std_errors[2] + 1e-12);
        const auto t = estimate_moments(BandMatrixSpec::make(W, 7 * W, 9), PolyKind::T, 7, 2000);
        for (int n = 1; n <= 7; n += 2) CHECK(std::abs(t.values[n]) <= 4.0 * t.std_errors[n] + 1e-12);
    }
}

TEST_CASE("results are independent of worker count") {
    const auto spec = BandMatrixSpec::make(4, 40, 123);
    const auto a = estimate_moments(spec, PolyKind::T, 10, 300);
    MomentOptions opt;
    opt.workers = 3;
    const auto b = estimate_moments(spec, PolyKind::T, 10, 300, opt);
    CHECK(a.values == b.values);
    CHECK(a.std_errors == b.std_errors);
}

TEST_CASE("per-sample storage") {
    MomentOptions opt;
    opt.keep_samples = true;
    const auto s = estimate_moments(BandMatrixSpec::make(2, 8, 1), PolyKind::T, 4, 20, opt);
    REQUIRE(s.per_sample.size() == 20u * 5u);
    double mean4 = 0.0;
    for (int i = 0; i < 20; ++i) mean4 += s.per_sample[i * 5 + 4] / 20.0;
    CHECK(mean4 == doctest::Approx(s.values[4]));
    CHECK(s.values.size() == 5u);
    CHECK(s.std_errors.size() == 5u);
}

TEST_CASE("estimate_moments preconditions") {
    CHECK_THROWS_AS(estimate_moments(BandMatrixSpec::make(2, 4, 1), PolyKind::T, 4, 10), InvalidArgument);
    CHECK_THROWS_AS(estimate_moments(BandMatrixSpec::make(2, 8, 1), PolyKind::T, 4, 0), InvalidArgument);
    CHECK(poly_kind_from_string("UnW") == PolyKind::UnW);
    CHECK_THROWS_AS(poly_kind_from_string("V"), InvalidArgument);
}

TEST_CASE("T-series soft bound holds for measured moments") {
    const auto s = estimate_moments(BandMatrixSpec::make(8, 30 * 8, 2), PolyKind::T, 30, 200);
    CHECK(s.soft_bound_violations().empty());
}
