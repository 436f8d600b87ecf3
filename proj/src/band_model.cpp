#include "bandspec/band_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bandspec/errors.hpp"
#include "bandspec/rng.hpp"

namespace bandspec {

BandMatrixSpec BandMatrixSpec::make(int W, int N, std::uint64_t seed) {
    require(W >= 1, "band width W must be >= 1, got " + std::to_string(W));
    require(N >= W, "truncation radius N must be >= W (N=" + std::to_string(N) +
                        ", W=" + std::to_string(W) + ")");
    return BandMatrixSpec{W, N, seed};
}

double BandMatrixSpec::entry_magnitude() const {
    return 1.0 / (2.0 * std::sqrt(2.0 * W - 1.0));
}

SampledBandMatrix::SampledBandMatrix(const BandMatrixSpec& spec)
    : spec_(BandMatrixSpec::make(spec.W, spec.N, spec.seed)),
      scale_(spec_.entry_magnitude()),
      signs_(static_cast<std::size_t>(spec_.dimension()) * spec_.W, 0) {
    const int N = spec_.N;
    for (int u = -N; u <= N; ++u) {
        const int dmax = std::min(spec_.W, N - u);
        for (int d = 1; d <= dmax; ++d)
            slot(u, d) = static_cast<int8_t>(edge_sign(spec_.seed, u, u + d));
    }
}

int SampledBandMatrix::sign(int u, int v) const {
    const int N = spec_.N;
    if (u < -N || u > N || v < -N || v > N) return 0;
    const int lo = std::min(u, v);
    const int d = std::abs(u - v);
    if (d == 0 || d > spec_.W) return 0;
    return slot(lo, d);
}

double SampledBandMatrix::entry(int u, int v) const { return scale_ * sign(u, v); }

void SampledBandMatrix::apply_rows(std::span<const double> x, std::span<double> y, int radius) const {
    const int N = spec_.N;
    const int W = spec_.W;
    const int r = std::min(radius, N);
    for (int u = -r; u <= r; ++u) {
        double acc = 0.0;
        // left neighbours v = u - d, stored at slot(v, d)
        const int dl = std::min(W, u + N);
        for (int d = dl; d >= 1; --d) acc += slot(u - d, d) * x[u - d + N];
        const int dr = std::min(W, N - u);
        for (int d = 1; d <= dr; ++d) acc += slot(u, d) * x[u + d + N];
        y[u + N] = scale_ * acc;
    }
}

void SampledBandMatrix::apply(std::span<const double> x, std::span<double> y) const {
    require(x.size() == static_cast<std::size_t>(spec_.dimension()) && y.size() == x.size(),
            "matvec: vector length must be 2N+1");
    apply_rows(x, y, spec_.N);
}

SampledBandMatrix sample_matrix(const BandMatrixSpec& spec) { return SampledBandMatrix(spec); }

std::vector<double> matvec(const SampledBandMatrix& m, std::span<const double> x) {
    require(x.size() == static_cast<std::size_t>(m.spec().dimension()),
            "matvec: expected length " + std::to_string(m.spec().dimension()) + ", got " +
                std::to_string(x.size()));
    std::vector<double> y(x.size(), 0.0);
    m.apply(x, y);
    return y;
}

int truncation_radius_for_degree(int n, int W) {
    require(n >= 0, "degree must be nonnegative");
    require(W >= 1, "W must be >= 1");
    return n * W + W;
}

double operator_norm_bound(int W) {
    require(W >= 1, "W must be >= 1");
    return W / std::sqrt(2.0 * W - 1.0);
}

}  // namespace bandspec
