#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bandspec {

/// Ensemble parameters of the symmetric +-1 band matrix on the window -N..N.
///
/// Nonzero entries sit at 0 < |u - v| <= W and have magnitude
/// 1 / (2 sqrt(2W - 1)), so that interior rows have squared norm close to 1/4
/// and the limiting spectrum is [-1, 1].
struct BandMatrixSpec {
    int W = 1;
    int N = 1;
    std::uint64_t seed = 0;

    /// Validating constructor: W >= 1, N >= W.
    static BandMatrixSpec make(int W, int N, std::uint64_t seed);

    double entry_magnitude() const;
    int dimension() const { return 2 * N + 1; }
};

/// One realization. Signs are a pure function of (seed, min(u,v), max(u,v)),
/// so growing N extends a realization without touching existing entries.
class SampledBandMatrix {
public:
    explicit SampledBandMatrix(const BandMatrixSpec& spec);

    const BandMatrixSpec& spec() const { return spec_; }
    int W() const { return spec_.W; }
    int N() const { return spec_.N; }

    /// Sign of H(u, v); 0 off the band, on the diagonal or outside the window.
    int sign(int u, int v) const;
    /// H(u, v) including the 1/(2 sqrt(2W-1)) scale.
    double entry(int u, int v) const;

    /// y = H x on the window; vectors are indexed by u + N.
    void apply(std::span<const double> x, std::span<double> y) const;
    /// Same, but only rows |u| <= radius are written (others are left alone).
    /// Used by polynomial recursions whose iterates have growing support.
    void apply_rows(std::span<const double> x, std::span<double> y, int radius) const;

private:
    int8_t& slot(int u, int d) { return signs_[static_cast<std::size_t>(u + spec_.N) * spec_.W + (d - 1)]; }
    int8_t slot(int u, int d) const { return signs_[static_cast<std::size_t>(u + spec_.N) * spec_.W + (d - 1)]; }

    BandMatrixSpec spec_;
    double scale_;
    // signs_[(u+N)*W + d-1] is the sign of the edge {u, u+d}, or 0 past the window.
    std::vector<int8_t> signs_;
};

SampledBandMatrix sample_matrix(const BandMatrixSpec& spec);

/// y = H x with open boundary. Throws InvalidArgument on a length mismatch.
std::vector<double> matvec(const SampledBandMatrix& m, std::span<const double> x);

/// Window radius sufficient for degree-n polynomials of H at (0, 0): nW + W.
int truncation_radius_for_degree(int n, int W);

/// W / sqrt(2W - 1): the row l1-norm of |H|, hence a bound on its spectrum.
double operator_norm_bound(int W);

}  // namespace bandspec
