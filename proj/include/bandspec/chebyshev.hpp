#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bandspec/band_model.hpp"

namespace bandspec {

enum class ChebKind { T, U };
enum class PolyKind { T, U, UnW };

std::string to_string(PolyKind kind);
PolyKind poly_kind_from_string(const std::string& s);

/// Sample means of p_n(H)(0,0), n = 0..max_degree, with standard errors
/// (sample standard deviation / sqrt(samples)).
struct MomentSeries {
    PolyKind kind = PolyKind::T;
    int W = 1;
    int max_degree = 0;
    std::vector<double> values;
    std::vector<double> std_errors;
    long sample_count = 0;
    // Row-major samples x (max_degree+1); empty unless requested. Lets callers
    // propagate errors of linear functionals of correlated moments exactly.
    std::vector<double> per_sample;

    /// Degrees n at which a T-series breaks |value| <= 1 + 3 std_error.
    /// Soft diagnostic: finite-W spectra leak past [-1, 1].
    std::vector<int> soft_bound_violations() const;
};

/// T_n(x) or U_n(x) by the three-term recursion. U accepts n >= -2 with
/// U_{-2} = U_{-1} = 0.
double cheb_eval(ChebKind kind, int n, double x);

/// p_n(H)(0,0) for n = 0..max_degree, by vector recursion started from delta_0.
/// UnW is U_n - U_{n-2} / (2W - 1). Requires N >= max_degree * W.
std::vector<double> poly_moments_at_00(const SampledBandMatrix& m, PolyKind kind, int max_degree);

/// Single degree convenience wrapper around poly_moments_at_00.
double poly_of_H_at_00(const SampledBandMatrix& m, PolyKind kind, int n);

struct MomentOptions {
    int workers = 1;
    bool keep_samples = false;
};

/// Monte Carlo average over `samples` realizations. Sample i uses the seed
/// sample_seed(spec.seed, i); results do not depend on the worker count.
MomentSeries estimate_moments(const BandMatrixSpec& spec, PolyKind kind, int max_degree, long samples,
                              const MomentOptions& opts = {});

}  // namespace bandspec
