#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bandspec/band_model.hpp"
#include "bandspec/chebyshev.hpp"
#include "bandspec/regularizer.hpp"

namespace bandspec {

struct ResolventQuery {
    double E0 = 0.0;
    double epsilon = 0.1;
    int W = 8;
    int N = 0;  // 0: resolvent_truncation(W, epsilon, 1e-6)
    long samples = 100;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct ResolventEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int N = 0;
    std::vector<double> per_sample;
};

/// N = ceil(K W ln(1/tol) / eps).
int resolvent_truncation(int W, double epsilon, double tol, double K = 4.0);

/// Im (H - E0 - i eps)^{-1}(0, 0) for one realization, by banded LU.
/// Throws ConvergenceError if the factorization breaks down.
double resolvent_im_00(const SampledBandMatrix& m, double E0, double epsilon);

/// Monte Carlo mean of Im G(0, 0); sample i uses sample_seed(seed, i).
/// Every sample is checked to be positive.
ResolventEstimate avg_resolvent_im(const ResolventQuery& q);

/// Largest |Im G_N(0,0) - Im G_{2N}(0,0)| over `seeds` realizations with
/// N = resolvent_truncation(W, eps, tol, K).
double resolvent_doubling_gap(int W, double epsilon, double tol, int seeds, std::uint64_t seed = 0, double K = 4.0);

/// int_{-1}^{1} a0(E) / (E - E0 - i eps) dE with a0(E) = (2/pi) sqrt(1 - E^2),
/// by adaptive Gauss-Kronrod in the angle E = cos(theta).
std::complex<double> semicircle_stieltjes(double E0, double epsilon);

/// a0(E) = (2/pi) sqrt(1 - E^2) on [-1, 1], 0 outside.
double semicircle_density(double E);

enum class KernelCut { truncated, full };

struct ReconstructionResult {
    double value = 0.0;      // 1 + 2 sum_{n>=1} phi(n eps) T_n(E0) mu_n
    double dos = 0.0;        // value / (pi sqrt(1 - E0^2))
    double tail_bound = 0.0; // bound on the omitted phi_q terms from |T_n| <= T_n(||H||)
    int n_used = 0;
    double std_error = 0.0;  // exact from per-sample moments when present
};

/// Regularised moment reconstruction. With KernelCut::truncated the weights
/// are phi_q(n eps) 1{n eps <= W^eta}, n <= n0 = floor(W^eta / eps); with
/// KernelCut::full every available degree is used. Throws InvalidArgument if
/// the series is not of kind T or max_degree < n0.
ReconstructionResult dos_from_moments(const MomentSeries& moments, const KernelParams& params, double E0,
                                      KernelCut cut = KernelCut::truncated);

/// n0 = floor(W^eta / eps).
int kernel_cutoff_degree(int W, const KernelParams& params);

struct DivergencePoint {
    double epsilon = 0.0;
    double value = 0.0;        // 1 + 2 sum e^{-n eps} T_n(E0) mu_n over available degrees
    double max_partial = 0.0;  // max_k |partial sum up to k|
    double abs_sum = 0.0;      // 1 + 2 sum e^{-n eps} |T_n(E0) mu_n|
};

/// The e^{-n eps} regularisation evaluated on fixed moments across eps_grid.
std::vector<DivergencePoint> exp_kernel_divergence_demo(const MomentSeries& moments, double E0,
                                                        const std::vector<double>& eps_grid);

struct TheoremError {
    double error = 0.0;
    double std_error = 0.0;
    double estimate = 0.0;
    double reference = 0.0;
    int N = 0;
};

/// |<Im G(0,0)> - Im int a0(E) dE / (E - E0 - i eps)| with the Monte Carlo error.
TheoremError theorem_error(int W, double E0, double epsilon, long samples, std::uint64_t seed, int workers = 1,
                           int N = 0);

}  // namespace bandspec
