#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bandspec {

using cplx = std::complex<double>;

/// Parameters of the kernel phi_q(t) = (1/A_q) int exp(-s^{2q} - (t-s)^{2q}) ds.
///
/// A_q = int exp(-2 s^{2q}) ds is the normalization that makes phi_q(0) = 1;
/// it is computed by quadrature in make(). epsilon is the kernel width in the
/// Chebyshev index (terms are phi_q(n epsilon)); eta sets the cutoff W^eta of
/// the truncated kernel.
struct KernelParams {
    int q = 2;
    double epsilon = 0.05;
    double eta = 0.5;
    double A_q = 0.0;
    double quadrature_tolerance = 1e-12;
    double max_imag_xi = 20.0;  // contour band for F_q; keeps |F_q|^2 inside double range

    static KernelParams make(int q, double epsilon, double eta = 0.5, double quadrature_tolerance = 1e-12);

    /// Human-readable warnings for parameters outside the regime where the
    /// O(1/W) estimate is proven: (2q-1)/(2q) > 0.99 and q > (eta + 0.99)/(2 eta).
    std::vector<std::string> regime_warnings() const;
};

/// phi_q(t); even, phi_q(0) = 1, decreasing on t >= 0.
double phi_q(const KernelParams& p, double t);

/// phi_q(n step) for n = 0..n_max.
std::vector<double> phi_on_lattice(const KernelParams& p, double step, int n_max);

/// Smallest n >= 1 with phi_q(n step) < threshold.
int phi_cutoff_index(const KernelParams& p, double step, double threshold = 1e-17);

/// F_q(xi) = int exp(-2 pi i x xi - x^{2q}) dx for complex xi with |Im xi| <= max_imag_xi.
cplx F_q(const KernelParams& p, cplx xi);

/// Fourier transform of phi_q (convention g^(xi) = int g(t) e^{-2 pi i t xi} dt): F_q^2 / A_q.
cplx phi_hat(const KernelParams& p, cplx xi);
double phi_hat(const KernelParams& p, double xi);

/// phi_q(t) 1{|t| <= W^eta}.
double phi_truncated(const KernelParams& p, double t, int W);

/// f_{E0,eps}(E) = 1 + 2 sum_{n>=1} phi_q(n eps) T_n(E0) T_n(E), an approximate
/// delta function at E0 of width ~eps with respect to dE / (pi sqrt(1-E^2)).
struct DeltaKernel {
    double E0 = 0.0;
    KernelParams params;
    int n_max = 0;
    std::vector<double> weights;  // phi_q(n eps), n = 0..n_max

    /// n_max defaults to the index where phi_q(n eps) drops below 1e-17.
    static DeltaKernel make(double E0, const KernelParams& params, int n_max = 0);
};

/// For |E| <= 1 the partial sum up to n_max. For 1 < |E| <= 1.1 the series
/// cancels catastrophically, so the value is taken from the Poisson-summation
/// side continued to complex angle theta = acos(E); this needs
/// acosh|E| / (2 pi eps) <= params.max_imag_xi.
double delta_kernel_eval(const DeltaKernel& k, double E);

/// (1/2eps) sum_{|m| <= m_range} [phi^((m - (theta+theta0)/2pi)/eps) + phi^((m - (theta-theta0)/2pi)/eps)]
/// with theta0 = acos(E0). m_range <= 0 selects a range from the decay of phi^.
double poisson_rhs(const DeltaKernel& k, double theta, int m_range = 0);
cplx poisson_rhs(const DeltaKernel& k, cplx theta, int m_range = 0);

/// Left side of the Poisson identity: f_{cos theta0, eps}(cos theta) by direct summation.
double poisson_lhs(const DeltaKernel& k, double theta);

/// Divided difference f[z_1..z_E] by the recursive definition. Points must be
/// pairwise separated by at least min_separation (InvalidArgument otherwise).
cplx divided_difference(std::span<const std::pair<cplx, cplx>> values, double min_separation = 1e-8);
/// Same quantity via sum_e f(z_e) / prod_{f != e} (z_e - z_f).
cplx divided_difference_explicit(std::span<const std::pair<cplx, cplx>> values, double min_separation = 1e-8);

/// m_{n-1}[z_1..z_E] prod_e z_e with m_{n-1}(z) = z^{n-1}: equals the sum over
/// compositions n_1 + ... + n_E = n (n_e >= 1) of prod z_e^{n_e}.
cplx simplex_moment_sum(std::span<const cplx> z, int n);

/// h_k(z_1..z_E), the complete homogeneous symmetric polynomials for k = 0..k_max.
/// Equals m_{k+E-1}[z_1..z_E] and stays finite for coincident points.
std::vector<cplx> complete_homogeneous(std::span<const cplx> z, int k_max);

enum class SEpsMethod { direct, contour };

/// S_eps(z) = sum_{n>=1} phi_q(n eps) z^{n-1} and its j-th derivative.
/// direct: summation until phi_q(n eps) is negligible (|z| <= 1).
/// contour: integral of F_q^2 e^{2 pi i eps xi}/(1 - z e^{2 pi i eps xi}) along
/// the rays arg xi in {phi, pi - phi}, phi = pi / (8q).
/// Throws InvalidArgument if |z| > 1 or |1 - z| < min_distance_to_one.
cplx S_eps(const KernelParams& p, cplx z, int j = 0, SEpsMethod method = SEpsMethod::direct,
           double min_distance_to_one = 1e-6);

/// Divided difference S_eps[z_1..z_E] via sum_n phi_q(n eps) h_{n-E}(z); valid
/// for coincident points.
cplx S_eps_divided(const KernelParams& p, std::span<const cplx> z);

/// Cached phi_q(n eps) weights for repeated S_eps evaluation.
class SEpsSeries {
public:
    explicit SEpsSeries(const KernelParams& p, double threshold = 1e-17);
    /// S_eps[z_1..z_E] (divided difference; E = 1 gives S_eps(z)).
    cplx divided(std::span<const cplx> z) const;
    const std::vector<double>& weights() const { return phi_; }

private:
    std::vector<double> phi_;  // phi_q(n eps), n = 0..n_max
};

}  // namespace bandspec
