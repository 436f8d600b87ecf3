#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "bandspec/errors.hpp"

namespace bandspec::quad {

using boost::math::quadrature::gauss;

/// Composite 20-point Gauss-Legendre rule with `panels` equal panels on [a, b].
template <class F>
auto gl_panels(F&& f, double a, double b, int panels) {
    using K = decltype(f(a));
    K sum = K(0);
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) sum += gauss<double, 20>::integrate(f, a + i * h, a + (i + 1) * h);
    return sum;
}

struct PanelOptions {
    double tol = 1e-12;       // stop when |I_k - I_{k-1}| <= tol * max(scale, |I_k|)
    double scale = 1.0;
    int start_panels = 4;
    int max_panels = 1 << 14;
};

/// Panel count doubled until successive composite values agree to tolerance.
/// Throws ConvergenceError when max_panels is reached first.
template <class F>
auto gl_adaptive(F&& f, double a, double b, const PanelOptions& opt = {}) {
    int panels = opt.start_panels;
    auto prev = gl_panels(f, a, b, panels);
    while (panels < opt.max_panels) {
        panels *= 2;
        auto cur = gl_panels(f, a, b, panels);
        using std::abs;
        if (abs(cur - prev) <= opt.tol * std::max(opt.scale, static_cast<double>(abs(cur)))) return cur;
        prev = cur;
    }
    throw ConvergenceError("Gauss-Legendre panel refinement did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
}

/// x^(2q) for integer q >= 1 by repeated squaring.
inline double pow2q(double x, int q) {
    double base = x * x, r = 1.0;
    while (q) {
        if (q & 1) r *= base;
        base *= base;
        q >>= 1;
    }
    return r;
}

}  // namespace bandspec::quad
