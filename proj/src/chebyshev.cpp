#include "bandspec/chebyshev.hpp"

#include <cmath>

#include "bandspec/errors.hpp"
#include "bandspec/parallel.hpp"
#include "bandspec/rng.hpp"

namespace bandspec {

std::string to_string(PolyKind kind) {
    switch (kind) {
        case PolyKind::T: return "T";
        case PolyKind::U: return "U";
        case PolyKind::UnW: return "UnW";
    }
    return "?";
}

PolyKind poly_kind_from_string(const std::string& s) {
    if (s == "T") return PolyKind::T;
    if (s == "U") return PolyKind::U;
    if (s == "UnW" || s == "U_nW") return PolyKind::UnW;
    throw InvalidArgument("unknown polynomial kind '" + s + "' (expected T, U or UnW)");
}

std::vector<int> MomentSeries::soft_bound_violations() const {
    std::vector<int> out;
    if (kind != PolyKind::T) return out;
    for (int n = 0; n <= max_degree; ++n)
        if (std::abs(values[n]) > 1.0 + 3.0 * std_errors[n]) out.push_back(n);
    return out;
}

double cheb_eval(ChebKind kind, int n, double x) {
    if (kind == ChebKind::T) {
        require(n >= 0, "T_n requires n >= 0");
        if (n == 0) return 1.0;
        double prev = 1.0, cur = x;
        for (int k = 1; k < n; ++k) {
            const double next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    require(n >= -2, "U_n requires n >= -2");
    if (n < 0) return 0.0;
    double prev = 0.0, cur = 1.0;  // U_{-1}, U_0
    for (int k = 0; k < n; ++k) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> poly_moments_at_00(const SampledBandMatrix& m, PolyKind kind, int max_degree) {
    require(max_degree >= 0, "max_degree must be nonnegative");
    const int W = m.W();
    const int N = m.N();
    require(static_cast<long>(N) >= static_cast<long>(max_degree) * W,
            "truncation too small: need N >= n*W = " + std::to_string(max_degree * W));

    const std::size_t dim = static_cast<std::size_t>(m.spec().dimension());
    std::vector<double> a(dim, 0.0), b(dim, 0.0), c(dim, 0.0);
    std::vector<double> raw(max_degree + 1);  // T_n or U_n at (0,0)

    // a = p_0 delta_0, b = p_1 delta_0
    a[N] = 1.0;
    raw[0] = 1.0;
    const double first = (kind == PolyKind::T) ? 1.0 : 2.0;
    if (max_degree >= 1) {
        m.apply_rows(a, b, W);
        for (int u = -std::min(W, N); u <= std::min(W, N); ++u) b[u + N] *= first;
        raw[1] = b[N];
    }
    double* prev = a.data();
    double* cur = b.data();
    double* next = c.data();
    for (int k = 1; k < max_degree; ++k) {
        const int r = std::min(N, (k + 1) * W);
        m.apply_rows(std::span<const double>(cur, dim), std::span<double>(next, dim), r);
        for (int u = -r; u <= r; ++u) next[u + N] = 2.0 * next[u + N] - prev[u + N];
        raw[k + 1] = next[N];
        double* t = prev;
        prev = cur;
        cur = next;
        next = t;
    }

    if (kind != PolyKind::UnW) return raw;
    std::vector<double> out(max_degree + 1);
    const double inv = 1.0 / (2.0 * W - 1.0);
    for (int n = 0; n <= max_degree; ++n) out[n] = raw[n] - (n >= 2 ? raw[n - 2] * inv : 0.0);
    return out;
}

double poly_of_H_at_00(const SampledBandMatrix& m, PolyKind kind, int n) {
    return poly_moments_at_00(m, kind, n).back();
}

MomentSeries estimate_moments(const BandMatrixSpec& spec, PolyKind kind, int max_degree, long samples,
                              const MomentOptions& opts) {
    require(samples >= 1, "samples must be >= 1");
    require(max_degree >= 0, "max_degree must be nonnegative");
    const BandMatrixSpec base = BandMatrixSpec::make(spec.W, spec.N, spec.seed);
    require(static_cast<long>(base.N) >= static_cast<long>(max_degree) * base.W,
            "truncation too small for requested degree");

    const std::size_t width = static_cast<std::size_t>(max_degree) + 1;
    std::vector<double> rows(static_cast<std::size_t>(samples) * width);
    detail::parallel_for(samples, opts.workers, [&](long i) {
        BandMatrixSpec s = base;
        s.seed = sample_seed(base.seed, static_cast<std::uint64_t>(i));
        const auto vals = poly_moments_at_00(SampledBandMatrix(s), kind, max_degree);
        std::copy(vals.begin(), vals.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * width));
    });

    MomentSeries out;
    out.kind = kind;
    out.W = base.W;
    out.max_degree = max_degree;
    out.sample_count = samples;
    out.values.assign(width, 0.0);
    out.std_errors.assign(width, 0.0);
    for (long i = 0; i < samples; ++i)
        for (std::size_t n = 0; n < width; ++n) out.values[n] += rows[i * width + n];
    for (auto& v : out.values) v /= static_cast<double>(samples);
    if (samples > 1) {
        for (long i = 0; i < samples; ++i)
            for (std::size_t n = 0; n < width; ++n) {
                const double d = rows[i * width + n] - out.values[n];
                out.std_errors[n] += d * d;
            }
        for (auto& s : out.std_errors)
            s = std::sqrt(s / static_cast<double>(samples - 1) / static_cast<double>(samples));
    }
    if (opts.keep_samples) out.per_sample = std::move(rows);
    return out;
}

}  // namespace bandspec
