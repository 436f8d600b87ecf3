#include "bandspec/path_oracle.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bandspec/errors.hpp"
#include "bandspec/parallel.hpp"

namespace bandspec {

bool LatticeGraphSpec::adjacent(long u, long v) const {
    const long d = std::labs(u - v);
    return d > 0 && d <= W;
}

namespace {

// Depth-first enumeration of non-backtracking paths with an even-multiplicity
// filter. Edge multiplicities live in a flat array over the reachable window.
class Walker {
public:
    Walker(int W, int n, int u0, int un, PathKind kind)
        : W_(W), n_(n), un_(un), kind_(kind), lo_(u0 - n * W), path_(n + 1),
          mult_(static_cast<std::size_t>(2 * n * W + 1) * W, 0) {
        path_[0] = u0;
    }

    // Visits every admissible completion whose first step goes to u0 + first.
    template <class Visit>
    void run_from_first_step(int first, Visit&& visit) {
        step(0, path_[0] + first, visit);
    }

private:
    std::size_t edge(int a, int b) const {
        const int lo = a < b ? a : b;
        const int d = std::abs(a - b);
        return static_cast<std::size_t>(lo - lo_) * W_ + (d - 1);
    }

    // Extend path_[0..j] with vertex v at position j+1.
    template <class Visit>
    void step(int j, int v, Visit& visit) {
        const int pos = j + 1;
        if (pos >= 2 && v == path_[pos - 2]) return;  // backtracking
        const int rem = n_ - pos;
        if (std::abs(v - un_) > static_cast<long>(rem) * W_) return;
        const std::size_t e = edge(path_[j], v);
        odd_ += (mult_[e] & 1) ? -1 : 1;
        ++mult_[e];
        if (odd_ <= rem && ((rem - odd_) & 1) == 0) {
            path_[pos] = v;
            if (rem == 0) {
                if (v == un_ && odd_ == 0 &&
                    (kind_ == PathKind::plain || n_ < 2 || path_[n_ - 1] != path_[1]))
                    visit(path_);
            } else {
                for (int d = -W_; d <= W_; ++d)
                    if (d != 0) step(pos, v + d, visit);
            }
        }
        --mult_[e];
        odd_ += (mult_[e] & 1) ? 1 : -1;
    }

    int W_, n_, un_;
    PathKind kind_;
    int lo_;
    std::vector<int> path_;
    std::vector<unsigned char> mult_;
    int odd_ = 0;
};

void check_cap(int W, int n, const EnumerationCap& cap) {
    if (n > cap.max_length || W > cap.max_W)
        throw CapExceeded("exhaustive enumeration capped at n <= " + std::to_string(cap.max_length) +
                          ", W <= " + std::to_string(cap.max_W) + " (requested n=" + std::to_string(n) +
                          ", W=" + std::to_string(W) + ")");
}

std::vector<int> first_steps(int W) {
    std::vector<int> out;
    for (int d = -W; d <= W; ++d)
        if (d != 0) out.push_back(d);
    return out;
}

}  // namespace

BigInt count_paths(int W, int n, int u0, int un, PathKind kind, const EnumerationCap& cap) {
    require(W >= 1, "W must be >= 1");
    if (kind == PathKind::strengthened) {
        require(u0 == un, "strengthened paths are closed: u0 must equal un");
        require(n >= -1, "strengthened count defined for n >= -1");
        if (n == -1) return 0;
        if (n == 0) return 2 * W - 1;
    }
    require(n >= 0, "path length must be nonnegative");
    if (n == 0) return u0 == un ? 1 : 0;
    check_cap(W, n, cap);

    const auto firsts = first_steps(W);
    std::vector<unsigned long long> partial(firsts.size(), 0);
    detail::parallel_for(static_cast<long>(firsts.size()), cap.workers, [&](long i) {
        Walker walker(W, n, u0, un, kind);
        unsigned long long count = 0;
        walker.run_from_first_step(firsts[i], [&](const std::vector<int>&) { ++count; });
        partial[i] = count;
    });
    BigInt total = 0;
    for (auto c : partial) total += c;
    return total;
}

void enumerate_paths(int W, int n, int u0, int un, PathKind kind,
                     const std::function<void(const LatticePath&)>& visit, const EnumerationCap& cap) {
    require(W >= 1, "W must be >= 1");
    require(n >= 1, "enumeration requires n >= 1");
    require(kind == PathKind::plain || u0 == un, "strengthened paths are closed");
    check_cap(W, n, cap);
    LatticePath p;
    for (int d : first_steps(W)) {
        Walker walker(W, n, u0, un, kind);
        walker.run_from_first_step(d, [&](const std::vector<int>& v) {
            p.vertices = v;
            visit(p);
        });
    }
}

BigInt PathCountTable::paths_at(int n) const {
    if (n < 0) return 0;
    if (n > max_length) throw InvalidArgument("n beyond table range");
    return paths[n];
}

BigInt PathCountTable::paths0_at(int n) const {
    if (n < -1 || n > max_length) throw InvalidArgument("Paths^0_n defined in the table for -1 <= n <= max_length");
    return paths0[n + 1];
}

bool PathCountTable::identity_holds(int n) const {
    require(n >= 1 && n <= max_length, "identity checked for 1 <= n <= max_length");
    const BigInt lhs = paths_at(n) - (2 * W - 1) * paths_at(n - 2);
    const BigInt rhs = paths0_at(n) - paths0_at(n - 2);
    return lhs == rhs;
}

PathCountTable build_table(int W, int max_length, const EnumerationCap& cap) {
    require(W >= 1, "W must be >= 1");
    require(max_length >= 0 && max_length % 2 == 0, "max_length must be even and nonnegative");
    check_cap(W, max_length, cap);
    PathCountTable t;
    t.W = W;
    t.max_length = max_length;
    t.paths.resize(max_length + 1);
    t.paths0.resize(max_length + 2);
    t.paths0[0] = count_paths(W, -1, 0, 0, PathKind::strengthened, cap);
    for (int n = 0; n <= max_length; ++n) {
        t.paths[n] = count_paths(W, n, 0, 0, PathKind::plain, cap);
        t.paths0[n + 1] = count_paths(W, n, 0, 0, PathKind::strengthened, cap);
    }
    for (int n = 1; n <= max_length; ++n)
        if (!t.identity_holds(n))
            throw std::logic_error("Paths/Paths^0 identity violated at W=" + std::to_string(W) +
                                   ", n=" + std::to_string(n));
    return t;
}

Rational exact_T_moment(const PathCountTable& table, int n, bool via_paths0) {
    require(n >= 0 && n <= table.max_length, "n out of table range");
    if (n == 0) return 1;
    if (n % 2 == 1) return 0;
    const int q = 2 * table.W - 1;
    BigInt sum = 0;
    for (int k = n; k >= 0; k -= 2) {
        if (via_paths0 && k >= 1)
            sum += table.paths0_at(k) - table.paths0_at(k - 2);
        else
            sum += table.paths_at(k) - q * table.paths_at(k - 2);
    }
    BigInt denom = 2;
    for (int i = 0; i < n / 2; ++i) denom *= q;
    return Rational(sum, denom);
}

double exact_UnW_moment(const PathCountTable& table, int n) {
    require(n >= 0 && n <= table.max_length, "n out of table range");
    if (n % 2 == 1) return 0.0;
    BigInt denom = 1;
    for (int i = 0; i < n / 2; ++i) denom *= (2 * table.W - 1);
    return static_cast<double>(Rational(table.paths_at(n), denom));
}

CsvTable to_csv(const PathCountTable& table) {
    CsvTable out;
    out.kind = "paths";
    out.columns = {"W", "n", "paths", "paths0"};
    for (int n = 0; n <= table.max_length; ++n)
        out.rows.push_back({std::to_string(table.W), std::to_string(n), table.paths_at(n).str(),
                            table.paths0_at(n).str()});
    return out;
}

}  // namespace bandspec
