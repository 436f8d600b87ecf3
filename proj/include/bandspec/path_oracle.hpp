#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bandspec/csv.hpp"

namespace bandspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// The graph Z(W): vertices are integers, u ~ v iff 0 < |u - v| <= W.
struct LatticeGraphSpec {
    int W = 1;
    bool adjacent(long u, long v) const;
};

/// Vertex sequence u_0..u_n.
struct LatticePath {
    std::vector<int> vertices;
    int length() const { return static_cast<int>(vertices.size()) - 1; }
};

/// plain: u_j != u_{j+2} for j = 0..n-2.
/// strengthened (closed paths only): additionally u_{n-1} != u_1, i.e. the
/// non-backtracking condition also holds across the closing point.
enum class PathKind { plain, strengthened };

/// Enumeration limits; exhaustive counting blows up combinatorially.
struct EnumerationCap {
    int max_length = 10;
    int max_W = 3;
    int workers = 1;
};

/// Number of non-backtracking paths of length n from u0 to un that traverse
/// every edge an even number of times.
///
/// n = 0 gives delta(u0, un). For strengthened closed paths the formal values
/// n = 0 -> 2W - 1 and n = -1 -> 0 are returned. Throws CapExceeded past the cap.
BigInt count_paths(int W, int n, int u0, int un, PathKind kind, const EnumerationCap& cap = {});

/// Calls visit(path) for every path counted by count_paths (n >= 1).
void enumerate_paths(int W, int n, int u0, int un, PathKind kind,
                     const std::function<void(const LatticePath&)>& visit, const EnumerationCap& cap = {});

/// Paths_n and Paths^0_n for n up to max_length (closed paths at 0).
struct PathCountTable {
    int W = 1;
    int max_length = 0;
    std::vector<BigInt> paths;   // index n = 0..max_length
    std::vector<BigInt> paths0;  // index n + 1, n = -1..max_length (formal values at -1 and 0)

    /// Paths_n, with Paths_n = 0 for n < 0.
    BigInt paths_at(int n) const;
    /// Paths^0_n for n >= -1; throws for n < -1 where no value is defined.
    BigInt paths0_at(int n) const;
    /// Paths_n - (2W-1) Paths_{n-2} == Paths^0_n - Paths^0_{n-2}, for n >= 1.
    bool identity_holds(int n) const;
};

/// Enumerates the table and checks the Paths / Paths^0 identity for every
/// n = 1..max_length; a violation throws std::logic_error.
PathCountTable build_table(int W, int max_length, const EnumerationCap& cap = {});

/// Exact <T_n(H)(0,0)> from the path counts. With via_paths0 the bracket
/// Paths_k - (2W-1) Paths_{k-2} (k >= 1) is replaced by Paths^0_k - Paths^0_{k-2}.
Rational exact_T_moment(const PathCountTable& table, int n, bool via_paths0 = false);

/// <U_{n,W}(H)(0,0)> = (2W-1)^{-n/2} Paths_n, as a double.
double exact_UnW_moment(const PathCountTable& table, int n);

/// CSV with columns W, n, paths, paths0 for n = 0..max_length.
CsvTable to_csv(const PathCountTable& table);

}  // namespace bandspec
