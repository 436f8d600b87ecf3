#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bandspec/csv.hpp"
#include "bandspec/diagrams.hpp"
#include "bandspec/regularizer.hpp"

namespace bandspec {

/// w(xi) = (1/W) sum_{j=1}^{W} cos(2 pi j xi), the symbol of the simple random
/// walk on Z(W). Product form, with the cosine sum where sin(pi xi) vanishes.
double w_eval(int W, double xi);
/// Direct cosine sum.
double w_eval_sum(int W, double xi);

/// Largest c with |w(xi)| <= 1 / (1 + c W min(xi, 1 - xi)) at xi = k / grid,
/// k = 1..grid-1, for every listed W. Since 1 - w(xi) is quadratic at 0, the
/// grid value is of order W / grid; points with W min(xi, 1 - xi) below
/// min_scaled_distance can be excluded to see the constant away from 0.
double w_bound_constant(const std::vector<int>& W_list, int grid = 100000, double min_scaled_distance = 0.0);

/// Multigraph with marked vertex 0; edges may be loops or repeated.
struct MultiGraph {
    int vertex_count = 1;
    std::vector<std::pair<int, int>> edges;

    int V() const { return vertex_count; }
    int E() const { return static_cast<int>(edges.size()); }
    static MultiGraph from_diagram(const Diagram& d);
    static MultiGraph loop();
    static MultiGraph theta();
};

/// Cycle-space coordinates: xi_e = sum_k theta_k basis[k][e], theta in [0,1)^dim.
/// Built from fundamental cycles of a BFS spanning tree, so the map from the
/// torus onto the constraint subspace has unit Jacobian.
struct KirchhoffSubspace {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> basis;  // dim x E
    int dimension() const { return static_cast<int>(basis.size()); }
    /// sum over edges at each vertex (out minus in) is zero for every basis vector.
    bool satisfies_constraints(int vertex_count) const;
};

/// Throws InvalidArgument for a disconnected graph.
KirchhoffSubspace kirchhoff_basis(const MultiGraph& graph);

struct EmbQuery {
    MultiGraph graph;
    std::complex<double> g{0.5, 0.8660254037844386};
    KernelParams params;
    int W = 8;
    int initial_grid = 16;
    int max_grid = 0;  // 0: 2^20 points per axis for genus 1, 2^12 for genus 2
    double tolerance = 1e-10;
    int workers = 1;
};

struct EmbResult {
    std::complex<double> value;
    int grid = 0;
    int dimension = 0;
};

/// Emb#: integral over the Kirchhoff subspace of S_eps[z_1..z_E] prod z_e,
/// z_e = g w(xi_e), by the periodic trapezoid rule with the grid doubled until
/// two successive refinements agree within tolerance. The divided difference
/// is evaluated as sum_n phi_q(n eps) h_{n-E}(z), which is regular when
/// w values coincide. Genus <= 2; |g| = 1, g != 1.
EmbResult emb_sharp(const EmbQuery& query);

/// Same quantity as a lattice sum over vertex positions and edge lengths,
/// with P^n(0, R) from repeated convolution. Needs V <= 2. Edge lengths are
/// capped where phi_q(sum n_e eps) < 1e-12 unless n_cap > 0.
std::complex<double> emb_lattice_sum(const EmbQuery& query, int n_cap = 0);

/// sum_{n>=1} phi_q(n eps) g^n P^n(0,0): the loop graph's lattice sum.
std::complex<double> loop_lattice_sum(int W, std::complex<double> g, const KernelParams& params);

struct EmbBound {
    double lhs = 0.0;             // |Emb#|
    double shape = 0.0;           // (1/|1-g|)^{E+1} (log W / W)^{E-V+1}
    double shape_no_log = 0.0;    // (1/|1-g|)^{E+1} (1 / W)^{E-V+1}
    double ratio() const { return lhs / shape; }
    double ratio_no_log() const { return lhs / shape_no_log; }
};

EmbBound emb_bound_check(const EmbQuery& query);
EmbBound emb_bound_from_value(const EmbQuery& query, std::complex<double> value);

/// CSV rows (graph_id, W, g_real, g_imag, epsilon, q, emb_abs, shape_factor, ratio)
/// over the W x g grid.
CsvTable emb_ladder(const std::string& graph_id, const MultiGraph& graph, const std::vector<int>& W_list,
                    const std::vector<std::complex<double>>& g_list, const KernelParams& params, int workers = 1);

/// Probability that a non-backtracking walk on Z(W) from 0 is at R after n
/// steps, computed two ways.
struct NonBacktrackingCheck {
    double by_count = 0.0;      // #NB walks 0 -> R / (2W (2W-1)^{n-1})
    double by_chebyshev = 0.0;  // (2W-1)^{-n/2} U_{n,W}(W P / sqrt(2W-1))(0, R)
    double ratio() const { return by_chebyshev / by_count; }
};

/// by_chebyshev uses a vector recursion on a window of radius nW.
NonBacktrackingCheck nonbacktracking_check(int W, int n, int R);

}  // namespace bandspec
