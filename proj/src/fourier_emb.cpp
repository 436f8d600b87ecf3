#include "bandspec/fourier_emb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "bandspec/errors.hpp"
#include "bandspec/parallel.hpp"

namespace bandspec {

namespace {

constexpr double pi = std::numbers::pi;
constexpr long double pi_l = std::numbers::pi_v<long double>;
using cplx = std::complex<double>;

}  // namespace

// Both forms run in long double: the phases reach 2 pi W and lose about
// log2(W) bits to argument rounding in double.
double w_eval_sum(int W, double xi) {
    require(W >= 1, "W must be >= 1");
    const long double x = xi;
    long double s = 0.0L;
    for (int j = 1; j <= W; ++j) s += std::cos(2.0L * pi_l * j * x);
    return static_cast<double>(s / W);
}

double w_eval(int W, double xi) {
    require(W >= 1, "W must be >= 1");
    const long double x = xi;
    const long double sx = std::sin(pi_l * x);
    if (std::abs(sx) < 1e-12L) return w_eval_sum(W, xi);
    return static_cast<double>(std::sin(pi_l * W * x) * std::cos(pi_l * (W + 1) * x) / (W * sx));
}

double w_bound_constant(const std::vector<int>& W_list, int grid, double min_scaled_distance) {
    require(!W_list.empty(), "W_list must be nonempty");
    require(grid >= 2, "grid must be >= 2");
    double c = std::numeric_limits<double>::infinity();
    for (int W : W_list) {
        for (int k = 1; k < grid; ++k) {
            const double xi = static_cast<double>(k) / grid;
            const double a = std::abs(w_eval(W, xi));
            if (a == 0.0) continue;
            const double m = std::min(xi, 1.0 - xi);
            if (W * m < min_scaled_distance) continue;
            c = std::min(c, (1.0 / a - 1.0) / (W * m));
        }
    }
    return std::max(c, 0.0);
}

MultiGraph MultiGraph::from_diagram(const Diagram& d) { return MultiGraph{d.vertex_count, d.edges}; }

MultiGraph MultiGraph::loop() { return MultiGraph{1, {{0, 0}}}; }

MultiGraph MultiGraph::theta() { return MultiGraph{2, {{0, 1}, {0, 1}, {0, 1}}}; }

bool KirchhoffSubspace::satisfies_constraints(int vertex_count) const {
    for (const auto& b : basis) {
        std::vector<long> net(vertex_count, 0);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            net[edges[e].first] += b[e];
            net[edges[e].second] -= b[e];
        }
        if (std::any_of(net.begin(), net.end(), [](long x) { return x != 0; })) return false;
    }
    return true;
}

KirchhoffSubspace kirchhoff_basis(const MultiGraph& graph) {
    const int V = graph.V(), E = graph.E();
    require(V >= 1, "graph needs a vertex");
    for (const auto& [u, v] : graph.edges)
        require(u >= 0 && u < V && v >= 0 && v < V, "edge endpoint out of range");

    // BFS tree from the marked vertex: parent edge and depth per vertex.
    std::vector<int> parent_edge(V, -1), depth(V, -1);
    std::vector<bool> tree(E, false);
    depth[0] = 0;
    std::queue<int> todo;
    todo.push(0);
    while (!todo.empty()) {
        const int x = todo.front();
        todo.pop();
        for (int e = 0; e < E; ++e) {
            const auto [u, v] = graph.edges[e];
            const int y = u == x ? v : (v == x ? u : -1);
            if (y < 0 || depth[y] >= 0) continue;
            depth[y] = depth[x] + 1;
            parent_edge[y] = e;
            tree[e] = true;
            todo.push(y);
        }
    }
    for (int v = 0; v < V; ++v) require(depth[v] >= 0, "graph is disconnected");

    KirchhoffSubspace ks;
    ks.edges = graph.edges;
    for (int e = 0; e < E; ++e) {
        if (tree[e]) continue;
        std::vector<int> b(E, 0);
        b[e] = 1;
        // Close the cycle: walk from the head of e back to its tail through the tree.
        // Unit flow leaves u along e, arrives at v, then returns v -> u.
        auto climb = [&](int x, int sign) {
            // Flow of `sign` along the tree path from x up to the root.
            while (x != 0) {
                const int pe = parent_edge[x];
                const auto [a, c] = graph.edges[pe];
                // Moving from x to its parent: forward if the edge points x -> parent.
                b[pe] += (a == x && c != x) ? sign : -sign;
                x = a == x ? c : a;
            }
        };
        const auto [u, v] = graph.edges[e];
        climb(v, +1);  // v -> root
        climb(u, -1);  // root -> u
        ks.basis.push_back(std::move(b));
    }
    return ks;
}

namespace {

// Sum of f over the grid {0..M-1}^dim, rows reduced in index order.
template <class F>
cplx grid_sum(int dim, int M, int workers, F&& f) {
    if (dim == 0) return f(0, 0);
    if (dim == 1) {
        const int block = 1024;
        const long blocks = (M + block - 1) / block;
        std::vector<cplx> part(blocks, 0.0);
        detail::parallel_for(blocks, workers, [&](long b) {
            cplx s = 0.0;
            for (int i = static_cast<int>(b * block); i < std::min<long>(M, (b + 1) * block); ++i) s += f(i, 0);
            part[b] = s;
        });
        cplx s = 0.0;
        for (const auto& x : part) s += x;
        return s;
    }
    std::vector<cplx> part(M, 0.0);
    detail::parallel_for(M, workers, [&](long i) {
        cplx s = 0.0;
        for (int j = 0; j < M; ++j) s += f(static_cast<int>(i), j);
        part[i] = s;
    });
    cplx s = 0.0;
    for (const auto& x : part) s += x;
    return s;
}

void check_query(const EmbQuery& q) {
    require(q.W >= 1, "W must be >= 1");
    require(std::abs(std::abs(q.g) - 1.0) < 1e-12, "|g| must be 1");
    require(std::abs(1.0 - q.g) > 1e-6, "g must be bounded away from 1");
    require(q.params.A_q > 0.0, "KernelParams not initialised; use KernelParams::make");
    require(q.graph.E() >= 1, "graph needs at least one edge");
}

}  // namespace

EmbResult emb_sharp(const EmbQuery& query) {
    check_query(query);
    const auto ks = kirchhoff_basis(query.graph);
    const int dim = ks.dimension(), E = query.graph.E();
    require(dim <= 2, "emb_sharp supports genus <= 2");
    const int max_grid = query.max_grid > 0 ? query.max_grid : (dim <= 1 ? 1 << 20 : 1 << 12);
    const SEpsSeries series(query.params);
    const cplx g = query.g;

    auto evaluate = [&](int M) {
        std::vector<double> wt(M);
        for (int i = 0; i < M; ++i) wt[i] = w_eval(query.W, static_cast<double>(i) / M);
        auto f = [&](int i, int j) {
            std::vector<cplx> z(E);
            cplx prod = 1.0;
            for (int e = 0; e < E; ++e) {
                long idx = 0;
                if (dim >= 1) idx += static_cast<long>(ks.basis[0][e]) * i;
                if (dim >= 2) idx += static_cast<long>(ks.basis[1][e]) * j;
                idx %= M;
                if (idx < 0) idx += M;
                z[e] = g * wt[idx];
                prod *= z[e];
            }
            return series.divided(z) * prod;
        };
        return grid_sum(dim, M, query.workers, f) / std::pow(static_cast<double>(M), dim);
    };

    EmbResult r;
    r.dimension = dim;
    if (dim == 0) {
        r.value = evaluate(1);
        r.grid = 1;
        return r;
    }
    int M = std::max(query.initial_grid, 4 * query.W);
    cplx prev = evaluate(M);
    while (2 * M <= max_grid) {
        M *= 2;
        const cplx cur = evaluate(M);
        if (std::abs(cur - prev) <= query.tolerance * std::max(1.0, std::abs(cur))) {
            r.value = cur;
            r.grid = M;
            return r;
        }
        prev = cur;
    }
    throw ConvergenceError("emb_sharp: trapezoid grid did not converge up to " + std::to_string(max_grid) +
                           " points per axis");
}

namespace {

// P^n(0, R) for n = 0..n_max, |R| <= n_max W; row n at offset n * (2 n_max W + 1).
struct WalkTable {
    int W, n_max, radius;
    std::vector<double> p;
    double at(int n, int R) const {
        if (std::abs(R) > radius) return 0.0;
        return p[static_cast<std::size_t>(n) * (2 * radius + 1) + (R + radius)];
    }
};

WalkTable walk_table(int W, int n_max) {
    WalkTable t{W, n_max, n_max * W, {}};
    const int width = 2 * t.radius + 1;
    t.p.assign(static_cast<std::size_t>(n_max + 1) * width, 0.0);
    t.p[t.radius] = 1.0;
    std::vector<double> prefix(width + 1);
    for (int n = 1; n <= n_max; ++n) {
        const double* prev = &t.p[static_cast<std::size_t>(n - 1) * width];
        double* cur = &t.p[static_cast<std::size_t>(n) * width];
        prefix[0] = 0.0;
        for (int i = 0; i < width; ++i) prefix[i + 1] = prefix[i] + prev[i];
        for (int i = 0; i < width; ++i) {
            const int lo = std::max(0, i - W), hi = std::min(width - 1, i + W);
            cur[i] = (prefix[hi + 1] - prefix[lo] - prev[i]) / (2.0 * W);
        }
    }
    return t;
}

}  // namespace

std::complex<double> loop_lattice_sum(int W, std::complex<double> g, const KernelParams& params) {
    const int n_cap = phi_cutoff_index(params, params.epsilon, 1e-17);
    const auto phi = phi_on_lattice(params, params.epsilon, n_cap);
    const auto t = walk_table(W, n_cap);
    cplx s = 0.0, gn = 1.0;
    for (int n = 1; n <= n_cap; ++n) {
        gn *= g;
        s += phi[n] * gn * t.at(n, 0);
    }
    return s;
}

std::complex<double> emb_lattice_sum(const EmbQuery& query, int n_cap) {
    check_query(query);
    const MultiGraph& G = query.graph;
    require(G.V() <= 2, "lattice oracle supports V <= 2");
    if (n_cap <= 0) n_cap = phi_cutoff_index(query.params, query.params.epsilon, 1e-12);
    const auto phi = phi_on_lattice(query.params, query.params.epsilon, n_cap);
    const auto t = walk_table(query.W, n_cap);
    std::vector<cplx> gpow(n_cap + 1, 1.0);
    for (int n = 1; n <= n_cap; ++n) gpow[n] = gpow[n - 1] * query.g;

    auto term = [&](int R) {
        // Positions: vertex 0 at 0, vertex 1 at R.
        std::vector<cplx> conv(n_cap + 1, 0.0);
        conv[0] = 1.0;
        for (const auto& [u, v] : G.edges) {
            const int d = (v == 1 ? R : 0) - (u == 1 ? R : 0);
            std::vector<cplx> next(n_cap + 1, 0.0);
            for (int a = 0; a <= n_cap; ++a) {
                if (conv[a] == 0.0) continue;
                for (int n = 1; a + n <= n_cap; ++n) next[a + n] += conv[a] * gpow[n] * t.at(n, d);
            }
            conv.swap(next);
        }
        cplx s = 0.0;
        for (int N = 1; N <= n_cap; ++N) s += phi[N] * conv[N];
        return s;
    };
    if (G.V() == 1) return term(0);
    cplx s = 0.0;
    for (int R = -t.radius; R <= t.radius; ++R) s += term(R);
    return s;
}

EmbBound emb_bound_from_value(const EmbQuery& query, std::complex<double> value) {
    const int E = query.graph.E(), V = query.graph.V();
    const double W = query.W;
    const double pre = std::pow(1.0 / std::abs(1.0 - query.g), E + 1);
    EmbBound b;
    b.lhs = std::abs(value);
    b.shape = pre * std::pow(std::log(W) / W, E - V + 1);
    b.shape_no_log = pre * std::pow(1.0 / W, E - V + 1);
    return b;
}

EmbBound emb_bound_check(const EmbQuery& query) { return emb_bound_from_value(query, emb_sharp(query).value); }

CsvTable emb_ladder(const std::string& graph_id, const MultiGraph& graph, const std::vector<int>& W_list,
                    const std::vector<std::complex<double>>& g_list, const KernelParams& params, int workers) {
    CsvTable t;
    t.kind = "emb_ladder";
    t.columns = {"graph_id", "W", "g_real", "g_imag", "epsilon", "q", "emb_abs", "shape_factor", "ratio"};
    for (int W : W_list) {
        for (const auto& g : g_list) {
            EmbQuery q;
            q.graph = graph;
            q.g = g;
            q.params = params;
            q.W = W;
            q.workers = workers;
            const auto b = emb_bound_check(q);
            t.rows.push_back({graph_id, std::to_string(W), format_double(g.real()), format_double(g.imag()),
                              format_double(params.epsilon), std::to_string(params.q), format_double(b.lhs),
                              format_double(b.shape), format_double(b.ratio())});
        }
    }
    return t;
}

NonBacktrackingCheck nonbacktracking_check(int W, int n, int R) {
    require(W >= 1, "W must be >= 1");
    require(n >= 0, "n must be nonnegative");
    NonBacktrackingCheck c;
    if (n == 0) {
        c.by_count = c.by_chebyshev = R == 0 ? 1.0 : 0.0;
        return c;
    }
    const int radius = n * W;
    const int width = 2 * radius + 1, steps = 2 * W;
    auto step_value = [W](int s) { return s < W ? s - W : s - W + 1; };  // -W..-1, 1..W
    // ways[pos][s]: walks ending at pos whose last step is step_value(s).
    std::vector<double> ways(static_cast<std::size_t>(width) * steps, 0.0), next(ways.size());
    for (int s = 0; s < steps; ++s) ways[static_cast<std::size_t>(radius + step_value(s)) * steps + s] = 1.0;
    for (int k = 2; k <= n; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int pos = 0; pos < width; ++pos)
            for (int s = 0; s < steps; ++s) {
                const double x = ways[static_cast<std::size_t>(pos) * steps + s];
                if (x == 0.0) continue;
                for (int t = 0; t < steps; ++t) {
                    if (step_value(t) == -step_value(s)) continue;
                    const int np = pos + step_value(t);
                    if (np < 0 || np >= width) continue;
                    next[static_cast<std::size_t>(np) * steps + t] += x;
                }
            }
        ways.swap(next);
    }
    double count = 0.0;
    if (std::abs(R) <= radius)
        for (int s = 0; s < steps; ++s) count += ways[static_cast<std::size_t>(R + radius) * steps + s];
    c.by_count = count / (2.0 * W * std::pow(2.0 * W - 1.0, n - 1));

    // U recursion applied to delta_R on a window wide enough for n steps.
    const int rad = std::abs(R) + radius + W;
    const int len = 2 * rad + 1;
    const double a = 1.0 / (2.0 * std::sqrt(2.0 * W - 1.0));
    auto apply = [&](const std::vector<double>& x) {
        std::vector<double> y(len, 0.0);
        for (int i = 0; i < len; ++i)
            for (int d = 1; d <= W; ++d) {
                if (i - d >= 0) y[i] += a * x[i - d];
                if (i + d < len) y[i] += a * x[i + d];
            }
        return y;
    };
    std::vector<double> um2(len, 0.0), um1(len, 0.0), u(len, 0.0);
    um1[R + rad] = 1.0;  // U_0
    std::vector<double> hist_nm2 = um2;
    for (int k = 1; k <= n; ++k) {
        auto Au = apply(um1);
        for (int i = 0; i < len; ++i) u[i] = 2.0 * Au[i] - um2[i];
        um2.swap(um1);
        um1.swap(u);
        if (k == n - 2) hist_nm2 = um1;
    }
    if (n == 1) hist_nm2.assign(len, 0.0);  // U_{-1} = 0
    if (n == 2) {
        hist_nm2.assign(len, 0.0);
        hist_nm2[R + rad] = 1.0;  // U_0
    }
    const double unw = um1[rad] - hist_nm2[rad] / (2.0 * W - 1.0);
    c.by_chebyshev = unw / std::pow(2.0 * W - 1.0, 0.5 * n);
    return c;
}

}  // namespace bandspec
