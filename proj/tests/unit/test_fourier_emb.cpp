#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bandspec/errors.hpp"
#include "bandspec/fourier_emb.hpp"

using namespace bandspec;
using std::numbers::pi;

namespace {

std::complex<double> loop_by_matrix_power(int W, std::complex<double> g, const KernelParams& p) {
    // P^n(0,0) for the walk with uniform steps in {-W..-1, 1..W}, by repeated
    // application on a window wide enough for every retained n.
    const int n_max = phi_cutoff_index(p, p.epsilon, 1e-17);
    const int R = n_max * W;
    std::vector<double> cur(2 * R + 1, 0.0), next(cur.size());
    cur[R] = 1.0;
    std::complex<double> sum = 0.0, gn = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int x = 0; x <= 2 * R; ++x) {
            if (cur[x] == 0.0) continue;
            for (int d = 1; d <= W; ++d) {
                if (x + d <= 2 * R) next[x + d] += cur[x] / (2.0 * W);
                if (x - d >= 0) next[x - d] += cur[x] / (2.0 * W);
            }
        }
        cur.swap(next);
        gn *= g;
        sum += phi_q(p, n * p.epsilon) * gn * cur[R];
    }
    return sum;
}

long nb_walks_brute(int W, int n, int R) {
    long count = 0;
    auto rec = [&](auto&& self, int at, int last, int left) -> void {
        if (left == 0) {
            count += at == R;
            return;
        }
        for (int d = -W; d <= W; ++d)
            if (d != 0 && d != -last) self(self, at + d, d, left - 1);
    };
    rec(rec, 0, 0, n);
    return count;
}

}  // namespace

TEST_CASE("w(xi) examples") {
    for (int W : {1, 5, 64}) CHECK(w_eval(W, 0.0) == doctest::Approx(1.0));
    for (double xi = 0.0; xi < 1.0; xi += 0.01) CHECK(w_eval(1, xi) == doctest::Approx(std::cos(2 * pi * xi)));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double xi = u(rng);
        CHECK(std::abs(w_eval(7, xi) - w_eval_sum(7, xi)) < 1e-12);
    }
}

TEST_CASE("w(xi) closed form and cosine sum agree everywhere tested") {
    double worst = 0.0;
    for (int W : {1, 2, 3, 16, 100, 256})
        for (int k = 0; k < 10000; ++k) {
            const double xi = k / 10000.0;
            worst = std::max(worst, std::abs(w_eval(W, xi) - w_eval_sum(W, xi)));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("empirical constant in the w(xi) decay bound") {
    std::vector<int> ladder;
    for (int W = 2; W <= 256; W *= 2) ladder.push_back(W);
    const double c = w_bound_constant(ladder);
    CHECK(c > 0.0);
    for (int W : ladder)
        for (int k = 1; k < 100000; k += 7) {
            const double xi = k / 100000.0;
            CHECK(std::abs(w_eval(W, xi)) <= 1.0 / (1.0 + c * W * std::min(xi, 1 - xi)) + 1e-15);
        }
    const std::vector<int> small{2, 4, 8};
    CHECK(w_bound_constant(small) >= c);
    std::vector<int> all;
    for (int W = 2; W <= 256; ++W) all.push_back(W);
    CHECK(w_bound_constant(all) > 0.0);
    // W = 1: |w(1/2)| = 1, so no positive constant exists.
    CHECK(w_bound_constant({1}) == 0.0);
    // Excluding W min(xi, 1 - xi) < 1 the constant is of order one.
    CHECK(w_bound_constant(all, 100000, 1.0) > 0.5);
}

TEST_CASE("Kirchhoff subspace") {
    const auto loop = kirchhoff_basis(MultiGraph::loop());
    CHECK(loop.dimension() == 1);
    CHECK(loop.basis[0] == std::vector<int>{1});
    const auto theta = kirchhoff_basis(MultiGraph::theta());
    CHECK(theta.dimension() == 2);
    CHECK(theta.satisfies_constraints(2));
    const auto tree = kirchhoff_basis(MultiGraph{3, {{0, 1}, {1, 2}}});
    CHECK(tree.dimension() == 0);
    CHECK_THROWS_AS(kirchhoff_basis(MultiGraph{3, {{0, 1}}}), InvalidArgument);
    const MultiGraph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 1}}};
    const auto s = kirchhoff_basis(k4);
    CHECK(s.dimension() == 3);
    CHECK(s.satisfies_constraints(4));
}

TEST_CASE("Kirchhoff dimension equals the genus of census diagrams") {
    const auto c = diagram_census(2, 8, PathKind::strengthened);
    for (const auto& [key, e] : c.entries) {
        const auto g = MultiGraph::from_diagram(e.diagram);
        const auto k = kirchhoff_basis(g);
        CHECK(k.dimension() == e.genus);
        CHECK(k.satisfies_constraints(g.V()));
    }
}

TEST_CASE("loop diagram: Fourier integral equals the lattice sum") {
    for (int q : {1, 2})
        for (double eps : {0.05, 0.2})
            for (double angle : {pi / 3, 2.0, -0.7})
                for (int W : {4, 8}) {
                    EmbQuery query;
                    query.graph = MultiGraph::loop();
                    query.params = KernelParams::make(q, eps);
                    query.g = std::polar(1.0, angle);
                    query.W = W;
                    const auto r = emb_sharp(query);
                    CHECK(r.dimension == 1);
                    const auto oracle = loop_by_matrix_power(W, query.g, query.params);
                    CHECK(std::abs(r.value - oracle) < 1e-6);
                    CHECK(std::abs(loop_lattice_sum(W, query.g, query.params) - oracle) < 1e-12);
                }
}

TEST_CASE("theta graph: 2-d Fourier integral equals the lattice sum") {
    EmbQuery query;
    query.graph = MultiGraph::theta();
    query.params = KernelParams::make(2, 0.2);
    query.W = 8;
    const auto r = emb_sharp(query);
    CHECK(r.dimension == 2);
    CHECK(std::abs(r.value - emb_lattice_sum(query)) < 1e-4);
    // Fixed cap n_e <= 40 gives the same value at this eps.
    CHECK(std::abs(r.value - emb_lattice_sum(query, 40)) < 1e-4);
}

TEST_CASE("emb_sharp is invariant under relabeling and reorientation") {
    EmbQuery a;
    a.params = KernelParams::make(2, 0.2);
    a.W = 4;
    a.graph = MultiGraph::theta();
    EmbQuery b = a;
    b.graph = MultiGraph{2, {{1, 0}, {0, 1}, {1, 0}}};
    CHECK(std::abs(emb_sharp(a).value - emb_sharp(b).value) < 1e-9);

    // Loop with a pendant-free handle: vertex 0 -- vertex 1 doubled, plus a loop at 1.
    EmbQuery c = a;
    c.graph = MultiGraph{2, {{0, 1}, {1, 1}, {1, 0}}};
    EmbQuery d = a;
    d.graph = MultiGraph{2, {{1, 1}, {0, 1}, {0, 1}}};
    const auto vc = emb_sharp(c).value;
    CHECK(std::abs(vc - emb_sharp(d).value) < 1e-9);
    CHECK(std::abs(vc - emb_lattice_sum(c)) < 1e-4);

    // Three vertices, genus 2: relabel 1 <-> 2.
    EmbQuery e = a;
    e.graph = MultiGraph{3, {{0, 1}, {1, 2}, {2, 0}, {1, 2}}};
    EmbQuery f = a;
    f.graph = MultiGraph{3, {{0, 2}, {2, 1}, {0, 1}, {1, 2}}};
    CHECK(std::abs(emb_sharp(e).value - emb_sharp(f).value) < 1e-9);
}

TEST_CASE("emb_sharp preconditions") {
    EmbQuery q;
    q.params = KernelParams::make(2, 0.2);
    q.graph = MultiGraph::loop();
    q.g = 1.0;
    CHECK_THROWS_AS(emb_sharp(q), InvalidArgument);
    q.g = 0.5;
    CHECK_THROWS_AS(emb_sharp(q), InvalidArgument);
    q.g = std::polar(1.0, 1.0);
    q.graph = MultiGraph{1, {{0, 0}, {0, 0}, {0, 0}}};
    CHECK_THROWS_AS(emb_sharp(q), InvalidArgument);
    q.graph = MultiGraph{3, {{0, 1}, {1, 2}, {2, 0}, {1, 2}}};
    CHECK_THROWS_AS(emb_lattice_sum(q), InvalidArgument);
}

TEST_CASE("loop ladder scales like 1/W") {
    const auto p = KernelParams::make(2, 0.05);
    std::vector<double> scaled;
    for (int W : {8, 16, 32, 64}) {
        EmbQuery q;
        q.graph = MultiGraph::loop();
        q.params = p;
        q.W = W;
        const auto b = emb_bound_check(q);
        scaled.push_back(b.ratio_no_log());
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo < 2.0);
}

TEST_CASE("theta ladder: ratio with the log factor stays bounded") {
    const auto p = KernelParams::make(2, 0.05);
    std::vector<double> ratio, ratio_no_log;
    for (int W : {8, 16, 32, 64}) {
        EmbQuery q;
        q.graph = MultiGraph::theta();
        q.params = p;
        q.W = W;
        const auto b = emb_bound_check(q);
        ratio.push_back(b.ratio());
        ratio_no_log.push_back(b.ratio_no_log());
    }
    // The log-including ratio must not grow along the ladder.
    for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] <= ratio[0]);
    MESSAGE("theta ratio without log: " << ratio_no_log[0] << " .. " << ratio_no_log.back());
}

TEST_CASE("growth as g approaches 1 is within (1/|1-g|)^(E+1)") {
    const auto p = KernelParams::make(2, 0.05);
    for (const auto& graph : {MultiGraph::loop(), MultiGraph::theta()}) {
        std::vector<double> normalised;
        for (double delta : {0.3, 0.1, 0.03}) {
            EmbQuery q;
            q.graph = graph;
            q.params = p;
            q.W = 16;
            q.g = std::polar(1.0, delta);
            const auto b = emb_bound_check(q);
            normalised.push_back(b.lhs * std::pow(std::abs(1.0 - q.g), graph.E() + 1));
        }
        CHECK(normalised[1] <= normalised[0]);
        CHECK(normalised[2] <= normalised[1]);
    }
}

TEST_CASE("ladder CSV") {
    const auto t = emb_ladder("loop", MultiGraph::loop(), {8, 16}, {std::polar(1.0, pi / 3), std::polar(1.0, 2.0)},
                              KernelParams::make(2, 0.05));
    CHECK(t.kind == "emb_ladder");
    CHECK(t.columns == std::vector<std::string>{"graph_id", "W", "g_real", "g_imag", "epsilon", "q", "emb_abs",
                                                "shape_factor", "ratio"});
    REQUIRE(t.rows.size() == 4u);
    for (std::size_t r = 0; r < 4; ++r)
        CHECK(t.number(r, "ratio") == doctest::Approx(t.number(r, "emb_abs") / t.number(r, "shape_factor")));
}

TEST_CASE("non-backtracking walk probabilities") {
    for (int W : {1, 2, 3})
        for (int n : {1, 2, 3, 4, 5})
            for (int R : {0, 1, 2, 4}) {
                const auto c = nonbacktracking_check(W, n, R);
                const double brute = nb_walks_brute(W, n, R) / (2.0 * W * std::pow(2.0 * W - 1, n - 1));
                CHECK(c.by_count == doctest::Approx(brute).epsilon(1e-13));
                // The Chebyshev form counts walks over (2W-1)^n; constant ratio 2W/(2W-1).
                if (brute > 0) CHECK(c.ratio() == doctest::Approx(2.0 * W / (2.0 * W - 1)).epsilon(1e-10));
                else CHECK(std::abs(c.by_chebyshev) < 1e-13);
            }
}
