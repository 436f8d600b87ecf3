#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "bandspec/diagrams.hpp"
#include "bandspec/errors.hpp"

using namespace bandspec;

namespace {

LatticePath path_of(std::vector<int> v) { return LatticePath{std::move(v)}; }

long count_cycles_like(const Diagram& d) { return d.E() - d.V() + 1; }

}  // namespace

TEST_CASE("pairings of the doubled triangle are forced") {
    const auto p = path_of({0, 1, 2, 0, 1, 2, 0});
    const auto pairings = enumerate_pairings(p);
    REQUIRE(pairings.size() == 1u);
    const auto& partner = pairings[0].partner;
    for (int j = 0; j < 6; ++j) CHECK(partner[j] == (j + 3) % 6);
}

TEST_CASE("an edge passed four times has three pairings") {
    CHECK(enumerate_pairings(path_of({0, 1, 0, 1, 0})).size() == 3u);
    // Two independent quadruple edges: 3 * 3.
    CHECK(enumerate_pairings(path_of({0, 1, 0, 1, 0, 2, 0, 2, 0})).size() == 9u);
    // Multiplicity six: 5!! = 15.
    CHECK(enumerate_pairings(path_of({0, 1, 0, 1, 0, 1, 0})).size() == 15u);
}

TEST_CASE("pairing preconditions") {
    CHECK_THROWS_AS(enumerate_pairings(path_of({0, 1, 2, 0})), InvalidArgument);
    CHECK_THROWS_AS(enumerate_pairings(path_of({0, 1, 2})), InvalidArgument);
    const auto p = path_of({0, 1, 2, 0, 1, 2, 0});
    Pairing bad{{1, 0, 3, 2, 5, 4}};
    CHECK_THROWS_AS(contract(p, bad), InvalidArgument);
}

TEST_CASE("doubled triangle contracts to the single loop") {
    const auto p = path_of({0, 1, 2, 0, 1, 2, 0});
    const auto d = contract(p, enumerate_pairings(p)[0]);
    CHECK(d.V() == 1);
    CHECK(d.E() == 1);
    CHECK(genus(d) == 1);
    CHECK(is_simple(d));
    CHECK(d.key() == loop_diagram().key());
}

TEST_CASE("theta diagram") {
    const auto t = theta_diagram();
    CHECK(t.V() == 2);
    CHECK(t.E() == 3);
    CHECK(genus(t) == 2);
    CHECK_FALSE(is_simple(t));
    CHECK(contract(t).key() == t.key());
    CHECK(contract(t, MergeScan::decreasing).key() == t.key());
}

TEST_CASE("contraction is idempotent on the loop") {
    const auto l = loop_diagram();
    CHECK(contract(l).key() == l.key());
    CHECK(genus(l) == 1);
    CHECK(is_simple(l));
}

TEST_CASE("degree-4 unmarked vertex is not simple") {
    Diagram d;
    d.vertex_count = 2;
    d.edges = {{0, 1}, {1, 1}, {1, 0}};
    d.traversal = {{0, true}, {1, true}, {2, true}, {0, true}, {1, true}, {2, true}};
    d.validate();
    CHECK(d.degrees() == std::vector<int>{2, 4});
    CHECK_FALSE(is_simple(d));
}

TEST_CASE("validate rejects broken traversals") {
    Diagram d;
    d.vertex_count = 2;
    d.edges = {{0, 1}};
    d.traversal = {{0, true}};
    CHECK_THROWS(d.validate());
    d.traversal = {{0, true}, {0, true}};
    CHECK_THROWS(d.validate());
    d.traversal = {{0, true}, {0, false}};
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("census: every couple contracts to a valid diagram, one genus-1 class") {
    for (int W = 1; W <= 2; ++W) {
        const auto c = diagram_census(W, 8, PathKind::strengthened);
        std::set<std::string> genus1;
        for (const auto& [key, e] : c.entries) {
            CHECK_NOTHROW(e.diagram.validate());
            CHECK(e.genus >= 1);
            CHECK(e.genus == count_cycles_like(e.diagram));
            if (e.genus == 1) genus1.insert(e.graph_key);
            if (e.simple) {
                CHECK(e.diagram.E() == 3 * e.genus - 2);
                CHECK(e.diagram.V() == 2 * e.genus - 1);
            }
        }
        if (W == 2) CHECK(genus1.size() == 1u);
        CHECK(c.couples_seen >= c.paths_seen);
    }
}

TEST_CASE("census with plain closed paths shows the extra lollipop class") {
    const auto c = diagram_census(2, 8, PathKind::plain);
    std::set<std::string> genus1;
    bool lollipop = false;
    for (const auto& [key, e] : c.entries) {
        CHECK_NOTHROW(e.diagram.validate());
        if (e.genus != 1) continue;
        genus1.insert(e.graph_key);
        if (e.diagram.V() == 2 && e.diagram.E() == 2) lollipop = true;
    }
    CHECK(genus1.size() == 2u);
    CHECK(lollipop);
}

TEST_CASE("merge order does not change the contraction") {
    for (int n = 2; n <= 8; n += 2) {
        enumerate_paths(2, n, 0, 0, PathKind::plain, [](const LatticePath& p) {
            for (const auto& pairing : enumerate_pairings(p))
                CHECK(contract(p, pairing).key() == contract(p, pairing, MergeScan::decreasing).key());
        });
    }
}

TEST_CASE("contracting a contracted diagram is a no-op") {
    const auto c = diagram_census(2, 8, PathKind::strengthened);
    for (const auto& [key, e] : c.entries) CHECK(contract(e.diagram).key() == key);
}

TEST_CASE("canonical graph key ignores vertex labels") {
    Diagram a;
    a.vertex_count = 3;
    a.edges = {{0, 1}, {1, 2}, {2, 0}, {1, 2}};
    Diagram b;
    b.vertex_count = 3;
    b.edges = {{0, 2}, {2, 1}, {1, 0}, {2, 1}};
    CHECK(canonical_graph_key(a) == canonical_graph_key(b));
    Diagram c = a;
    c.edges = {{0, 1}, {1, 2}, {2, 0}, {0, 1}};
    CHECK(canonical_graph_key(a) != canonical_graph_key(c));
}

TEST_CASE("path order") {
    CHECK(path_order(path_of({0, 1, 2, 0, 1, 2, 0})) == 1);
    CHECK(path_order(path_of({0, 1, 0, 1, 0})) == 2);
}

TEST_CASE("census JSON export") {
    const auto c = diagram_census(2, 6, PathKind::strengthened);
    const auto j = to_json(c);
    CHECK(j["kind"] == "strengthened");
    REQUIRE(j["diagrams"].size() == c.entries.size());
    long total = 0;
    for (const auto& d : j["diagrams"]) {
        CHECK(d.contains("vertices"));
        CHECK(d.contains("edges"));
        CHECK(d.contains("genus"));
        CHECK(d.contains("simple"));
        total += d["multiplicity"].get<long>();
    }
    CHECK(total == c.couples_seen);
}
