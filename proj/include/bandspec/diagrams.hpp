#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bandspec/path_oracle.hpp"

namespace bandspec {

/// Fixed-point-free involution on the steps 0..L-1 of a closed path; paired
/// steps traverse the same lattice edge.
struct Pairing {
    std::vector<int> partner;
};

/// One pass of the traversal along an edge. `forward` means from
/// edges[edge].first to edges[edge].second.
struct TraversalStep {
    int edge = 0;
    bool forward = true;
    bool operator==(const TraversalStep&) const = default;
};

/// Multigraph with marked vertex 0 and a closed traversal starting at the
/// marked vertex that passes every edge exactly twice. Loops are edges with
/// equal endpoints. Stored in canonical form: vertices and edges are numbered
/// by first appearance along the traversal, each edge oriented along its first pass.
struct Diagram {
    int vertex_count = 1;
    std::vector<std::pair<int, int>> edges;
    std::vector<TraversalStep> traversal;
    int order = 1;

    int V() const { return vertex_count; }
    int E() const { return static_cast<int>(edges.size()); }
    std::vector<int> degrees() const;
    /// Identifies the (graph, traversal) class.
    std::string key() const;
    /// Throws std::logic_error unless the traversal is closed, starts at the
    /// marked vertex and passes each edge exactly twice.
    void validate() const;
};

/// All pairings of a closed path whose edges all have even multiplicity.
/// An edge passed 2k times contributes (2k-1)!! choices.
std::vector<Pairing> enumerate_pairings(const LatticePath& path);

enum class MergeScan { increasing, decreasing };

/// Repeatedly merges consecutive steps j, j+1 whose partners are consecutive
/// (with matching orientation) and whose shared vertex is not the marked one.
/// `scan` only selects which merge is applied first; the result is the same.
Diagram contract(const LatticePath& path, const Pairing& pairing, MergeScan scan = MergeScan::increasing);

/// Contract the diagram's own traversal; a no-op on contracted diagrams.
Diagram contract(const Diagram& d, MergeScan scan = MergeScan::increasing);

int genus(const Diagram& d);

/// deg(v0) == 2 and every other vertex has degree 3. Only meaningful for order 1.
bool is_simple(const Diagram& d);

/// Canonical form of the multigraph with the marked vertex fixed, ignoring the
/// traversal. Brute force over relabelings of the unmarked vertices (V <= 9).
std::string canonical_graph_key(const Diagram& d);

/// Highest edge multiplicity of the path divided by two.
int path_order(const LatticePath& path);

struct CensusEntry {
    Diagram diagram;
    std::string graph_key;
    int genus = 0;
    bool simple = false;
    long multiplicity = 0;  // number of (path, pairing) couples mapped here
};

struct DiagramCensus {
    int W = 1;
    int max_length = 0;
    PathKind kind = PathKind::strengthened;
    long paths_seen = 0;
    long couples_seen = 0;
    std::map<std::string, CensusEntry> entries;  // keyed by Diagram::key()
};

/// Contracts every (path, pairing) couple for closed paths at 0 of even
/// length 2..max_length and tallies the resulting diagram classes.
DiagramCensus diagram_census(int W, int max_length, PathKind kind, const EnumerationCap& cap = {});

/// JSON with one record per class: vertices, edges, genus, simple, order, multiplicity.
nlohmann::json to_json(const DiagramCensus& census);

/// The single-loop diagram and the theta diagram (two vertices joined by three
/// edges, traversal a->b->a->b->a->b->a style), handy as fixtures.
Diagram loop_diagram();
Diagram theta_diagram();

}  // namespace bandspec
