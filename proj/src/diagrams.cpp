#include "bandspec/diagrams.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bandspec/errors.hpp"

namespace bandspec {

namespace {

// A pass along an abstract edge `pair`; fwd is relative to an arbitrary
// reference orientation of that edge.
struct Seg {
    int pair;
    bool fwd;
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::array<int, 2>> pair_positions(const std::vector<Seg>& segs) {
    int pairs = 0;
    for (const auto& s : segs) pairs = std::max(pairs, s.pair + 1);
    std::vector<std::array<int, 2>> pos(pairs, {-1, -1});
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
        auto& slot = pos[segs[i].pair];
        if (slot[0] < 0)
            slot[0] = i;
        else if (slot[1] < 0)
            slot[1] = i;
        else
            throw std::logic_error("edge passed more than twice in a paired traversal");
    }
    return pos;
}

int other(const std::array<int, 2>& p, int i) { return p[0] == i ? p[1] : p[0]; }

// Applies one admissible merge if any exists; returns false when none applies.
bool merge_once(std::vector<Seg>& segs, MergeScan scan) {
    const int len = static_cast<int>(segs.size());
    if (len < 4) return false;
    const auto pos = pair_positions(segs);
    for (int step = 0; step < len - 1; ++step) {
        const int a = (scan == MergeScan::increasing) ? step : len - 2 - step;
        const int b = a + 1;
        if (segs[a].pair == segs[b].pair) continue;
        const int p = other(pos[segs[a].pair], a);
        const int q = other(pos[segs[b].pair], b);
        const bool same_a = segs[a].fwd == segs[p].fwd;
        const bool same_b = segs[b].fwd == segs[q].fwd;
        int lo_counterpart;
        if (same_a && same_b && q == p + 1)
            lo_counterpart = p;  // counterpart runs p, p+1 in the same direction
        else if (!same_a && !same_b && q == p - 1)
            lo_counterpart = q;  // counterpart runs p-1, p backwards
        else
            continue;
        const int id = segs[a].pair;
        segs[a] = Seg{id, true};
        segs[lo_counterpart] = Seg{id, same_a};
        const int hi1 = std::max(b, lo_counterpart + 1);
        const int hi2 = std::min(b, lo_counterpart + 1);
        segs.erase(segs.begin() + hi1);
        segs.erase(segs.begin() + hi2);
        return true;
    }
    return false;
}

// Builds the canonical diagram from a contracted traversal: traversal times
// 0..len-1 (time len == time 0) are identified through the pairing.
Diagram build_diagram(const std::vector<Seg>& segs, int order) {
    const int len = static_cast<int>(segs.size());
    const auto pos = pair_positions(segs);
    UnionFind uf(len);
    auto t = [len](int i) { return i % len; };
    for (const auto& pp : pos) {
        if (pp[0] < 0) continue;
        const int i = pp[0], j = pp[1];
        if (segs[i].fwd == segs[j].fwd) {
            uf.unite(t(i), t(j));
            uf.unite(t(i + 1), t(j + 1));
        } else {
            uf.unite(t(i), t(j + 1));
            uf.unite(t(i + 1), t(j));
        }
    }

    // Walk the traversal, numbering vertices and edges by first appearance.
    std::vector<int> vlabel(len, -1), elabel(pos.size(), -1);
    std::vector<bool> eref(pos.size(), true);  // reference fwd flag of the first pass
    Diagram d;
    d.order = order;
    int nv = 0;
    vlabel[uf.find(0)] = nv++;
    for (int i = 0; i < len; ++i) {
        const int from = uf.find(t(i));
        const int to = uf.find(t(i + 1));
        if (vlabel[to] < 0) vlabel[to] = nv++;
        const int pair = segs[i].pair;
        if (elabel[pair] < 0) {
            elabel[pair] = static_cast<int>(d.edges.size());
            eref[pair] = segs[i].fwd;
            d.edges.emplace_back(vlabel[from], vlabel[to]);
        }
        d.traversal.push_back(TraversalStep{elabel[pair], segs[i].fwd == eref[pair]});
    }
    d.vertex_count = nv;
    d.validate();
    return d;
}

std::vector<Seg> segments_of(const Diagram& d) {
    std::vector<Seg> segs;
    segs.reserve(d.traversal.size());
    for (const auto& s : d.traversal) segs.push_back(Seg{s.edge, s.forward});
    return segs;
}

void check_closed(const LatticePath& path) {
    require(path.length() >= 1, "path must have at least one step");
    require(path.vertices.front() == path.vertices.back(), "path must be closed");
}

std::pair<int, int> edge_of(const LatticePath& path, int j) {
    const int a = path.vertices[j], b = path.vertices[j + 1];
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

std::vector<int> Diagram::degrees() const {
    std::vector<int> deg(vertex_count, 0);
    for (const auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

std::string Diagram::key() const {
    std::string k = "V" + std::to_string(vertex_count) + ":";
    for (const auto& [a, b] : edges) k += std::to_string(a) + "-" + std::to_string(b) + ",";
    k += ":";
    for (const auto& s : traversal) k += std::to_string(s.edge) + (s.forward ? "+" : "-");
    return k;
}

void Diagram::validate() const {
    std::vector<int> passes(edges.size(), 0);
    int at = 0;
    for (const auto& s : traversal) {
        if (s.edge < 0 || s.edge >= E()) throw std::logic_error("traversal names a missing edge");
        const auto [a, b] = edges[s.edge];
        const int from = s.forward ? a : b;
        const int to = s.forward ? b : a;
        if (from != at) throw std::logic_error("traversal is not a walk");
        at = to;
        ++passes[s.edge];
    }
    if (at != 0) throw std::logic_error("traversal does not return to the marked vertex");
    for (int c : passes)
        if (c != 2) throw std::logic_error("traversal must pass every edge exactly twice");
}

int path_order(const LatticePath& path) {
    std::map<std::pair<int, int>, int> mult;
    int best = 0;
    for (int j = 0; j < path.length(); ++j) best = std::max(best, ++mult[edge_of(path, j)]);
    return best / 2;
}

std::vector<Pairing> enumerate_pairings(const LatticePath& path) {
    check_closed(path);
    const int L = path.length();
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (int j = 0; j < L; ++j) groups[edge_of(path, j)].push_back(j);
    for (const auto& [e, steps] : groups)
        if (steps.size() % 2 != 0)
            throw InvalidArgument("edge {" + std::to_string(e.first) + "," + std::to_string(e.second) +
                                  "} has odd multiplicity");

    std::vector<std::vector<int>> group_list;
    for (auto& [e, steps] : groups) group_list.push_back(steps);

    std::vector<Pairing> out;
    Pairing cur{std::vector<int>(L, -1)};
    // Recursive perfect matchings, group by group.
    auto rec = [&](auto&& self, std::size_t g) -> void {
        if (g == group_list.size()) {
            out.push_back(cur);
            return;
        }
        const auto& steps = group_list[g];
        auto first_free = std::find_if(steps.begin(), steps.end(), [&](int s) { return cur.partner[s] < 0; });
        if (first_free == steps.end()) {
            self(self, g + 1);
            return;
        }
        const int a = *first_free;
        for (auto it = first_free + 1; it != steps.end(); ++it) {
            if (cur.partner[*it] >= 0) continue;
            cur.partner[a] = *it;
            cur.partner[*it] = a;
            self(self, g);
            cur.partner[a] = cur.partner[*it] = -1;
        }
    };
    rec(rec, 0);
    return out;
}

Diagram contract(const LatticePath& path, const Pairing& pairing, MergeScan scan) {
    check_closed(path);
    const int L = path.length();
    require(static_cast<int>(pairing.partner.size()) == L, "pairing size must equal the path length");
    std::vector<Seg> segs(L);
    std::vector<int> pair_id(L, -1);
    int next_id = 0;
    for (int j = 0; j < L; ++j) {
        const int p = pairing.partner[j];
        require(p >= 0 && p < L && p != j && pairing.partner[p] == j, "pairing must be a fixed-point-free involution");
        require(edge_of(path, j) == edge_of(path, p), "paired steps must traverse the same edge");
        if (pair_id[j] < 0) pair_id[j] = pair_id[p] = next_id++;
        const int ref = std::min(j, p);
        segs[j] = Seg{pair_id[j], path.vertices[j] == path.vertices[ref]};
    }
    while (merge_once(segs, scan)) {
    }
    return build_diagram(segs, path_order(path));
}

Diagram contract(const Diagram& d, MergeScan scan) {
    auto segs = segments_of(d);
    while (merge_once(segs, scan)) {
    }
    return build_diagram(segs, d.order);
}

int genus(const Diagram& d) { return d.E() - d.V() + 1; }

bool is_simple(const Diagram& d) {
    const auto deg = d.degrees();
    if (deg[0] != 2) return false;
    return std::all_of(deg.begin() + 1, deg.end(), [](int x) { return x == 3; });
}

std::string canonical_graph_key(const Diagram& d) {
    require(d.V() <= 9, "canonical_graph_key: brute force limited to V <= 9");
    std::vector<int> perm(d.V());
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::vector<std::pair<int, int>> e;
        for (const auto& [a, b] : d.edges) {
            const int x = perm[a], y = perm[b];
            e.emplace_back(std::min(x, y), std::max(x, y));
        }
        std::sort(e.begin(), e.end());
        std::string k = "V" + std::to_string(d.V()) + ":";
        for (const auto& [a, b] : e) k += std::to_string(a) + "-" + std::to_string(b) + ",";
        if (best.empty() || k < best) best = k;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

DiagramCensus diagram_census(int W, int max_length, PathKind kind, const EnumerationCap& cap) {
    DiagramCensus c;
    c.W = W;
    c.max_length = max_length;
    c.kind = kind;
    for (int L = 2; L <= max_length; L += 2) {
        enumerate_paths(
            W, L, 0, 0, kind,
            [&](const LatticePath& path) {
                ++c.paths_seen;
                for (const auto& pairing : enumerate_pairings(path)) {
                    ++c.couples_seen;
                    Diagram d = contract(path, pairing);
                    auto [it, inserted] = c.entries.try_emplace(d.key());
                    if (inserted) {
                        it->second.graph_key = canonical_graph_key(d);
                        it->second.genus = genus(d);
                        it->second.simple = d.order == 1 && is_simple(d);
                        it->second.diagram = std::move(d);
                    }
                    ++it->second.multiplicity;
                }
            },
            cap);
    }
    return c;
}

nlohmann::json to_json(const DiagramCensus& census) {
    nlohmann::json out;
    out["W"] = census.W;
    out["max_length"] = census.max_length;
    out["kind"] = census.kind == PathKind::plain ? "plain" : "strengthened";
    out["paths_seen"] = census.paths_seen;
    out["couples_seen"] = census.couples_seen;
    auto& list = out["diagrams"] = nlohmann::json::array();
    for (const auto& [key, e] : census.entries) {
        list.push_back({{"key", key},
                        {"graph_key", e.graph_key},
                        {"vertices", e.diagram.V()},
                        {"edges", e.diagram.E()},
                        {"genus", e.genus},
                        {"simple", e.simple},
                        {"order", e.diagram.order},
                        {"multiplicity", e.multiplicity}});
    }
    return out;
}

Diagram loop_diagram() {
    Diagram d;
    d.vertex_count = 1;
    d.edges = {{0, 0}};
    d.traversal = {{0, true}, {0, true}};
    d.validate();
    return d;
}

Diagram theta_diagram() {
    Diagram d;
    d.vertex_count = 2;
    d.edges = {{0, 1}, {1, 0}, {0, 1}};
    d.traversal = {{0, true}, {1, true}, {2, true}, {0, false}, {1, false}, {2, false}};
    d.validate();
    return d;
}

}  // namespace bandspec
