#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phids/errors.hpp"

namespace phids {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;  // stored with first < second

/// Hop radius a monitor covers. Always >= 1.
struct HopRadius {
    int r = 1;
    explicit HopRadius(int radius) : r(radius) {
        if (radius < 1) throw phids_error("hop radius must be >= 1");
    }
};

/// Undirected graph over small non-negative node ids.
/// Immutable after construction; copies are cheap enough at desk scale.
class Graph {
public:
    Graph() = default;

    Graph(std::vector<NodeId> nodes, std::vector<Edge> edges) {
        for (NodeId n : nodes) add_node(n);
        for (const auto& [a, b] : edges) add_edge(a, b);
    }

    static Graph from_edges(std::vector<Edge> edges) { return Graph({}, std::move(edges)); }

    const std::set<NodeId>& nodes() const { return nodes_; }
    std::size_t node_count() const { return nodes_.size(); }

    bool has_node(NodeId n) const { return nodes_.count(n) != 0; }

    bool has_edge(NodeId a, NodeId b) const {
        auto it = adjacency_.find(a);
        return it != adjacency_.end() && it->second.count(b) != 0;
    }

    const std::set<NodeId>& neighbors_of(NodeId n) const {
        require_node(n);
        static const std::set<NodeId> empty;
        auto it = adjacency_.find(n);
        return it == adjacency_.end() ? empty : it->second;
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (const auto& [n, adj] : adjacency_)
            for (NodeId m : adj)
                if (n < m) out.emplace_back(n, m);
        return out;
    }

    /// New graph with one extra node and its links. Used for join events.
    Graph with_node(NodeId n, const std::vector<NodeId>& links) const {
        Graph g = *this;
        g.add_node(n);
        for (NodeId m : links) g.add_edge(n, m);
        return g;
    }

    void require_node(NodeId n) const {
        if (!has_node(n)) throw unknown_node(n);
    }

private:
    void add_node(NodeId n) {
        if (n < 0) throw phids_error("node ids must be non-negative, got " + std::to_string(n));
        nodes_.insert(n);
    }

    void add_edge(NodeId a, NodeId b) {
        if (a == b) throw phids_error("self-loop at node " + std::to_string(a));
        add_node(a);
        add_node(b);
        adjacency_[a].insert(b);
        adjacency_[b].insert(a);
    }

    std::set<NodeId> nodes_;
    std::map<NodeId, std::set<NodeId>> adjacency_;
};

/// BFS hop counts from a source; nodes absent from the result are unreachable.
inline std::map<NodeId, int> hop_distances_from(const Graph& g, NodeId src) {
    g.require_node(src);
    std::map<NodeId, int> dist;
    dist[src] = 0;
    std::queue<NodeId> frontier;
    frontier.push(src);
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop();
        for (NodeId nb : g.neighbors_of(cur)) {
            if (dist.count(nb)) continue;
            dist[nb] = dist[cur] + 1;
            frontier.push(nb);
        }
    }
    return dist;
}

/// Shortest-path hop count; nullopt when no path exists.
inline std::optional<int> hop_distance(const Graph& g, NodeId a, NodeId b) {
    g.require_node(a);
    g.require_node(b);
    if (a == b) return 0;
    auto dist = hop_distances_from(g, a);
    auto it = dist.find(b);
    if (it == dist.end()) return std::nullopt;
    return it->second;
}

/// All nodes within r hops of n, excluding n itself.
inline std::set<NodeId> neighborhood(const Graph& g, NodeId n, HopRadius r) {
    g.require_node(n);
    std::set<NodeId> out;
    for (const auto& [m, d] : hop_distances_from(g, n))
        if (d >= 1 && d <= r.r) out.insert(m);
    return out;
}

/// Largest finite hop distance over all node pairs (0 for <= 1 node).
inline int diameter(const Graph& g) {
    int best = 0;
    for (NodeId n : g.nodes())
        for (const auto& [m, d] : hop_distances_from(g, n)) best = std::max(best, d);
    return best;
}

struct CoverageGap {
    std::set<NodeId> uncovered_nodes;
    std::set<Edge> uncovered_edges;
    bool empty() const { return uncovered_nodes.empty() && uncovered_edges.empty(); }
};

/// Nodes within r hops of any monitor (monitors cover themselves).
inline std::set<NodeId> covered_by(const Graph& g, const std::set<NodeId>& monitors, HopRadius r) {
    for (NodeId m : monitors) g.require_node(m);
    // multi-source BFS to depth r
    std::set<NodeId> covered(monitors.begin(), monitors.end());
    std::queue<std::pair<NodeId, int>> frontier;
    for (NodeId m : monitors) frontier.emplace(m, 0);
    while (!frontier.empty()) {
        auto [cur, d] = frontier.front();
        frontier.pop();
        if (d == r.r) continue;
        for (NodeId nb : g.neighbors_of(cur)) {
            if (covered.count(nb)) continue;
            covered.insert(nb);
            frontier.emplace(nb, d + 1);
        }
    }
    return covered;
}

/// Nodes with no monitor within r hops, and edges neither endpoint of which
/// is covered. Empty/empty means the monitor set is acceptable.
inline CoverageGap coverage_gap(const Graph& g, const std::set<NodeId>& monitors, HopRadius r) {
    std::set<NodeId> covered = covered_by(g, monitors, r);
    CoverageGap gap;
    for (NodeId n : g.nodes())
        if (!covered.count(n)) gap.uncovered_nodes.insert(n);
    for (const Edge& e : g.edges())
        if (!covered.count(e.first) && !covered.count(e.second)) gap.uncovered_edges.insert(e);
    return gap;
}

/// Topology file: one edge per line as "a b", isolated nodes as "node a",
/// comments start with "#". Errors carry 1-based line numbers.
inline Graph parse_topology(std::istream& in) {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    bool saw_content = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) continue;
        saw_content = true;
        if (first == "node") {
            long id;
            std::string extra;
            if (!(fields >> id) || (fields >> extra))
                throw parse_error(lineno, "expected \"node <id>\"");
            if (id < 0) throw parse_error(lineno, "node ids must be non-negative");
            nodes.push_back(static_cast<NodeId>(id));
            continue;
        }
        long a, b;
        std::string extra;
        std::istringstream edge_fields(line);
        if (!(edge_fields >> a >> b) || (edge_fields >> extra))
            throw parse_error(lineno, "expected \"a b\" edge or \"node a\"");
        if (a < 0 || b < 0) throw parse_error(lineno, "node ids must be non-negative");
        if (a == b) throw parse_error(lineno, "self-loop not allowed");
        edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    if (!saw_content) throw parse_error(lineno == 0 ? 1 : lineno, "topology file is empty");
    return Graph(std::move(nodes), std::move(edges));
}

/// The 9-node network reconstructed from the worked election example.
inline Graph example9_topology() {
    return Graph::from_edges({{1, 3}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {4, 7}, {7, 8}, {7, 9}});
}

/// PLANE values of the worked example, node -> seconds.
inline std::map<NodeId, double> example9_plane_values() {
    return {{1, 5.5}, {2, 7.2}, {3, 9.0}, {4, 8.5}, {5, 5.0},
            {6, 4.1}, {7, 7.5}, {8, 5.7}, {9, 7.0}};
}

}  // namespace phids
