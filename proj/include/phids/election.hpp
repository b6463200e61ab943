#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "phids/power.hpp"
#include "phids/topology.hpp"

namespace phids {

/// Threshold-filtered nodes sorted by PLANE descending, ties by ascending id.
struct PlaneOrderedList {
    std::vector<std::pair<NodeId, double>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

inline PlaneOrderedList build_pol(const std::map<NodeId, double>& plane_values, double threshold) {
    PlaneOrderedList pol;
    for (const auto& [node, value] : plane_values)
        if (value >= threshold) pol.entries.emplace_back(node, value);
    std::sort(pol.entries.begin(), pol.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return pol;
}

/// One monitor (root) and the nodes it watches. The id is assigned at
/// formation and survives later root swaps within the cluster.
struct Cluster {
    int id = -1;
    NodeId root = -1;
    std::set<NodeId> children;

    std::size_t size() const { return 1 + children.size(); }

    std::set<NodeId> members() const {
        std::set<NodeId> m = children;
        m.insert(root);
        return m;
    }
};

struct ElectionOutcome {
    std::vector<Cluster> clusters;  // sorted by id
    HopRadius hop_radius_used{1};
    int ws_expansions = 0;
    int nodes_touched = 0;

    std::set<NodeId> monitors() const {
        std::set<NodeId> m;
        for (const Cluster& c : clusters) m.insert(c.root);
        return m;
    }
};

/// Each node's chosen monitor: the working-set member within r hops with the
/// highest PLANE, ties by smaller hop distance then ascending id. Working-set
/// members vote for themselves. Unreachable nodes are absent from the map.
inline std::map<NodeId, NodeId> assign_votes(const Graph& g, const std::vector<NodeId>& ws,
                                             HopRadius r,
                                             const std::map<NodeId, double>& plane_values) {
    std::set<NodeId> ws_set(ws.begin(), ws.end());
    // hop distances from every WS member, truncated at r
    std::map<NodeId, std::map<NodeId, int>> dist_from;
    for (NodeId m : ws) dist_from[m] = hop_distances_from(g, m);

    std::map<NodeId, NodeId> votes;
    for (NodeId n : g.nodes()) {
        if (ws_set.count(n)) {
            votes[n] = n;
            continue;
        }
        std::optional<NodeId> best;
        double best_plane = 0;
        int best_dist = 0;
        for (NodeId m : ws) {
            auto it = dist_from[m].find(n);
            if (it == dist_from[m].end() || it->second > r.r) continue;
            double p = plane_values.count(m) ? plane_values.at(m) : 0.0;
            bool better = !best || p > best_plane ||
                          (p == best_plane && it->second < best_dist) ||
                          (p == best_plane && it->second == best_dist && m < *best);
            if (better) {
                best = m;
                best_plane = p;
                best_dist = it->second;
            }
        }
        if (best) votes[n] = *best;
    }
    return votes;
}

namespace detail {

inline std::vector<Cluster> clusters_from_votes(const std::vector<NodeId>& ws,
                                                const std::map<NodeId, NodeId>& votes) {
    std::map<NodeId, Cluster> by_root;
    for (NodeId m : ws) {
        Cluster c;
        c.id = m;  // formation root doubles as the stable cluster id
        c.root = m;
        by_root[m] = c;
    }
    for (const auto& [node, monitor] : votes)
        if (node != monitor) by_root.at(monitor).children.insert(node);
    std::vector<Cluster> out;
    for (auto& [root, c] : by_root) out.push_back(std::move(c));
    return out;  // map order = ascending id
}

}  // namespace detail

/// Monitor election. Grows a working set down the POL, skipping candidates
/// that would not enlarge the covered node set, and accepts as soon as no
/// node or link is left unrepresented at the current radius. When the whole
/// POL is insufficient the radius is incremented, up to r_max.
inline ElectionOutcome elect_monitors(const Graph& g, const PlaneOrderedList& pol, HopRadius r0,
                                      std::optional<HopRadius> r_max = std::nullopt) {
    if (pol.empty()) throw no_feasible_selection("no node satisfies the PLANE threshold");
    for (const auto& [node, value] : pol.entries) g.require_node(node);

    int max_radius = r_max ? r_max->r : std::max(r0.r, diameter(g));
    if (max_radius < r0.r) throw phids_error("r_max must be >= r0");

    std::map<NodeId, double> plane_values;
    for (const auto& [node, value] : pol.entries) plane_values[node] = value;

    int expansions = 0;
    for (int radius = r0.r; radius <= max_radius; ++radius) {
        HopRadius r{radius};
        std::vector<NodeId> ws;
        std::set<NodeId> covered;
        for (const auto& [candidate, value] : pol.entries) {
            std::set<NodeId> with_candidate = ws.empty()
                ? covered_by(g, {candidate}, r)
                : [&] {
                      std::set<NodeId> s = covered;
                      for (NodeId m : covered_by(g, {candidate}, r)) s.insert(m);
                      return s;
                  }();
            if (with_candidate.size() <= covered.size()) continue;  // skip: no new nodes
            ws.push_back(candidate);
            covered = std::move(with_candidate);
            ++expansions;
            std::set<NodeId> monitors(ws.begin(), ws.end());
            if (coverage_gap(g, monitors, r).empty()) {
                ElectionOutcome out;
                out.hop_radius_used = r;
                out.ws_expansions = expansions;
                out.nodes_touched = static_cast<int>(g.node_count());
                out.clusters = detail::clusters_from_votes(ws, assign_votes(g, ws, r, plane_values));
                return out;
            }
        }
    }
    throw no_feasible_selection("coverage gaps remain at hop radius " +
                                std::to_string(max_radius));
}

/// Returned when no cluster member is competent to take the monitor role.
struct FullRerunRequired {
    int cluster_id = -1;
};

using ReelectResult = std::variant<Cluster, FullRerunRequired>;

/// Within-cluster re-election. If a child holds strictly more battery than
/// the root and still clears the PLANE threshold, it takes over and the old
/// root becomes a child. If nobody in the cluster clears the threshold the
/// caller must re-run the full election.
inline ReelectResult intra_cluster_reelect(const Cluster& c,
                                           const std::map<NodeId, BatteryState>& battery,
                                           double threshold) {
    auto state_of = [&](NodeId n) -> const BatteryState& {
        auto it = battery.find(n);
        if (it == battery.end()) throw unknown_node(n);
        return it->second;
    };

    bool any_competent = false;
    for (NodeId n : c.members())
        if (effective_plane(state_of(n)) >= threshold) any_competent = true;
    if (!any_competent) return FullRerunRequired{c.id};

    const double root_bpr = state_of(c.root).bpr;
    std::optional<NodeId> successor;
    for (NodeId child : c.children) {
        const BatteryState& b = state_of(child);
        if (b.bpr <= root_bpr) continue;
        if (effective_plane(b) < threshold) continue;
        if (!successor || b.bpr > state_of(*successor).bpr ||
            (b.bpr == state_of(*successor).bpr && child < *successor))
            successor = child;
    }
    if (!successor) return c;

    Cluster out = c;
    out.root = *successor;
    out.children.erase(*successor);
    out.children.insert(c.root);
    return out;
}

/// Baseline that always re-runs the election over the whole network.
/// Every node participates, so nodes_touched equals the network size.
inline ElectionOutcome spaid_full_rerun(const Graph& g,
                                        const std::map<NodeId, double>& plane_values,
                                        double threshold, HopRadius r0,
                                        std::optional<HopRadius> r_max = std::nullopt) {
    return elect_monitors(g, build_pol(plane_values, threshold), r0, r_max);
}

}  // namespace phids
