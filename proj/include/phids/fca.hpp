#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "phids/errors.hpp"

namespace phids {

/// Fuzzy cell states live in [0, 1]; binary lattices use exactly {0, 1}.
using Configuration = std::vector<double>;

/// Supported per-cell rules: seven non-complemented, their complements, and
/// rule 254 which appears in hybrid vectors alongside them.
inline constexpr std::array<int, 15> kFcaRules = {0,   170, 204, 238, 240, 250, 252, 254,
                                                  255, 85,  51,  17,  15,  5,   3};

inline bool is_supported_rule(int rule) {
    return std::find(kFcaRules.begin(), kFcaRules.end(), rule) != kFcaRules.end();
}

/// Complement partner within the supported set (255 - rule).
inline int complement_rule(int rule) {
    if (!is_supported_rule(rule)) throw unknown_rule(rule);
    int comp = 255 - rule;
    if (!is_supported_rule(comp)) throw unknown_rule(comp);
    return comp;
}

/// Next state of one cell under fuzzy semantics: OR is the bounded sum
/// min(1, a+b), NOT is 1-x. Reduces to the Boolean table on {0, 1} inputs.
inline double apply_rule(int rule, double left, double self, double right) {
    auto fuzzy_or = [](double a, double b) { return std::min(1.0, a + b); };
    switch (rule) {
        case 0:   return 0.0;
        case 170: return right;
        case 204: return self;
        case 238: return fuzzy_or(self, right);
        case 240: return left;
        case 250: return fuzzy_or(left, right);
        case 252: return fuzzy_or(left, self);
        case 254: return fuzzy_or(left, fuzzy_or(self, right));
        case 255: return 1.0;
        case 85:  return 1.0 - right;
        case 51:  return 1.0 - self;
        case 17:  return 1.0 - fuzzy_or(self, right);
        case 15:  return 1.0 - left;
        case 5:   return 1.0 - fuzzy_or(left, right);
        case 3:   return 1.0 - fuzzy_or(left, self);
        default:  throw unknown_rule(rule);
    }
}

/// Which neighbourhood positions a rule actually reads.
struct RuleDependencies {
    bool left = false, self = false, right = false;
};

inline RuleDependencies rule_dependencies(int rule) {
    switch (rule) {
        case 0: case 255:   return {false, false, false};
        case 170: case 85:  return {false, false, true};
        case 204: case 51:  return {false, true, false};
        case 238: case 17:  return {false, true, true};
        case 240: case 15:  return {true, false, false};
        case 250: case 5:   return {true, false, true};
        case 252: case 3:   return {true, true, false};
        case 254:           return {true, true, true};
        default: throw unknown_rule(rule);
    }
}

/// Per-cell rule assignment for a null-boundary hybrid lattice.
struct FcaRuleVector {
    std::vector<int> rules;

    FcaRuleVector() = default;
    explicit FcaRuleVector(std::vector<int> rule_numbers) : rules(std::move(rule_numbers)) {
        if (rules.empty()) throw phids_error("rule vector must have at least one cell");
        for (int r : rules)
            if (!is_supported_rule(r)) throw unknown_rule(r);
    }

    std::size_t size() const { return rules.size(); }

    /// Comma-separated decimal rule numbers, e.g. "238,254,238,252".
    std::string to_string() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (i) out << ',';
            out << rules[i];
        }
        return out.str();
    }

    static FcaRuleVector parse(const std::string& text) {
        std::vector<int> rules;
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                rules.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw phids_error("bad rule number \"" + item + "\" in rule vector");
            }
        }
        return FcaRuleVector(std::move(rules));
    }
};

/// Synchronous lattice update with null boundary (reads 0 outside).
inline Configuration step(const Configuration& cfg, const FcaRuleVector& rules) {
    if (cfg.size() != rules.size())
        throw length_mismatch("configuration has " + std::to_string(cfg.size()) +
                              " cells but rule vector has " + std::to_string(rules.size()));
    Configuration next(cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        double left = i == 0 ? 0.0 : cfg[i - 1];
        double right = i + 1 == cfg.size() ? 0.0 : cfg[i + 1];
        next[i] = apply_rule(rules.rules[i], left, cfg[i], right);
    }
    return next;
}

/// 0/1 matrix; entry (i, j) = 1 iff cell i's rule reads cell j. Nonzero
/// entries of row i only appear in columns i-1, i, i+1 inside the lattice.
using DependencyMatrix = std::vector<std::vector<int>>;

inline DependencyMatrix dependency_matrix(const FcaRuleVector& rules) {
    std::size_t n = rules.size();
    DependencyMatrix t(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        RuleDependencies d = rule_dependencies(rules.rules[i]);
        if (d.left && i > 0) t[i][i - 1] = 1;
        if (d.self) t[i][i] = 1;
        if (d.right && i + 1 < n) t[i][i + 1] = 1;
    }
    return t;
}

// ---- binary lattice machinery ------------------------------------------

/// Encoded binary configuration: bit i holds cell i. Fits lattices up to 64.
using EncodedState = std::uint64_t;

inline EncodedState encode_binary(const Configuration& cfg) {
    if (cfg.size() > 64) throw too_large("binary encoding supports at most 64 cells");
    EncodedState s = 0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (cfg[i] != 0.0 && cfg[i] != 1.0)
            throw phids_error("configuration is not binary");
        if (cfg[i] == 1.0) s |= EncodedState{1} << i;
    }
    return s;
}

inline Configuration decode_binary(EncodedState s, std::size_t cells) {
    Configuration cfg(cells, 0.0);
    for (std::size_t i = 0; i < cells; ++i)
        if (s >> i & 1) cfg[i] = 1.0;
    return cfg;
}

/// Per-cell Boolean transition tables derived from apply_rule, indexed by
/// left*4 + self*2 + right. Makes repeated binary stepping cheap.
class CompiledRules {
public:
    explicit CompiledRules(const FcaRuleVector& rules) : cells_(rules.size()) {
        tables_.reserve(cells_);
        for (int rule : rules.rules) {
            std::array<std::uint8_t, 8> table{};
            for (int lsr = 0; lsr < 8; ++lsr) {
                double v = apply_rule(rule, (lsr >> 2) & 1, (lsr >> 1) & 1, lsr & 1);
                table[lsr] = v == 1.0 ? 1 : 0;
            }
            tables_.push_back(table);
        }
    }

    std::size_t cells() const { return cells_; }

    EncodedState step(EncodedState s) const {
        EncodedState next = 0;
        for (std::size_t i = 0; i < cells_; ++i) {
            int left = i == 0 ? 0 : static_cast<int>(s >> (i - 1) & 1);
            int self = static_cast<int>(s >> i & 1);
            int right = i + 1 == cells_ ? 0 : static_cast<int>(s >> (i + 1) & 1);
            if (tables_[i][left * 4 + self * 2 + right]) next |= EncodedState{1} << i;
        }
        return next;
    }

private:
    std::size_t cells_;
    std::vector<std::array<std::uint8_t, 8>> tables_;
};

/// Attractor cycle reached from a start state, via Brent cycle detection.
/// Returned cycle is rotated so the smallest state comes first; that state
/// is the basin's canonical identifier.
inline std::vector<EncodedState> attractor_of(EncodedState start, const CompiledRules& rules) {
    // find cycle length
    EncodedState tortoise = start;
    EncodedState hare = rules.step(start);
    std::uint64_t power = 1, lam = 1;
    while (tortoise != hare) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = rules.step(hare);
        ++lam;
    }
    // advance a probe lam steps, then walk both until they meet at cycle entry
    tortoise = start;
    hare = start;
    for (std::uint64_t i = 0; i < lam; ++i) hare = rules.step(hare);
    while (tortoise != hare) {
        tortoise = rules.step(tortoise);
        hare = rules.step(hare);
    }
    std::vector<EncodedState> cycle;
    EncodedState s = tortoise;
    do {
        cycle.push_back(s);
        s = rules.step(s);
    } while (s != tortoise);
    auto min_it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), min_it, cycle.end());
    return cycle;
}

inline EncodedState attractor_key(EncodedState start, const CompiledRules& rules) {
    return attractor_of(start, rules).front();
}

// ---- exhaustive basin analysis -----------------------------------------

inline constexpr std::size_t kBasinEnumerationLimit = 16;

/// Partition of the full binary state space into attractor basins. rq
/// starts at 0 for every basin and is filled in by training.
struct BasinPartition {
    struct Basin {
        std::vector<EncodedState> cycle;    // smallest state first
        std::vector<EncodedState> members;  // ascending; includes the cycle
        double rq = 0.0;
    };

    std::size_t cell_count = 0;
    std::vector<Basin> basins;  // ordered by smallest cycle state

    std::size_t basin_index_of(EncodedState s) const {
        for (std::size_t i = 0; i < basins.size(); ++i)
            if (std::binary_search(basins[i].members.begin(), basins[i].members.end(), s))
                return i;
        throw phids_error("state outside enumerated space");
    }
};

/// Enumerates all 2^n binary configurations and groups them by the attractor
/// cycle they fall into. n is capped because the space doubles per cell.
inline BasinPartition basins(const FcaRuleVector& rules, std::size_t n,
                             std::size_t limit = kBasinEnumerationLimit) {
    if (rules.size() != n)
        throw length_mismatch("rule vector has " + std::to_string(rules.size()) +
                              " cells, expected " + std::to_string(n));
    if (n > limit)
        throw too_large("basin enumeration limited to " + std::to_string(limit) + " cells");

    CompiledRules compiled(rules);
    const std::size_t space = std::size_t{1} << n;
    std::vector<EncodedState> next(space);
    for (std::size_t s = 0; s < space; ++s) next[s] = compiled.step(s);

    std::vector<int> basin_of(space, -1);
    std::vector<int> on_path(space, -1);
    std::vector<std::vector<EncodedState>> cycles;
    std::vector<EncodedState> path;
    for (std::size_t s0 = 0; s0 < space; ++s0) {
        if (basin_of[s0] != -1) continue;
        path.clear();
        EncodedState s = s0;
        while (basin_of[s] == -1 && on_path[s] == -1) {
            on_path[s] = static_cast<int>(path.size());
            path.push_back(s);
            s = next[s];
        }
        int bid;
        if (basin_of[s] != -1) {
            bid = basin_of[s];
        } else {
            // closed a new cycle; states from its first visit onward form it
            bid = static_cast<int>(cycles.size());
            cycles.emplace_back(path.begin() + on_path[s], path.end());
        }
        for (EncodedState t : path) {
            basin_of[t] = bid;
            on_path[t] = -1;
        }
    }

    // canonical order: by smallest state in the cycle
    std::vector<int> order(cycles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto cycle_min = [&](int i) { return *std::min_element(cycles[i].begin(), cycles[i].end()); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return cycle_min(a) < cycle_min(b); });
    std::vector<int> rank(cycles.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    BasinPartition part;
    part.cell_count = n;
    part.basins.resize(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        auto& cycle = cycles[order[i]];
        auto min_it = std::min_element(cycle.begin(), cycle.end());
        std::rotate(cycle.begin(), min_it, cycle.end());
        part.basins[i].cycle = std::move(cycle);
    }
    for (std::size_t s = 0; s < space; ++s)
        part.basins[rank[basin_of[s]]].members.push_back(s);
    return part;
}

// ---- training-time basin statistics --------------------------------------

/// Occupancy of one attractor basin observed while distributing training
/// vectors, and the malicious index computed from it.
struct BasinStats {
    EncodedState attractor = 0;       // canonical (smallest) cycle state
    std::vector<EncodedState> cycle;  // full attractor cycle
    std::size_t total = 0;
    std::size_t intrusion = 0;
    double rq = 0.0;                  // intrusion fraction; 0 for empty basins
};

/// Basins reached by a training set plus the inverted-tree leaf ordering:
/// the most class-pure basins (largest |rq - 0.5|) come first, i.e. sit at
/// the bottom leaves.
struct CaTree {
    std::map<EncodedState, BasinStats> basins;
    std::vector<EncodedState> leaf_order;
};

/// Distributes labeled binary states into the CA's basins and computes the
/// per-basin malicious index. Requires the CA to resolve at least k basins:
/// checked exactly when the lattice is small enough to enumerate, otherwise
/// against the basins actually reached.
inline CaTree ca_tree_build(const std::vector<std::pair<EncodedState, bool>>& labeled_states,
                            std::size_t k, const FcaRuleVector& rules) {
    if (labeled_states.empty()) throw empty_input("no training states");
    CompiledRules compiled(rules);

    CaTree tree;
    for (const auto& [state, is_intrusion] : labeled_states) {
        std::vector<EncodedState> cycle = attractor_of(state, compiled);
        BasinStats& stats = tree.basins[cycle.front()];
        if (stats.total == 0) {
            stats.attractor = cycle.front();
            stats.cycle = std::move(cycle);
        }
        ++stats.total;
        if (is_intrusion) ++stats.intrusion;
    }
    for (auto& [key, stats] : tree.basins)
        stats.rq = static_cast<double>(stats.intrusion) / static_cast<double>(stats.total);

    std::size_t capacity;
    if (rules.size() <= kBasinEnumerationLimit)
        capacity = basins(rules, rules.size()).basins.size();
    else
        capacity = tree.basins.size();
    if (capacity < k)
        throw resolution_error("CA resolves " + std::to_string(capacity) +
                               " basins, need at least " + std::to_string(k));

    for (const auto& [key, stats] : tree.basins) tree.leaf_order.push_back(key);
    std::sort(tree.leaf_order.begin(), tree.leaf_order.end(),
              [&](EncodedState a, EncodedState b) {
                  double pa = std::abs(tree.basins.at(a).rq - 0.5);
                  double pb = std::abs(tree.basins.at(b).rq - 0.5);
                  if (pa != pb) return pa > pb;
                  return a < b;
              });
    return tree;
}

}  // namespace phids
