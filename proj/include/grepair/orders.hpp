/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_ORDERS_HPP
#define GREPAIR_ORDERS_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <tuple>
#include <vector>

#include "hypergraph.hpp"

namespace grepair {

/*
 * Node orderings. The compressor's digram counting visits nodes in id order,
 * so renumbering nodes changes which occurrences pair up; these orders try to
 * place structurally similar nodes near each other.
 */

struct NodeOrder {
    std::vector<NodeId> perm;  // old id -> new id, 1-based
    std::uint32_t class_count = 0;  // structural color classes (fixpoint order)
    std::uint32_t rounds = 0;       // refinement rounds run (fixpoint order)
};

inline NodeOrder natural_order(const Hypergraph& g) {
    NodeOrder o;
    o.perm.resize(g.node_count + 1);
    for (NodeId v = 0; v <= g.node_count; ++v) o.perm[v] = v;
    o.class_count = g.node_count;
    return o;
}

/*
 * BFS order: per weakly-connected component, start from the minimum-degree
 * node (smallest id on ties), assign breadth scores 1, 2, 3, ... by depth,
 * then renumber all nodes globally by (score, id).
 */
inline NodeOrder bfs_order(const Hypergraph& g) {
    auto inc = g.incidence();
    std::vector<std::uint32_t> degree(g.node_count + 1, 0);
    for (NodeId v = 1; v <= g.node_count; ++v)
        degree[v] = static_cast<std::uint32_t>(inc[v].size());

    std::vector<std::uint32_t> score(g.node_count + 1, 0);
    std::vector<char> visited(g.node_count + 1, 0);
    for (;;) {
        NodeId root = 0;
        for (NodeId v = 1; v <= g.node_count; ++v)
            if (!visited[v] && (root == 0 || degree[v] < degree[root])) root = v;
        if (root == 0) break;
        std::deque<NodeId> queue{root};
        visited[root] = 1;
        score[root] = 1;
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            for (EdgeId ei : inc[v])
                for (NodeId w : g.edges[ei].att)
                    if (!visited[w]) {
                        visited[w] = 1;
                        score[w] = score[v] + 1;
                        queue.push_back(w);
                    }
        }
    }

    std::vector<NodeId> by_score(g.node_count);
    for (NodeId v = 1; v <= g.node_count; ++v) by_score[v - 1] = v;
    std::stable_sort(by_score.begin(), by_score.end(), [&](NodeId a, NodeId b) {
        if (score[a] != score[b]) return score[a] < score[b];
        return a < b;
    });
    NodeOrder o;
    o.perm.assign(g.node_count + 1, 0);
    for (NodeId i = 0; i < g.node_count; ++i) o.perm[by_score[i]] = i + 1;
    o.class_count = g.node_count;
    return o;
}

/*
 * Fixpoint (color-refinement) order. Initial colors are dense degree ranks;
 * a round recolors every node by the tuple (own color, sorted multiset of
 * neighbor entries), where a neighbor entry is (position of v in the edge,
 * position of w, label kind, label id, color of w) — a labeled-hypergraph
 * generalization of (direction, label, neighbor color). Rounds repeat until
 * the partition is stable or max_rounds is hit; nodes are then renumbered by
 * (color, id). max_rounds = 0 yields the plain degree order.
 */
inline NodeOrder fp_order(const Hypergraph& g,
                          std::uint32_t max_rounds = 0xffffffffu) {
    auto inc = g.incidence();
    std::vector<std::uint32_t> color(g.node_count + 1, 0);
    {
        std::vector<std::uint32_t> degrees;
        for (NodeId v = 1; v <= g.node_count; ++v)
            degrees.push_back(static_cast<std::uint32_t>(inc[v].size()));
        std::vector<std::uint32_t> sorted = degrees;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (NodeId v = 1; v <= g.node_count; ++v)
            color[v] = static_cast<std::uint32_t>(
                           std::lower_bound(sorted.begin(), sorted.end(), degrees[v - 1]) -
                           sorted.begin()) +
                       1;
    }
    auto class_count = [&]() {
        std::set<std::uint32_t> s(color.begin() + 1, color.end());
        return static_cast<std::uint32_t>(s.size());
    };

    using Entry = std::tuple<std::uint32_t, std::uint32_t, std::uint8_t, std::uint32_t,
                             std::uint32_t>;
    std::uint32_t rounds = 0;
    std::uint32_t classes = g.node_count ? class_count() : 0;
    while (rounds < max_rounds && classes < g.node_count) {
        std::vector<std::pair<std::uint32_t, std::vector<Entry>>> sig(g.node_count + 1);
        for (NodeId v = 1; v <= g.node_count; ++v) {
            sig[v].first = color[v];
            for (EdgeId ei : inc[v]) {
                const Edge& e = g.edges[ei];
                std::uint32_t pos_v = 0;
                for (std::uint32_t j = 0; j < e.att.size(); ++j)
                    if (e.att[j] == v) pos_v = j + 1;
                for (std::uint32_t j = 0; j < e.att.size(); ++j) {
                    NodeId w = e.att[j];
                    if (w == v) continue;
                    sig[v].second.push_back({pos_v, j + 1,
                                             static_cast<std::uint8_t>(e.label.kind),
                                             e.label.id, color[w]});
                }
            }
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        std::map<std::pair<std::uint32_t, std::vector<Entry>>, std::uint32_t> rank;
        for (NodeId v = 1; v <= g.node_count; ++v) rank[sig[v]] = 0;
        std::uint32_t next = 0;
        for (auto& [k, r] : rank) r = ++next;  // dense ranks, lexicographic
        for (NodeId v = 1; v <= g.node_count; ++v) color[v] = rank[sig[v]];
        ++rounds;
        // refinement only splits classes: equal counts means a stable partition
        if (next == classes) break;
        classes = next;
    }

    std::vector<NodeId> order(g.node_count);
    for (NodeId v = 1; v <= g.node_count; ++v) order[v - 1] = v;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (color[a] != color[b]) return color[a] < color[b];
        return a < b;
    });
    NodeOrder o;
    o.perm.assign(g.node_count + 1, 0);
    for (NodeId i = 0; i < g.node_count; ++i) o.perm[order[i]] = i + 1;
    o.class_count = classes;
    o.rounds = rounds;
    return o;
}

// Renumbers g's nodes through perm (old id -> new id).
inline Hypergraph apply_order(const Hypergraph& g, const std::vector<NodeId>& perm) {
    Hypergraph out;
    out.node_count = g.node_count;
    for (const Edge& e : g.edges) {
        std::vector<NodeId> att;
        att.reserve(e.att.size());
        for (NodeId v : e.att) att.push_back(perm[v]);
        out.add_edge(e.label, std::move(att));
    }
    for (NodeId v : g.ext) out.ext.push_back(perm[v]);
    return out;
}

}  // namespace grepair

#endif  // GREPAIR_ORDERS_HPP
