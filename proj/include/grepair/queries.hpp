/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_QUERIES_HPP
#define GREPAIR_QUERIES_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

#include "grammar.hpp"

namespace grepair {

/*
 * Query evaluation directly on the grammar: node addressing through the
 * derivation tree, neighborhoods, and reachability via per-rule skeleton
 * graphs. All precomputed state is immutable after construction, so one
 * engine can serve concurrent read-only queries.
 */

// Derivation-path address of one node of val(G): path[0] is a nonterminal
// edge of the start graph, each further entry a nonterminal edge of the
// previous edge's right-hand side, and node is a node of the final
// right-hand side (of the start graph when the path is empty).
struct GRepresentation {
    std::vector<EdgeId> path;
    NodeId node = 0;

    friend bool operator==(const GRepresentation& a, const GRepresentation& b) {
        return a.path == b.path && a.node == b.node;
    }
};

enum class Direction { out, in };

/*
 * Reachability summary of a rule body. Nodes are the external nodes of the
 * right-hand side, identified by their 0-based position in ext; arcs form a
 * sparse graph whose transitive closure is exactly "the j-th external node
 * is reachable from the i-th one in the derived graph". The arcs come from
 * condensing strongly connected components, bypassing components without
 * external nodes, turning each remaining component into a cycle over its
 * external nodes (ascending), and connecting components by one arc between
 * their smallest external nodes per condensation edge.
 */
struct SkeletonGraph {
    std::uint32_t rank = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;

    // All ordered position pairs (i, j) with i != j and j reachable from i.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> closure() const {
        std::vector<std::vector<std::uint32_t>> adj(rank);
        for (const auto& [i, j] : arcs) adj[i].push_back(j);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        for (std::uint32_t s = 0; s < rank; ++s) {
            std::vector<char> seen(rank, 0);
            std::deque<std::uint32_t> queue{s};
            seen[s] = 1;
            while (!queue.empty()) {
                std::uint32_t v = queue.front();
                queue.pop_front();
                for (std::uint32_t w : adj[v])
                    if (!seen[w]) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
            }
            for (std::uint32_t tgt = 0; tgt < rank; ++tgt)
                if (tgt != s && seen[tgt]) out.push_back({s, tgt});
        }
        return out;
    }
};

namespace detail {

// Forward arcs of a right-hand side with every nonterminal edge replaced by
// its skeleton and every terminal edge read head -> tails.
inline std::vector<std::vector<NodeId>> expanded_adjacency(
    const Hypergraph& g, const std::vector<SkeletonGraph>& sk) {
    std::vector<std::vector<NodeId>> adj(g.node_count + 1);
    for (const Edge& e : g.edges) {
        if (e.label.kind == LabelKind::terminal) {
            for (std::size_t j = 1; j < e.att.size(); ++j)
                adj[e.att[0]].push_back(e.att[j]);
        } else {
            for (const auto& [i, j] : sk[e.label.id - 1].arcs)
                adj[e.att[i]].push_back(e.att[j]);
        }
    }
    return adj;
}

inline std::vector<std::vector<NodeId>> reversed(
    const std::vector<std::vector<NodeId>>& adj) {
    std::vector<std::vector<NodeId>> out(adj.size());
    for (NodeId v = 1; v < adj.size(); ++v)
        for (NodeId w : adj[v]) out[w].push_back(v);
    return out;
}

// Nodes reachable from `from` (inclusive) as a membership vector.
inline std::vector<char> reach_set(const std::vector<std::vector<NodeId>>& adj,
                                   const std::vector<NodeId>& from) {
    std::vector<char> seen(adj.size(), 0);
    std::deque<NodeId> queue;
    for (NodeId v : from)
        if (!seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (NodeId w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
    }
    return seen;
}

// Skeleton of one right-hand side, given the skeletons of all nonterminals
// it references.
inline SkeletonGraph skeleton_of_rhs(const Hypergraph& g,
                                     const std::vector<SkeletonGraph>& sk) {
    SkeletonGraph out;
    out.rank = static_cast<std::uint32_t>(g.ext.size());
    auto adj = expanded_adjacency(g, sk);

    // Tarjan's strongly connected components.
    std::uint32_t n = g.node_count;
    std::vector<int> index(n + 1, -1), low(n + 1, 0), comp(n + 1, -1);
    std::vector<char> on_stack(n + 1, 0);
    std::vector<NodeId> stack;
    int next_index = 0, comp_count = 0;
    std::function<void(NodeId)> strongconnect = [&](NodeId v) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (NodeId w : adj[v]) {
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            for (;;) {
                NodeId w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = comp_count;
                if (w == v) break;
            }
            ++comp_count;
        }
    };
    for (NodeId v = 1; v <= n; ++v)
        if (index[v] < 0) strongconnect(v);

    // External positions per component, smallest-node-first.
    std::vector<std::vector<std::uint32_t>> comp_ext(comp_count);
    for (std::uint32_t p = 0; p < g.ext.size(); ++p)
        comp_ext[comp[g.ext[p]]].push_back(p);
    for (auto& ps : comp_ext)
        std::sort(ps.begin(), ps.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return g.ext[a] < g.ext[b]; });

    // Condensation edges (deduplicated, no self loops).
    std::set<std::pair<int, int>> cond;
    for (NodeId v = 1; v <= n; ++v)
        for (NodeId w : adj[v])
            if (comp[v] != comp[w]) cond.insert({comp[v], comp[w]});

    // Bypass components that carry no external node: connect every incoming
    // to every outgoing component, then drop the component. Edges created by
    // one bypass never point back to it, so one pass suffices.
    for (int c = 0; c < comp_count; ++c) {
        if (!comp_ext[c].empty()) continue;
        std::vector<int> ins, outs;
        for (auto it = cond.begin(); it != cond.end();) {
            if (it->second == c) {
                ins.push_back(it->first);
                it = cond.erase(it);
            } else if (it->first == c) {
                outs.push_back(it->second);
                it = cond.erase(it);
            } else {
                ++it;
            }
        }
        for (int d : ins)
            for (int e : outs)
                if (d != e) cond.insert({d, e});
    }

    // One cycle over the external nodes of each surviving component, plus a
    // representative arc per condensation edge.
    for (int c = 0; c < comp_count; ++c) {
        const auto& ps = comp_ext[c];
        for (std::size_t k = 0; k + 1 < ps.size(); ++k) out.arcs.push_back({ps[k], ps[k + 1]});
        if (ps.size() >= 2) out.arcs.push_back({ps.back(), ps.front()});
    }
    for (const auto& [c, d] : cond) {
        if (comp_ext[c].empty() || comp_ext[d].empty()) continue;
        out.arcs.push_back({comp_ext[c].front(), comp_ext[d].front()});
    }
    return out;
}

}  // namespace detail

// Skeletons of all nonterminals, bottom-up; index A-1 holds sk(A).
inline std::vector<SkeletonGraph> all_skeletons(const SLHRGrammar& G) {
    std::vector<SkeletonGraph> sk(G.rules.size());
    std::vector<char> done(G.rules.size() + 1, 0);
    std::function<void(std::uint32_t)> visit = [&](std::uint32_t a) {
        if (done[a]) return;
        done[a] = 1;
        for (EdgeId e : nt_edges_of(G.rule(a).rhs)) visit(G.rule(a).rhs.edges[e].label.id);
        sk[a - 1] = detail::skeleton_of_rhs(G.rule(a).rhs, sk);
    };
    for (std::uint32_t a = 1; a <= G.rules.size(); ++a) visit(a);
    return sk;
}

inline SkeletonGraph skeleton(const SLHRGrammar& G, std::uint32_t A) {
    if (A == 0 || A > G.rules.size())
        throw std::invalid_argument("skeleton: unknown nonterminal");
    return all_skeletons(G)[A - 1];
}

class QueryEngine {
public:
    explicit QueryEngine(const SLHRGrammar& G)
        : G_(limit_to_two_nonterminals(G)), sk_(all_skeletons(G_)), stats_(stats(G_)) {
        start_order_ = !G_.start_nt_order.empty() ? G_.start_nt_order
                                                  : canonical_nt_order(G_.start);
        std::uint64_t base = G_.start.node_count;
        for (EdgeId e : start_order_) {
            start_base_.push_back(base);
            base += stats_.nodes_per_nt[G_.start.edges[e].label.id];
        }
        total_nodes_ = base;

        std::uint32_t nts = G_.nt_count();
        order_.resize(nts + 1);
        internals_.resize(nts + 1);
        internal_pos_.resize(nts + 1);
        ext_pos_.resize(nts + 1);
        for (std::uint32_t a = 1; a <= nts; ++a) {
            const Rule& r = G_.rule(a);
            order_[a] = !r.nt_order.empty() ? r.nt_order : canonical_nt_order(r.rhs);
            internals_[a] = detail::internal_nodes_ascending(r.rhs);
            internal_pos_[a].assign(r.rhs.node_count + 1, 0);
            for (std::size_t k = 0; k < internals_[a].size(); ++k)
                internal_pos_[a][internals_[a][k]] = static_cast<std::uint32_t>(k + 1);
            ext_pos_[a].assign(r.rhs.node_count + 1, 0);
            for (std::size_t j = 0; j < r.rhs.ext.size(); ++j)
                ext_pos_[a][r.rhs.ext[j]] = static_cast<std::uint32_t>(j + 1);
        }

        fwd_.resize(nts + 1);
        bwd_.resize(nts + 1);
        fwd_[0] = detail::expanded_adjacency(G_.start, sk_);
        bwd_[0] = detail::reversed(fwd_[0]);
        for (std::uint32_t a = 1; a <= nts; ++a) {
            fwd_[a] = detail::expanded_adjacency(G_.rule(a).rhs, sk_);
            bwd_[a] = detail::reversed(fwd_[a]);
        }
    }

    // Normalized working grammar (at most two nonterminal edges per
    // right-hand side); derives the same graph, node-id exactly.
    const SLHRGrammar& grammar() const { return G_; }
    const SkeletonGraph& skeleton_of(std::uint32_t A) const { return sk_.at(A - 1); }
    std::uint64_t node_count() const { return total_nodes_; }

    GRepresentation get_g_rep(std::uint64_t id) const {
        if (id == 0 || id > total_nodes_)
            throw std::out_of_range("get_g_rep: node id out of range");
        if (id <= G_.start.node_count) return {{}, static_cast<NodeId>(id)};
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(start_base_.begin(), start_base_.end(), id - 1) -
            start_base_.begin() - 1);
        GRepresentation rep;
        const Hypergraph* ctx = &G_.start;
        EdgeId e = start_order_[i];
        std::uint64_t base = start_base_[i];
        for (;;) {
            rep.path.push_back(e);
            std::uint32_t a = ctx->edges[e].label.id;
            const Hypergraph& rhs = G_.rule(a).rhs;
            if (id <= base + internals_[a].size()) {
                rep.node = internals_[a][static_cast<std::size_t>(id - base - 1)];
                return rep;
            }
            base += internals_[a].size();
            bool found = false;
            for (EdgeId f : order_[a]) {
                std::uint64_t n = stats_.nodes_per_nt[rhs.edges[f].label.id];
                if (id <= base + n) {
                    ctx = &rhs;
                    e = f;
                    found = true;
                    break;
                }
                base += n;
            }
            if (!found) throw std::logic_error("get_g_rep: inconsistent node counts");
        }
    }

    std::uint64_t get_id(GRepresentation rep) const {
        std::vector<std::uint32_t> chain = context_chain(rep.path);
        if (rep.node == 0 || rep.node > graph_of(chain.back()).node_count)
            throw std::invalid_argument("get_id: node out of range for its context");

        // Climb out of external nodes to the lowest enclosing occurrence.
        while (!rep.path.empty()) {
            std::uint32_t a = chain.back();
            std::uint32_t j = ext_pos_[a][rep.node];
            if (j == 0) break;  // internal: this context assigned the id
            chain.pop_back();
            const Hypergraph& parent = graph_of(chain.back());
            rep.node = parent.edges[rep.path.back()].att[j - 1];
            rep.path.pop_back();
        }
        if (rep.path.empty()) return rep.node;

        // First id of the addressed instance, then the internal offset.
        std::size_t i0 = 0;
        while (i0 < start_order_.size() && start_order_[i0] != rep.path[0]) ++i0;
        if (i0 == start_order_.size())
            throw std::invalid_argument("get_id: path does not start in the start graph");
        std::uint64_t base = start_base_[i0];
        for (std::size_t k = 1; k < rep.path.size(); ++k) {
            std::uint32_t a = chain[k];
            const Hypergraph& rhs = G_.rule(a).rhs;
            base += internals_[a].size();
            bool found = false;
            for (EdgeId f : order_[a]) {
                if (f == rep.path[k]) {
                    found = true;
                    break;
                }
                base += stats_.nodes_per_nt[rhs.edges[f].label.id];
            }
            if (!found) throw std::invalid_argument("get_id: edge not in derivation order");
        }
        std::uint32_t idx = internal_pos_[chain.back()][rep.node];
        if (idx == 0) throw std::logic_error("get_id: expected an internal node");
        return base + idx;
    }

    std::set<std::uint64_t> neighbors(std::uint64_t id, Direction dir) const {
        GRepresentation rep = get_g_rep(id);
        std::set<std::uint64_t> out;
        collect_neighbors(rep.path, rep.node, dir, out);
        return out;
    }

    bool reachable(std::uint64_t s, std::uint64_t t) const {
        if (s == 0 || s > total_nodes_ || t == 0 || t > total_nodes_)
            throw std::out_of_range("reachable: node id out of range");
        if (s == t) return true;
        GRepresentation ru = get_g_rep(s), rv = get_g_rep(t);
        std::vector<std::uint32_t> cu = context_chain(ru.path), cv = context_chain(rv.path);
        std::size_t c = 0;
        while (c < ru.path.size() && c < rv.path.size() && ru.path[c] == rv.path[c]) ++c;

        // Frontier of nodes reachable from s, climbed to the common depth.
        std::vector<char> U = detail::reach_set(fwd_[cu[ru.path.size()]], {ru.node});
        for (std::size_t d = ru.path.size(); d > c; --d)
            U = climb(U, ru.path[d - 1], cu[d], cu[d - 1], false);
        // Frontier of nodes that reach t, climbed likewise.
        std::vector<char> V = detail::reach_set(bwd_[cv[rv.path.size()]], {rv.node});
        for (std::size_t d = rv.path.size(); d > c; --d)
            V = climb(V, rv.path[d - 1], cv[d], cv[d - 1], true);

        for (std::size_t d = c;; --d) {
            for (std::size_t v = 1; v < U.size(); ++v)
                if (U[v] && V[v]) return true;
            if (d == 0) return false;
            U = climb(U, ru.path[d - 1], cu[d], cu[d - 1], false);
            V = climb(V, ru.path[d - 1], cu[d], cu[d - 1], true);
        }
    }

private:
    // Context ids along a path: entry k is the context of depth k, where 0
    // denotes the start graph and a > 0 the right-hand side of nonterminal a.
    std::vector<std::uint32_t> context_chain(const std::vector<EdgeId>& path) const {
        std::vector<std::uint32_t> chain{0};
        for (EdgeId e : path) {
            const Hypergraph& g = graph_of(chain.back());
            if (e >= g.edges.size() || g.edges[e].label.kind != LabelKind::nonterminal)
                throw std::invalid_argument("bad derivation path");
            chain.push_back(g.edges[e].label.id);
        }
        return chain;
    }

    const Hypergraph& graph_of(std::uint32_t ctx) const {
        return ctx == 0 ? G_.start : G_.rule(ctx).rhs;
    }

    // Maps a frontier in a child right-hand side through the child edge into
    // the parent context and closes it under (forward/backward) reachability.
    std::vector<char> climb(const std::vector<char>& frontier, EdgeId edge,
                            std::uint32_t child, std::uint32_t parent, bool backward) const {
        const Hypergraph& rhs = G_.rule(child).rhs;
        const Edge& e = graph_of(parent).edges[edge];
        std::vector<NodeId> entry;
        for (std::size_t j = 0; j < rhs.ext.size(); ++j)
            if (frontier[rhs.ext[j]]) entry.push_back(e.att[j]);
        return detail::reach_set(backward ? bwd_[parent] : fwd_[parent], entry);
    }

    void collect_neighbors(std::vector<EdgeId>& path, NodeId v, Direction dir,
                           std::set<std::uint64_t>& out) const {
        std::vector<std::uint32_t> chain = context_chain(path);
        const Hypergraph& g = graph_of(chain.back());
        for (const Edge& e : g.edges) {
            if (e.label.kind == LabelKind::terminal) {
                if (dir == Direction::out && e.att[0] == v) {
                    for (std::size_t j = 1; j < e.att.size(); ++j)
                        out.insert(get_id({path, e.att[j]}));
                } else if (dir == Direction::in) {
                    for (std::size_t j = 1; j < e.att.size(); ++j)
                        if (e.att[j] == v) {
                            out.insert(get_id({path, e.att[0]}));
                            break;
                        }
                }
            }
        }
        for (EdgeId ei : nt_edges_of(g)) {
            const Edge& e = g.edges[ei];
            const Hypergraph& rhs = G_.rule(e.label.id).rhs;
            for (std::size_t j = 0; j < e.att.size(); ++j) {
                if (e.att[j] != v) continue;
                path.push_back(ei);
                collect_neighbors(path, rhs.ext[j], dir, out);
                path.pop_back();
            }
        }
    }

    SLHRGrammar G_;
    std::vector<SkeletonGraph> sk_;
    GrammarStats stats_;
    std::vector<EdgeId> start_order_;
    std::vector<std::uint64_t> start_base_;  // first id before each start edge's subtree
    std::uint64_t total_nodes_ = 0;
    std::vector<std::vector<EdgeId>> order_;            // per nonterminal
    std::vector<std::vector<NodeId>> internals_;        // ascending internal nodes
    std::vector<std::vector<std::uint32_t>> internal_pos_;  // node -> 1-based index
    std::vector<std::vector<std::uint32_t>> ext_pos_;       // node -> 1-based ext position
    std::vector<std::vector<std::vector<NodeId>>> fwd_, bwd_;  // skeleton-expanded arcs
};

}  // namespace grepair

#endif  // GREPAIR_QUERIES_HPP
