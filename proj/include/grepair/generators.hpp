/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_GENERATORS_HPP
#define GREPAIR_GENERATORS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hypergraph.hpp"

namespace grepair {

/*
 * Synthetic graph families and the string/tree encodings used by tests and
 * benchmarks. All constructors are pure and deterministic.
 */

// String graph: a line of |w| labeled rank-2 edges over |w|+1 nodes with the
// first and last node external. The empty word yields a single external node.
inline Hypergraph s_graph(const std::vector<std::uint32_t>& word) {
    Hypergraph g;
    g.node_count = static_cast<std::uint32_t>(word.size()) + 1;
    for (std::size_t i = 0; i < word.size(); ++i)
        g.add_edge(terminal_label(word[i]),
                   {static_cast<NodeId>(i + 1), static_cast<NodeId>(i + 2)});
    if (word.empty())
        g.ext = {1};
    else
        g.ext = {1, g.node_count};
    return g;
}

// Ranked tree with labels; the rank of a symbol occurrence is its child count.
struct RankedTree {
    std::uint32_t label = 0;
    std::vector<RankedTree> children;
};

inline std::uint32_t tree_node_count(const RankedTree& t) {
    std::uint32_t n = 1;
    for (const RankedTree& c : t.children) n += tree_node_count(c);
    return n;
}

/*
 * Tree graph: one node per tree position (preorder / Dewey-lexicographic
 * numbering, root = 1) and one hyperedge per symbol occurrence of rank
 * (children + 1), attached parent-side-first, children in order. Leaves
 * become rank-1 edges. ext = root.
 */
inline Hypergraph t_graph(const RankedTree& t) {
    Hypergraph g;
    g.node_count = tree_node_count(t);
    g.ext = {1};
    // Assign preorder positions, then emit edges in preorder as well.
    struct Rec {
        Hypergraph& g;
        NodeId next = 1;
        void walk(const RankedTree& node) {
            NodeId self = next++;
            std::vector<NodeId> att{self};
            // children start at consecutive preorder slots; the recursion
            // below consumes exactly these positions
            NodeId pos = next;
            for (const RankedTree& c : node.children) {
                att.push_back(pos);
                pos += tree_node_count(c);
            }
            g.add_edge(terminal_label(node.label), att);
            for (const RankedTree& c : node.children) walk(c);
        }
    } rec{g};
    rec.walk(t);
    return g;
}

/*
 * n x 2^n grid: nodes numbered row-major 1..n*2^n; node i has an edge to i+1
 * unless it ends a row, and to the node below it (i + 2^n) when that exists.
 * Single shared terminal label.
 */
inline Hypergraph grid(std::uint32_t n, std::uint32_t label = 1) {
    if (n < 1) throw std::invalid_argument("grid: n must be >= 1");
    Hypergraph g;
    std::uint64_t width = 1ull << n;
    g.node_count = static_cast<std::uint32_t>(n * width);
    for (std::uint32_t i = 1; i <= g.node_count; ++i) {
        if (i % width != 0)
            g.add_edge(terminal_label(label), {i, i + 1});
        if (i + width <= g.node_count)
            g.add_edge(terminal_label(label), {i, static_cast<NodeId>(i + width)});
    }
    return g;
}

/*
 * Triangle fractal: tf_1 is a triangle; each step adds, for every edge
 * incident to a degree-2 node, a fresh apex node with edges from both ends of
 * that edge. |V| = 2^n + 2^(n-1), |E| = 2|V| - 3.
 */
inline Hypergraph triangle_fractal(std::uint32_t n, std::uint32_t label = 1) {
    if (n < 1) throw std::invalid_argument("triangle_fractal: n must be >= 1");
    Hypergraph g;
    g.node_count = 3;
    g.add_edge(terminal_label(label), {1, 2});
    g.add_edge(terminal_label(label), {1, 3});
    g.add_edge(terminal_label(label), {2, 3});
    for (std::uint32_t step = 2; step <= n; ++step) {
        std::vector<std::uint32_t> degree(g.node_count + 1, 0);
        for (const Edge& e : g.edges)
            for (NodeId v : e.att) ++degree[v];
        // outer edges: incident to a degree-2 node, ordered by that node's id
        std::vector<std::pair<NodeId, EdgeId>> outer;
        for (EdgeId ei = 0; ei < g.edges.size(); ++ei) {
            NodeId best = 0;
            for (NodeId v : g.edges[ei].att)
                if (degree[v] == 2 && (best == 0 || v < best)) best = v;
            if (best != 0) outer.push_back({best, ei});
        }
        std::sort(outer.begin(), outer.end());
        for (auto [node, ei] : outer) {
            NodeId apex = ++g.node_count;
            g.add_edge(terminal_label(label), {g.edges[ei].att[0], apex});
            g.add_edge(terminal_label(label), {g.edges[ei].att[1], apex});
        }
    }
    return g;
}

/*
 * High-rank family: the tree graph of a right comb of 2^n nodes labeled with
 * a rank-k symbol f whose first k-1 children are leaves labeled a; the last
 * child is the next comb node, and the final comb node has only leaves.
 * Labels: f = 1, a = 2.
 */
inline Hypergraph comb(std::uint32_t n, std::uint32_t k) {
    if (n < 1 || k < 1) throw std::invalid_argument("comb: n, k must be >= 1");
    std::uint64_t spine = 1ull << n;
    RankedTree leaf{2, {}};
    RankedTree node{1, {}};
    // deepest comb node: k leaves
    node.children.assign(k, leaf);
    for (std::uint64_t i = 1; i < spine; ++i) {
        RankedTree parent{1, {}};
        parent.children.assign(k - 1, leaf);
        parent.children.push_back(std::move(node));
        node = std::move(parent);
    }
    return t_graph(node);
}

/*
 * Low-rank family T_n: a path of 2^n f-labeled edges over nodes 1..2^n+1,
 * with an a_(i mod 5)-labeled leaf edge hanging off each path node 2..2^n+1,
 * plus one trailing isolated node to match the family's stated node count.
 * Labels: f = 1, a_l = 2+l for l in 0..4.
 */
inline Hypergraph chain_with_cycle(std::uint32_t n) {
    if (n < 1) throw std::invalid_argument("chain_with_cycle: n must be >= 1");
    std::uint64_t m = 1ull << n;  // number of f-edges
    Hypergraph g;
    g.node_count = static_cast<std::uint32_t>(2 * m + 2);
    for (std::uint64_t i = 1; i <= m; ++i)
        g.add_edge(terminal_label(1),
                   {static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
    for (std::uint64_t i = m + 1; i <= 2 * m; ++i)
        g.add_edge(terminal_label(static_cast<std::uint32_t>(2 + i % 5)),
                   {static_cast<NodeId>(i - m + 1), static_cast<NodeId>(i + 1)});
    return g;
}

// m disjoint id-shifted copies of g; ext is dropped (copies share nothing).
inline Hypergraph disjoint_copies(const Hypergraph& g, std::uint32_t m) {
    if (m < 1) throw std::invalid_argument("disjoint_copies: m must be >= 1");
    Hypergraph out;
    out.node_count = g.node_count * m;
    for (std::uint32_t c = 0; c < m; ++c) {
        NodeId shift = c * g.node_count;
        for (const Edge& e : g.edges) {
            std::vector<NodeId> att;
            att.reserve(e.att.size());
            for (NodeId v : e.att) att.push_back(v + shift);
            out.add_edge(e.label, std::move(att));
        }
    }
    if (m == 1) out.ext = g.ext;
    return out;
}

// The 4-node, 5-edge square-with-diagonal benchmark cell.
inline Hypergraph square_with_diagonal(std::uint32_t label = 1) {
    Hypergraph g;
    g.node_count = 4;
    g.add_edge(terminal_label(label), {1, 2});
    g.add_edge(terminal_label(label), {2, 3});
    g.add_edge(terminal_label(label), {3, 4});
    g.add_edge(terminal_label(label), {4, 1});
    g.add_edge(terminal_label(label), {1, 3});
    return g;
}

}  // namespace grepair

#endif  // GREPAIR_GENERATORS_HPP
