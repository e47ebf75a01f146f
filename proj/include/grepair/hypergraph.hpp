/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_HYPERGRAPH_HPP
#define GREPAIR_HYPERGRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace grepair {

/*
 * Core hypergraph model.
 *
 * A hypergraph has nodes 1..node_count, a sequence of labeled hyperedges,
 * and an ordered sequence of external nodes. Every edge attaches to an
 * ordered, repetition-free sequence of at least one node (its rank); the
 * external sequence is likewise repetition-free. Edges of rank <= 2 count 1
 * toward the edge size, edges of higher rank count their rank.
 */

using NodeId = std::uint32_t;  // 1-based node index
using EdgeId = std::uint32_t;  // index into Hypergraph::edges

enum class LabelKind : std::uint8_t { terminal = 0, nonterminal = 1 };

struct Label {
    std::uint32_t id = 0;
    LabelKind kind = LabelKind::terminal;

    friend bool operator==(const Label& a, const Label& b) {
        return a.id == b.id && a.kind == b.kind;
    }
    friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }
    friend bool operator<(const Label& a, const Label& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.id < b.id;
    }
};

inline Label terminal_label(std::uint32_t id) { return Label{id, LabelKind::terminal}; }
inline Label nonterminal_label(std::uint32_t id) { return Label{id, LabelKind::nonterminal}; }

// Reserved terminal label id used for virtual connector edges added (and later
// stripped) when compressing disconnected graphs, and for epsilon edges in
// product grammars. Never part of a user-visible dictionary.
inline constexpr std::uint32_t kReservedLabelId = 0;

struct Edge {
    Label label;
    std::vector<NodeId> att;  // ordered attachment, |att| = rank >= 1

    std::uint32_t rank() const { return static_cast<std::uint32_t>(att.size()); }

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.label == b.label && a.att == b.att;
    }
};

struct Hypergraph {
    std::uint32_t node_count = 0;
    std::vector<Edge> edges;
    std::vector<NodeId> ext;

    EdgeId add_edge(Label label, std::vector<NodeId> att) {
        edges.push_back(Edge{label, std::move(att)});
        return static_cast<EdgeId>(edges.size() - 1);
    }

    // node -> ids of incident edges, in edge order. Recomputed on request;
    // graphs are treated as immutable once built.
    std::vector<std::vector<EdgeId>> incidence() const {
        std::vector<std::vector<EdgeId>> inc(node_count + 1);
        for (EdgeId e = 0; e < edges.size(); ++e)
            for (NodeId v : edges[e].att) inc[v].push_back(e);
        return inc;
    }
};

struct SizeInfo {
    std::uint64_t node_size = 0;
    std::uint64_t edge_size = 0;
    std::uint64_t total = 0;
};

inline SizeInfo size(const Hypergraph& g) {
    SizeInfo s;
    s.node_size = g.node_count;
    for (const Edge& e : g.edges) s.edge_size += e.rank() <= 2 ? 1 : e.rank();
    s.total = s.node_size + s.edge_size;
    return s;
}

// Reports every violated structural invariant; empty result means valid.
inline std::vector<std::string> validate(const Hypergraph& g) {
    std::vector<std::string> out;
    auto report = [&](std::string msg) { out.push_back(std::move(msg)); };
    for (EdgeId i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.att.empty()) report("edge " + std::to_string(i) + ": empty attachment");
        std::set<NodeId> seen;
        for (NodeId v : e.att) {
            if (v == 0 || v > g.node_count)
                report("edge " + std::to_string(i) + ": node " + std::to_string(v) +
                       " out of range");
            else if (!seen.insert(v).second)
                report("edge " + std::to_string(i) + ": node " + std::to_string(v) +
                       " attached twice");
        }
    }
    std::set<NodeId> seen_ext;
    for (NodeId v : g.ext) {
        if (v == 0 || v > g.node_count)
            report("ext node " + std::to_string(v) + " out of range");
        else if (!seen_ext.insert(v).second)
            report("ext node " + std::to_string(v) + " listed twice");
    }
    return out;
}

inline bool is_valid(const Hypergraph& g) { return validate(g).empty(); }

// True iff all edges have rank 2 and no two edges share label and attachment.
inline bool is_simple(const Hypergraph& g) {
    std::set<std::tuple<std::uint32_t, std::uint8_t, NodeId, NodeId>> seen;
    for (const Edge& e : g.edges) {
        if (e.rank() != 2) return false;
        if (!seen.insert({e.label.id, static_cast<std::uint8_t>(e.label.kind), e.att[0],
                          e.att[1]})
                 .second)
            return false;
    }
    return true;
}

/*
 * Directed reachability oracle by plain search. A hyperedge is traversed from
 * its head (first attached node) to each of its tail nodes; reachability is
 * reflexive.
 */
inline bool paths_exist_oracle(const Hypergraph& g, NodeId s, NodeId t) {
    if (s == t) return true;
    std::vector<char> visited(g.node_count + 1, 0);
    auto inc = g.incidence();
    std::deque<NodeId> queue{s};
    visited[s] = 1;
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (EdgeId ei : inc[v]) {
            const Edge& e = g.edges[ei];
            if (e.att[0] != v) continue;  // only traversable from the head
            for (std::size_t j = 1; j < e.att.size(); ++j) {
                NodeId w = e.att[j];
                if (w == t) return true;
                if (!visited[w]) {
                    visited[w] = 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return false;
}

// Graph equality that ignores edge order: same nodes, same ext sequence,
// same multiset of (label, attachment) edges.
inline bool equal_graphs(const Hypergraph& a, const Hypergraph& b) {
    if (a.node_count != b.node_count || a.ext != b.ext) return false;
    if (a.edges.size() != b.edges.size()) return false;
    auto key = [](const Edge& e) {
        return std::make_tuple(e.label.kind, e.label.id, e.att);
    };
    std::vector<std::tuple<LabelKind, std::uint32_t, std::vector<NodeId>>> ka, kb;
    ka.reserve(a.edges.size());
    kb.reserve(b.edges.size());
    for (const Edge& e : a.edges) ka.push_back(key(e));
    for (const Edge& e : b.edges) kb.push_back(key(e));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
}

/*
 * Bidirectional mapping between external label names and terminal label ids.
 * Ids are dense, 1-based, assigned in first-appearance order; id 0 stays
 * reserved for internal virtual/epsilon edges.
 */
class LabelDictionary {
public:
    std::uint32_t intern(const std::string& name) {
        auto it = by_name_.find(name);
        if (it != by_name_.end()) return it->second;
        names_.push_back(name);
        std::uint32_t id = static_cast<std::uint32_t>(names_.size());
        by_name_.emplace(name, id);
        return id;
    }

    // Lookup without inserting; returns 0 when unknown.
    std::uint32_t find(const std::string& name) const {
        auto it = by_name_.find(name);
        return it == by_name_.end() ? 0 : it->second;
    }

    const std::string& name(std::uint32_t id) const { return names_.at(id - 1); }
    std::uint32_t count() const { return static_cast<std::uint32_t>(names_.size()); }

    friend bool operator==(const LabelDictionary& a, const LabelDictionary& b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::uint32_t> by_name_;
};

}  // namespace grepair

#endif  // GREPAIR_HYPERGRAPH_HPP
