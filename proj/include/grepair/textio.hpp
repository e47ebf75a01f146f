/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_TEXTIO_HPP
#define GREPAIR_TEXTIO_HPP

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypergraph.hpp"

namespace grepair {

// Thrown for malformed edge-list input (distinct from I/O failures).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
 * Result of reading a text edge list: the graph, the node-name table
 * (first-appearance order, index = NodeId - 1), the label dictionary, and
 * any non-fatal warnings (duplicate edges are dropped with a note).
 */
struct IngestResult {
    Hypergraph graph;
    std::vector<std::string> node_names;
    LabelDictionary labels;
    std::vector<std::string> warnings;
};

/*
 * Reads UTF-8 lines of the form `src dst [label]`, whitespace-separated;
 * `#` starts a comment. Node names are arbitrary tokens mapped to dense ids
 * in first-appearance order. Self-loops are rejected (with line numbers);
 * duplicate parallel edges are deduplicated with a warning.
 */
inline IngestResult read_edge_list(std::istream& in,
                                   const std::string& default_label = "a") {
    IngestResult res;
    std::map<std::string, NodeId> ids;
    std::set<std::tuple<NodeId, NodeId, std::uint32_t>> seen;
    std::vector<std::string> self_loops;
    std::string line;
    std::size_t lineno = 0;
    auto node_of = [&](const std::string& tok) {
        auto it = ids.find(tok);
        if (it != ids.end()) return it->second;
        res.node_names.push_back(tok);
        NodeId id = static_cast<NodeId>(res.node_names.size());
        ids.emplace(tok, id);
        res.graph.node_count = id;
        return id;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string src, dst, label, extra;
        if (!(ls >> src)) continue;  // blank or comment-only line
        if (!(ls >> dst))
            throw ParseError("line " + std::to_string(lineno) + ": expected `src dst [label]`");
        if (!(ls >> label)) label = default_label;
        if (ls >> extra)
            throw ParseError("line " + std::to_string(lineno) + ": trailing token `" + extra +
                             "`");
        NodeId u = node_of(src), v = node_of(dst);
        if (u == v) {
            self_loops.push_back(std::to_string(lineno));
            continue;
        }
        std::uint32_t lab = res.labels.intern(label);
        if (!seen.insert({u, v, lab}).second) {
            res.warnings.push_back("line " + std::to_string(lineno) +
                                   ": duplicate edge dropped");
            continue;
        }
        res.graph.add_edge(terminal_label(lab), {u, v});
    }
    if (!self_loops.empty()) {
        std::string msg = "self-loops are not representable; offending lines: ";
        for (std::size_t i = 0; i < self_loops.size(); ++i)
            msg += (i ? ", " : "") + self_loops[i];
        throw ParseError(msg);
    }
    return res;
}

// Writes `src dst label` lines. Names fall back to decimal node ids when the
// name table is absent or too short. With `sorted`, lines are emitted in
// lexicographic order so outputs are byte-comparable.
inline void write_edge_list(std::ostream& out, const Hypergraph& g,
                            const std::vector<std::string>& node_names,
                            const LabelDictionary& labels, bool sorted = false) {
    auto name_of = [&](NodeId v) {
        if (v >= 1 && v <= node_names.size()) return node_names[v - 1];
        return std::to_string(v);
    };
    std::vector<std::string> lines;
    lines.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        std::string line = name_of(e.att[0]);
        for (std::size_t j = 1; j < e.att.size(); ++j) line += " " + name_of(e.att[j]);
        line += " " + labels.name(e.label.id);
        lines.push_back(std::move(line));
    }
    if (sorted) std::sort(lines.begin(), lines.end());
    for (const std::string& l : lines) out << l << "\n";
}

}  // namespace grepair

#endif  // GREPAIR_TEXTIO_HPP
