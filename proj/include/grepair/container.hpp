/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_CONTAINER_HPP
#define GREPAIR_CONTAINER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitstream.hpp"
#include "grammar.hpp"
#include "hypergraph.hpp"
#include "k2tree.hpp"

namespace grepair {

/*
 * "GRG1" container: a single bitstream holding a straight-line grammar,
 * its label dictionary, and an optional val-node -> original-node mapping.
 *
 * Layout (bit-exact):
 *   magic "GRG1" (4 bytes), version byte 0x01
 *   header: δ0(start node count), δ0(#terminal labels), δ0(#rules),
 *           δ0(#distinct attachment permutations),
 *           δ0(|start ext|) + δ(id) per ext entry
 *   dictionary, terminal labels ascending: δ0(name length) + name bytes,
 *           δ0(uniform rank; 0 = mixed/unused)
 *   rule shapes, ascending: δ(rank), δ0(internal node count)
 *   permutation table, first-appearance order: δ(size), δ(π[i]+1) each
 *   start-graph sections: rank-2 terminal labels ascending as adjacency
 *           k²-trees (δ0(bit count) + bits), then remaining terminal labels
 *           ascending and all nonterminal labels ascending as incidence
 *           matrices (δ0(edge count), δ0(bit count) + bits, then one
 *           fixed-width permutation index per edge, rows in attachment
 *           lexicographic order)
 *   rules bitstream: per rule δ0(edge count); per edge kind bit
 *           (0 terminal), δ(attachment size), per node ext-flag bit +
 *           δ(node id), δ(label id)
 *   mapping: presence bit; if set δ0(mapped node count) + δ(original id) each
 *
 * Start-graph edges are canonicalized to (label group, attachment lex)
 * order, which derivation semantics do not observe. Grammars with explicit
 * derivation-order overrides are rejected: the format stores none, and
 * every compressor output uses the canonical order.
 */

struct ContainerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadMagicError : ContainerError {
    BadMagicError() : ContainerError("container: bad magic") {}
};
struct BadVersionError : ContainerError {
    BadVersionError() : ContainerError("container: unsupported version") {}
};
struct TruncatedError : ContainerError {
    TruncatedError() : ContainerError("container: truncated input") {}
};

struct ContainerData {
    SLHRGrammar grammar;
    LabelDictionary dict;
    std::vector<std::uint64_t> mapping;  // empty if the file stored none
};

namespace detail {

inline constexpr char kMagic[4] = {'G', 'R', 'G', '1'};
inline constexpr std::uint8_t kVersion = 1;

inline void append_rule_edges(BitWriter& w, const Hypergraph& rhs) {
    std::vector<char> is_ext(rhs.node_count + 1, 0);
    for (NodeId v : rhs.ext) is_ext[v] = 1;
    w.put_delta0(static_cast<std::uint64_t>(rhs.edges.size()));
    for (const Edge& e : rhs.edges) {
        w.put_bit(e.label.kind == LabelKind::nonterminal);
        w.put_delta(e.rank());
        for (NodeId v : e.att) {
            w.put_bit(is_ext[v] != 0);
            w.put_delta(v);
        }
        w.put_delta(e.label.id);
    }
}

inline void read_rule_edges(BitReader& r, Hypergraph& rhs) {
    std::uint64_t m = r.get_delta0();
    for (std::uint64_t i = 0; i < m; ++i) {
        bool nt = r.get_bit();
        std::uint64_t k = r.get_delta();
        std::vector<NodeId> att;
        for (std::uint64_t j = 0; j < k; ++j) {
            r.get_bit();  // ext flag, reconstructible from the id
            att.push_back(static_cast<NodeId>(r.get_delta()));
        }
        Label lab{static_cast<std::uint32_t>(r.get_delta()),
                  nt ? LabelKind::nonterminal : LabelKind::terminal};
        rhs.add_edge(lab, std::move(att));
    }
}

// permutation such that att[i] = sorted(att)[perm[i]]
inline std::vector<std::uint32_t> att_permutation(const std::vector<NodeId>& att) {
    std::vector<NodeId> sorted = att;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint32_t> perm;
    for (NodeId v : att)
        perm.push_back(static_cast<std::uint32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
    return perm;
}

inline std::uint32_t index_width(std::size_t count) {
    std::uint32_t w = 1;
    while ((std::uint64_t{1} << w) < count) ++w;
    return w;
}

// uniform rank of a label across the whole grammar; 0 if unused or mixed
inline std::uint32_t uniform_rank(const SLHRGrammar& G, Label lab) {
    std::uint32_t rank = 0;
    auto scan = [&](const Hypergraph& h) {
        for (const Edge& e : h.edges)
            if (e.label == lab) {
                if (rank == 0)
                    rank = e.rank();
                else if (rank != e.rank())
                    rank = 0xffffffffu;
            }
    };
    scan(G.start);
    for (const Rule& r : G.rules) scan(r.rhs);
    return rank == 0xffffffffu ? 0 : rank;
}

// start edges of one label, attachment-lexicographic
inline std::vector<const Edge*> label_edges(const Hypergraph& start, Label lab) {
    std::vector<const Edge*> out;
    for (const Edge& e : start.edges)
        if (e.label == lab) out.push_back(&e);
    std::sort(out.begin(), out.end(),
              [](const Edge* a, const Edge* b) { return a->att < b->att; });
    return out;
}

}  // namespace detail

inline std::vector<std::uint8_t> write_container(
    const SLHRGrammar& G, const LabelDictionary& dict,
    const std::vector<std::uint64_t>* mapping = nullptr) {
    if (!G.start_nt_order.empty())
        throw std::invalid_argument("container: explicit derivation orders unsupported");
    for (const Rule& r : G.rules)
        if (!r.nt_order.empty())
            throw std::invalid_argument("container: explicit derivation orders unsupported");

    std::uint32_t terminals = dict.count();
    auto note_label = [&](Label lab) {
        if (lab.kind == LabelKind::terminal) terminals = std::max(terminals, lab.id);
    };
    for (const Edge& e : G.start.edges) note_label(e.label);
    for (const Rule& r : G.rules)
        for (const Edge& e : r.rhs.edges) note_label(e.label);
    std::uint32_t nts = G.nt_count();

    // label groups: adjacency for uniformly rank-2 terminals, incidence else
    std::vector<std::uint32_t> term_rank(terminals + 1, 0);
    std::vector<Label> adj_labels, inc_labels;
    for (std::uint32_t t = 1; t <= terminals; ++t) {
        term_rank[t] = detail::uniform_rank(G, terminal_label(t));
        (term_rank[t] == 2 ? adj_labels : inc_labels).push_back(terminal_label(t));
    }
    for (std::uint32_t a = 1; a <= nts; ++a) inc_labels.push_back(nonterminal_label(a));

    // distinct attachment permutations, first-appearance order over the
    // exact traversal the incidence sections use
    std::vector<std::vector<std::uint32_t>> perms;
    std::map<std::vector<std::uint32_t>, std::uint32_t> perm_index;
    for (Label lab : inc_labels)
        for (const Edge* e : detail::label_edges(G.start, lab)) {
            auto p = detail::att_permutation(e->att);
            if (perm_index.emplace(p, static_cast<std::uint32_t>(perms.size())).second)
                perms.push_back(std::move(p));
        }

    BitWriter w;
    for (char c : detail::kMagic) w.put_byte(static_cast<std::uint8_t>(c));
    w.put_byte(detail::kVersion);
    w.put_delta0(G.start.node_count);
    w.put_delta0(terminals);
    w.put_delta0(nts);
    w.put_delta0(perms.size());
    w.put_delta0(G.start.ext.size());
    for (NodeId v : G.start.ext) w.put_delta(v);

    for (std::uint32_t t = 1; t <= terminals; ++t) {
        std::string name = t <= dict.count() ? dict.name(t) : std::to_string(t);
        w.put_delta0(name.size());
        for (char c : name) w.put_byte(static_cast<std::uint8_t>(c));
        w.put_delta0(term_rank[t]);
    }
    for (std::uint32_t a = 1; a <= nts; ++a) {
        const Hypergraph& rhs = G.rule(a).rhs;
        w.put_delta(rhs.ext.size());
        w.put_delta0(rhs.node_count - rhs.ext.size());
    }
    for (const auto& p : perms) {
        w.put_delta(p.size());
        for (std::uint32_t x : p) w.put_delta(x + 1);
    }

    std::uint32_t pw = detail::index_width(perms.size());
    for (Label lab : adj_labels) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ones;
        for (const Edge* e : detail::label_edges(G.start, lab))
            ones.push_back({e->att[0] - 1, e->att[1] - 1});
        K2Tree tree = K2Tree::build(std::max<std::uint32_t>(1, G.start.node_count), ones);
        BitWriter bits;
        tree.write(bits);
        w.put_delta0(bits.bit_size());
        w.append(bits);
    }
    for (Label lab : inc_labels) {
        auto edges = detail::label_edges(G.start, lab);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ones;
        for (std::size_t i = 0; i < edges.size(); ++i)
            for (NodeId v : edges[i]->att)
                ones.push_back({static_cast<std::uint32_t>(i), v - 1});
        std::uint32_t side = std::max<std::uint32_t>(
            1, std::max<std::uint32_t>(static_cast<std::uint32_t>(edges.size()),
                                       G.start.node_count));
        K2Tree tree = K2Tree::build(side, ones);
        BitWriter bits;
        tree.write(bits);
        w.put_delta0(edges.size());
        w.put_delta0(bits.bit_size());
        w.append(bits);
        for (const Edge* e : edges)
            w.put_bits(perm_index.at(detail::att_permutation(e->att)), pw);
    }

    for (std::uint32_t a = 1; a <= nts; ++a) detail::append_rule_edges(w, G.rule(a).rhs);

    w.put_bit(mapping != nullptr);
    if (mapping) {
        w.put_delta0(mapping->empty() ? 0 : mapping->size() - 1);
        for (std::size_t i = 1; i < mapping->size(); ++i) w.put_delta((*mapping)[i]);
    }
    return w.bytes();
}

inline ContainerData read_container(const std::vector<std::uint8_t>& bytes) {
    BitReader r(bytes);
    try {
        for (char c : detail::kMagic)
            if (r.get_byte() != static_cast<std::uint8_t>(c)) throw BadMagicError{};
        if (r.get_byte() != detail::kVersion) throw BadVersionError{};

        ContainerData out;
        SLHRGrammar& G = out.grammar;
        G.start.node_count = static_cast<std::uint32_t>(r.get_delta0());
        std::uint32_t terminals = static_cast<std::uint32_t>(r.get_delta0());
        std::uint32_t nts = static_cast<std::uint32_t>(r.get_delta0());
        std::uint64_t perm_count = r.get_delta0();
        std::uint64_t ext_count = r.get_delta0();
        for (std::uint64_t i = 0; i < ext_count; ++i)
            G.start.ext.push_back(static_cast<NodeId>(r.get_delta()));

        std::vector<std::uint32_t> term_rank(terminals + 1, 0);
        for (std::uint32_t t = 1; t <= terminals; ++t) {
            std::uint64_t len = r.get_delta0();
            std::string name;
            for (std::uint64_t i = 0; i < len; ++i)
                name.push_back(static_cast<char>(r.get_byte()));
            if (out.dict.intern(name) != t)
                throw ContainerError("container: duplicate label name");
            term_rank[t] = static_cast<std::uint32_t>(r.get_delta0());
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> shape(nts);  // rank, internals
        for (auto& [rank, internals] : shape) {
            rank = static_cast<std::uint32_t>(r.get_delta());
            internals = static_cast<std::uint32_t>(r.get_delta0());
        }
        std::vector<std::vector<std::uint32_t>> perms(perm_count);
        for (auto& p : perms) {
            std::uint64_t k = r.get_delta();
            for (std::uint64_t i = 0; i < k; ++i)
                p.push_back(static_cast<std::uint32_t>(r.get_delta() - 1));
        }

        std::vector<Label> adj_labels, inc_labels;
        for (std::uint32_t t = 1; t <= terminals; ++t)
            (term_rank[t] == 2 ? adj_labels : inc_labels).push_back(terminal_label(t));
        for (std::uint32_t a = 1; a <= nts; ++a) inc_labels.push_back(nonterminal_label(a));

        std::uint32_t pw = detail::index_width(perms.size());
        for (Label lab : adj_labels) {
            std::uint64_t bit_count = r.get_delta0();
            K2Tree tree = K2Tree::read(r, std::max<std::uint32_t>(1, G.start.node_count),
                                       bit_count);
            std::vector<std::pair<std::uint32_t, std::uint32_t>> ones;
            tree.all_ones([&](std::uint32_t row, std::uint32_t col) {
                ones.push_back({row, col});
            });
            std::sort(ones.begin(), ones.end());
            for (auto [row, col] : ones)
                G.start.add_edge(lab, {row + 1, col + 1});
        }
        for (Label lab : inc_labels) {
            std::uint64_t m = r.get_delta0();
            std::uint64_t bit_count = r.get_delta0();
            std::uint32_t side = std::max<std::uint32_t>(
                1, std::max<std::uint32_t>(static_cast<std::uint32_t>(m),
                                           G.start.node_count));
            K2Tree tree = K2Tree::read(r, side, bit_count);
            std::vector<std::vector<NodeId>> rows(m);
            for (std::uint64_t i = 0; i < m; ++i) {
                tree.ones_in_row(static_cast<std::uint32_t>(i),
                                 [&](std::uint32_t c) { rows[i].push_back(c + 1); });
                std::sort(rows[i].begin(), rows[i].end());
            }
            for (std::uint64_t i = 0; i < m; ++i) {
                std::uint64_t idx = r.get_bits(pw);
                if (idx >= perms.size() || perms[idx].size() != rows[i].size())
                    throw ContainerError("container: bad permutation index");
                std::vector<NodeId> att;
                for (std::uint32_t p : perms[idx]) {
                    if (p >= rows[i].size())
                        throw ContainerError("container: bad permutation index");
                    att.push_back(rows[i][p]);
                }
                G.start.add_edge(lab, std::move(att));
            }
        }

        for (std::uint32_t a = 0; a < nts; ++a) {
            Rule rule;
            rule.rhs.node_count = shape[a].first + shape[a].second;
            for (std::uint32_t v = 1; v <= shape[a].first; ++v) rule.rhs.ext.push_back(v);
            detail::read_rule_edges(r, rule.rhs);
            G.rules.push_back(std::move(rule));
        }

        if (r.get_bit()) {
            std::uint64_t n = r.get_delta0();
            out.mapping.assign(1, 0);
            for (std::uint64_t i = 0; i < n; ++i) out.mapping.push_back(r.get_delta());
        }
        return out;
    } catch (const DecodeError&) {
        throw TruncatedError{};
    }
}

}  // namespace grepair

#endif  // GREPAIR_CONTAINER_HPP
