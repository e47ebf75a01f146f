/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_RPQ_HPP
#define GREPAIR_RPQ_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "queries.hpp"

namespace grepair {

/*
 * Regular path queries evaluated on the grammar: the pattern becomes an NFA,
 * the grammar is multiplied with it rule by rule (yielding a compressed
 * representation of every run of the automaton over every path of the
 * derived graph), and the question reduces to reachability.
 */

// Nondeterministic finite automaton with a single initial and a single
// accepting state. An empty transition symbol denotes epsilon.
struct NFA {
    struct Transition {
        std::uint32_t from = 0;
        std::string symbol;  // empty = epsilon
        std::uint32_t to = 0;
    };

    std::uint32_t states = 0;
    std::uint32_t initial = 0;
    std::uint32_t accept = 0;
    std::vector<Transition> transitions;
};

class RegexParseError : public std::invalid_argument {
public:
    RegexParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position(position) {}

    std::size_t position;
};

/*
 * Thompson construction over patterns with juxtaposition, '|', '*', '+',
 * '?', and parentheses. A symbol is any single character outside the
 * operator set, or a multi-character name in angle brackets ("<knows>").
 * The state count is linear in the pattern length; every fragment has one
 * entry and one exit state.
 */
inline NFA regex_to_nfa(const std::string& pattern) {
    NFA nfa;
    auto state = [&] { return nfa.states++; };
    auto eps = [&](std::uint32_t a, std::uint32_t b) {
        nfa.transitions.push_back({a, std::string(), b});
    };
    struct Frag {
        std::uint32_t s = 0, e = 0;
    };
    auto symbol_frag = [&](std::string sym) {
        Frag f{state(), state()};
        nfa.transitions.push_back({f.s, std::move(sym), f.e});
        return f;
    };

    std::size_t pos = 0;
    std::function<Frag()> alternation = [&]() -> Frag {
        auto atom = [&]() -> Frag {
            if (pos >= pattern.size())
                throw RegexParseError("unexpected end of pattern", pos);
            char c = pattern[pos];
            if (c == '(') {
                ++pos;
                Frag f = alternation();
                if (pos >= pattern.size() || pattern[pos] != ')')
                    throw RegexParseError("missing ')'", pos);
                ++pos;
                return f;
            }
            if (c == '<') {
                std::size_t close = pattern.find('>', pos + 1);
                if (close == std::string::npos)
                    throw RegexParseError("missing '>'", pos);
                if (close == pos + 1) throw RegexParseError("empty symbol name", pos);
                Frag f = symbol_frag(pattern.substr(pos + 1, close - pos - 1));
                pos = close + 1;
                return f;
            }
            if (c == ')' || c == '|' || c == '*' || c == '+' || c == '?' || c == '>')
                throw RegexParseError(std::string("unexpected '") + c + "'", pos);
            ++pos;
            return symbol_frag(std::string(1, c));
        };
        auto postfix = [&]() -> Frag {
            Frag f = atom();
            while (pos < pattern.size()) {
                char c = pattern[pos];
                if (c != '*' && c != '+' && c != '?') break;
                ++pos;
                Frag wrap{state(), state()};
                eps(wrap.s, f.s);
                eps(f.e, wrap.e);
                if (c == '*' || c == '?') eps(wrap.s, wrap.e);
                if (c == '*' || c == '+') eps(f.e, f.s);
                f = wrap;
            }
            return f;
        };
        auto concat = [&]() -> Frag {
            if (pos >= pattern.size() || pattern[pos] == ')' || pattern[pos] == '|') {
                std::uint32_t s = state();
                return {s, s};  // empty word
            }
            Frag f = postfix();
            while (pos < pattern.size() && pattern[pos] != ')' && pattern[pos] != '|') {
                Frag g = postfix();
                eps(f.e, g.s);
                f.e = g.e;
            }
            return f;
        };
        Frag f = concat();
        if (pos < pattern.size() && pattern[pos] == '|') {
            Frag join{state(), state()};
            eps(join.s, f.s);
            eps(f.e, join.e);
            while (pos < pattern.size() && pattern[pos] == '|') {
                ++pos;
                Frag g = concat();
                eps(join.s, g.s);
                eps(g.e, join.e);
            }
            f = join;
        }
        return f;
    };

    Frag top = alternation();
    if (pos != pattern.size())
        throw RegexParseError(std::string("unexpected '") + pattern[pos] + "'", pos);
    nfa.initial = top.s;
    nfa.accept = top.e;
    return nfa;
}

/*
 * Grammar of the product of the derived graph's transition system with the
 * automaton. Node (v, q) of a right-hand side with n states gets the local
 * id (v-1)*n + q + 1, so the derived product graph numbers node (x, q) of
 * the flat product exactly (x-1)*n + q + 1. External and nonterminal
 * attachment sequences expand state-major ("first all attachment nodes in
 * state 0, then in state 1, ..."); derivation orders are copied from the
 * input explicitly so both grammars expand instances in lockstep. Epsilon
 * transitions become rank-2 edges with the reserved terminal label on every
 * node; automaton symbols are matched to edge labels through the
 * dictionary, and unknown symbols simply never match.
 */
inline SLHRGrammar product_grammar(const SLHRGrammar& G, const NFA& nfa,
                                   const LabelDictionary& dict) {
    if (nfa.states == 0) throw std::invalid_argument("product_grammar: empty automaton");
    std::uint32_t n = nfa.states;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> sigma;  // label, q, p
    std::vector<std::pair<std::uint32_t, std::uint32_t>> eps;
    for (const NFA::Transition& t : nfa.transitions) {
        if (t.symbol.empty()) {
            eps.push_back({t.from, t.to});
        } else {
            std::uint32_t lab = dict.find(t.symbol);
            if (lab != 0) sigma.push_back({lab, t.from, t.to});
        }
    }
    auto node = [n](NodeId v, std::uint32_t q) {
        return static_cast<NodeId>((static_cast<std::uint64_t>(v) - 1) * n + q + 1);
    };

    auto build = [&](const Hypergraph& g, const std::vector<EdgeId>& explicit_order,
                     std::vector<EdgeId>& order_out) {
        Hypergraph out;
        out.node_count = g.node_count * n;
        for (std::uint32_t q = 0; q < n; ++q)
            for (NodeId w : g.ext) out.ext.push_back(node(w, q));
        std::vector<EdgeId> nt_map(g.edges.size(), 0);
        for (EdgeId i = 0; i < g.edges.size(); ++i) {
            const Edge& e = g.edges[i];
            if (e.label.kind == LabelKind::terminal) {
                if (e.att.size() != 2)
                    throw std::invalid_argument(
                        "product_grammar: derived graph must be simple "
                        "(terminal edges of rank 2)");
                for (const auto& [lab, q, p] : sigma)
                    if (lab == e.label.id)
                        out.add_edge(e.label, {node(e.att[0], q), node(e.att[1], p)});
            } else {
                std::vector<NodeId> att;
                att.reserve(e.att.size() * n);
                for (std::uint32_t q = 0; q < n; ++q)
                    for (NodeId w : e.att) att.push_back(node(w, q));
                nt_map[i] = out.add_edge(e.label, std::move(att));
            }
        }
        for (NodeId v = 1; v <= g.node_count; ++v)
            for (const auto& [q, p] : eps)
                out.add_edge(terminal_label(kReservedLabelId), {node(v, q), node(v, p)});
        std::vector<EdgeId> order =
            !explicit_order.empty() ? explicit_order : canonical_nt_order(g);
        for (EdgeId e : order) order_out.push_back(nt_map[e]);
        return out;
    };

    SLHRGrammar out;
    out.start = build(G.start, G.start_nt_order, out.start_nt_order);
    out.rules.reserve(G.rules.size());
    for (const Rule& r : G.rules) {
        Rule pr;
        pr.rhs = build(r.rhs, r.nt_order, pr.nt_order);
        out.rules.push_back(std::move(pr));
    }
    return out;
}

// Is there a path from node u to node v of the derived graph whose label
// word matches the pattern? Node ids refer to val(G).
inline bool rpq_pair(const SLHRGrammar& G, const std::string& pattern, std::uint64_t u,
                     std::uint64_t v, const LabelDictionary& dict) {
    NFA nfa = regex_to_nfa(pattern);
    SLHRGrammar prod = product_grammar(G, nfa, dict);
    QueryEngine q(prod);
    std::uint64_t total = q.node_count() / nfa.states;
    if (u == 0 || u > total || v == 0 || v > total)
        throw std::out_of_range("rpq_pair: node id out of range");
    return q.reachable((u - 1) * nfa.states + nfa.initial + 1,
                       (v - 1) * nfa.states + nfa.accept + 1);
}

// Does any pair of nodes of the derived graph satisfy the pattern? One
// bottom-up pass over the product grammar: per rule, the external nodes
// reachable from an initial-state node (P) and those reaching an
// accepting-state node (Q) are propagated into the referencing rules.
inline bool rpq_exists(const SLHRGrammar& G, const std::string& pattern,
                       const LabelDictionary& dict) {
    NFA nfa = regex_to_nfa(pattern);
    SLHRGrammar prod = product_grammar(G, nfa, dict);
    std::vector<SkeletonGraph> sk = all_skeletons(prod);
    std::uint32_t n = nfa.states;

    std::vector<std::set<std::uint32_t>> P(prod.rules.size() + 1), Q(prod.rules.size() + 1);
    bool found = false;
    auto process = [&](const Hypergraph& g, std::set<std::uint32_t>* p_out,
                       std::set<std::uint32_t>* q_out) {
        auto adj = detail::expanded_adjacency(g, sk);
        std::vector<NodeId> sources, targets;
        for (NodeId m = 1; m <= g.node_count; ++m) {
            std::uint32_t state = (m - 1) % n;
            if (state == nfa.initial) sources.push_back(m);
            if (state == nfa.accept) targets.push_back(m);
        }
        for (EdgeId ei : nt_edges_of(g)) {
            const Edge& e = g.edges[ei];
            for (std::uint32_t j : P[e.label.id]) sources.push_back(e.att[j]);
            for (std::uint32_t j : Q[e.label.id]) targets.push_back(e.att[j]);
        }
        std::vector<char> U = detail::reach_set(adj, sources);
        std::vector<char> V = detail::reach_set(detail::reversed(adj), targets);
        for (NodeId m = 1; m <= g.node_count; ++m)
            if (U[m] && V[m]) {
                found = true;
                return;
            }
        for (std::uint32_t j = 0; j < g.ext.size(); ++j) {
            if (U[g.ext[j]]) p_out->insert(j);
            if (V[g.ext[j]]) q_out->insert(j);
        }
    };

    std::vector<char> done(prod.rules.size() + 1, 0);
    std::function<void(std::uint32_t)> visit = [&](std::uint32_t a) {
        if (done[a] || found) return;
        done[a] = 1;
        for (EdgeId e : nt_edges_of(prod.rule(a).rhs))
            visit(prod.rule(a).rhs.edges[e].label.id);
        if (!found) process(prod.rule(a).rhs, &P[a], &Q[a]);
    };
    for (std::uint32_t a = 1; a <= prod.nt_count() && !found; ++a) visit(a);
    if (!found) {
        std::set<std::uint32_t> ignored_p, ignored_q;
        process(prod.start, &ignored_p, &ignored_q);
    }
    return found;
}

}  // namespace grepair

#endif  // GREPAIR_RPQ_HPP
