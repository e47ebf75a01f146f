// Independent reference implementations used to pin down expected values.
// Deliberately naive: correctness over speed.

#ifndef GREPAIR_TESTS_ORACLES_HPP
#define GREPAIR_TESTS_ORACLES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "grepair/compressor.hpp"
#include "grepair/generators.hpp"
#include "grepair/hypergraph.hpp"

namespace grepair::oracles {

// Signature of the two-edge line pattern x·y as it appears inside a string
// graph (both end nodes external, middle node internal).
inline DigramSignature string_digram_signature(Label x, Label y) {
    Hypergraph g;
    g.node_count = 3;
    g.ext = {1, 3};
    g.add_edge(x, {1, 2});
    g.add_edge(y, {2, 3});
    Compressor tmp(g, CompressorConfig{});
    auto sig = tmp.pair_signature(0, 1);
    if (!sig) throw std::logic_error("string digram has no signature");
    return *sig;
}

/*
 * Reference string RePair over a plain symbol list. Pairs are identified by
 * the digram signature their two edges would form inside a string graph
 * (both ends external, middle internal), so mirror-image adjacencies
 * coalesce exactly as they do for graphs. Occurrence lists persist across
 * rounds: initial greedy left-to-right counting, then on every replacement
 * the overlapping occurrences die and the freed symbols re-pair with their
 * immediate neighbors, one attempt per side, at most one occurrence per
 * digram per symbol. Replacement runs in list order until the chosen
 * digram's list drains. Returns the replaced digrams' signatures in order.
 *
 * Canonicalization may attach a replacement edge against the string
 * direction (attachment = (right end, left end)), so every symbol carries
 * an orientation flag that feeds into later signatures.
 */
struct StringSymbol {
    Label label;
    bool forward = true;
};

// signature of the adjacent pair s1·s2, the orientation of its replacement
// symbol (true = replacement runs left-to-right), and whether the left
// symbol aligns with the signature's first edge
struct StringPairProbe {
    DigramSignature sig;
    bool forward = true;
    bool first_is_left = true;
};

inline StringPairProbe string_pair_probe(const StringSymbol& s1, const StringSymbol& s2) {
    Hypergraph g;
    g.node_count = 3;
    g.ext = {1, 3};
    g.add_edge(s1.label, s1.forward ? std::vector<NodeId>{1, 2} : std::vector<NodeId>{2, 1});
    g.add_edge(s2.label, s2.forward ? std::vector<NodeId>{2, 3} : std::vector<NodeId>{3, 2});
    Compressor tmp(g, CompressorConfig{});
    auto probe = tmp.pair_probe(0, 1);
    if (!probe) throw std::logic_error("string pair has no signature");
    return {probe->sig, probe->att == std::vector<NodeId>{1, 3}, probe->first_is_a};
}

inline std::vector<DigramSignature> string_repair_sequence(
    const std::vector<std::uint32_t>& word) {
    struct Sym {
        Label label;
        bool forward = true;
        bool alive = true;
        int prev = -1, next = -1;
    };
    struct Occ {
        int left = 0, right = 0;
        bool forward = true;        // orientation of the replacement symbol
        bool first_is_left = true;  // release order mirrors signature alignment
    };
    struct Info {
        std::list<Occ> occs;
        std::set<int> members;
    };

    std::vector<Sym> syms;
    for (std::size_t i = 0; i < word.size(); ++i)
        syms.push_back({terminal_label(word[i]), true, true,
                        static_cast<int>(i) - 1,
                        i + 1 < word.size() ? static_cast<int>(i) + 1 : -1});

    std::map<DigramSignature, Info> digrams;
    std::map<int, std::vector<std::pair<DigramSignature, std::list<Occ>::iterator>>> refs;
    std::vector<std::uint32_t> occ_count(syms.size(), 0);
    std::deque<int> queue;

    auto offer = [&](int l, int r) {
        StringPairProbe p = string_pair_probe({syms[l].label, syms[l].forward},
                                              {syms[r].label, syms[r].forward});
        Info& info = digrams[p.sig];
        if (info.members.count(l) || info.members.count(r)) return;
        info.occs.push_back({l, r, p.forward, p.first_is_left});
        auto it = std::prev(info.occs.end());
        info.members.insert(l);
        info.members.insert(r);
        refs[l].push_back({p.sig, it});
        refs[r].push_back({p.sig, it});
        ++occ_count[l];
        ++occ_count[r];
    };
    auto release = [&](int s) {
        if (--occ_count[s] == 0 && syms[s].alive) queue.push_back(s);
    };
    auto kill = [&](const DigramSignature& sig, std::list<Occ>::iterator it) {
        Info& info = digrams.at(sig);
        int l = it->left, r = it->right;
        info.members.erase(l);
        info.members.erase(r);
        for (int s : {l, r}) {
            auto& v = refs[s];
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i].second == it) {
                    v.erase(v.begin() + i);
                    break;
                }
        }
        bool lf = it->first_is_left;
        info.occs.erase(it);
        release(lf ? l : r);
        release(lf ? r : l);
    };
    auto kill_all = [&](int s) {
        while (!refs[s].empty()) {
            auto [sig, it] = refs[s].back();
            kill(sig, it);
        }
    };
    auto try_pair = [&](int e) {
        if (!syms[e].alive) return;
        // one attempt per side, in the symbol's physical attachment order
        int first = syms[e].forward ? syms[e].prev : syms[e].next;
        int second = syms[e].forward ? syms[e].next : syms[e].prev;
        for (int nbr : {first, second}) {
            if (nbr < 0) continue;
            int l = (nbr == syms[e].prev) ? nbr : e;
            int r = (nbr == syms[e].prev) ? e : nbr;
            offer(l, r);
        }
    };
    auto drain = [&]() {
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            try_pair(s);
        }
    };

    // initial greedy left-to-right counting
    for (std::size_t i = 0; i + 1 < syms.size(); ++i)
        offer(static_cast<int>(i), static_cast<int>(i) + 1);

    std::vector<DigramSignature> out;
    std::uint32_t next_nt = 0;
    for (;;) {
        const DigramSignature* best = nullptr;
        std::size_t best_count = 0;
        // map order means the first maximum is the smallest signature
        for (const auto& [sig, info] : digrams)
            if (info.occs.size() >= 2 && info.occs.size() > best_count) {
                best = &sig;
                best_count = info.occs.size();
            }
        if (!best) break;
        DigramSignature sig = *best;
        out.push_back(sig);
        Label nt = nonterminal_label(++next_nt);
        Info& info = digrams.at(sig);
        while (!info.occs.empty()) {
            Occ occ = info.occs.front();
            int l = occ.left, r = occ.right;
            kill_all(occ.first_is_left ? l : r);
            kill_all(occ.first_is_left ? r : l);
            int a = static_cast<int>(syms.size());
            syms.push_back({nt, occ.forward, true, syms[l].prev, syms[r].next});
            occ_count.push_back(0);
            syms[l].alive = syms[r].alive = false;
            if (syms[a].prev >= 0) syms[syms[a].prev].next = a;
            if (syms[a].next >= 0) syms[syms[a].next].prev = a;
            queue.push_back(a);
            drain();
        }
    }
    return out;
}

// Random connected-ish simple directed graph (distinct endpoints, no
// duplicate (label, src, dst) triples).
inline Hypergraph random_simple_graph(std::mt19937& rng, std::uint32_t max_nodes,
                                      std::uint32_t max_edges, std::uint32_t labels) {
    std::uint32_t n = 2 + rng() % (max_nodes - 1);
    std::uint32_t m = 1 + rng() % max_edges;
    Hypergraph g;
    g.node_count = n;
    std::set<std::tuple<std::uint32_t, NodeId, NodeId>> seen;
    for (std::uint32_t i = 0; i < m; ++i) {
        NodeId u = 1 + rng() % n, v = 1 + rng() % n;
        if (u == v) continue;
        std::uint32_t lab = 1 + rng() % labels;
        if (!seen.insert({lab, u, v}).second) continue;
        g.add_edge(terminal_label(lab), {u, v});
    }
    return g;
}

/*
 * Maximum non-overlapping occurrence count for one digram: vertices are the
 * host edges, candidate occurrences are the conflict-graph edges; a maximum
 * matching is computed by bitmask dynamic programming (host edge count <= 20).
 */
inline std::size_t max_matching(std::size_t n_edges,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    if (n_edges > 20) throw std::invalid_argument("max_matching: too many edges");
    std::vector<int> dp(1u << n_edges, -1);
    dp[0] = 0;
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n_edges); ++mask) {
        if (dp[mask] < 0) continue;
        best = std::max(best, dp[mask]);
        for (const auto& [x, y] : pairs) {
            if (mask & (1u << x) || mask & (1u << y)) continue;
            std::uint32_t nm = mask | (1u << x) | (1u << y);
            dp[nm] = std::max(dp[nm], dp[mask] + 1);
        }
    }
    return static_cast<std::size_t>(best);
}

// All candidate pairs of host edges instantiating the given digram signature
// (computed through the compressor's own canonicalization, so both sides
// agree on identity).
inline std::vector<std::pair<std::size_t, std::size_t>> digram_pairs(
    const Hypergraph& g, const DigramSignature& sig, const CompressorConfig& cfg) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < g.edges.size(); ++a)
        for (std::size_t b = a + 1; b < g.edges.size(); ++b) {
            Compressor tmp(g, cfg);
            auto s = tmp.pair_signature(static_cast<std::uint32_t>(a),
                                        static_cast<std::uint32_t>(b));
            if (s && *s == sig) out.push_back({a, b});
        }
    return out;
}

// Applies a val-id -> original-id mapping and compares against the input.
inline bool roundtrip_exact(const Hypergraph& input, const CompressResult& res) {
    Hypergraph v = val(res.grammar);
    if (v.node_count != input.node_count) return false;
    if (res.node_mapping.size() != v.node_count + 1) return false;
    std::vector<char> seen(input.node_count + 1, 0);
    for (NodeId i = 1; i <= v.node_count; ++i) {
        std::uint64_t o = res.node_mapping[i];
        if (o < 1 || o > input.node_count || seen[o]) return false;
        seen[o] = 1;
    }
    Hypergraph renamed;
    renamed.node_count = input.node_count;
    for (const Edge& e : v.edges) {
        std::vector<NodeId> att;
        for (NodeId x : e.att) att.push_back(static_cast<NodeId>(res.node_mapping[x]));
        renamed.add_edge(e.label, std::move(att));
    }
    for (NodeId x : v.ext) renamed.ext.push_back(static_cast<NodeId>(res.node_mapping[x]));
    return equal_graphs(renamed, input);
}

}  // namespace grepair::oracles

#endif  // GREPAIR_TESTS_ORACLES_HPP
