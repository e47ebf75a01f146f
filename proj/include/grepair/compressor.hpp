/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_COMPRESSOR_HPP
#define GREPAIR_COMPRESSOR_HPP

#include <cmath>
#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "grammar.hpp"
#include "hypergraph.hpp"
#include "orders.hpp"

namespace grepair {

/*
 * The main compression loop: repeatedly find a most frequent digram (a
 * connected two-edge pattern with at least one shared node and a nonempty
 * external interface), replace all its recorded non-overlapping occurrences
 * by fresh nonterminal edges, and append the digram body as a rule. A
 * derivation shadow tracks the original identity of every internalized node,
 * so the emitted grammar comes with an exact val-node -> input-node mapping.
 */

enum class OrderKind { natural, bfs, fixpoint };

struct CompressorConfig {
    std::uint32_t max_rank = 4;
    OrderKind order = OrderKind::natural;
    bool prune = true;
    bool virtual_edge_pass = true;

    static constexpr std::uint32_t unbounded_rank() { return 0x7fffffffu; }
};

/*
 * Canonical digram identity. Local node ids are assigned by first appearance
 * in att(e1)·att(e2); ext holds the locals marked external, ascending (which
 * equals first-appearance order). Of the two possible edge orders the
 * lexicographically smaller signature is canonical, which puts the smaller
 * label first and fixes all residual ties.
 */
struct DigramSignature {
    std::uint8_t kind1 = 0, kind2 = 0;
    std::uint32_t id1 = 0, id2 = 0;
    std::uint32_t r1 = 0;  // rank of the first edge (splits pat)
    std::vector<std::uint32_t> pat;  // local ids of att(e1)·att(e2)
    std::vector<std::uint32_t> ext;  // external locals, ascending

    friend bool operator<(const DigramSignature& a, const DigramSignature& b) {
        return std::tie(a.kind1, a.id1, a.kind2, a.id2, a.r1, a.pat, a.ext) <
               std::tie(b.kind1, b.id1, b.kind2, b.id2, b.r1, b.pat, b.ext);
    }
    friend bool operator==(const DigramSignature& a, const DigramSignature& b) {
        return std::tie(a.kind1, a.id1, a.kind2, a.id2, a.r1, a.pat, a.ext) ==
               std::tie(b.kind1, b.id1, b.kind2, b.id2, b.r1, b.pat, b.ext);
    }

    std::uint32_t rank() const { return static_cast<std::uint32_t>(ext.size()); }
    std::uint32_t local_count() const {
        std::uint32_t m = 0;
        for (std::uint32_t l : pat) m = std::max(m, l);
        return m;
    }

    // The digram body as a rule right-hand side: external nodes first
    // (1..r in ext order), internals after, edges e1 then e2.
    Hypergraph body() const {
        std::uint32_t m = local_count();
        std::vector<NodeId> renum(m + 1, 0);
        NodeId next = 0;
        for (std::uint32_t l : ext) renum[l] = ++next;
        for (std::uint32_t l = 1; l <= m; ++l)
            if (renum[l] == 0) renum[l] = ++next;
        Hypergraph h;
        h.node_count = m;
        for (std::uint32_t i = 0; i < ext.size(); ++i)
            h.ext.push_back(static_cast<NodeId>(i + 1));
        std::vector<NodeId> a1, a2;
        for (std::uint32_t i = 0; i < pat.size(); ++i)
            (i < r1 ? a1 : a2).push_back(renum[pat[i]]);
        h.add_edge(Label{id1, static_cast<LabelKind>(kind1)}, std::move(a1));
        h.add_edge(Label{id2, static_cast<LabelKind>(kind2)}, std::move(a2));
        return h;
    }
};

struct CompressStats {
    std::uint64_t rounds = 0;            // digram replacement rounds
    std::uint64_t replacements = 0;      // occurrences replaced
    std::uint64_t pair_attempts = 0;     // pair-formation attempts (all phases)
    std::uint64_t virtual_edges = 0;     // connector edges added
    std::uint64_t pruned_rules = 0;      // nonterminals inlined away
};

struct CompressResult {
    SLHRGrammar grammar;
    // val(grammar) node id -> original node id (1-based; index 0 unused)
    std::vector<std::uint64_t> node_mapping;
    CompressStats stats;
};

/*
 * Incremental compression state over a working graph that keeps the input's
 * original node ids throughout. Exposed stepwise for tests; use compress()
 * for the full pipeline.
 */
class Compressor {
public:
    using Slot = std::uint32_t;  // stable edge handle in the working graph

    Compressor(const Hypergraph& g, const CompressorConfig& cfg)
        : cfg_(cfg), input_ext_(g.ext.begin(), g.ext.end()) {
        node_count_ = g.node_count;
        inc_.assign(node_count_ + 1, {});
        for (const Edge& e : g.edges) add_work_edge(e.label, e.att);
        initial_edges_ = static_cast<std::uint32_t>(edges_.size());
        bucket_cap_ = std::max<std::uint32_t>(
            2, static_cast<std::uint32_t>(
                   std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(
                       1, edges_.size()))))));
        buckets_.assign(bucket_cap_ + 1, {});
        internalized_.assign(node_count_ + 1, 0);
    }

    // --- stepwise interface -------------------------------------------------

    // Initial greedy occurrence counting along the node order.
    void count_occurrences(const std::vector<NodeId>& perm) {
        std::vector<NodeId> order(node_count_);
        for (NodeId v = 1; v <= node_count_; ++v) order[perm[v] - 1] = v;
        for (NodeId v : order) visit_node_for_counting(v);
    }

    bool has_active_digram() const {
        for (std::uint32_t b = bucket_cap_; b >= 2; --b)
            if (!buckets_[b].empty()) return true;
        return false;
    }

    // Most frequent active digram; ties by canonical signature order.
    DigramSignature most_frequent() const {
        for (std::uint32_t b = bucket_cap_; b >= 2; --b) {
            if (buckets_[b].empty()) continue;
            if (b < bucket_cap_) return *buckets_[b].begin();
            // top bucket holds every frequency >= cap: scan linearly
            const DigramSignature* best = nullptr;
            std::size_t best_freq = 0;
            for (const DigramSignature& sig : buckets_[b]) {
                std::size_t f = digrams_.at(sig).occs.size();
                if (f > best_freq) {
                    best = &sig;
                    best_freq = f;
                }
            }
            return *best;
        }
        throw std::logic_error("most_frequent: no active digram");
    }

    // One full round: replace every live occurrence of the given digram.
    void replace_digram(const DigramSignature& sig) {
        DigramInfo& info = digrams_.at(sig);
        bucket_remove(sig, info);
        info.in_flight = true;

        // the rule is appended on the first actual replacement: occurrences
        // may all be dropped by the externality re-check below
        std::uint32_t rule_id = static_cast<std::uint32_t>(rules_.size()) + 1;
        bool rule_created = false;

        while (!info.occs.empty()) {
            auto it = info.occs.begin();
            Occurrence occ = *it;

            // externality can only have shrunk since the occurrence formed;
            // if it no longer matches the digram, drop the occurrence
            if (current_ext_locals(occ) != sig.ext) {
                kill_occurrence(sig, it);
                process_repair_queue();
                continue;
            }

            // attachment nodes in rhs-ext order; removal nodes ascend after
            std::vector<NodeId> att;
            for (std::uint32_t l : sig.ext) att.push_back(occ.host[l]);
            std::vector<std::uint64_t> internal_origin;
            {
                std::set<std::uint32_t> ext_set(sig.ext.begin(), sig.ext.end());
                for (std::uint32_t l = 1; l < occ.host.size(); ++l)
                    if (!ext_set.count(l)) internal_origin.push_back(occ.host[l]);
            }

            if (!rule_created) {
                Rule rule;
                rule.rhs = sig.body();
                rules_.push_back(std::move(rule));
                rule_created = true;
                ++stats_.rounds;
            }

            Slot s1 = occ.s1, s2 = occ.s2;
            auto inst = std::make_unique<ShadowInstance>();
            inst->nt = rule_id;
            inst->internal_origin = std::move(internal_origin);
            if (auto n = shadow_.find(s1); n != shadow_.end()) {
                inst->children.emplace(0, std::move(n->second));
                shadow_.erase(n);
            }
            if (auto n = shadow_.find(s2); n != shadow_.end()) {
                inst->children.emplace(1, std::move(n->second));
                shadow_.erase(n);
            }

            // killing every occurrence on s1/s2 also removes `occ` itself
            kill_all_occurrences_of_edge(s1);
            kill_all_occurrences_of_edge(s2);
            for (std::uint64_t orig : inst->internal_origin)
                internalized_[orig] = 1;
            remove_work_edge(s1);
            remove_work_edge(s2);

            Slot sa = add_work_edge(nonterminal_label(rule_id), att);
            shadow_.emplace(sa, std::move(inst));
            repair_queue_.push_back(sa);
            ++stats_.replacements;
            process_repair_queue();
        }
        info.in_flight = false;
    }

    void replace_most_frequent() { replace_digram(most_frequent()); }

    // --- introspection ------------------------------------------------------

    // canonical signature the two edges would form right now (if any)
    std::optional<DigramSignature> pair_signature(Slot a, Slot b) {
        auto made = make_occurrence(a, b);
        if (!made) return std::nullopt;
        return made->first;
    }

    // full probe: signature, replacement attachment, and edge alignment
    struct PairProbe {
        DigramSignature sig;
        std::vector<NodeId> att;  // attachment nodes of the replacement edge
        bool first_is_a = true;   // slot a aligned with the signature's e1
    };
    std::optional<PairProbe> pair_probe(Slot a, Slot b) {
        auto made = make_occurrence(a, b);
        if (!made) return std::nullopt;
        PairProbe probe;
        for (std::uint32_t l : made->first.ext)
            probe.att.push_back(made->second.host[l]);
        probe.first_is_a = made->second.s1 == a;
        probe.sig = std::move(made->first);
        return probe;
    }

    std::size_t frequency(const DigramSignature& sig) const {
        auto it = digrams_.find(sig);
        return it == digrams_.end() ? 0 : it->second.occs.size();
    }

    std::map<DigramSignature, std::size_t> frequencies() const {
        std::map<DigramSignature, std::size_t> out;
        for (const auto& [sig, info] : digrams_)
            if (!info.occs.empty()) out[sig] = info.occs.size();
        return out;
    }

    // The current working graph over original node ids (live edges, in slot
    // order); dead node ids remain as isolated placeholders.
    Hypergraph materialize() const {
        Hypergraph g;
        g.node_count = node_count_;
        for (Slot s = 0; s < edges_.size(); ++s)
            if (edges_[s]) g.add_edge(edges_[s]->label, edges_[s]->att);
        for (NodeId v : input_ext_) g.ext.push_back(v);
        return g;
    }

    const CompressStats& stats() const { return stats_; }
    std::size_t rule_count() const { return rules_.size(); }

    // --- finalization -------------------------------------------------------

    /*
     * Produces the grammar with dense node/edge ids, plus the derivation
     * shadow and start-node origin table for mapping computation. Start
     * nodes are the never-internalized originals, renumbered ascending.
     */
    void finalize(SLHRGrammar& G, DerivationShadow& shadow,
                  std::vector<std::uint64_t>& start_origin) const {
        std::vector<NodeId> dense(node_count_ + 1, 0);
        start_origin.assign(1, 0);
        NodeId next = 0;
        for (NodeId v = 1; v <= node_count_; ++v)
            if (!internalized_[v]) {
                dense[v] = ++next;
                start_origin.push_back(v);
            }
        G = SLHRGrammar{};
        G.start.node_count = next;
        std::map<Slot, EdgeId> edge_remap;
        for (Slot s = 0; s < edges_.size(); ++s) {
            if (!edges_[s]) continue;
            std::vector<NodeId> att;
            for (NodeId v : edges_[s]->att) att.push_back(dense[v]);
            edge_remap[s] = G.start.add_edge(edges_[s]->label, std::move(att));
        }
        for (NodeId v : input_ext_) G.start.ext.push_back(dense[v]);
        G.rules = rules_;
        shadow.top.clear();
        for (const auto& [s, inst] : shadow_)
            shadow.top.emplace(edge_remap.at(s), clone(*inst));
    }

    // weakly-connected components over live edges; isolated nodes included
    std::vector<std::vector<NodeId>> components() const {
        std::vector<std::uint32_t> comp(node_count_ + 1, 0);
        std::uint32_t n_comp = 0;
        for (NodeId v = 1; v <= node_count_; ++v) {
            if (comp[v] || internalized_[v]) continue;
            ++n_comp;
            std::vector<NodeId> stack{v};
            comp[v] = n_comp;
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                for (Slot s : inc_[u])
                    for (NodeId w : edges_[s]->att)
                        if (!comp[w]) {
                            comp[w] = n_comp;
                            stack.push_back(w);
                        }
            }
        }
        std::vector<std::vector<NodeId>> out(n_comp);
        for (NodeId v = 1; v <= node_count_; ++v)
            if (comp[v]) out[comp[v] - 1].push_back(v);
        return out;
    }

    // adds a reserved-label connector edge (virtual pass)
    Slot add_virtual_edge(NodeId a, NodeId b) {
        ++stats_.virtual_edges;
        return add_work_edge(terminal_label(kReservedLabelId), {a, b});
    }

    // re-runs pairing for every occurrence-free live edge (virtual pass)
    void reseed_pairing() {
        for (Slot s = 0; s < edges_.size(); ++s)
            if (edges_[s] && occ_count_[s] == 0) repair_queue_.push_back(s);
        process_repair_queue();
    }

    CompressStats& stats_mutable() { return stats_; }

private:
    struct WEdge {
        Label label;
        std::vector<NodeId> att;
        std::uint32_t rank() const { return static_cast<std::uint32_t>(att.size()); }
    };

    struct Occurrence {
        Slot s1 = 0, s2 = 0;             // aligned with the signature's e1, e2
        std::vector<NodeId> host;        // local id -> original node (1-based)
    };

    struct DigramInfo {
        std::list<Occurrence> occs;
        std::set<Slot> members;          // edges currently in some occurrence here
        std::uint32_t bucket = 0;        // 0 = not enqueued
        bool in_flight = false;
    };

    // --- working graph ------------------------------------------------------

    Slot add_work_edge(Label label, std::vector<NodeId> att) {
        Slot s = static_cast<Slot>(edges_.size());
        for (NodeId v : att) inc_[v].insert(s);
        edges_.push_back(WEdge{label, std::move(att)});
        occ_count_.push_back(0);
        avail_add(s);  // avail indexes every live edge by (node, label)
        return s;
    }

    void remove_work_edge(Slot s) {
        avail_remove(s);
        for (NodeId v : edges_[s]->att) inc_[v].erase(s);
        edges_[s].reset();
    }

    bool node_external_now(NodeId v, Slot s1, Slot s2) const {
        if (input_ext_.count(v)) return true;
        for (Slot s : inc_[v])
            if (s != s1 && s != s2) return true;
        return false;
    }

    // --- signatures ---------------------------------------------------------

    // builds the signature for the fixed order (a, b); ext from predicate
    template <class ExtPred>
    DigramSignature oriented_signature(Slot a, Slot b, const ExtPred& is_ext,
                                       std::vector<NodeId>* host_out) const {
        const WEdge& ea = *edges_[a];
        const WEdge& eb = *edges_[b];
        DigramSignature sig;
        sig.kind1 = static_cast<std::uint8_t>(ea.label.kind);
        sig.id1 = ea.label.id;
        sig.kind2 = static_cast<std::uint8_t>(eb.label.kind);
        sig.id2 = eb.label.id;
        sig.r1 = ea.rank();
        std::map<NodeId, std::uint32_t> local;
        std::vector<NodeId> host{0};  // 1-based local -> original node
        auto local_of = [&](NodeId v) {
            auto it = local.find(v);
            if (it != local.end()) return it->second;
            std::uint32_t l = static_cast<std::uint32_t>(host.size());
            local.emplace(v, l);
            host.push_back(v);
            return l;
        };
        for (NodeId v : ea.att) sig.pat.push_back(local_of(v));
        for (NodeId v : eb.att) sig.pat.push_back(local_of(v));
        for (std::uint32_t l = 1; l < host.size(); ++l)
            if (is_ext(host[l])) sig.ext.push_back(l);
        if (host_out) *host_out = std::move(host);
        return sig;
    }

    // canonical signature + aligned occurrence; nullopt if not a usable digram
    std::optional<std::pair<DigramSignature, Occurrence>> make_occurrence(Slot a,
                                                                          Slot b) {
        ++stats_.pair_attempts;
        if (a == b || !edges_[a] || !edges_[b]) return std::nullopt;
        bool shared = false;
        for (NodeId v : edges_[a]->att)
            for (NodeId w : edges_[b]->att)
                if (v == w) shared = true;
        if (!shared) return std::nullopt;
        auto is_ext = [&](NodeId v) { return node_external_now(v, a, b); };
        std::vector<NodeId> host_ab, host_ba;
        DigramSignature s_ab = oriented_signature(a, b, is_ext, &host_ab);
        DigramSignature s_ba = oriented_signature(b, a, is_ext, &host_ba);
        bool ab_first = s_ab < s_ba || s_ab == s_ba;
        DigramSignature& sig = ab_first ? s_ab : s_ba;
        if (sig.ext.empty()) return std::nullopt;  // interface must be nonempty
        if (sig.rank() > cfg_.max_rank) return std::nullopt;
        Occurrence occ;
        occ.s1 = ab_first ? a : b;
        occ.s2 = ab_first ? b : a;
        occ.host = ab_first ? std::move(host_ab) : std::move(host_ba);
        return std::make_pair(std::move(sig), std::move(occ));
    }

    std::vector<std::uint32_t> current_ext_locals(const Occurrence& occ) const {
        std::vector<std::uint32_t> ext;
        for (std::uint32_t l = 1; l < occ.host.size(); ++l)
            if (node_external_now(occ.host[l], occ.s1, occ.s2)) ext.push_back(l);
        return ext;
    }

    // --- occurrence bookkeeping --------------------------------------------

    void bucket_remove(const DigramSignature& sig, DigramInfo& info) {
        if (info.bucket) {
            buckets_[info.bucket].erase(sig);
            info.bucket = 0;
        }
    }

    void bucket_update(const DigramSignature& sig, DigramInfo& info) {
        std::uint32_t want =
            info.in_flight || info.occs.size() < 2
                ? 0
                : std::min<std::uint32_t>(
                      static_cast<std::uint32_t>(info.occs.size()), bucket_cap_);
        if (want == info.bucket) return;
        if (info.bucket) buckets_[info.bucket].erase(sig);
        if (want) buckets_[want].insert(sig);
        info.bucket = want;
    }

    void register_occurrence(const DigramSignature& sig, Occurrence occ) {
        DigramInfo& info = digrams_[sig];
        Slot s1 = occ.s1, s2 = occ.s2;
        info.occs.push_back(std::move(occ));
        auto it = std::prev(info.occs.end());
        info.members.insert(s1);
        info.members.insert(s2);
        back_refs_[s1].push_back({sig, it});
        back_refs_[s2].push_back({sig, it});
        ++occ_count_[s1];
        ++occ_count_[s2];
        bucket_update(sig, info);
    }

    void kill_occurrence(const DigramSignature& sig,
                         std::list<Occurrence>::iterator it) {
        DigramInfo& info = digrams_.at(sig);
        Slot s1 = it->s1, s2 = it->s2;
        info.members.erase(s1);
        info.members.erase(s2);
        erase_back_ref(s1, it);
        erase_back_ref(s2, it);
        info.occs.erase(it);
        bucket_update(sig, info);
        release_edge(s1);
        release_edge(s2);
    }

    void release_edge(Slot s) {
        if (--occ_count_[s] == 0 && edges_[s]) repair_queue_.push_back(s);
    }

    void erase_back_ref(Slot s, std::list<Occurrence>::iterator it) {
        auto& v = back_refs_[s];
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i].second == it) {
                v.erase(v.begin() + i);
                return;
            }
    }

    void kill_all_occurrences_of_edge(Slot s) {
        while (!back_refs_[s].empty()) {
            auto [sig, it] = back_refs_[s].back();
            kill_occurrence(sig, it);
        }
    }

    // --- availability & re-pairing -----------------------------------------

    void avail_add(Slot s) {
        if (!edges_[s]) return;
        for (NodeId v : edges_[s]->att) avail_[{v, edges_[s]->label}].insert(s);
    }

    void avail_remove(Slot s) {
        if (!edges_[s]) return;
        for (NodeId v : edges_[s]->att) {
            auto it = avail_.find({v, edges_[s]->label});
            if (it != avail_.end()) {
                it->second.erase(s);
                if (it->second.empty()) avail_.erase(it);
            }
        }
    }

    /*
     * Attempts to pair an edge with one available partner per (attachment
     * node, label) class — success or not, each class costs one attempt,
     * which keeps same-label stars linear overall. An edge may end up in
     * occurrences of several digrams (at most one per digram), matching the
     * counting phase's sharing rule.
     */
    void try_pair(Slot e) {
        if (!edges_[e]) return;
        for (NodeId v : edges_[e]->att) {
            // snapshot the label classes present at v to avoid iterator churn
            std::vector<Label> labels;
            for (auto it = avail_.lower_bound({v, Label{0, LabelKind::terminal}});
                 it != avail_.end() && it->first.first == v; ++it)
                labels.push_back(it->first.second);
            for (const Label& lab : labels) {
                auto it = avail_.find({v, lab});
                if (it == avail_.end()) continue;
                Slot partner = static_cast<Slot>(-1);
                for (Slot c : it->second)
                    if (c != e) {
                        partner = c;
                        break;
                    }
                if (partner == static_cast<Slot>(-1)) continue;
                offer_pair(e, partner);
            }
        }
    }

    void process_repair_queue() {
        while (!repair_queue_.empty()) {
            Slot s = repair_queue_.front();
            repair_queue_.pop_front();
            try_pair(s);
        }
    }

    // --- initial counting ---------------------------------------------------

    void visit_node_for_counting(NodeId v) {
        // group incident edges by label, in slot order
        std::map<Label, std::vector<Slot>> groups;
        for (Slot s : inc_[v]) groups[edges_[s]->label].push_back(s);
        std::vector<Label> labels;
        for (auto& [lab, g] : groups) labels.push_back(lab);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            // same-label halving: consecutive pairing within the class
            {
                const auto& g = groups[labels[i]];
                for (std::size_t k = 0; k + 1 < g.size(); k += 2)
                    offer_pair(g[k], g[k + 1]);
            }
            // distinct labels: i-th edge of one class with i-th of the other
            for (std::size_t j = i + 1; j < labels.size(); ++j) {
                const auto& ga = groups[labels[i]];
                const auto& gb = groups[labels[j]];
                for (std::size_t k = 0; k < ga.size() && k < gb.size(); ++k)
                    offer_pair(ga[k], gb[k]);
            }
        }
    }

    // counting-phase pair offer: an edge may join occurrences of several
    // digrams but at most one occurrence per digram
    void offer_pair(Slot a, Slot b) {
        auto made = make_occurrence(a, b);
        if (!made) return;
        DigramInfo& info = digrams_[made->first];
        if (info.members.count(a) || info.members.count(b)) return;
        register_occurrence(made->first, std::move(made->second));
    }

    static std::unique_ptr<ShadowInstance> clone(const ShadowInstance& inst) {
        auto out = std::make_unique<ShadowInstance>();
        out->nt = inst.nt;
        out->internal_origin = inst.internal_origin;
        for (const auto& [ei, child] : inst.children)
            out->children.emplace(ei, clone(*child));
        return out;
    }

    CompressorConfig cfg_;
    std::uint32_t node_count_ = 0;
    std::uint32_t initial_edges_ = 0;
    std::set<NodeId> input_ext_;
    std::vector<std::optional<WEdge>> edges_;
    std::vector<std::uint32_t> occ_count_;
    std::vector<std::set<Slot>> inc_;
    std::vector<char> internalized_;
    std::vector<Rule> rules_;
    std::map<Slot, std::unique_ptr<ShadowInstance>> shadow_;
    std::map<DigramSignature, DigramInfo> digrams_;
    std::map<Slot, std::vector<std::pair<DigramSignature, std::list<Occurrence>::iterator>>>
        back_refs_;
    std::map<std::pair<NodeId, Label>, std::set<Slot>> avail_;
    std::deque<Slot> repair_queue_;
    std::vector<std::set<DigramSignature>> buckets_;
    std::uint32_t bucket_cap_ = 2;
    CompressStats stats_;
};

// Pruning: inline every nonterminal referenced once, then sweep bottom-up
// inlining nonterminals whose contribution is <= 0, recomputing as rules
// disappear. val is preserved (exactly, via the shadow when supplied).
inline SLHRGrammar prune(SLHRGrammar G, DerivationShadow* shadow = nullptr,
                         std::vector<std::uint64_t>* start_origin = nullptr,
                         std::uint64_t* pruned = nullptr) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t a = 1; a <= G.nt_count(); ++a)
            if (reference_count(G, a) <= 1) {
                G = inline_nonterminal(G, a, shadow, start_origin);
                if (pruned) ++*pruned;
                changed = true;
                break;
            }
    }
    changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t a = 1; a <= G.nt_count(); ++a)
            if (contribution(G, a) <= 0) {
                G = inline_nonterminal(G, a, shadow, start_origin);
                if (pruned) ++*pruned;
                changed = true;
                break;
            }
    }
    return G;
}

inline NodeOrder make_order(const Hypergraph& g, OrderKind kind) {
    switch (kind) {
        case OrderKind::bfs:
            return bfs_order(g);
        case OrderKind::fixpoint:
            return fp_order(g);
        default:
            return natural_order(g);
    }
}

/*
 * Full pipeline: order, count, replacement loop; optional virtual-edge pass
 * for disconnected inputs (connector edges join component representatives,
 * the loop reruns, and rules holding connector edges are expanded before the
 * connectors are stripped); pruning; exact node mapping from the shadow.
 */
inline CompressResult compress(const Hypergraph& g, const CompressorConfig& cfg = {}) {
    Compressor comp(g, cfg);
    NodeOrder order = make_order(g, cfg.order);
    comp.count_occurrences(order.perm);
    while (comp.has_active_digram()) comp.replace_most_frequent();

    if (cfg.virtual_edge_pass) {
        auto comps = comp.components();
        if (comps.size() > 1) {
            for (std::size_t i = 0; i + 1 < comps.size(); ++i)
                comp.add_virtual_edge(comps[i].front(), comps[i + 1].front());
            comp.reseed_pairing();
            while (comp.has_active_digram()) comp.replace_most_frequent();
        }
    }

    CompressResult res;
    DerivationShadow shadow;
    std::vector<std::uint64_t> start_origin;
    comp.finalize(res.grammar, shadow, start_origin);
    res.stats = comp.stats();

    if (cfg.virtual_edge_pass) {
        /*
         * Strip connector edges in place, wherever they ended up. Deleting
         * edges never changes a rule's node set, ext, or internal-node ids,
         * so val's node allocation and the shadow's origin tables stay
         * aligned; only edge ids shift, which re-keys shadow children.
         */
        auto is_virtual = [](const Edge& e) {
            return e.label.kind == LabelKind::terminal && e.label.id == kReservedLabelId;
        };
        auto strip = [&](Hypergraph& h) {
            std::vector<EdgeId> keep_map(h.edges.size(), static_cast<EdgeId>(-1));
            Hypergraph out;
            out.node_count = h.node_count;
            out.ext = h.ext;
            for (EdgeId e = 0; e < h.edges.size(); ++e) {
                if (is_virtual(h.edges[e])) continue;
                keep_map[e] = out.add_edge(h.edges[e].label, h.edges[e].att);
            }
            h = std::move(out);
            return keep_map;
        };
        std::vector<std::vector<EdgeId>> rule_keep(res.grammar.rules.size());
        for (std::uint32_t a = 1; a <= res.grammar.nt_count(); ++a)
            rule_keep[a - 1] = strip(res.grammar.rules[a - 1].rhs);
        std::vector<EdgeId> start_keep = strip(res.grammar.start);

        auto rekey = [&](std::map<EdgeId, std::unique_ptr<ShadowInstance>>& children,
                         const std::vector<EdgeId>& keep_map, auto&& self) -> void {
            std::map<EdgeId, std::unique_ptr<ShadowInstance>> out;
            for (auto& [e, inst] : children) {
                self(inst->children, rule_keep[inst->nt - 1], self);
                out.emplace(keep_map[e], std::move(inst));
            }
            children = std::move(out);
        };
        rekey(shadow.top, start_keep, rekey);
    }

    if (cfg.prune)
        res.grammar =
            prune(std::move(res.grammar), &shadow, &start_origin, &res.stats.pruned_rules);

    res.node_mapping = shadow_node_origins(res.grammar, shadow, start_origin);
    return res;
}

}  // namespace grepair

#endif  // GREPAIR_COMPRESSOR_HPP
