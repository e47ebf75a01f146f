/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_GRAMMAR_HPP
#define GREPAIR_GRAMMAR_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypergraph.hpp"

namespace grepair {

/*
 * Straight-line hyperedge-replacement grammars.
 *
 * Nonterminal i (1-based) owns exactly rules[i-1]; its rank is the length of
 * the rule's external sequence. Derivation replaces nonterminal edges in
 * pre-order of the derivation tree; within one right-hand side, siblings are
 * expanded in the canonical order (attachment lexicographic, then label,
 * then insertion id), unless an explicit order was recorded by a
 * transformation that must preserve the derived node numbering.
 */

struct Rule {
    Hypergraph rhs;
    // Explicit expansion order over the nonterminal edges of rhs; empty means
    // "use the canonical sibling order".
    std::vector<EdgeId> nt_order;

    std::uint32_t rank() const { return static_cast<std::uint32_t>(rhs.ext.size()); }
};

struct SLHRGrammar {
    Hypergraph start;
    std::vector<EdgeId> start_nt_order;  // optional, as in Rule::nt_order
    std::vector<Rule> rules;             // nonterminal id -> rules[id - 1]

    std::uint32_t nt_count() const { return static_cast<std::uint32_t>(rules.size()); }
    const Rule& rule(std::uint32_t nt) const { return rules.at(nt - 1); }
    std::uint32_t nt_rank(std::uint32_t nt) const { return rules.at(nt - 1).rank(); }
};

inline std::vector<EdgeId> nt_edges_of(const Hypergraph& g) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].label.kind == LabelKind::nonterminal) out.push_back(e);
    return out;
}

/*
 * Canonical sibling order of the nonterminal edges of a right-hand side:
 * sorted by local attachment sequence (lexicographic), then label id, then
 * insertion id. Instance-independent by construction, so every occurrence of
 * a rule expands its children identically.
 */
inline std::vector<EdgeId> canonical_nt_order(const Hypergraph& g) {
    std::vector<EdgeId> order = nt_edges_of(g);
    std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        if (g.edges[a].att != g.edges[b].att) return g.edges[a].att < g.edges[b].att;
        if (g.edges[a].label.id != g.edges[b].label.id)
            return g.edges[a].label.id < g.edges[b].label.id;
        return a < b;
    });
    return order;
}

// Straight-line validation: acyclic nonterminal dependencies, one rule per
// nonterminal (structural), all rules reachable, rank consistency, valid rhs.
inline std::vector<std::string> validate_straight_line(const SLHRGrammar& G) {
    std::vector<std::string> out;
    auto check_graph = [&](const Hypergraph& g, const std::string& where) {
        for (const std::string& v : validate(g)) out.push_back(where + ": " + v);
        for (const Edge& e : g.edges) {
            if (e.label.kind != LabelKind::nonterminal) continue;
            if (e.label.id == 0 || e.label.id > G.rules.size())
                out.push_back(where + ": unknown nonterminal " + std::to_string(e.label.id));
            else if (e.rank() != G.nt_rank(e.label.id))
                out.push_back(where + ": nonterminal " + std::to_string(e.label.id) +
                              " used with rank " + std::to_string(e.rank()) + ", declared " +
                              std::to_string(G.nt_rank(e.label.id)));
        }
    };
    check_graph(G.start, "start");
    for (std::uint32_t a = 1; a <= G.rules.size(); ++a)
        check_graph(G.rule(a).rhs, "rule " + std::to_string(a));

    // acyclicity of the reference relation, plus reachability from the start
    std::vector<std::set<std::uint32_t>> refs(G.rules.size() + 1);
    for (std::uint32_t a = 1; a <= G.rules.size(); ++a)
        for (EdgeId e : nt_edges_of(G.rule(a).rhs)) {
            std::uint32_t b = G.rule(a).rhs.edges[e].label.id;
            if (b >= 1 && b <= G.rules.size()) refs[a].insert(b);
        }
    std::vector<int> state(G.rules.size() + 1, 0);  // 0 new, 1 active, 2 done
    std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t a) {
        if (state[a] == 1) return false;
        if (state[a] == 2) return true;
        state[a] = 1;
        for (std::uint32_t b : refs[a])
            if (!dfs(b)) return false;
        state[a] = 2;
        return true;
    };
    for (std::uint32_t a = 1; a <= G.rules.size(); ++a)
        if (!dfs(a)) {
            out.push_back("nonterminal dependency cycle through " + std::to_string(a));
            break;
        }

    std::vector<char> reachable(G.rules.size() + 1, 0);
    std::vector<std::uint32_t> stack;
    for (EdgeId e : nt_edges_of(G.start)) {
        std::uint32_t b = G.start.edges[e].label.id;
        if (b >= 1 && b <= G.rules.size() && !reachable[b]) {
            reachable[b] = 1;
            stack.push_back(b);
        }
    }
    while (!stack.empty()) {
        std::uint32_t a = stack.back();
        stack.pop_back();
        for (std::uint32_t b : refs[a])
            if (!reachable[b]) {
                reachable[b] = 1;
                stack.push_back(b);
            }
    }
    for (std::uint32_t a = 1; a <= G.rules.size(); ++a)
        if (!reachable[a])
            out.push_back("rule " + std::to_string(a) + " is useless (never referenced)");
    return out;
}

/*
 * Replacement g[e/h]: edge e is removed, h's external nodes merge onto
 * att(e) positionally, and h's internal nodes are appended as fresh ids
 * n+1..n+m in ascending original order. h's edges are appended in order.
 *
 * A repeated entry in ext(h) fuses the corresponding attachment nodes of the
 * host; the node at the first occurrence's position survives. The result is
 * compacted to dense ids (ascending over survivors).
 */
struct ReplaceInfo {
    std::vector<NodeId> node_map;      // h node -> result node (index 1..)
    std::vector<EdgeId> new_edge_ids;  // h edge order -> result edge id
    std::vector<NodeId> host_node_map; // g node -> result node (0 = fused away target redirect)
    std::uint32_t internal_base = 0;   // first fresh id before compaction
};

inline Hypergraph replace_edge(const Hypergraph& g, EdgeId e, const Hypergraph& h,
                               ReplaceInfo* info = nullptr) {
    if (e >= g.edges.size()) throw std::invalid_argument("replace_edge: no such edge");
    const Edge& target = g.edges[e];
    if (target.rank() != h.ext.size())
        throw std::invalid_argument("replace_edge: rank mismatch (" +
                                    std::to_string(target.rank()) + " vs " +
                                    std::to_string(h.ext.size()) + ")");

    // resolve repeated ext entries: later occurrences fuse onto the first
    std::vector<NodeId> redirect(g.node_count + 1);
    std::iota(redirect.begin(), redirect.end(), 0);
    auto find = [&](NodeId v) {
        while (redirect[v] != v) v = redirect[v];
        return v;
    };
    std::map<NodeId, std::size_t> first_pos;  // h ext node -> first position
    for (std::size_t j = 0; j < h.ext.size(); ++j) {
        auto it = first_pos.find(h.ext[j]);
        if (it == first_pos.end()) {
            first_pos.emplace(h.ext[j], j);
        } else {
            NodeId survivor = find(target.att[it->second]);
            NodeId absorbed = find(target.att[j]);
            if (survivor != absorbed) redirect[absorbed] = survivor;
        }
    }

    // map h nodes: ext onto attachments, internals onto fresh ids
    std::vector<NodeId> hmap(h.node_count + 1, 0);
    for (std::size_t j = 0; j < h.ext.size(); ++j)
        if (hmap[h.ext[j]] == 0) hmap[h.ext[j]] = find(target.att[j]);
    std::uint32_t next = g.node_count;
    std::uint32_t internal_base = next + 1;
    for (NodeId v = 1; v <= h.node_count; ++v)
        if (hmap[v] == 0) hmap[v] = ++next;

    Hypergraph out;
    out.node_count = next;
    for (EdgeId i = 0; i < g.edges.size(); ++i) {
        if (i == e) continue;
        std::vector<NodeId> att;
        att.reserve(g.edges[i].att.size());
        for (NodeId v : g.edges[i].att) att.push_back(find(v));
        out.add_edge(g.edges[i].label, std::move(att));
    }
    std::vector<EdgeId> new_ids;
    for (const Edge& he : h.edges) {
        std::vector<NodeId> att;
        att.reserve(he.att.size());
        for (NodeId v : he.att) att.push_back(hmap[v]);
        new_ids.push_back(out.add_edge(he.label, std::move(att)));
    }
    out.ext.reserve(g.ext.size());
    for (NodeId v : g.ext) out.ext.push_back(find(v));

    // compact away fused node ids
    std::vector<NodeId> compact(out.node_count + 1, 0);
    std::uint32_t dense = 0;
    for (NodeId v = 1; v <= out.node_count; ++v)
        if (v > g.node_count || find(v) == v) compact[v] = ++dense;
    for (Edge& oe : out.edges)
        for (NodeId& v : oe.att) v = compact[v];
    for (NodeId& v : out.ext) v = compact[v];
    out.node_count = dense;

    if (info) {
        info->node_map.assign(h.node_count + 1, 0);
        for (NodeId v = 1; v <= h.node_count; ++v) info->node_map[v] = compact[hmap[v]];
        info->new_edge_ids = std::move(new_ids);
        info->host_node_map.assign(g.node_count + 1, 0);
        for (NodeId v = 1; v <= g.node_count; ++v) info->host_node_map[v] = compact[find(v)];
        info->internal_base =
            internal_base < compact.size() ? compact[internal_base] : dense + 1;
    }
    return out;
}

/*
 * val(G): the unique graph derived by expanding nonterminal edges in
 * pre-order with the canonical renaming. Expansion never materializes the
 * intermediate graphs; node ids are allocated exactly as the step-by-step
 * replacement would.
 */
inline Hypergraph val(const SLHRGrammar& G) {
    Hypergraph out;
    out.node_count = G.start.node_count;

    // union-find over produced ids, used only when repeated ext entries fuse
    // host nodes; representative = the first-occurrence node
    std::vector<NodeId> redirect(out.node_count + 1);
    std::iota(redirect.begin(), redirect.end(), 0);
    std::function<NodeId(NodeId)> find = [&](NodeId v) {
        while (redirect[v] != v) v = redirect[v];
        return v;
    };
    auto alloc = [&]() {
        redirect.push_back(static_cast<NodeId>(redirect.size()));
        return static_cast<NodeId>(redirect.size() - 1);
    };

    std::function<void(const Hypergraph&, const std::vector<EdgeId>&,
                       const std::vector<NodeId>&)>
        expand = [&](const Hypergraph& rhs, const std::vector<EdgeId>& explicit_order,
                     const std::vector<NodeId>& map) {
            for (const Edge& e : rhs.edges) {
                if (e.label.kind == LabelKind::nonterminal) continue;
                std::vector<NodeId> att;
                att.reserve(e.att.size());
                for (NodeId v : e.att) att.push_back(find(map[v]));
                out.add_edge(e.label, std::move(att));
            }
            std::vector<EdgeId> order =
                !explicit_order.empty() ? explicit_order : canonical_nt_order(rhs);
            for (EdgeId ei : order) {
                const Edge& e = rhs.edges[ei];
                const Rule& r = G.rule(e.label.id);
                std::vector<NodeId> cmap(r.rhs.node_count + 1, 0);
                std::map<NodeId, std::size_t> first_pos;
                for (std::size_t j = 0; j < r.rhs.ext.size(); ++j) {
                    NodeId hv = r.rhs.ext[j];
                    auto it = first_pos.find(hv);
                    if (it == first_pos.end()) {
                        first_pos.emplace(hv, j);
                        cmap[hv] = find(map[e.att[j]]);
                    } else {
                        NodeId survivor = find(map[e.att[it->second]]);
                        NodeId absorbed = find(map[e.att[j]]);
                        if (survivor != absorbed) redirect[absorbed] = survivor;
                    }
                }
                for (NodeId v = 1; v <= r.rhs.node_count; ++v)
                    if (cmap[v] == 0) cmap[v] = alloc();
                expand(r.rhs, r.nt_order, cmap);
            }
        };

    std::vector<NodeId> identity(G.start.node_count + 1);
    std::iota(identity.begin(), identity.end(), 0);
    expand(G.start, G.start_nt_order, identity);

    // compact: drop fused ids, renumber ascending
    std::uint32_t raw = static_cast<std::uint32_t>(redirect.size() - 1);
    std::vector<NodeId> compact(raw + 1, 0);
    std::uint32_t dense = 0;
    for (NodeId v = 1; v <= raw; ++v)
        if (find(v) == v) compact[v] = ++dense;
    for (Edge& e : out.edges)
        for (NodeId& v : e.att) v = compact[find(v)];
    out.ext.clear();
    for (NodeId v : G.start.ext) out.ext.push_back(compact[find(v)]);
    out.node_count = dense;
    return out;
}

// Number of references to nonterminal A across the start graph and all rules.
inline std::uint32_t reference_count(const SLHRGrammar& G, std::uint32_t A) {
    std::uint32_t n = 0;
    auto count = [&](const Hypergraph& g) {
        for (const Edge& e : g.edges)
            if (e.label.kind == LabelKind::nonterminal && e.label.id == A) ++n;
    };
    count(G.start);
    for (const Rule& r : G.rules) count(r.rhs);
    return n;
}

// handle(A): rank(A) nodes plus a single A-edge; its size is rank(A) plus
// 1 (rank <= 2) or rank(A) (rank > 2).
inline Hypergraph handle(const SLHRGrammar& G, std::uint32_t A) {
    Hypergraph g;
    g.node_count = G.nt_rank(A);
    std::vector<NodeId> att(g.node_count);
    std::iota(att.begin(), att.end(), 1);
    g.ext = att;
    g.add_edge(nonterminal_label(A), att);
    return g;
}

// con(A) = ref(A) * (|rhs(A)| - |handle(A)|) - |rhs(A)|: the grammar-size
// increase that inlining A everywhere would cause (positive = A is earning
// its keep).
inline std::int64_t contribution(const SLHRGrammar& G, std::uint32_t A) {
    if (A == 0 || A > G.rules.size())
        throw std::invalid_argument("contribution: unknown nonterminal");
    std::int64_t rhs_size = static_cast<std::int64_t>(size(G.rule(A).rhs).total);
    std::uint32_t r = G.nt_rank(A);
    std::int64_t handle_size = r + (r <= 2 ? 1 : r);
    std::int64_t ref = reference_count(G, A);
    return ref * (rhs_size - handle_size) - rhs_size;
}

/*
 * Derivation shadow: a full instantiation of the derivation tree that tags
 * every derived node with an "origin" value (an arbitrary caller-chosen id,
 * e.g. the pre-compression node id). Grammar transformations that restructure
 * the tree (inlining) update the shadow in lockstep, so the exact node-id
 * correspondence of val() before/after is always available.
 */
struct ShadowInstance {
    std::uint32_t nt = 0;
    // origin tags of the rule's internal nodes, in ascending internal-id order
    std::vector<std::uint64_t> internal_origin;
    std::map<EdgeId, std::unique_ptr<ShadowInstance>> children;  // rhs NT edge -> child
};

struct DerivationShadow {
    std::map<EdgeId, std::unique_ptr<ShadowInstance>> top;  // start NT edge -> instance
};

namespace detail {

inline std::vector<NodeId> internal_nodes_ascending(const Hypergraph& rhs) {
    std::vector<char> is_ext(rhs.node_count + 1, 0);
    for (NodeId v : rhs.ext) is_ext[v] = 1;
    std::vector<NodeId> internals;
    for (NodeId v = 1; v <= rhs.node_count; ++v)
        if (!is_ext[v]) internals.push_back(v);
    return internals;
}

}  // namespace detail

// Builds the shadow of G itself: origin tags are the node ids of val(G).
// The walk mirrors val()'s allocation exactly.
inline DerivationShadow build_identity_shadow(const SLHRGrammar& G) {
    DerivationShadow shadow;
    // Re-run the expansion of val() but record per-instance origins. Repeated
    // ext entries are not supported here (compressor output is ext-distinct).
    std::uint64_t counter = G.start.node_count;
    std::function<std::unique_ptr<ShadowInstance>(const Edge&, const std::vector<NodeId>&,
                                                  const Hypergraph&)>
        dummy;
    std::function<void(const Hypergraph&, const std::vector<EdgeId>&,
                       const std::vector<std::uint64_t>&,
                       std::map<EdgeId, std::unique_ptr<ShadowInstance>>&)>
        expand = [&](const Hypergraph& rhs, const std::vector<EdgeId>& explicit_order,
                     const std::vector<std::uint64_t>& map,
                     std::map<EdgeId, std::unique_ptr<ShadowInstance>>& bucket) {
            std::vector<EdgeId> order =
                !explicit_order.empty() ? explicit_order : canonical_nt_order(rhs);
            for (EdgeId ei : order) {
                const Edge& e = rhs.edges[ei];
                const Rule& r = G.rule(e.label.id);
                auto inst = std::make_unique<ShadowInstance>();
                inst->nt = e.label.id;
                std::vector<std::uint64_t> cmap(r.rhs.node_count + 1, 0);
                for (std::size_t j = 0; j < r.rhs.ext.size(); ++j)
                    cmap[r.rhs.ext[j]] = map[e.att[j]];
                for (NodeId v : detail::internal_nodes_ascending(r.rhs)) {
                    cmap[v] = ++counter;
                    inst->internal_origin.push_back(cmap[v]);
                }
                expand(r.rhs, r.nt_order, cmap, inst->children);
                bucket.emplace(ei, std::move(inst));
            }
        };
    std::vector<std::uint64_t> identity(G.start.node_count + 1);
    std::iota(identity.begin(), identity.end(), 0);
    expand(G.start, G.start_nt_order, identity, shadow.top);
    return shadow;
}

/*
 * Walks a grammar + shadow in canonical derivation order and returns, for
 * every node of val(G), its origin tag (start nodes map through start_origin;
 * derived nodes take the matching instance's tags).
 */
inline std::vector<std::uint64_t> shadow_node_origins(
    const SLHRGrammar& G, const DerivationShadow& shadow,
    const std::vector<std::uint64_t>& start_origin) {
    std::vector<std::uint64_t> out(1, 0);  // 1-based
    for (NodeId v = 1; v <= G.start.node_count; ++v) out.push_back(start_origin[v]);
    std::uint64_t counter = G.start.node_count;  // tracks val's id allocation

    std::function<void(const Hypergraph&, const std::vector<EdgeId>&,
                       const std::vector<NodeId>&,
                       const std::map<EdgeId, std::unique_ptr<ShadowInstance>>&)>
        expand = [&](const Hypergraph& rhs, const std::vector<EdgeId>& explicit_order,
                     const std::vector<NodeId>& map,
                     const std::map<EdgeId, std::unique_ptr<ShadowInstance>>& bucket) {
            std::vector<EdgeId> order =
                !explicit_order.empty() ? explicit_order : canonical_nt_order(rhs);
            for (EdgeId ei : order) {
                const Edge& e = rhs.edges[ei];
                const Rule& r = G.rule(e.label.id);
                auto it = bucket.find(ei);
                if (it == bucket.end())
                    throw std::logic_error("shadow_node_origins: missing instance");
                const ShadowInstance& inst = *it->second;
                std::vector<NodeId> cmap(r.rhs.node_count + 1, 0);
                for (std::size_t j = 0; j < r.rhs.ext.size(); ++j)
                    cmap[r.rhs.ext[j]] = map[e.att[j]];
                std::vector<NodeId> internals = detail::internal_nodes_ascending(r.rhs);
                if (internals.size() != inst.internal_origin.size())
                    throw std::logic_error("shadow_node_origins: shape mismatch");
                for (std::size_t k = 0; k < internals.size(); ++k) {
                    cmap[internals[k]] = static_cast<NodeId>(++counter);
                    out.push_back(inst.internal_origin[k]);
                }
                expand(r.rhs, r.nt_order, cmap, inst.children);
            }
        };
    std::vector<NodeId> identity(G.start.node_count + 1);
    std::iota(identity.begin(), identity.end(), 0);
    expand(G.start, G.start_nt_order, identity, shadow.top);
    return out;
}

/*
 * Inlines nonterminal A: every A-edge is replaced by rhs(A), A's rule is
 * removed, and higher nonterminal ids shift down by one. Grammar size changes
 * by exactly con(A), so pruning inlines rules with con(A) <= 0. When a shadow is supplied it is restructured in
 * lockstep, preserving the origin tags of all derived nodes.
 *
 * Hosts must use canonical derivation orders (no explicit nt_order).
 */
inline SLHRGrammar inline_nonterminal(const SLHRGrammar& G, std::uint32_t A,
                                      DerivationShadow* shadow = nullptr,
                                      std::vector<std::uint64_t>* start_origin = nullptr) {
    if (A == 0 || A > G.rules.size())
        throw std::invalid_argument("inline_nonterminal: unknown nonterminal");
    if (!G.start_nt_order.empty())
        throw std::invalid_argument("inline_nonterminal: explicit orders unsupported");
    for (const Rule& r : G.rules)
        if (!r.nt_order.empty())
            throw std::invalid_argument("inline_nonterminal: explicit orders unsupported");

    SLHRGrammar out = G;
    const Hypergraph target_rhs = G.rule(A).rhs;  // copy: out mutates
    std::vector<EdgeId> target_rhs_nts = nt_edges_of(target_rhs);

    // Detaches the instance at `target`, shifts higher edge keys down by one
    // (the host edge was removed), and reattaches the instance's children on
    // the freshly copied rhs edges. Returns the detached instance.
    auto splice_bucket = [&](std::map<EdgeId, std::unique_ptr<ShadowInstance>>& bucket,
                             EdgeId target, const ReplaceInfo& info) {
        auto it = bucket.find(target);
        if (it == bucket.end())
            throw std::logic_error("inline_nonterminal: missing instance");
        std::unique_ptr<ShadowInstance> child = std::move(it->second);
        bucket.erase(it);
        std::map<EdgeId, std::unique_ptr<ShadowInstance>> renamed;
        for (auto& [ei, inst] : bucket)
            renamed.emplace(ei > target ? ei - 1 : ei, std::move(inst));
        bucket = std::move(renamed);
        for (EdgeId y : target_rhs_nts) {
            auto cit = child->children.find(y);
            if (cit == child->children.end())
                throw std::logic_error("inline_nonterminal: missing child");
            bucket.emplace(info.new_edge_ids[y], std::move(cit->second));
        }
        return child;
    };

    auto first_a_edge = [&](const Hypergraph& host) {
        for (EdgeId e = 0; e < host.edges.size(); ++e)
            if (host.edges[e].label.kind == LabelKind::nonterminal &&
                host.edges[e].label.id == A)
                return e;
        return static_cast<EdgeId>(host.edges.size());
    };

    // start graph host: spliced internals become fresh start nodes; their
    // origin tags move into the caller's start-node origin table
    for (;;) {
        EdgeId target = first_a_edge(out.start);
        if (target == out.start.edges.size()) break;
        ReplaceInfo info;
        out.start = replace_edge(out.start, target, target_rhs, &info);
        if (shadow) {
            std::unique_ptr<ShadowInstance> child =
                splice_bucket(shadow->top, target, info);
            if (start_origin)
                start_origin->insert(start_origin->end(), child->internal_origin.begin(),
                                     child->internal_origin.end());
        }
    }

    // rule hosts: splice into every live instance of that rule; the spliced
    // instance's internals append to the host instance's internal tags
    for (std::uint32_t b = 1; b <= out.nt_count(); ++b) {
        if (b == A) continue;
        Hypergraph& host = out.rules[b - 1].rhs;
        for (;;) {
            EdgeId target = first_a_edge(host);
            if (target == host.edges.size()) break;
            ReplaceInfo info;
            host = replace_edge(host, target, target_rhs, &info);
            if (shadow) {
                std::vector<ShadowInstance*> owners;
                std::function<void(std::map<EdgeId, std::unique_ptr<ShadowInstance>>&)>
                    walk = [&](std::map<EdgeId, std::unique_ptr<ShadowInstance>>& bucket) {
                        for (auto& [ei, inst] : bucket) {
                            if (inst->nt == b) owners.push_back(inst.get());
                            walk(inst->children);
                        }
                    };
                walk(shadow->top);
                for (ShadowInstance* owner : owners) {
                    std::unique_ptr<ShadowInstance> child =
                        splice_bucket(owner->children, target, info);
                    owner->internal_origin.insert(owner->internal_origin.end(),
                                                  child->internal_origin.begin(),
                                                  child->internal_origin.end());
                }
            }
        }
    }

    // drop A's rule; renumber nonterminals above it
    out.rules.erase(out.rules.begin() + (A - 1));
    auto renumber = [&](Hypergraph& g) {
        for (Edge& e : g.edges)
            if (e.label.kind == LabelKind::nonterminal && e.label.id > A) --e.label.id;
    };
    renumber(out.start);
    for (Rule& r : out.rules) renumber(r.rhs);
    if (shadow) {
        std::function<void(std::map<EdgeId, std::unique_ptr<ShadowInstance>>&)> walk =
            [&](std::map<EdgeId, std::unique_ptr<ShadowInstance>>& bucket) {
                for (auto& [ei, inst] : bucket) {
                    if (inst->nt > A) --inst->nt;
                    walk(inst->children);
                }
            };
        walk(shadow->top);
    }
    return out;
}

/*
 * Rewrites the grammar so every rule's external sequence is repetition-free:
 * duplicated entries keep their first occurrence, and every edge labeled by
 * an affected nonterminal drops (and fuses) the corresponding attachment
 * positions in its host. val is preserved; size strictly decreases when any
 * rule was affected.
 */
inline SLHRGrammar normalize_ext(const SLHRGrammar& G) {
    SLHRGrammar out = G;
    for (std::uint32_t a = 1; a <= out.nt_count(); ++a) {
        Hypergraph& rhs = out.rules[a - 1].rhs;
        std::vector<std::size_t> keep;
        std::set<NodeId> seen;
        for (std::size_t j = 0; j < rhs.ext.size(); ++j)
            if (seen.insert(rhs.ext[j]).second) keep.push_back(j);
        if (keep.size() == rhs.ext.size()) continue;

        // fix every host: fuse duplicate attachment positions of a-edges
        auto fix_host = [&](Hypergraph& host) {
            bool touched = false;
            for (const Edge& e : host.edges)
                if (e.label.kind == LabelKind::nonterminal && e.label.id == a)
                    touched = true;
            if (!touched) return;
            std::vector<NodeId> redirect(host.node_count + 1);
            std::iota(redirect.begin(), redirect.end(), 0);
            auto find = [&](NodeId v) {
                while (redirect[v] != v) v = redirect[v];
                return v;
            };
            for (Edge& e : host.edges) {
                if (!(e.label.kind == LabelKind::nonterminal && e.label.id == a)) continue;
                std::map<NodeId, std::size_t> first_pos;
                for (std::size_t j = 0; j < rhs.ext.size(); ++j) {
                    NodeId hv = rhs.ext[j];
                    auto it = first_pos.find(hv);
                    if (it == first_pos.end())
                        first_pos.emplace(hv, j);
                    else {
                        NodeId survivor = find(e.att[it->second]);
                        NodeId absorbed = find(e.att[j]);
                        if (survivor != absorbed) redirect[absorbed] = survivor;
                    }
                }
                std::vector<NodeId> att;
                for (std::size_t j : keep) att.push_back(e.att[j]);
                e.att = std::move(att);
            }
            std::vector<NodeId> compact(host.node_count + 1, 0);
            std::uint32_t dense = 0;
            for (NodeId v = 1; v <= host.node_count; ++v)
                if (find(v) == v) compact[v] = ++dense;
            for (Edge& e : host.edges)
                for (NodeId& v : e.att) v = compact[find(v)];
            for (NodeId& v : host.ext) v = compact[find(v)];
            host.node_count = dense;
        };
        fix_host(out.start);
        for (std::uint32_t b = 1; b <= out.nt_count(); ++b)
            if (b != a) fix_host(out.rules[b - 1].rhs);

        std::vector<NodeId> new_ext;
        for (std::size_t j : keep) new_ext.push_back(rhs.ext[j]);
        rhs.ext = std::move(new_ext);
    }
    return out;
}

/*
 * Ensures every right-hand side (including the start graph) has at most two
 * nonterminal edges by bundling all but the first (in derivation order) into
 * fresh nonterminals. val is preserved node-id-exactly via explicit
 * derivation orders; |G'| <= 2|G|.
 */
inline SLHRGrammar limit_to_two_nonterminals(const SLHRGrammar& G) {
    SLHRGrammar out = G;

    // idx < 0 addresses the start graph, otherwise rules[idx]. Values are
    // copied out and written back because bundling appends to out.rules.
    auto process = [&](std::int64_t idx) {
        Hypergraph rhs = idx < 0 ? out.start : out.rules[idx].rhs;
        std::vector<EdgeId> order_slot =
            idx < 0 ? out.start_nt_order : out.rules[idx].nt_order;
        std::vector<EdgeId> order =
            !order_slot.empty() ? order_slot : canonical_nt_order(rhs);
        if (order.size() > 2) {
            // bundle e2..en into a fresh nonterminal with no internal nodes
            std::vector<EdgeId> tail(order.begin() + 1, order.end());
            std::vector<NodeId> bundle_ext_host;  // dist of concatenated atts
            std::set<NodeId> seen;
            for (EdgeId ei : tail)
                for (NodeId v : rhs.edges[ei].att)
                    if (seen.insert(v).second) bundle_ext_host.push_back(v);
            std::map<NodeId, NodeId> local;  // host node -> bundle node
            Rule bundle;
            bundle.rhs.node_count = static_cast<std::uint32_t>(bundle_ext_host.size());
            for (std::size_t i = 0; i < bundle_ext_host.size(); ++i) {
                local[bundle_ext_host[i]] = static_cast<NodeId>(i + 1);
                bundle.rhs.ext.push_back(static_cast<NodeId>(i + 1));
            }
            for (EdgeId ei : tail) {
                std::vector<NodeId> att;
                for (NodeId v : rhs.edges[ei].att) att.push_back(local[v]);
                bundle.nt_order.push_back(
                    bundle.rhs.add_edge(rhs.edges[ei].label, std::move(att)));
            }
            out.rules.push_back(std::move(bundle));
            std::uint32_t bundle_id = out.nt_count();

            // rebuild the host: drop the tail edges, append the bundle edge
            std::set<EdgeId> drop(tail.begin(), tail.end());
            Hypergraph host;
            host.node_count = rhs.node_count;
            host.ext = rhs.ext;
            std::vector<EdgeId> remap(rhs.edges.size(), static_cast<EdgeId>(-1));
            for (EdgeId ei = 0; ei < rhs.edges.size(); ++ei) {
                if (drop.count(ei)) continue;
                remap[ei] = host.add_edge(rhs.edges[ei].label, rhs.edges[ei].att);
            }
            EdgeId bundle_edge =
                host.add_edge(nonterminal_label(bundle_id), bundle_ext_host);
            rhs = std::move(host);
            order_slot = {remap[order[0]], bundle_edge};
        }
        if (idx < 0) {
            out.start = std::move(rhs);
            out.start_nt_order = std::move(order_slot);
        } else {
            out.rules[idx].rhs = std::move(rhs);
            out.rules[idx].nt_order = std::move(order_slot);
        }
    };

    process(-1);
    for (std::size_t a = 0; a < out.rules.size(); ++a)  // grows as bundles appear
        process(static_cast<std::int64_t>(a));
    return out;
}

struct GrammarStats {
    std::uint32_t rule_count = 0;
    std::uint64_t grammar_size = 0;  // start graph plus all rule sizes
    std::uint32_t height = 0;        // longest nonterminal reference chain
    std::vector<std::uint64_t> nodes_per_nt;  // internal nodes of val(A), 1-based
};

inline GrammarStats stats(const SLHRGrammar& G) {
    GrammarStats s;
    s.rule_count = G.nt_count();
    s.grammar_size = size(G.start).total;
    for (const Rule& r : G.rules) s.grammar_size += size(r.rhs).total;
    s.nodes_per_nt.assign(G.nt_count() + 1, 0);
    std::vector<std::uint32_t> h(G.nt_count() + 1, 0);
    std::vector<int> state(G.nt_count() + 1, 0);
    std::function<void(std::uint32_t)> visit = [&](std::uint32_t a) {
        if (state[a]) return;
        state[a] = 1;
        std::uint64_t nodes = detail::internal_nodes_ascending(G.rule(a).rhs).size();
        std::uint32_t height = 0;
        for (EdgeId e : nt_edges_of(G.rule(a).rhs)) {
            std::uint32_t b = G.rule(a).rhs.edges[e].label.id;
            visit(b);
            nodes += s.nodes_per_nt[b];
            height = std::max(height, h[b]);
        }
        s.nodes_per_nt[a] = nodes;
        h[a] = height + 1;
    };
    for (std::uint32_t a = 1; a <= G.nt_count(); ++a) visit(a);
    for (EdgeId e : nt_edges_of(G.start))
        s.height = std::max(s.height, h[G.start.edges[e].label.id]);
    return s;
}

// Semantic grammar equality: rule-for-rule graph equality modulo edge order.
inline bool equal_grammars(const SLHRGrammar& a, const SLHRGrammar& b) {
    if (a.rules.size() != b.rules.size()) return false;
    if (!equal_graphs(a.start, b.start)) return false;
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        if (a.rules[i].rhs.ext != b.rules[i].rhs.ext) return false;
        if (!equal_graphs(a.rules[i].rhs, b.rules[i].rhs)) return false;
    }
    return true;
}

// Debug dump (test aid, not a stable format).
inline std::string dump(const SLHRGrammar& G) {
    std::string out;
    auto graph = [&](const Hypergraph& g) {
        out += "nodes=" + std::to_string(g.node_count) + " ext=(";
        for (std::size_t i = 0; i < g.ext.size(); ++i)
            out += (i ? "," : "") + std::to_string(g.ext[i]);
        out += ")\n";
        for (const Edge& e : g.edges) {
            out += e.label.kind == LabelKind::nonterminal ? "  N" : "  t";
            out += std::to_string(e.label.id) + " (";
            for (std::size_t i = 0; i < e.att.size(); ++i)
                out += (i ? "," : "") + std::to_string(e.att[i]);
            out += ")\n";
        }
    };
    out += "start: ";
    graph(G.start);
    for (std::uint32_t a = 1; a <= G.nt_count(); ++a) {
        out += "A" + std::to_string(a) + "/" + std::to_string(G.nt_rank(a)) + " -> ";
        graph(G.rule(a).rhs);
    }
    return out;
}

}  // namespace grepair

#endif  // GREPAIR_GRAMMAR_HPP
