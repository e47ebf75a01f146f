/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 *
 * Command-line surface. Subcommands:
 *   gen        emit a synthetic graph family as an edge list
 *   compress   edge list -> container (+ structured run report)
 *   decompress container -> edge list
 *   stats      report sizes and structural statistics of a container
 *   query      reach / rpq on the compressed grammar
 *   neighbors  adjacency of one node on the compressed grammar
 *
 * Edge lists are UTF-8 lines `src dst [label]`; `#` starts a comment.
 * Reports are a single line of key=value pairs (plus human-readable text
 * unless --quiet). Exit codes: 0 ok, 2 parse error (arguments, edge list,
 * or pattern), 3 I/O error, 4 container decode error, 1 anything else.
 */

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "grepair/compressor.hpp"
#include "grepair/container.hpp"
#include "grepair/generators.hpp"
#include "grepair/orders.hpp"
#include "grepair/rpq.hpp"
#include "grepair/textio.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGeneric = 1;
constexpr int kExitParse = 2;
constexpr int kExitIo = 3;
constexpr int kExitDecode = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path);
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure on " + path);
}

// Original node names live in a sidecar next to the container (one name per
// line, original-id order); the container itself stores numeric ids only.
std::string names_path(const std::string& container_path) {
    return container_path + ".names";
}

std::vector<std::string> read_names(const std::string& container_path) {
    std::ifstream in(names_path(container_path));
    std::vector<std::string> names;
    if (!in) return names;
    std::string line;
    while (std::getline(in, line)) names.push_back(line);
    return names;
}

grepair::IngestResult ingest(const std::string& input_path) {
    if (input_path.empty() || input_path == "-") return grepair::read_edge_list(std::cin);
    std::ifstream in(input_path);
    if (!in) throw IoError("cannot open " + input_path);
    return grepair::read_edge_list(in);
}

grepair::OrderKind parse_order(const std::string& name) {
    if (name == "natural") return grepair::OrderKind::natural;
    if (name == "bfs") return grepair::OrderKind::bfs;
    if (name == "fp" || name == "fixpoint") return grepair::OrderKind::fixpoint;
    throw UsageError("unknown order '" + name + "' (expected natural|bfs|fp)");
}

// Loaded container plus everything needed to translate node names.
struct Loaded {
    grepair::ContainerData data;
    std::vector<std::string> names;              // original id - 1 -> name
    std::map<std::uint64_t, std::uint64_t> rev;  // original id -> val id
};

Loaded load(const std::string& path) {
    Loaded l;
    l.data = grepair::read_container(read_file(path));
    l.names = read_names(path);
    for (std::size_t v = 1; v < l.data.mapping.size(); ++v)
        l.rev[l.data.mapping[v]] = v;
    return l;
}

// Node argument -> val(G) node id. Without --raw, the token is an original
// node name resolved through the sidecar and the stored mapping.
std::uint64_t resolve_node(const Loaded& l, const std::string& token, bool raw,
                           std::uint64_t node_count) {
    std::uint64_t id = 0;
    if (raw || l.data.mapping.empty()) {
        if (!raw)
            std::cerr << "warning: container has no node mapping; interpreting '" << token
                      << "' as a canonical id\n";
        try {
            id = std::stoull(token);
        } catch (const std::exception&) {
            throw UsageError("not a numeric node id: '" + token + "'");
        }
    } else {
        std::uint64_t orig = 0;
        bool found = false;
        if (!l.names.empty()) {
            for (std::size_t i = 0; i < l.names.size(); ++i)
                if (l.names[i] == token) {
                    orig = i + 1;
                    found = true;
                    break;
                }
        } else {
            try {
                orig = std::stoull(token);
                found = true;
            } catch (const std::exception&) {
            }
        }
        auto it = found ? l.rev.find(orig) : l.rev.end();
        if (it == l.rev.end()) throw UsageError("unknown node name '" + token + "'");
        id = it->second;
    }
    if (id == 0 || id > node_count)
        throw UsageError("node id " + std::to_string(id) + " out of range");
    return id;
}

std::string display_name(const Loaded& l, std::uint64_t val_id, bool raw) {
    if (raw || l.data.mapping.empty()) return std::to_string(val_id);
    std::uint64_t orig = val_id < l.data.mapping.size() ? l.data.mapping[val_id] : 0;
    if (orig >= 1 && orig <= l.names.size()) return l.names[orig - 1];
    return std::to_string(orig ? orig : val_id);
}

void print_report(const std::vector<std::pair<std::string, std::string>>& kv) {
    bool first = true;
    for (const auto& [k, v] : kv) {
        std::cout << (first ? "" : " ") << k << "=" << v;
        first = false;
    }
    std::cout << "\n";
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

// ---------------------------------------------------------------- compress

int cmd_compress(const std::string& input, const std::string& output,
                 const grepair::CompressorConfig& cfg, bool store_mapping, bool quiet) {
    auto t0 = std::chrono::steady_clock::now();
    grepair::IngestResult ing = ingest(input);
    for (const std::string& w : ing.warnings) std::cerr << "warning: " << w << "\n";
    double ingest_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    grepair::CompressResult res = grepair::compress(ing.graph, cfg);
    double compress_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    std::vector<std::uint8_t> with_map = grepair::write_container(
        res.grammar, ing.labels, store_mapping ? &res.node_mapping : nullptr);
    std::vector<std::uint8_t> sans_map =
        store_mapping ? grepair::write_container(res.grammar, ing.labels, nullptr)
                      : with_map;
    if (!output.empty()) {
        write_file(output, with_map);
        if (store_mapping) {
            std::ofstream nf(names_path(output));
            if (!nf) throw IoError("cannot open " + names_path(output) + " for writing");
            for (const std::string& n : ing.node_names) nf << n << "\n";
        }
    }
    double encode_ms = ms_since(t0);

    grepair::GrammarStats gs = grepair::stats(res.grammar);
    std::uint64_t input_size = grepair::size(ing.graph).total;
    std::uint64_t edges = ing.graph.edges.size();
    double ratio = input_size ? double(gs.grammar_size) / double(input_size) : 1.0;
    double bpe = edges ? 8.0 * double(sans_map.size()) / double(edges) : 0.0;
    std::uint32_t fp_classes = grepair::fp_order(ing.graph).class_count;

    if (!quiet) {
        std::cout << "input: " << ing.graph.node_count << " nodes, " << edges
                  << " edges, size " << input_size << "\n"
                  << "grammar: size " << gs.grammar_size << ", " << gs.rule_count
                  << " rules, height " << gs.height << "\n"
                  << "ratio " << fmt(ratio) << ", " << fmt(bpe) << " bits per edge\n";
    }
    print_report({{"nodes", std::to_string(ing.graph.node_count)},
                  {"edges", std::to_string(edges)},
                  {"input_size", std::to_string(input_size)},
                  {"grammar_size", std::to_string(gs.grammar_size)},
                  {"rules", std::to_string(gs.rule_count)},
                  {"height", std::to_string(gs.height)},
                  {"ratio", fmt(ratio)},
                  {"bpe", fmt(bpe)},
                  {"fp_classes", std::to_string(fp_classes)},
                  {"ingest_ms", fmt(ingest_ms)},
                  {"compress_ms", fmt(compress_ms)},
                  {"encode_ms", fmt(encode_ms)}});
    return kExitOk;
}

// -------------------------------------------------------------- decompress

int cmd_decompress(const std::string& input, const std::string& output, bool sorted) {
    Loaded l = load(input);
    grepair::Hypergraph flat = grepair::val(l.data.grammar);

    std::vector<std::string> names(flat.node_count);
    if (l.data.mapping.empty()) {
        std::cerr << "warning: container has no node mapping; emitting canonical ids\n";
        for (grepair::NodeId v = 1; v <= flat.node_count; ++v)
            names[v - 1] = std::to_string(v);
    } else {
        for (grepair::NodeId v = 1; v <= flat.node_count; ++v) {
            std::uint64_t orig = l.data.mapping.at(v);
            names[v - 1] =
                orig <= l.names.size() ? l.names[orig - 1] : std::to_string(orig);
        }
    }

    if (output.empty() || output == "-") {
        grepair::write_edge_list(std::cout, flat, names, l.data.dict, sorted);
    } else {
        std::ofstream out(output);
        if (!out) throw IoError("cannot open " + output + " for writing");
        grepair::write_edge_list(out, flat, names, l.data.dict, sorted);
        if (!out) throw IoError("write failure on " + output);
    }
    return kExitOk;
}

// ------------------------------------------------------------------- stats

int cmd_stats(const std::string& input) {
    auto t0 = std::chrono::steady_clock::now();
    Loaded l = load(input);
    double decode_ms = ms_since(t0);

    grepair::GrammarStats gs = grepair::stats(l.data.grammar);
    grepair::Hypergraph flat = grepair::val(l.data.grammar);
    std::uint64_t input_size = grepair::size(flat).total;
    std::uint64_t edges = flat.edges.size();
    std::vector<std::uint8_t> sans_map =
        grepair::write_container(l.data.grammar, l.data.dict, nullptr);
    double ratio = input_size ? double(gs.grammar_size) / double(input_size) : 1.0;
    double bpe = edges ? 8.0 * double(sans_map.size()) / double(edges) : 0.0;

    print_report({{"nodes", std::to_string(flat.node_count)},
                  {"edges", std::to_string(edges)},
                  {"input_size", std::to_string(input_size)},
                  {"grammar_size", std::to_string(gs.grammar_size)},
                  {"rules", std::to_string(gs.rule_count)},
                  {"height", std::to_string(gs.height)},
                  {"labels", std::to_string(l.data.dict.count())},
                  {"ratio", fmt(ratio)},
                  {"bpe", fmt(bpe)},
                  {"fp_classes", std::to_string(grepair::fp_order(flat).class_count)},
                  {"mapping", l.data.mapping.empty() ? "0" : "1"},
                  {"decode_ms", fmt(decode_ms)}});
    return kExitOk;
}

// ----------------------------------------------------------------- queries

int cmd_reach(const std::string& input, const std::string& s_tok,
              const std::string& t_tok, bool raw) {
    Loaded l = load(input);
    grepair::QueryEngine q(l.data.grammar);
    std::uint64_t s = resolve_node(l, s_tok, raw, q.node_count());
    std::uint64_t t = resolve_node(l, t_tok, raw, q.node_count());
    std::cout << (q.reachable(s, t) ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_rpq(const std::string& input, const std::string& pattern,
            const std::vector<std::string>& nodes, bool raw) {
    Loaded l = load(input);
    bool answer;
    if (nodes.empty()) {
        answer = grepair::rpq_exists(l.data.grammar, pattern, l.data.dict);
    } else if (nodes.size() == 2) {
        grepair::QueryEngine q(l.data.grammar);  // only for id-range validation
        std::uint64_t u = resolve_node(l, nodes[0], raw, q.node_count());
        std::uint64_t v = resolve_node(l, nodes[1], raw, q.node_count());
        answer = grepair::rpq_pair(l.data.grammar, pattern, u, v, l.data.dict);
    } else {
        throw UsageError("query rpq takes a pattern plus either zero or two nodes");
    }
    std::cout << (answer ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_neighbors(const std::string& input, const std::string& node_tok,
                  const std::string& direction, bool raw) {
    if (direction != "out" && direction != "in")
        throw UsageError("--direction must be 'in' or 'out'");
    Loaded l = load(input);
    grepair::QueryEngine q(l.data.grammar);
    std::uint64_t v = resolve_node(l, node_tok, raw, q.node_count());
    auto ids = q.neighbors(
        v, direction == "out" ? grepair::Direction::out : grepair::Direction::in);
    bool first = true;
    for (std::uint64_t id : ids) {
        std::cout << (first ? "" : ",") << display_name(l, id, raw);
        first = false;
    }
    std::cout << "\n";
    return kExitOk;
}

// --------------------------------------------------------------------- gen

int cmd_gen(const std::string& family, std::uint32_t n, std::uint32_t k,
            std::uint32_t m, const std::string& word, std::uint32_t depth) {
    using namespace grepair;
    if (family == "sgraph") {
        // the word's path directly, nodes named by position: 0 -a-> 1 -b-> ...
        for (std::size_t i = 0; i < word.size(); ++i)
            std::cout << i << " " << i + 1 << " " << word[i] << "\n";
        return kExitOk;
    }

    Hypergraph g;
    if (family == "grid") {
        g = grid(n);
    } else if (family == "tf") {
        g = triangle_fractal(n);
    } else if (family == "comb") {
        g = comb(n, k);
    } else if (family == "tn") {
        g = chain_with_cycle(n);
    } else if (family == "copies") {
        g = disjoint_copies(square_with_diagonal(), m);
    } else if (family == "tgraph") {
        // full binary tree of the given depth: rank-2 symbol f inside,
        // rank-0 symbol a at the leaves
        std::function<RankedTree(std::uint32_t)> make = [&](std::uint32_t d) {
            if (d == 0) return RankedTree{2, {}};
            return RankedTree{1, {make(d - 1), make(d - 1)}};
        };
        g = t_graph(make(depth));
    } else {
        throw UsageError("unknown family '" + family + "'");
    }

    // hypergraph edges as whitespace-separated attachment lists; labels
    // printed as letters a, b, ... so the output re-ingests cleanly
    LabelDictionary dict;
    std::uint32_t max_label = 0;
    for (const Edge& e : g.edges) max_label = std::max(max_label, e.label.id);
    for (std::uint32_t i = 1; i <= max_label; ++i)
        dict.intern(i <= 26 ? std::string(1, static_cast<char>('a' + i - 1))
                            : "L" + std::to_string(i));
    write_edge_list(std::cout, g, {}, dict);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grepair: grammar-based graph compression with queries on the "
                 "compressed form"};
    app.require_subcommand(1);
    app.fallthrough();  // let subcommands see the global flags
    bool raw = false, quiet = false;
    app.add_flag("--raw", raw, "node arguments and outputs are canonical ids");
    app.add_flag("--quiet", quiet, "suppress human-readable report text");

    std::string input, output, order_name = "natural", pattern, direction = "out";
    std::string s_tok, t_tok, node_tok, family, word;
    std::vector<std::string> rpq_nodes;
    grepair::CompressorConfig cfg;
    bool no_prune = false, no_virtual = false, no_mapping = false, sorted = false;
    std::uint32_t gen_n = 3, gen_k = 3, gen_m = 2, gen_depth = 3;

    auto* c = app.add_subcommand("compress", "edge list -> container");
    c->add_option("input", input, "edge-list file ('-' or absent = stdin)");
    c->add_option("-o,--output", output, "container file to write");
    c->add_option("--max-rank", cfg.max_rank, "digram rank bound (>= 2)")
        ->check(CLI::Range(2u, 0x7fffffffu));
    c->add_option("--order", order_name, "node order: natural|bfs|fp");
    c->add_flag("--no-prune", no_prune, "keep unprofitable rules");
    c->add_flag("--no-virtual-pass", no_virtual, "skip the connector-edge pass");
    c->add_flag("--no-mapping", no_mapping, "omit the original-id mapping");

    auto* d = app.add_subcommand("decompress", "container -> edge list");
    d->add_option("input", input, "container file")->required();
    d->add_option("-o,--output", output, "edge-list file ('-' or absent = stdout)");
    d->add_flag("--sorted", sorted, "canonical line order (byte-comparable)");

    auto* st = app.add_subcommand("stats", "container statistics");
    st->add_option("input", input, "container file")->required();

    auto* qy = app.add_subcommand("query", "evaluate queries on a container");
    qy->require_subcommand(1);
    auto* reach = qy->add_subcommand("reach", "is t reachable from s?");
    reach->add_option("input", input, "container file")->required();
    reach->add_option("s", s_tok, "source node")->required();
    reach->add_option("t", t_tok, "target node")->required();
    auto* rpq = qy->add_subcommand("rpq", "regular path query");
    rpq->add_option("input", input, "container file")->required();
    rpq->add_option("pattern", pattern, "regular expression over edge labels")
        ->required();
    rpq->add_option("nodes", rpq_nodes, "source and target node (omit for existence)")
        ->expected(0, 2);

    auto* nb = app.add_subcommand("neighbors", "adjacency of one node");
    nb->add_option("input", input, "container file")->required();
    nb->add_option("node", node_tok, "node")->required();
    nb->add_option("--direction", direction, "out (default) or in");

    auto* gn = app.add_subcommand("gen", "emit a synthetic graph family");
    gn->add_option("family", family, "grid|tf|comb|tn|copies|sgraph|tgraph")
        ->required();
    gn->add_option("--n", gen_n, "size parameter");
    gn->add_option("--k", gen_k, "tooth width (comb)");
    gn->add_option("--m", gen_m, "copy count (copies)");
    gn->add_option("--word", word, "word (sgraph)");
    gn->add_option("--depth", gen_depth, "tree depth (tgraph)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (*c) {
            cfg.order = parse_order(order_name);
            cfg.prune = !no_prune;
            cfg.virtual_edge_pass = !no_virtual;
            return cmd_compress(input, output, cfg, !no_mapping, quiet);
        }
        if (*d) return cmd_decompress(input, output, sorted);
        if (*st) return cmd_stats(input);
        if (*reach) return cmd_reach(input, s_tok, t_tok, raw);
        if (*rpq) return cmd_rpq(input, pattern, rpq_nodes, raw);
        if (*nb) return cmd_neighbors(input, node_tok, direction, raw);
        if (*gn) return cmd_gen(family, gen_n, gen_k, gen_m, word, gen_depth);
        return kExitGeneric;
    } catch (const grepair::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const grepair::RegexParseError& e) {
        std::cerr << "error: bad pattern: " << e.what() << "\n";
        return kExitParse;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const grepair::ContainerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDecode;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeneric;
    }
}
