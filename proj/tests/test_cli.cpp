// End-to-end tests of the command-line tool: pipelines, reports, exit codes.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const std::string cli = GREPAIR_CLI_PATH;

std::map<std::string, std::string> parse_report(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        REQUIRE(eq != std::string::npos);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

std::string last_line(const std::string& out) {
    std::istringstream in(out);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    return last;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("grepair_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gen | compress pipeline reports strong compression on copies") {
    auto r = run(cli + " gen copies --m 64 | " + cli +
                 " compress --max-rank 4 --order fp --quiet");
    REQUIRE(r.exit_code == 0);
    auto kv = parse_report(last_line(r.out));
    CHECK(kv.at("nodes") == "256");
    CHECK(kv.at("edges") == "320");
    CHECK(std::stod(kv.at("ratio")) < 0.25);
    CHECK(std::stod(kv.at("bpe")) > 0.0);
    CHECK(std::stoul(kv.at("rules")) >= 1);
}

TEST_CASE("compress, decompress roundtrip is set-equal; --sorted is byte-stable") {
    TempDir tmp;
    for (const std::string& fam :
         {std::string("grid --n 3"), std::string("tf --n 3"), std::string("tn --n 3"),
          std::string("copies --m 5"), std::string("sgraph --word abcabcab")}) {
        auto gen = run(cli + " gen " + fam);
        REQUIRE(gen.exit_code == 0);
        std::ofstream(tmp.file("in.txt")) << gen.out;
        auto comp = run(cli + " compress " + tmp.file("in.txt") + " -o " +
                        tmp.file("g.grg") + " --quiet");
        REQUIRE(comp.exit_code == 0);
        auto dec1 = run(cli + " decompress " + tmp.file("g.grg") + " --sorted");
        auto dec2 = run(cli + " decompress " + tmp.file("g.grg") + " --sorted");
        REQUIRE(dec1.exit_code == 0);
        CHECK(dec1.out == dec2.out);
        auto sorted = run("sort " + tmp.file("in.txt"));
        INFO("family " << fam);
        CHECK(dec1.out == sorted.out);
    }
}

TEST_CASE("queries resolve original node names through the stored mapping") {
    TempDir tmp;
    std::string word(40, 'a');
    REQUIRE(run(cli + " gen sgraph --word " + word + " > " + tmp.file("a40.txt"))
                .exit_code == 0);
    REQUIRE(run(cli + " compress " + tmp.file("a40.txt") + " -o " + tmp.file("a40.grg") +
                " --quiet > /dev/null")
                .exit_code == 0);
    const std::string g = tmp.file("a40.grg");

    CHECK(run(cli + " query reach " + g + " 0 40").out == "true\n");
    CHECK(run(cli + " query reach " + g + " 40 0").out == "false\n");
    CHECK(run(cli + " query rpq " + g + " '(aaaaa)*' 0 40").out == "true\n");
    CHECK(run(cli + " query rpq " + g + " '(aaaaa)*' 0 2").out == "false\n");
    CHECK(run(cli + " query rpq " + g + " 'a+'").out == "true\n");
    CHECK(run(cli + " query rpq " + g + " 'b'").out == "false\n");
    CHECK(run(cli + " neighbors " + g + " 0 --direction out").out == "1\n");
    CHECK(run(cli + " neighbors " + g + " 7 --direction in").out == "6\n");
    CHECK(run(cli + " neighbors " + g + " 40 --direction out").out == "\n");

    auto st = run(cli + " stats " + g);
    REQUIRE(st.exit_code == 0);
    auto kv = parse_report(last_line(st.out));
    CHECK(kv.at("nodes") == "41");
    CHECK(kv.at("edges") == "40");
    CHECK(kv.at("mapping") == "1");
    CHECK(kv.at("labels") == "1");
}

TEST_CASE("exit codes distinguish parse, I/O, and decode failures") {
    TempDir tmp;
    CHECK(run("printf 'a b c d e\\n' | " + cli + " compress").exit_code == 2);
    CHECK(run("printf 'x x\\n' | " + cli + " compress").exit_code == 2);
    CHECK(run(cli + " compress --max-rank 1 /dev/null").exit_code == 2);
    CHECK(run(cli + " stats " + tmp.file("missing.grg")).exit_code == 3);
    std::ofstream(tmp.file("junk.grg")) << "not a container";
    CHECK(run(cli + " stats " + tmp.file("junk.grg")).exit_code == 4);
    CHECK(run(cli + " decompress " + tmp.file("junk.grg")).exit_code == 4);

    std::ofstream(tmp.file("ok.txt")) << "u v a\n";
    REQUIRE(run(cli + " compress " + tmp.file("ok.txt") + " -o " + tmp.file("ok.grg") +
                " --quiet > /dev/null")
                .exit_code == 0);
    CHECK(run(cli + " query rpq " + tmp.file("ok.grg") + " '(a'").exit_code == 2);
    CHECK(run(cli + " query reach " + tmp.file("ok.grg") + " u nosuch").exit_code == 2);
    CHECK(run(cli + " query reach " + tmp.file("ok.grg") + " u v").out == "true\n");
}

TEST_CASE("container without mapping falls back to canonical ids") {
    TempDir tmp;
    std::ofstream(tmp.file("in.txt")) << "p q a\nq r b\n";
    REQUIRE(run(cli + " compress " + tmp.file("in.txt") + " -o " + tmp.file("g.grg") +
                " --no-mapping --quiet > /dev/null")
                .exit_code == 0);
    auto dec = run(cli + " decompress " + tmp.file("g.grg") + " --sorted");
    REQUIRE(dec.exit_code == 0);
    CHECK(dec.out == "1 2 a\n2 3 b\n");  // canonical ids, names lost
    CHECK(run(cli + " query reach " + tmp.file("g.grg") + " --raw 1 3").out == "true\n");
}

TEST_CASE("hyperedge family generators emit validated counts") {
    auto comb = run(cli + " gen comb --n 3 --k 4");
    REQUIRE(comb.exit_code == 0);
    std::istringstream in(comb.out);
    std::string line;
    std::size_t lines = 0, rank5 = 0;
    while (std::getline(in, line)) {
        ++lines;
        std::istringstream ls(line);
        std::string tok;
        std::size_t toks = 0;
        while (ls >> tok) ++toks;
        if (toks == 6) ++rank5;  // five attachment nodes + label
    }
    CHECK(lines == 33);  // 2^3 f-edges + leaf a-edges (3 per spine node, 4 on the last)
    CHECK(rank5 == 8);   // the rank-(k+1) f-edges

    auto tg = run(cli + " gen tgraph --depth 2");
    REQUIRE(tg.exit_code == 0);
    std::istringstream tin(tg.out);
    std::size_t tlines = 0;
    while (std::getline(tin, line)) ++tlines;
    CHECK(tlines == 7);  // one edge per tree node of the depth-2 binary tree
}
