// Bit-level codec tests: delta codes and k2-trees against dense oracles.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "grepair/bitstream.hpp"
#include "grepair/k2tree.hpp"

using namespace grepair;

namespace {

std::string bit_string(const BitWriter& w) {
    std::string s;
    for (std::size_t i = 0; i < w.bit_size(); ++i)
        s += ((w.bytes()[i / 8] >> (7 - i % 8)) & 1) ? '1' : '0';
    return s;
}

std::string bit_string(const RankBitVector& b) {
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i) s += b[i] ? '1' : '0';
    return s;
}

}  // namespace

TEST_CASE("delta code fixed examples") {
    BitWriter w;
    w.put_delta(1);
    CHECK(bit_string(w) == "1");
    BitWriter w2;
    w2.put_delta(2);
    CHECK(bit_string(w2) == "0100");
    BitWriter w3;
    w3.put_delta(3);
    CHECK(bit_string(w3) == "0101");
    BitWriter w4;
    w4.put_delta(17);  // n=5 -> "00101" + "0001"
    CHECK(bit_string(w4) == "001010001");
}

TEST_CASE("delta code round-trips") {
    BitWriter w;
    std::vector<std::uint64_t> values;
    for (std::uint64_t x = 1; x <= 2000; ++x) values.push_back(x);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) values.push_back(rng() >> (rng() % 40));
    for (std::uint64_t v : values)
        w.put_delta(v ? v : 1);
    BitReader r(w.bytes().data(), w.bit_size());
    for (std::uint64_t v : values)
        CHECK(r.get_delta() == (v ? v : 1));
    CHECK(r.exhausted());
}

TEST_CASE("delta0 represents zero") {
    BitWriter w;
    w.put_delta0(0);
    w.put_delta0(41);
    BitReader r(w.bytes().data(), w.bit_size());
    CHECK(r.get_delta0() == 0);
    CHECK(r.get_delta0() == 41);
}

TEST_CASE("fixed-width bits round-trip, MSB first") {
    BitWriter w;
    w.put_bits(0b1011, 4);
    w.put_bits(0, 0);
    w.put_bits(0x1234, 16);
    CHECK(bit_string(w).substr(0, 4) == "1011");
    BitReader r(w.bytes().data(), w.bit_size());
    CHECK(r.get_bits(4) == 0b1011);
    CHECK(r.get_bits(16) == 0x1234);
}

TEST_CASE("reader rejects truncated input") {
    BitWriter w;
    w.put_delta(1000);
    BitReader r(w.bytes().data(), 3);
    CHECK_THROWS_AS(r.get_delta(), DecodeError);
}

TEST_CASE("k2-tree fixed layouts") {
    // empty 4x4: only the root's four zero quadrant bits
    auto empty = K2Tree::build(4, {});
    CHECK(bit_string(empty.bits()) == "0000");

    // 2x2 identity: the quadrant bits are the cells themselves
    auto id2 = K2Tree::build(2, {{0, 0}, {1, 1}});
    CHECK(bit_string(id2.bits()) == "1001");

    // 4x4 identity: TL and BR nonzero, each holding a 2x2 identity
    auto id4 = K2Tree::build(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK(bit_string(id4.bits()) == "100110011001");
    CHECK(id4.cell(2, 2));
    CHECK(!id4.cell(2, 3));
}

TEST_CASE("k2-tree agrees with a dense oracle") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 20; ++iter) {
        std::uint32_t n = 1 + rng() % 40;
        double density = (iter % 4) * 0.15 + 0.05;
        std::vector<std::vector<char>> dense(n, std::vector<char>(n, 0));
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ones;
        for (std::uint32_t r = 0; r < n; ++r)
            for (std::uint32_t c = 0; c < n; ++c)
                if (std::uniform_real_distribution<>(0, 1)(rng) < density) {
                    dense[r][c] = 1;
                    ones.push_back({r, c});
                }
        auto t = K2Tree::build(n, ones);
        CHECK(t.consistent());
        for (std::uint32_t r = 0; r < n; ++r)
            for (std::uint32_t c = 0; c < n; ++c)
                REQUIRE(t.cell(r, c) == static_cast<bool>(dense[r][c]));

        // row/col enumeration
        for (std::uint32_t r = 0; r < n; ++r) {
            std::vector<std::uint32_t> cols, expect;
            t.ones_in_row(r, [&](std::uint32_t c) { cols.push_back(c); });
            for (std::uint32_t c = 0; c < n; ++c)
                if (dense[r][c]) expect.push_back(c);
            REQUIRE(cols == expect);
        }
        for (std::uint32_t c = 0; c < n; ++c) {
            std::vector<std::uint32_t> rows, expect;
            t.ones_in_col(c, [&](std::uint32_t r) { rows.push_back(r); });
            for (std::uint32_t r = 0; r < n; ++r)
                if (dense[r][c]) expect.push_back(r);
            REQUIRE(rows == expect);
        }

        // full enumeration recovers the cell set
        std::vector<std::pair<std::uint32_t, std::uint32_t>> all;
        t.all_ones([&](std::uint32_t r, std::uint32_t c) { all.push_back({r, c}); });
        std::sort(all.begin(), all.end());
        std::sort(ones.begin(), ones.end());
        REQUIRE(all == ones);

        // serialization round-trip is byte-identical
        BitWriter w;
        t.write(w);
        BitReader rd(w.bytes().data(), w.bit_size());
        auto t2 = K2Tree::read(rd, n, t.bits().size());
        CHECK(bit_string(t2.bits()) == bit_string(t.bits()));
    }
}
