/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_K2TREE_HPP
#define GREPAIR_K2TREE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bitstream.hpp"

namespace grepair {

// Bit vector with O(1) rank support (ones strictly before a position).
class RankBitVector {
public:
    void push_back(bool b) {
        if (size_ % 64 == 0) words_.push_back(0);
        if (b) words_.back() |= 1ull << (size_ % 64);
        ++size_;
        ranks_ready_ = false;
    }

    bool operator[](std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    std::size_t size() const { return size_; }

    void finalize() {
        ranks_.assign(words_.size() + 1, 0);
        for (std::size_t w = 0; w < words_.size(); ++w)
            ranks_[w + 1] = ranks_[w] + __builtin_popcountll(words_[w]);
        ranks_ready_ = true;
    }

    // number of ones in [0, i)
    std::size_t rank1(std::size_t i) const {
        std::size_t w = i / 64, r = ranks_[w];
        if (i % 64)
            r += __builtin_popcountll(words_[w] & ((1ull << (i % 64)) - 1));
        return r;
    }

    bool finalized() const { return ranks_ready_; }

private:
    std::vector<std::uint64_t> words_;
    std::vector<std::size_t> ranks_;
    std::size_t size_ = 0;
    bool ranks_ready_ = false;
};

/*
 * k²-tree (k = 2) over a square 0/1 matrix, BFS level order, no root bit:
 * the first four bits are the root's quadrant bits (TL, TR, BL, BR); every
 * one-bit above cell level expands to four child bits, all-zero quadrants
 * stop. The matrix is padded to the smallest power-of-two side >= 2.
 */
class K2Tree {
public:
    // ones: 0-based (row, col) cells; n: logical matrix dimension
    static K2Tree build(std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> ones) {
        K2Tree t;
        t.side_ = 2;
        while (t.side_ < n) t.side_ <<= 1;
        std::sort(ones.begin(), ones.end());
        ones.erase(std::unique(ones.begin(), ones.end()), ones.end());

        struct Node {
            std::uint32_t r0, c0, size;
            std::vector<std::pair<std::uint32_t, std::uint32_t>> pts;
        };
        std::vector<Node> frontier;
        frontier.push_back({0, 0, t.side_, std::move(ones)});
        while (!frontier.empty()) {
            std::vector<Node> next;
            for (Node& nd : frontier) {
                std::uint32_t half = nd.size / 2;
                std::vector<std::pair<std::uint32_t, std::uint32_t>> quad[4];
                for (auto [r, c] : nd.pts) {
                    int q = (r - nd.r0 >= half ? 2 : 0) + (c - nd.c0 >= half ? 1 : 0);
                    quad[q].push_back({r, c});
                }
                for (int q = 0; q < 4; ++q) {
                    bool bit = !quad[q].empty();
                    t.bits_.push_back(bit);
                    if (bit && half > 1)
                        next.push_back({nd.r0 + (q >= 2 ? half : 0),
                                        nd.c0 + (q % 2 ? half : 0), half,
                                        std::move(quad[q])});
                }
            }
            frontier = std::move(next);
        }
        t.bits_.finalize();
        return t;
    }

    bool cell(std::uint32_t row, std::uint32_t col) const {
        std::uint32_t size = side_;
        std::size_t block = 0;  // start of the current node's 4 quadrant bits
        for (;;) {
            std::uint32_t half = size / 2;
            int q = (row >= half ? 2 : 0) + (col >= half ? 1 : 0);
            std::size_t p = block + q;
            if (!bits_[p]) return false;
            if (half == 1) return true;
            block = 4 * (1 + bits_.rank1(p));
            row %= half;
            col %= half;
            size = half;
        }
    }

    // invokes fn(col) for every one-cell in the given row, ascending
    void ones_in_row(std::uint32_t row, const std::function<void(std::uint32_t)>& fn) const {
        walk(0, side_, row, row + 1, 0, side_, 0, 0, [&](std::uint32_t, std::uint32_t c) { fn(c); });
    }

    // invokes fn(row) for every one-cell in the given column, ascending
    void ones_in_col(std::uint32_t col, const std::function<void(std::uint32_t)>& fn) const {
        walk(0, side_, 0, side_, col, col + 1, 0, 0, [&](std::uint32_t r, std::uint32_t) { fn(r); });
    }

    void all_ones(const std::function<void(std::uint32_t, std::uint32_t)>& fn) const {
        walk(0, side_, 0, side_, 0, side_, 0, 0, fn);
    }

    std::uint32_t side() const { return side_; }
    const RankBitVector& bits() const { return bits_; }

    // serialization: the raw BFS bit sequence
    void write(BitWriter& w) const {
        for (std::size_t i = 0; i < bits_.size(); ++i) w.put_bit(bits_[i]);
    }

    static K2Tree read(BitReader& r, std::uint32_t n, std::size_t bit_count) {
        K2Tree t;
        t.side_ = 2;
        while (t.side_ < n) t.side_ <<= 1;
        for (std::size_t i = 0; i < bit_count; ++i) t.bits_.push_back(r.get_bit());
        t.bits_.finalize();
        if (!t.consistent()) throw DecodeError("k2-tree shape mismatch");
        return t;
    }

    // structural sanity: the bit count must match the BFS expansion exactly
    bool consistent() const {
        if (bits_.size() % 4 != 0 || bits_.size() < 4) return false;
        std::size_t levels = 0;
        for (std::uint32_t s = side_; s > 1; s /= 2) ++levels;
        std::size_t pos = 0, nodes = 1;
        for (std::size_t lvl = 0; lvl < levels; ++lvl) {
            std::size_t level_bits = nodes * 4;
            if (pos + level_bits > bits_.size()) return false;
            std::size_t ones = 0;
            for (std::size_t i = 0; i < level_bits; ++i)
                if (bits_[pos + i]) ++ones;
            pos += level_bits;
            nodes = ones;
            if (lvl + 1 == levels) return pos == bits_.size();
            if (nodes == 0) return pos == bits_.size();
        }
        return pos == bits_.size();
    }

private:
    // depth-first restricted enumeration over [r_lo, r_hi) x [c_lo, c_hi)
    void walk(std::uint32_t r0, std::uint32_t size, std::uint32_t r_lo, std::uint32_t r_hi,
              std::uint32_t c_lo, std::uint32_t c_hi, std::uint32_t c0, std::size_t block,
              const std::function<void(std::uint32_t, std::uint32_t)>& fn) const {
        if (bits_.size() == 0) return;
        std::uint32_t half = size / 2;
        for (int q = 0; q < 4; ++q) {
            std::uint32_t qr = r0 + (q >= 2 ? half : 0);
            std::uint32_t qc = c0 + (q % 2 ? half : 0);
            if (qr >= r_hi || qr + half <= r_lo || qc >= c_hi || qc + half <= c_lo) continue;
            std::size_t p = block + q;
            if (!bits_[p]) continue;
            if (half == 1)
                fn(qr, qc);
            else
                walk(qr, half, r_lo, r_hi, c_lo, c_hi, qc, 4 * (1 + bits_.rank1(p)), fn);
        }
    }

    std::uint32_t side_ = 2;
    RankBitVector bits_;
};

}  // namespace grepair

#endif  // GREPAIR_K2TREE_HPP
