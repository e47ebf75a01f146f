/*
 * grepair — grammar-based graph compression with queryable output.
 *
 * Copyright (c) 2026 the grepair authors.
 * Distributed under the MIT license; see LICENSE for details.
 */

#ifndef GREPAIR_BITSTREAM_HPP
#define GREPAIR_BITSTREAM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace grepair {

// Thrown when a serialized stream is malformed or truncated.
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
 * MSB-first bit writer. Values are appended bit-exactly; the final byte is
 * zero-padded. Elias-delta encodes x >= 1 as: (len(len(x))-1) zeros,
 * len(x) in binary, then x without its leading one-bit. 1 -> "1",
 * 2 -> "0100", 3 -> "0101".
 */
class BitWriter {
public:
    void put_bit(bool b) {
        if (bit_count_ % 8 == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
        ++bit_count_;
    }

    // width most-significant-first bits of value (width may be 0)
    void put_bits(std::uint64_t value, unsigned width) {
        for (unsigned i = width; i-- > 0;) put_bit((value >> i) & 1u);
    }

    void put_delta(std::uint64_t x) {
        if (x == 0) throw std::invalid_argument("put_delta: value must be >= 1");
        unsigned n = bit_length(x);        // bits of x
        unsigned l = bit_length(n);        // bits of n
        for (unsigned i = 1; i < l; ++i) put_bit(false);
        put_bits(n, l);
        put_bits(x, n - 1);  // x without its leading one-bit
    }

    // delta code shifted so zero is representable
    void put_delta0(std::uint64_t x) { put_delta(x + 1); }

    void put_byte(std::uint8_t b) { put_bits(b, 8); }

    std::size_t bit_size() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    // appends another writer's bits (used to splice length-prefixed sections)
    void append(const BitWriter& other) {
        for (std::size_t i = 0; i < other.bit_count_; ++i)
            put_bit((other.bytes_[i / 8] >> (7 - i % 8)) & 1u);
    }

    static unsigned bit_length(std::uint64_t x) {
        unsigned n = 0;
        while (x) {
            ++n;
            x >>= 1;
        }
        return n;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_count_ = 0;
};

// MSB-first reader over a byte buffer; throws DecodeError on overrun.
class BitReader {
public:
    BitReader(const std::uint8_t* data, std::size_t bit_count)
        : data_(data), bit_count_(bit_count) {}
    explicit BitReader(const std::vector<std::uint8_t>& bytes)
        : data_(bytes.data()), bit_count_(bytes.size() * 8) {}

    bool get_bit() {
        if (pos_ >= bit_count_) throw DecodeError("bitstream truncated");
        bool b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
        ++pos_;
        return b;
    }

    std::uint64_t get_bits(unsigned width) {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
        return v;
    }

    std::uint64_t get_delta() {
        unsigned zeros = 0;
        while (!get_bit()) {
            if (++zeros > 63) throw DecodeError("malformed delta code");
        }
        unsigned l = zeros + 1;                       // bits of n, leading 1 consumed
        std::uint64_t n = (1ull << (l - 1)) | get_bits(l - 1);
        if (n == 0 || n > 64) throw DecodeError("malformed delta code");
        std::uint64_t x = (n == 1) ? 1 : ((1ull << (n - 1)) | get_bits(static_cast<unsigned>(n - 1)));
        return x;
    }

    std::uint64_t get_delta0() {
        std::uint64_t v = get_delta();
        return v - 1;
    }

    std::uint8_t get_byte() { return static_cast<std::uint8_t>(get_bits(8)); }

    std::size_t position() const { return pos_; }
    std::size_t bit_size() const { return bit_count_; }
    bool exhausted() const { return pos_ >= bit_count_; }

    void skip(std::size_t bits) {
        if (pos_ + bits > bit_count_) throw DecodeError("bitstream truncated");
        pos_ += bits;
    }

private:
    const std::uint8_t* data_;
    std::size_t bit_count_;
    std::size_t pos_ = 0;
};

}  // namespace grepair

#endif  // GREPAIR_BITSTREAM_HPP
