#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace xcube {

// Packed GF(2) vector. Product of operators is XOR of their supports;
// all parity queries reduce to popcounts of ANDed words.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        if (o.n_ != n_) throw std::invalid_argument("BitVec: length mismatch in XOR");
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

    bool operator==(const BitVec&) const = default;

    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    // index of the lowest set bit, or -1 if zero
    int lowest_set() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return static_cast<int>(64 * k + std::countr_zero(w_[k]));
        return -1;
    }

    static std::size_t and_popcount(const BitVec& a, const BitVec& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("BitVec: length mismatch in AND");
        std::size_t c = 0;
        for (std::size_t k = 0; k < a.w_.size(); ++k) c += std::popcount(a.w_[k] & b.w_[k]);
        return c;
    }
    static int and_parity(const BitVec& a, const BitVec& b) {
        return static_cast<int>(and_popcount(a, b) & 1u);
    }

    std::span<const std::uint64_t> words() const { return w_; }
    std::span<std::uint64_t> words() { return w_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Rank over GF(2) by Gaussian elimination (lowest-set-bit pivots).
std::size_t gf2_rank(std::vector<BitVec> rows);

// Reduce rows to an independent spanning set (order of surviving pivots is
// deterministic: rows are consumed in input order).
std::vector<BitVec> gf2_reduce(std::vector<BitVec> rows);

}  // namespace xcube
