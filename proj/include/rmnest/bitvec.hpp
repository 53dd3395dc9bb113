#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmnest/errors.hpp"

namespace rmnest {

/// Packed bit vector, bit i lives in word i/64 at position i%64.
class bit_vec {
public:
    bit_vec() = default;
    explicit bit_vec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    static bit_vec from_word(std::size_t n, std::uint64_t w) {
        require(n <= 64, "from_word: length above 64");
        bit_vec v(n);
        if (n) v.words_[0] = n == 64 ? w : (w & ((std::uint64_t{1} << n) - 1));
        return v;
    }

    static bit_vec from_string(std::string_view s) {
        bit_vec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') v.set(i);
            else if (s[i] != '0') throw parameter_error("bit string: unexpected character");
        }
        return v;
    }

    std::size_t size() const { return size_; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::uint64_t word0() const { return words_.empty() ? 0 : words_[0]; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool b = true) {
        auto m = std::uint64_t{1} << (i & 63);
        if (b) words_[i >> 6] |= m;
        else words_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    bit_vec& operator^=(const bit_vec& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
        return *this;
    }
    friend bit_vec operator^(bit_vec a, const bit_vec& b) { return a ^= b; }
    friend bool operator==(const bit_vec&, const bit_vec&) = default;

    std::size_t weight() const {
        std::size_t w = 0;
        for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
        return w;
    }
    bool any() const {
        for (auto x : words_)
            if (x) return true;
        return false;
    }
    /// Index of lowest set bit, or size() if none.
    std::size_t first_set() const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
        return size_;
    }
    bool dot(const bit_vec& o) const {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & o.words_[k];
        return std::popcount(acc) & 1;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

inline bool parity(std::uint64_t x) { return std::popcount(x) & 1; }

}  // namespace rmnest
