#pragma once

// Dense word-packed bit-vector over a fixed universe [0, size).
// Rows of the candidate matrix chi_S and the per-label summary vectors
// are BitVectors; the solver's inner loop runs on and_assign/subset_of.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualsim {

class BitVector {
public:
    BitVector() = default;

    explicit BitVector(std::size_t size, bool fill = false)
        : words_((size + 63) / 64, fill ? ~std::uint64_t{0} : 0), size_(size)
    {
        clear_tail();
    }

    static BitVector ones(std::size_t size) { return BitVector(size, true); }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool test(std::size_t i) const
    {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void clear()
    {
        for (auto& w : words_) w = 0;
    }

    // Bitwise subset test: true iff every set bit of *this is set in other.
    bool subset_of(const BitVector& other) const
    {
        check_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }

    // target := target AND other; reports whether any bit was cleared.
    bool and_assign(const BitVector& other)
    {
        check_size(other);
        bool changed = false;
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k] & other.words_[k];
            changed |= (w != words_[k]);
            words_[k] = w;
        }
        return changed;
    }

    void or_assign(const BitVector& other)
    {
        check_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k)
            words_[k] |= other.words_[k];
    }

    std::size_t popcount() const
    {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const
    {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    bool operator==(const BitVector& other) const
    {
        return size_ == other.size_ && words_ == other.words_;
    }
    bool operator!=(const BitVector& other) const { return !(*this == other); }

    template <typename F>
    void for_each_set(F&& f) const
    {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                unsigned b = static_cast<unsigned>(std::countr_zero(w));
                f(static_cast<std::size_t>((k << 6) + b));
                w &= w - 1;
            }
        }
    }

    // "01101..." rendering, index 0 first; handy in test failure output.
    std::string to_string() const
    {
        std::string s(size_, '0');
        for_each_set([&](std::size_t i) { s[i] = '1'; });
        return s;
    }

private:
    void clear_tail()
    {
        if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
    }

    void check_size(const BitVector& other) const
    {
        if (size_ != other.size_)
            throw std::invalid_argument("BitVector length mismatch: " +
                                        std::to_string(size_) + " vs " +
                                        std::to_string(other.size_));
    }

    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

inline bool leq(const BitVector& a, const BitVector& b) { return a.subset_of(b); }

} // namespace dualsim
