#pragma once

// Square boolean adjacency matrix, row-compressed: each row stores the
// sorted column indices of its set bits (CSR). A dense n*n bit grid is out
// of reach for the databases this runs against, and the boolean
// vector-matrix product only ever unions whole rows, so compressed rows
// lose nothing. The column-major mirror (the transpose) is built lazily on
// first column-wise use and cached.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bitvector.hpp"

namespace dualsim {

enum class EvalMode { RowWise, ColumnWise };

class BitMatrix {
public:
    using Entry = std::pair<std::uint32_t, std::uint32_t>; // (row, col)

    BitMatrix() : BitMatrix(0) {}

    explicit BitMatrix(std::size_t dim) : dim_(dim), offsets_(dim + 1, 0) {}

    BitMatrix(std::size_t dim, std::vector<Entry> entries) : dim_(dim)
    {
        std::sort(entries.begin(), entries.end());
        entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
        offsets_.assign(dim_ + 1, 0);
        cols_.reserve(entries.size());
        for (const auto& [i, j] : entries) {
            if (i >= dim_ || j >= dim_)
                throw std::invalid_argument("BitMatrix entry out of range");
            ++offsets_[i + 1];
            cols_.push_back(j);
        }
        for (std::size_t i = 0; i < dim_; ++i) offsets_[i + 1] += offsets_[i];
    }

    BitMatrix(const BitMatrix& other)
        : dim_(other.dim_), offsets_(other.offsets_), cols_(other.cols_)
    {
    }
    BitMatrix& operator=(const BitMatrix& other)
    {
        dim_ = other.dim_;
        offsets_ = other.offsets_;
        cols_ = other.cols_;
        mirror_.reset();
        return *this;
    }
    BitMatrix(BitMatrix&&) = default;
    BitMatrix& operator=(BitMatrix&&) = default;

    std::size_t dim() const { return dim_; }
    std::size_t entry_count() const { return cols_.size(); }

    std::span<const std::uint32_t> row(std::size_t i) const
    {
        return {cols_.data() + offsets_[i], cols_.data() + offsets_[i + 1]};
    }

    bool test(std::size_t i, std::size_t j) const
    {
        auto r = row(i);
        return std::binary_search(r.begin(), r.end(), static_cast<std::uint32_t>(j));
    }

    // Transpose, built on first use and cached. Guarded so that concurrent
    // readers of an otherwise immutable matrix stay safe.
    const BitMatrix& column_mirror() const
    {
        std::lock_guard<std::mutex> lock(*mirror_mutex_);
        if (!mirror_) {
            std::vector<Entry> flipped;
            flipped.reserve(cols_.size());
            for (std::uint32_t i = 0; i < dim_; ++i)
                for (std::uint32_t j : row(i)) flipped.emplace_back(j, i);
            mirror_ = std::make_unique<BitMatrix>(dim_, std::move(flipped));
        }
        return *mirror_;
    }

    bool has_mirror() const
    {
        std::lock_guard<std::mutex> lock(*mirror_mutex_);
        return mirror_ != nullptr;
    }

    // row_summary(i) = 1 iff row i is nonempty.
    BitVector row_summary() const
    {
        BitVector s(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            if (offsets_[i + 1] > offsets_[i]) s.set(i);
        return s;
    }

    BitVector col_summary() const
    {
        BitVector s(dim_);
        for (std::uint32_t j : cols_) s.set(j);
        return s;
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> cols_;
    mutable std::unique_ptr<std::mutex> mirror_mutex_ = std::make_unique<std::mutex>();
    mutable std::unique_ptr<BitMatrix> mirror_;
};

// Boolean vector-matrix product: result(j) = 1 iff there is an i with
// v(i) = 1 and M(i,j) = 1. Both traversal modes produce identical bits;
// they differ only in cost, which is what the solver's heuristic exploits.
inline BitVector vec_mat_mul(const BitVector& v, const BitMatrix& m,
                             EvalMode mode = EvalMode::RowWise)
{
    if (v.size() != m.dim())
        throw std::invalid_argument("vec_mat_mul dimension mismatch");
    BitVector result(m.dim());
    if (mode == EvalMode::RowWise) {
        v.for_each_set([&](std::size_t i) {
            for (std::uint32_t j : m.row(i)) result.set(j);
        });
    } else {
        const BitMatrix& t = m.column_mirror();
        for (std::size_t j = 0; j < t.dim(); ++j) {
            for (std::uint32_t i : t.row(j)) {
                if (v.test(i)) {
                    result.set(j);
                    break;
                }
            }
        }
    }
    return result;
}

inline BitVector row_summary(const BitMatrix& m) { return m.row_summary(); }
inline BitVector col_summary(const BitMatrix& m) { return m.col_summary(); }

} // namespace dualsim
