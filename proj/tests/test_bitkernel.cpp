#include <catch2/catch_amalgamated.hpp>

#include <dualsim/bitmatrix.hpp>
#include <dualsim/bitvector.hpp>

#include "testutil.hpp"

using namespace dualsim;

namespace {

BitVector bits(std::initializer_list<int> pattern)
{
    BitVector v(pattern.size());
    std::size_t i = 0;
    for (int b : pattern) {
        if (b) v.set(i);
        ++i;
    }
    return v;
}

// Independent reference product: plain double loop over all (i, j).
BitVector naive_product(const BitVector& v, const BitMatrix& m)
{
    BitVector out(m.dim());
    for (std::size_t j = 0; j < m.dim(); ++j)
        for (std::size_t i = 0; i < m.dim(); ++i)
            if (v.test(i) && m.test(i, j)) out.set(j);
    return out;
}

BitMatrix random_matrix(testutil::Rng& rng, std::size_t dim)
{
    std::vector<BitMatrix::Entry> entries;
    std::size_t count = rng.upto(dim * dim + 1);
    for (std::size_t k = 0; k < count; ++k)
        entries.emplace_back(static_cast<std::uint32_t>(rng.upto(dim)),
                             static_cast<std::uint32_t>(rng.upto(dim)));
    return BitMatrix(dim, std::move(entries));
}

BitVector random_vector(testutil::Rng& rng, std::size_t dim)
{
    BitVector v(dim);
    for (std::size_t i = 0; i < dim; ++i)
        if (rng.chance(50)) v.set(i);
    return v;
}

// The two 5x5 adjacency matrices printed in the worked example: rows 2 and 3
// (1-based) of the forward born_in matrix point at node 1.
BitMatrix born_in_forward()
{
    return BitMatrix(5, {{1, 0}, {2, 0}});
}

BitMatrix born_in_backward()
{
    return BitMatrix(5, {{0, 1}, {0, 2}});
}

} // namespace

TEST_CASE("vector-matrix product reproduces the worked example", "[bitkernel]")
{
    BitVector all = BitVector::ones(5);
    CHECK(vec_mat_mul(all, born_in_forward()) == bits({1, 0, 0, 0, 0}));
    CHECK(vec_mat_mul(all, born_in_backward()) == bits({0, 1, 1, 0, 0}));
    CHECK(vec_mat_mul(all, born_in_forward(), EvalMode::ColumnWise) == bits({1, 0, 0, 0, 0}));
}

TEST_CASE("product of the zero vector is zero", "[bitkernel]")
{
    testutil::Rng rng(7);
    for (int k = 0; k < 20; ++k) {
        std::size_t dim = 1 + rng.upto(8);
        CHECK(vec_mat_mul(BitVector(dim), random_matrix(rng, dim)) == BitVector(dim));
    }
}

TEST_CASE("product equals the naive double-loop reference", "[bitkernel]")
{
    testutil::Rng rng(42);
    for (int k = 0; k < 300; ++k) {
        std::size_t dim = 1 + rng.upto(8);
        BitMatrix m = random_matrix(rng, dim);
        BitVector v = random_vector(rng, dim);
        BitVector expected = naive_product(v, m);
        CHECK(vec_mat_mul(v, m, EvalMode::RowWise) == expected);
        CHECK(vec_mat_mul(v, m, EvalMode::ColumnWise) == expected);
    }
}

TEST_CASE("product is monotone in the vector", "[bitkernel]")
{
    testutil::Rng rng(43);
    for (int k = 0; k < 100; ++k) {
        std::size_t dim = 1 + rng.upto(8);
        BitMatrix m = random_matrix(rng, dim);
        BitVector small = random_vector(rng, dim);
        BitVector large = small;
        large.or_assign(random_vector(rng, dim));
        CHECK(leq(vec_mat_mul(small, m), vec_mat_mul(large, m)));
    }
}

TEST_CASE("product dimension mismatch is a usage error", "[bitkernel]")
{
    CHECK_THROWS_AS(vec_mat_mul(BitVector(3), BitMatrix(4)), std::invalid_argument);
    CHECK_THROWS_AS(BitVector(3).subset_of(BitVector(4)), std::invalid_argument);
    BitVector v(3);
    CHECK_THROWS_AS(v.and_assign(BitVector(4)), std::invalid_argument);
}

TEST_CASE("subset test", "[bitkernel]")
{
    CHECK_FALSE(leq(bits({1, 1, 1, 1, 1}), bits({0, 1, 1, 0, 0})));
    CHECK(leq(bits({0, 1, 0}), bits({1, 1, 0})));
    testutil::Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        BitVector v = random_vector(rng, 1 + rng.upto(70));
        CHECK(leq(v, v)); // reflexive
    }
}

TEST_CASE("and_assign clears exactly the right bits and reports change", "[bitkernel]")
{
    BitVector v = bits({1, 1, 1, 1, 1});
    CHECK(v.and_assign(bits({0, 1, 1, 0, 0})));
    CHECK(v == bits({0, 1, 1, 0, 0}));

    BitVector w = bits({0, 1, 0, 1});
    CHECK_FALSE(w.and_assign(w)); // idempotent
    CHECK_FALSE(w.and_assign(BitVector::ones(4)));
    CHECK(w == bits({0, 1, 0, 1}));

    testutil::Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        std::size_t dim = 1 + rng.upto(100);
        BitVector a = random_vector(rng, dim);
        BitVector before = a;
        BitVector b = random_vector(rng, dim);
        bool changed = a.and_assign(b);
        CHECK(leq(a, before)); // never sets a bit
        CHECK(changed == (a != before));
    }
}

TEST_CASE("row and column summaries", "[bitkernel]")
{
    CHECK(born_in_forward().row_summary() == bits({0, 1, 1, 0, 0}));
    CHECK(BitMatrix(6).row_summary() == BitVector(6));
    CHECK(BitMatrix(6).col_summary() == BitVector(6));

    testutil::Rng rng(13);
    for (int k = 0; k < 100; ++k) {
        std::size_t dim = 1 + rng.upto(8);
        BitMatrix m = random_matrix(rng, dim);
        BitVector rows(dim), cols(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                if (m.test(i, j)) {
                    rows.set(i);
                    cols.set(j);
                }
        CHECK(row_summary(m) == rows);
        CHECK(col_summary(m) == cols);
    }
}

TEST_CASE("column mirror is built lazily and matches entry-wise", "[bitkernel]")
{
    testutil::Rng rng(17);
    BitMatrix m = random_matrix(rng, 7);
    CHECK_FALSE(m.has_mirror());
    const BitMatrix& t = m.column_mirror();
    CHECK(m.has_mirror());
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) CHECK(m.test(i, j) == t.test(j, i));
}

TEST_CASE("popcount never exceeds length", "[bitkernel]")
{
    testutil::Rng rng(19);
    for (int k = 0; k < 50; ++k) {
        std::size_t dim = 1 + rng.upto(130);
        BitVector v = random_vector(rng, dim);
        CHECK(v.popcount() <= dim);
    }
    CHECK(BitVector::ones(65).popcount() == 65);
}
