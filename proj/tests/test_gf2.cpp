#include "doctest.h"

#include "lbf/channel.hpp"
#include "lbf/gf2.hpp"

using namespace lbf;

namespace {
BitMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.set(r, c, rng() & 1);
    return m;
}

BitVector random_vector(std::size_t len, Rng& rng) {
    BitVector v(len);
    for (std::size_t i = 0; i < len; ++i)
        v.set(i, rng() & 1);
    return v;
}
} // namespace

TEST_SUITE("gf2") {

TEST_CASE("mat_vec_mul identity and zero") {
    const BitMatrix id = BitMatrix::identity(3);
    const BitVector x = BitVector::from_string("101");
    CHECK(mat_vec_mul(id, x) == x);

    Rng rng(7);
    const BitMatrix h = random_matrix(5, 9, rng);
    CHECK(mat_vec_mul(h, BitVector(9)).is_zero());
}

TEST_CASE("mat_vec_mul hand example") {
    BitMatrix h(2, 3);
    h.set(0, 0, true);
    h.set(0, 1, true);
    h.set(1, 1, true);
    h.set(1, 2, true);
    CHECK(mat_vec_mul(h, BitVector::from_string("111")) == BitVector(2));
    CHECK_THROWS_AS(mat_vec_mul(h, BitVector(4)), std::invalid_argument);
}

TEST_CASE("mat_vec_mul linearity on random inputs") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const BitMatrix h = random_matrix(1 + rng.below(40), 1 + rng.below(90), rng);
        const BitVector x = random_vector(h.cols(), rng);
        const BitVector y = random_vector(h.cols(), rng);
        CHECK(mat_vec_mul(h, x ^ y) == (mat_vec_mul(h, x) ^ mat_vec_mul(h, y)));
    }
}

TEST_CASE("rref basics") {
    const auto r_id = rref(BitMatrix::identity(4));
    CHECK(r_id.matrix == BitMatrix::identity(4));
    CHECK(r_id.rank == 4);
    CHECK(r_id.pivot_cols == std::vector<std::size_t>{0, 1, 2, 3});

    const auto r_zero = rref(BitMatrix(3, 5));
    CHECK(r_zero.matrix == BitMatrix(3, 5));
    CHECK(r_zero.rank == 0);
    CHECK(r_zero.pivot_cols.empty());

    BitMatrix dup(2, 2);
    dup.set(0, 0, true);
    dup.set(0, 1, true);
    dup.set(1, 0, true);
    dup.set(1, 1, true);
    CHECK(rref(dup).rank == 1);
}

TEST_CASE("rref is idempotent and rank matches transpose") {
    Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        const BitMatrix m = random_matrix(1 + rng.below(64), 1 + rng.below(64), rng);
        const auto once = rref(m);
        CHECK(rref(once.matrix).matrix == once.matrix);
        CHECK(once.rank == gf2_rank(m.transposed()));
    }
}

TEST_CASE("extend_independent") {
    std::vector<BitVector> basis;
    CHECK_FALSE(extend_independent(basis, BitVector(2)));
    CHECK(basis.empty());

    CHECK(extend_independent(basis, BitVector::from_string("10")));
    CHECK(extend_independent(basis, BitVector::from_string("01")));
    CHECK_FALSE(extend_independent(basis, BitVector::from_string("11")));
    CHECK(basis.size() == 2);

    CHECK_THROWS_AS(extend_independent(basis, BitVector(3)), std::invalid_argument);
}

TEST_CASE("extend_independent matches rref rank on random sets") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        const std::size_t len = 1 + rng.below(24);
        std::vector<BitVector> all;
        std::vector<BitVector> basis;
        for (int i = 0; i < 12; ++i) {
            const BitVector v = random_vector(len, rng);
            all.push_back(v);
            extend_independent(basis, v);
        }
        CHECK(basis.size() == gf2_rank(BitMatrix::from_rows(all)));
    }
}

TEST_CASE("column cache matches per-entry reads") {
    Rng rng(31);
    const BitMatrix m = random_matrix(10, 17, rng);
    const auto cols = matrix_columns(m);
    REQUIRE(cols.size() == 17);
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r)
            CHECK(cols[c].get(r) == m.get(r, c));

    const BitVector x = random_vector(17, rng);
    BitVector via_cols(10);
    for (std::size_t c = 0; c < 17; ++c)
        if (x.get(c))
            via_cols ^= cols[c];
    CHECK(via_cols == mat_vec_mul(m, x));
}

TEST_CASE("lex_less orders bit strings") {
    CHECK(lex_less(BitVector::from_string("0011"), BitVector::from_string("0101")));
    CHECK_FALSE(lex_less(BitVector::from_string("0101"), BitVector::from_string("0011")));
    CHECK_FALSE(lex_less(BitVector::from_string("0101"), BitVector::from_string("0101")));
}

TEST_CASE("xor_popcount") {
    Rng rng(3);
    const BitVector a = random_vector(130, rng);
    const BitVector b = random_vector(130, rng);
    CHECK(xor_popcount(a, b) == (a ^ b).popcount());
}

} // TEST_SUITE
