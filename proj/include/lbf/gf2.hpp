#ifndef LBF_GF2_HPP
#define LBF_GF2_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lbf {

/// Fixed-length vector over GF(2), bits packed into 64-bit words.
/// Unused high bits of the last word are kept zero so that equality,
/// popcount and hashing can operate on whole words.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len);
    static BitVector from_string(std::string_view bits); // e.g. "0101"
    static BitVector unit(std::size_t len, std::size_t index);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            w_[i >> 6] |= mask;
        else
            w_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    bool is_zero() const;
    std::size_t popcount() const;

    BitVector& operator^=(const BitVector& o);
    friend BitVector operator^(BitVector a, const BitVector& b) {
        a ^= b;
        return a;
    }
    bool operator==(const BitVector&) const = default;

    std::span<const std::uint64_t> words() const { return w_; }
    std::span<std::uint64_t> words() { return w_; }

    std::string to_string() const;

  private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const;
};

/// Lexicographic order on bit index 0,1,...; the vector with a 0 at the
/// first differing index compares less.
bool lex_less(const BitVector& a, const BitVector& b);

/// Row-major bit-packed binary matrix.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);
    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(const std::vector<BitVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (c & 63);
        if (v)
            w_[r * wpr_ + (c >> 6)] |= mask;
        else
            w_[r * wpr_ + (c >> 6)] &= ~mask;
    }

    BitVector row(std::size_t r) const;
    void set_row(std::size_t r, const BitVector& v);
    std::span<const std::uint64_t> row_words(std::size_t r) const {
        return {w_.data() + r * wpr_, wpr_};
    }
    std::span<std::uint64_t> row_words(std::size_t r) {
        return {w_.data() + r * wpr_, wpr_};
    }
    /// dst ^= src, row-wise.
    void xor_rows(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    BitMatrix transposed() const;

    bool operator==(const BitMatrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> w_;
};

/// H * x over GF(2). Throws std::invalid_argument on dimension mismatch.
BitVector mat_vec_mul(const BitMatrix& h, const BitVector& x);

struct RrefResult {
    BitMatrix matrix;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row-echelon form over GF(2); operates on a copy.
RrefResult rref(const BitMatrix& m);

std::size_t gf2_rank(const BitMatrix& m);

/// Appends v to basis iff v is linearly independent of it; returns whether
/// it was appended. All vectors must share one length.
bool extend_independent(std::vector<BitVector>& basis, const BitVector& v);

/// Column extraction: result[n] is column n of m as a length-rows vector.
std::vector<BitVector> matrix_columns(const BitMatrix& m);

/// popcount(a ^ b) without materializing the xor.
std::size_t xor_popcount(const BitVector& a, const BitVector& b);

/// A matrix bundled with its extracted columns. Decoding sweeps and MDP
/// transitions add single columns in their inner loops, so the columns are
/// cached once per parity-check matrix.
struct ColumnCache {
    BitMatrix matrix;
    std::vector<BitVector> col;

    ColumnCache() = default;
    explicit ColumnCache(BitMatrix m)
        : matrix(std::move(m)), col(matrix_columns(matrix)) {}

    std::size_t rows() const { return matrix.rows(); }
    std::size_t cols() const { return matrix.cols(); }
};

} // namespace lbf

#endif
