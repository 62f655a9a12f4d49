#include "lbf/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace lbf {

namespace {
constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }
} // namespace

BitVector::BitVector(std::size_t len) : len_(len), w_(words_for(len), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw std::invalid_argument("BitVector::from_string: bad char");
    }
    return v;
}

BitVector BitVector::unit(std::size_t len, std::size_t index) {
    if (index >= len)
        throw std::invalid_argument("BitVector::unit: index out of range");
    BitVector v(len);
    v.set(index, true);
    return v;
}

bool BitVector::is_zero() const {
    for (auto w : w_)
        if (w != 0)
            return false;
    return true;
}

std::size_t BitVector::popcount() const {
    std::size_t c = 0;
    for (auto w : w_)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    if (len_ != o.len_)
        throw std::invalid_argument("BitVector: length mismatch in xor");
    for (std::size_t i = 0; i < w_.size(); ++i)
        w_[i] ^= o.w_[i];
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i))
            s[i] = '1';
    return s;
}

std::size_t BitVectorHash::operator()(const BitVector& v) const {
    // FNV-1a over the packed words and the length
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 0x100000001b3ull;
    };
    mix(v.size());
    for (auto w : v.words())
        mix(w);
    return static_cast<std::size_t>(h);
}

bool lex_less(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    auto wa = a.words(), wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        const std::uint64_t d = wa[i] ^ wb[i];
        if (d != 0) {
            const int bit = std::countr_zero(d);
            return ((wa[i] >> bit) & 1u) == 0;
        }
    }
    return false;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_(words_for(cols)), w_(rows * wpr_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<BitVector>& rows) {
    if (rows.empty())
        return BitMatrix();
    BitMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        m.set_row(r, rows[r]);
    return m;
}

BitVector BitMatrix::row(std::size_t r) const {
    BitVector v(cols_);
    auto src = row_words(r);
    auto dst = v.words();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = src[i];
    return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_)
        throw std::invalid_argument("BitMatrix::set_row: length mismatch");
    auto src = v.words();
    auto dst = row_words(r);
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = src[i];
}

void BitMatrix::xor_rows(std::size_t dst, std::size_t src) {
    auto d = row_words(dst);
    auto s = row_words(src);
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] ^= s[i];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b)
        return;
    auto ra = row_words(a);
    auto rb = row_words(b);
    for (std::size_t i = 0; i < ra.size(); ++i)
        std::swap(ra[i], rb[i]);
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c))
                t.set(c, r, true);
    return t;
}

BitVector mat_vec_mul(const BitMatrix& h, const BitVector& x) {
    if (h.cols() != x.size())
        throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    BitVector out(h.rows());
    auto xw = x.words();
    for (std::size_t r = 0; r < h.rows(); ++r) {
        auto rw = h.row_words(r);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < xw.size(); ++i)
            acc ^= rw[i] & xw[i];
        if (std::popcount(acc) & 1)
            out.set(r, true);
    }
    return out;
}

RrefResult rref(const BitMatrix& m) {
    RrefResult res;
    res.matrix = m;
    BitMatrix& a = res.matrix;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < a.rows() && !a.get(sel, col))
            ++sel;
        if (sel == a.rows())
            continue;
        a.swap_rows(pivot_row, sel);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != pivot_row && a.get(r, col))
                a.xor_rows(r, pivot_row);
        res.pivot_cols.push_back(col);
        ++pivot_row;
    }
    res.rank = pivot_row;
    return res;
}

std::size_t gf2_rank(const BitMatrix& m) { return rref(m).rank; }

namespace {
std::size_t lowest_set_bit(const BitVector& v) {
    auto ws = v.words();
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] != 0)
            return i * 64 + static_cast<std::size_t>(std::countr_zero(ws[i]));
    return v.size();
}

void reduce_against(BitVector& r, const std::vector<BitVector>& echelon) {
    for (const auto& e : echelon)
        if (r.get(lowest_set_bit(e)))
            r ^= e;
}
} // namespace

bool extend_independent(std::vector<BitVector>& basis, const BitVector& v) {
    for (const auto& b : basis)
        if (b.size() != v.size())
            throw std::invalid_argument("extend_independent: length mismatch");
    // echelonized copy of the basis (each vector's lowest set bit unique)
    std::vector<BitVector> echelon;
    echelon.reserve(basis.size());
    for (BitVector r : basis) {
        reduce_against(r, echelon);
        if (!r.is_zero())
            echelon.push_back(std::move(r));
    }
    BitVector r = v;
    reduce_against(r, echelon);
    if (r.is_zero())
        return false;
    basis.push_back(v);
    return true;
}

std::vector<BitVector> matrix_columns(const BitMatrix& m) {
    std::vector<BitVector> cols(m.cols(), BitVector(m.rows()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c))
                cols[c].set(r, true);
    return cols;
}

std::size_t xor_popcount(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("xor_popcount: length mismatch");
    auto wa = a.words(), wb = b.words();
    std::size_t c = 0;
    for (std::size_t i = 0; i < wa.size(); ++i)
        c += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    return c;
}

} // namespace lbf
