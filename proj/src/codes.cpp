#include "lbf/codes.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lbf {

namespace {

void validate_code(const LinearCode& code) {
    if (code.generator.rows() != code.k || code.generator.cols() != code.n)
        throw std::invalid_argument(code.label + ": generator shape mismatch");
    if (code.pc.cols() != code.n)
        throw std::invalid_argument(code.label + ": pc column count mismatch");
    if (code.pc.rows() + code.k < code.n)
        throw std::invalid_argument(code.label + ": pc has fewer than N-K rows");
    if (gf2_rank(code.generator) != code.k)
        throw std::invalid_argument(code.label + ": generator is rank deficient");
    for (std::size_t r = 0; r < code.k; ++r)
        if (!mat_vec_mul(code.pc, code.generator.row(r)).is_zero())
            throw std::invalid_argument(code.label + ": G*H^T != 0");
}

// evaluation vector of the monomial prod_{j in support} x_j on F_2^m
BitVector monomial_row(unsigned m, unsigned support) {
    const std::size_t n = std::size_t{1} << m;
    BitVector row(n);
    for (std::size_t i = 0; i < n; ++i)
        if ((i & support) == support)
            row.set(i, true);
    return row;
}

// rows of the RM(r,m) generator in monomial order (degree, then index sets
// lexicographically)
std::vector<BitVector> rm_generator_rows(int r, unsigned m) {
    std::vector<BitVector> rows;
    if (r < 0)
        return rows;
    for (unsigned d = 0; d <= static_cast<unsigned>(r); ++d) {
        // combinations of d variables out of m, lexicographic
        std::vector<unsigned> idx(d);
        for (unsigned i = 0; i < d; ++i)
            idx[i] = i;
        while (true) {
            unsigned support = 0;
            for (unsigned i : idx)
                support |= 1u << i;
            rows.push_back(monomial_row(m, support));
            if (d == 0)
                break;
            // advance combination
            int pos = static_cast<int>(d) - 1;
            while (pos >= 0 && idx[pos] == m - d + pos)
                --pos;
            if (pos < 0)
                break;
            ++idx[pos];
            for (unsigned i = pos + 1; i < d; ++i)
                idx[i] = idx[i - 1] + 1;
        }
    }
    return rows;
}

} // namespace

LinearCode code_from_matrices(std::string label, BitMatrix generator, BitMatrix pc) {
    LinearCode code;
    code.n = generator.cols();
    code.k = generator.rows();
    code.generator = std::move(generator);
    code.pc = std::move(pc);
    code.label = std::move(label);
    validate_code(code);
    return code;
}

LinearCode build_rm(RmParams params) {
    if (params.r > params.m || params.m > 8)
        throw std::invalid_argument("build_rm: need 0 <= r <= m <= 8");
    const unsigned m = params.m;
    const std::size_t n = std::size_t{1} << m;

    auto gen_rows = rm_generator_rows(static_cast<int>(params.r), m);
    auto dual_rows = rm_generator_rows(static_cast<int>(m) - static_cast<int>(params.r) - 1, m);

    // take the first N-K linearly independent dual rows in monomial order;
    // the RM dual generator is already full rank, so this keeps all rows
    std::vector<BitVector> pc_rows;
    for (const auto& row : dual_rows)
        extend_independent(pc_rows, row);

    std::string label = "RM(" + std::to_string(n) + "," + std::to_string(gen_rows.size()) + ")";
    BitMatrix pc = pc_rows.empty() ? BitMatrix(0, n) : BitMatrix::from_rows(pc_rows);
    return code_from_matrices(std::move(label), BitMatrix::from_rows(gen_rows), std::move(pc));
}

BitMatrix minweight_dual_rows(const LinearCode& code, std::size_t max_dual_dim) {
    const std::size_t dual_dim = code.n - code.k;
    if (dual_dim == 0)
        throw std::invalid_argument("minweight_dual_rows: dual code is trivial");
    if (dual_dim > max_dual_dim)
        throw std::invalid_argument(
            "minweight_dual_rows: dual dimension " + std::to_string(dual_dim) +
            " exceeds " + std::to_string(max_dual_dim) +
            "; load the matrix from file or pass a larger bound (gen-h --force-enumerate)");

    auto reduced = rref(code.pc);
    if (reduced.rank != dual_dim)
        throw std::invalid_argument("minweight_dual_rows: pc rank != N-K");

    // flat word arrays for the tight Gray-code sweep
    const std::size_t wpr = (code.n + 63) / 64;
    std::vector<std::uint64_t> basis(dual_dim * wpr);
    for (std::size_t r = 0; r < dual_dim; ++r) {
        auto src = reduced.matrix.row_words(r);
        std::copy(src.begin(), src.end(), basis.begin() + r * wpr);
    }

    std::vector<std::uint64_t> cur(wpr, 0);
    std::size_t best = code.n + 1;
    std::vector<std::uint64_t> found; // concatenated wpr-word rows
    const std::uint64_t total = std::uint64_t{1} << dual_dim;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int j = std::countr_zero(i);
        const std::uint64_t* b = basis.data() + static_cast<std::size_t>(j) * wpr;
        std::size_t w = 0;
        for (std::size_t t = 0; t < wpr; ++t) {
            cur[t] ^= b[t];
            w += static_cast<std::size_t>(std::popcount(cur[t]));
        }
        if (w > best)
            continue;
        if (w < best) {
            best = w;
            found.clear();
        }
        found.insert(found.end(), cur.begin(), cur.end());
    }

    std::vector<BitVector> rows(found.size() / wpr, BitVector(code.n));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto dst = rows[r].words();
        for (std::size_t t = 0; t < wpr; ++t)
            dst[t] = found[r * wpr + t];
    }
    std::sort(rows.begin(), rows.end(), lex_less);
    return BitMatrix::from_rows(rows);
}

BitMatrix overcomplete_pc(const LinearCode& code) {
    return minweight_dual_rows(code, 24);
}

BitMatrix load_pc(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_pc: cannot open " + path);
    std::size_t m = 0, n = 0;
    if (!(in >> m >> n) || m == 0 || n == 0)
        throw std::runtime_error("load_pc: bad header in " + path);
    BitMatrix h(m, n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            int bit = -1;
            if (!(in >> bit) || (bit != 0 && bit != 1))
                throw std::runtime_error("load_pc: bad entry at row " + std::to_string(r) +
                                         " in " + path);
            if (bit)
                h.set(r, c, true);
        }
    std::string trailing;
    if (in >> trailing)
        throw std::runtime_error("load_pc: trailing data in " + path);
    return h;
}

void save_pc(const BitMatrix& h, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_pc: cannot open " + path);
    out << h.rows() << ' ' << h.cols() << '\n';
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            out << (h.get(r, c) ? '1' : '0');
            out << (c + 1 == h.cols() ? '\n' : ' ');
        }
    }
    if (!out)
        throw std::runtime_error("save_pc: write failed for " + path);
}

LinearCode code_from_files(std::string label, const std::string& gen_path,
                           const std::string& pc_path) {
    return code_from_matrices(std::move(label), load_pc(gen_path), load_pc(pc_path));
}

BitVector encode(const LinearCode& code, const BitVector& u) {
    if (u.size() != code.k)
        throw std::invalid_argument("encode: message length != K");
    BitVector c(code.n);
    auto out = c.words();
    for (std::size_t k = 0; k < code.k; ++k) {
        if (!u.get(k))
            continue;
        auto row = code.generator.row_words(k);
        for (std::size_t t = 0; t < out.size(); ++t)
            out[t] ^= row[t];
    }
    return c;
}

BitVector syndrome(const BitMatrix& h, const BitVector& z) { return mat_vec_mul(h, z); }

BitVector random_message(const LinearCode& code, Rng& rng) {
    BitVector u(code.k);
    auto w = u.words();
    for (std::size_t t = 0; t < w.size(); ++t)
        w[t] = rng();
    const std::size_t extra = w.size() * 64 - code.k;
    if (extra > 0 && !w.empty())
        w.back() &= ~std::uint64_t{0} >> extra;
    return u;
}

MessageRecovery::MessageRecovery(const LinearCode& code) {
    // eliminate [G | I] over the first N columns; the right block becomes
    // the row-operation matrix U with rref(G) = U*G
    const std::size_t k = code.k, n = code.n;
    BitMatrix aug(k, n + k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            if (code.generator.get(r, c))
                aug.set(r, c, true);
        aug.set(r, n + r, true);
    }
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < n && pivot_row < k; ++col) {
        std::size_t sel = pivot_row;
        while (sel < k && !aug.get(sel, col))
            ++sel;
        if (sel == k)
            continue;
        aug.swap_rows(pivot_row, sel);
        for (std::size_t r = 0; r < k; ++r)
            if (r != pivot_row && aug.get(r, col))
                aug.xor_rows(r, pivot_row);
        pivot_cols_.push_back(col);
        ++pivot_row;
    }
    if (pivot_row != k)
        throw std::invalid_argument("MessageRecovery: generator rank deficient");
    transform_ = BitMatrix(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c)
            if (aug.get(r, n + c))
                transform_.set(r, c, true);
}

BitVector MessageRecovery::message_of(const BitVector& codeword) const {
    const std::size_t k = pivot_cols_.size();
    BitVector u(k);
    auto out = u.words();
    for (std::size_t i = 0; i < k; ++i) {
        if (!codeword.get(pivot_cols_[i]))
            continue;
        auto row = transform_.row_words(i);
        for (std::size_t t = 0; t < out.size(); ++t)
            out[t] ^= row[t];
    }
    return u;
}

} // namespace lbf
