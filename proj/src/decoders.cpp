#include "lbf/decoders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lbf {

DecodeResult bf_decode(const ColumnCache& pc, const BitVector& z, std::size_t max_iters) {
    if (pc.cols() != z.size())
        throw std::invalid_argument("bf_decode: dimension mismatch");
    const std::size_t n = pc.cols();

    DecodeResult res;
    res.estimate = z;
    BitVector s = mat_vec_mul(pc.matrix, z);
    std::vector<BitVector> seen;
    seen.push_back(s);

    while (!s.is_zero() && res.flips_used < max_iters) {
        const std::size_t v = s.popcount();
        long best_q = std::numeric_limits<long>::min();
        std::size_t best_n = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long q = static_cast<long>(v) -
                           static_cast<long>(xor_popcount(s, pc.col[i]));
            if (q > best_q) {
                best_q = q;
                best_n = i;
            }
        }
        res.estimate.flip(best_n);
        s ^= pc.col[best_n];
        ++res.flips_used;
        if (std::find(seen.begin(), seen.end(), s) != seen.end()) {
            res.stalled = true;
            break;
        }
        seen.push_back(s);
    }
    res.converged = s.is_zero();
    return res;
}

DecodeResult wbf_decode(const ColumnCache& pc, std::span<const double> y,
                        std::size_t max_iters) {
    const std::size_t m = pc.rows(), n = pc.cols();
    if (y.size() != n)
        throw std::invalid_argument("wbf_decode: dimension mismatch");

    BitVector z(n);
    for (std::size_t i = 0; i < n; ++i)
        if (y[i] < 0.0)
            z.set(i, true);

    // phi_m = min reliability among the bits of check m
    std::vector<double> phi(m, std::numeric_limits<double>::infinity());
    std::vector<std::vector<std::uint32_t>> checks_of_bit(n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pc.matrix.get(r, c)) {
                phi[r] = std::min(phi[r], std::abs(y[c]));
                checks_of_bit[c].push_back(static_cast<std::uint32_t>(r));
            }

    DecodeResult res;
    res.estimate = z;
    BitVector s = mat_vec_mul(pc.matrix, z);
    while (!s.is_zero() && res.flips_used < max_iters) {
        double best_e = -std::numeric_limits<double>::infinity();
        std::size_t best_n = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = 0.0;
            for (auto r : checks_of_bit[i])
                e += (s.get(r) ? 1.0 : -1.0) * phi[r];
            if (e > best_e) {
                best_e = e;
                best_n = i;
            }
        }
        res.estimate.flip(best_n);
        s ^= pc.col[best_n];
        ++res.flips_used;
    }
    res.converged = s.is_zero();
    return res;
}

SyndromeTable build_syndrome_table(const BitMatrix& h, std::size_t max_weight) {
    const std::size_t m = h.rows(), n = h.cols();
    if (m > 18)
        throw std::invalid_argument("build_syndrome_table: 2^M leader table too large (M > 18)");
    if (n > 64)
        throw std::invalid_argument("build_syndrome_table: N > 64 unsupported");

    SyndromeTable t;
    t.m_bits = m;
    t.n = n;
    t.col_syndrome.resize(n, 0);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (h.get(r, c))
                t.col_syndrome[c] |= std::uint32_t{1} << r;

    const std::size_t table_size = std::size_t{1} << m;
    t.leader.assign(table_size, 0);
    t.filled.assign(table_size, 0);
    t.filled[0] = 1; // weight-0 leader
    std::size_t filled_count = 1;

    // enumerate error patterns breadth-first by weight; the first pattern
    // reaching a syndrome is its coset leader
    std::vector<std::size_t> pos;
    for (std::size_t w = 1; w <= std::min(n, max_weight) && filled_count < table_size; ++w) {
        pos.assign(w, 0);
        std::iota(pos.begin(), pos.end(), std::size_t{0});
        while (true) {
            std::uint32_t syn = 0;
            std::uint64_t mask = 0;
            for (auto p : pos) {
                syn ^= t.col_syndrome[p];
                mask |= std::uint64_t{1} << p;
            }
            if (!t.filled[syn]) {
                t.filled[syn] = 1;
                t.leader[syn] = mask;
                t.max_leader_weight = w;
                if (++filled_count == table_size)
                    break;
            }
            // next combination
            std::size_t i = w;
            while (i > 0 && pos[i - 1] == n - w + i - 1)
                --i;
            if (i == 0)
                break;
            ++pos[i - 1];
            for (std::size_t j = i; j < w; ++j)
                pos[j] = pos[j - 1] + 1;
        }
    }
    return t;
}

namespace {
std::uint32_t packed_syndrome(const SyndromeTable& t, const BitVector& z) {
    std::uint32_t syn = 0;
    auto ws = z.words();
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
        std::uint64_t w = ws[wi];
        while (w) {
            const int b = std::countr_zero(w);
            w &= w - 1;
            syn ^= t.col_syndrome[wi * 64 + static_cast<std::size_t>(b)];
        }
    }
    return syn;
}
} // namespace

DecodeResult syndrome_ml_decode(const SyndromeTable& table, const BitVector& z) {
    if (z.size() != table.n)
        throw std::invalid_argument("syndrome_ml_decode: dimension mismatch");
    DecodeResult res;
    res.estimate = z;
    const std::uint32_t syn = packed_syndrome(table, z);
    if (!table.filled[syn])
        return res; // no leader known at the build weight bound
    const std::uint64_t mask = table.leader[syn];
    res.estimate.words()[0] ^= mask;
    res.converged = true;
    res.flips_used = static_cast<std::size_t>(std::popcount(mask));
    return res;
}

namespace {

struct GrayCodewords {
    // flat word arrays for the 2^K codeword sweep
    std::size_t k, wpr;
    std::vector<std::uint64_t> rows;
    std::vector<std::uint64_t> cur;

    explicit GrayCodewords(const LinearCode& code)
        : k(code.k), wpr((code.n + 63) / 64), rows(k * wpr), cur(wpr, 0) {
        if (k > 20)
            throw std::invalid_argument("brute_force_ml: K > 20");
        for (std::size_t r = 0; r < k; ++r) {
            auto src = code.generator.row_words(r);
            std::copy(src.begin(), src.end(), rows.begin() + r * wpr);
        }
    }

    void step(std::uint64_t i) {
        const std::uint64_t* g = rows.data() +
                                 static_cast<std::size_t>(std::countr_zero(i)) * wpr;
        for (std::size_t t = 0; t < wpr; ++t)
            cur[t] ^= g[t];
    }
};

BitVector words_to_vec(const std::vector<std::uint64_t>& w, std::size_t n) {
    BitVector v(n);
    auto dst = v.words();
    std::copy(w.begin(), w.end(), dst.begin());
    return v;
}

} // namespace

DecodeResult brute_force_ml_hard(const LinearCode& code, const BitVector& z) {
    if (z.size() != code.n)
        throw std::invalid_argument("brute_force_ml_hard: dimension mismatch");
    GrayCodewords gc(code);
    auto zw = z.words();

    auto dist = [&](const std::vector<std::uint64_t>& c) {
        std::size_t d = 0;
        for (std::size_t t = 0; t < gc.wpr; ++t)
            d += static_cast<std::size_t>(std::popcount(c[t] ^ zw[t]));
        return d;
    };

    std::vector<std::uint64_t> best = gc.cur;
    std::size_t best_d = dist(gc.cur);
    const std::uint64_t total = std::uint64_t{1} << gc.k;
    for (std::uint64_t i = 1; i < total; ++i) {
        gc.step(i);
        const std::size_t d = dist(gc.cur);
        if (d < best_d) {
            best_d = d;
            best = gc.cur;
        }
    }
    DecodeResult res;
    res.estimate = words_to_vec(best, code.n);
    res.converged = true;
    res.flips_used = best_d;
    return res;
}

DecodeResult brute_force_ml_soft(const LinearCode& code, std::span<const double> llr) {
    if (llr.size() != code.n)
        throw std::invalid_argument("brute_force_ml_soft: dimension mismatch");
    GrayCodewords gc(code);

    // maximizing sum (-1)^{c_n} llr_n == minimizing sum over set bits of llr
    auto set_bit_sum = [&](const std::vector<std::uint64_t>& c) {
        double s = 0.0;
        for (std::size_t t = 0; t < gc.wpr; ++t) {
            std::uint64_t w = c[t];
            while (w) {
                const int b = std::countr_zero(w);
                w &= w - 1;
                s += llr[t * 64 + static_cast<std::size_t>(b)];
            }
        }
        return s;
    };

    std::vector<std::uint64_t> best = gc.cur;
    double best_s = set_bit_sum(gc.cur);
    const std::uint64_t total = std::uint64_t{1} << gc.k;
    for (std::uint64_t i = 1; i < total; ++i) {
        gc.step(i);
        const double s = set_bit_sum(gc.cur);
        if (s < best_s) {
            best_s = s;
            best = gc.cur;
        }
    }

    BitVector z(code.n);
    for (std::size_t i = 0; i < code.n; ++i)
        if (llr[i] < 0.0)
            z.set(i, true);
    DecodeResult res;
    res.estimate = words_to_vec(best, code.n);
    res.converged = true;
    res.flips_used = xor_popcount(res.estimate, z);
    return res;
}

DecodeResult osd_decode(const LinearCode& code, std::span<const double> y, unsigned order) {
    if (y.size() != code.n)
        throw std::invalid_argument("osd_decode: dimension mismatch");
    if (order > 4)
        throw std::invalid_argument("osd_decode: order > 4");
    const std::size_t n = code.n, k = code.k;

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(y[a]) > std::abs(y[b]);
    });

    // reduce G onto the first K independent most-reliable positions
    BitMatrix work = code.generator;
    std::vector<std::size_t> basis;
    basis.reserve(k);
    std::size_t pivot_row = 0;
    for (std::size_t t = 0; t < n && pivot_row < k; ++t) {
        const std::size_t col = idx[t];
        std::size_t sel = pivot_row;
        while (sel < k && !work.get(sel, col))
            ++sel;
        if (sel == k)
            continue;
        work.swap_rows(pivot_row, sel);
        for (std::size_t r = 0; r < k; ++r)
            if (r != pivot_row && work.get(r, col))
                work.xor_rows(r, pivot_row);
        basis.push_back(col);
        ++pivot_row;
    }
    if (pivot_row != k)
        throw std::logic_error("osd_decode: generator rank deficient");

    const std::size_t wpr = (n + 63) / 64;
    std::vector<std::uint64_t> c0(wpr, 0);
    for (std::size_t p = 0; p < k; ++p)
        if (y[basis[p]] < 0.0) {
            auto row = work.row_words(p);
            for (std::size_t t = 0; t < wpr; ++t)
                c0[t] ^= row[t];
        }

    auto metric = [&](const std::vector<std::uint64_t>& c) {
        // sum (-1)^{c_n} y_n, computed from the set bits
        double s = 0.0;
        for (std::size_t t = 0; t < wpr; ++t) {
            std::uint64_t w = c[t];
            while (w) {
                const int b = std::countr_zero(w);
                w &= w - 1;
                s += y[t * 64 + static_cast<std::size_t>(b)];
            }
        }
        return -2.0 * s; // constant offset sum(y) dropped
    };

    std::vector<std::uint64_t> best = c0;
    double best_m = metric(c0);
    auto consider = [&](const std::vector<std::uint64_t>& c) {
        const double v = metric(c);
        if (v > best_m) {
            best_m = v;
            best = c;
        }
    };
    auto xored = [&](const std::vector<std::uint64_t>& c, std::size_t row) {
        std::vector<std::uint64_t> out = c;
        auto rw = work.row_words(row);
        for (std::size_t t = 0; t < wpr; ++t)
            out[t] ^= rw[t];
        return out;
    };

    if (order >= 1)
        for (std::size_t i = 0; i < k; ++i) {
            auto ci = xored(c0, i);
            consider(ci);
            if (order >= 2)
                for (std::size_t j = i + 1; j < k; ++j) {
                    auto cij = xored(ci, j);
                    consider(cij);
                    if (order >= 3)
                        for (std::size_t l = j + 1; l < k; ++l) {
                            auto cijl = xored(cij, l);
                            consider(cijl);
                            if (order >= 4)
                                for (std::size_t q = l + 1; q < k; ++q)
                                    consider(xored(cijl, q));
                        }
                }
        }

    BitVector z(n);
    for (std::size_t i = 0; i < n; ++i)
        if (y[i] < 0.0)
            z.set(i, true);
    DecodeResult res;
    res.estimate = words_to_vec(best, n);
    res.converged = true;
    res.flips_used = xor_popcount(res.estimate, z);
    return res;
}

} // namespace lbf
