#include "lbf/autoperm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbf {

namespace detail {
std::size_t log2_exact(std::size_t n) {
    std::size_t m = 0;
    while ((std::size_t{1} << m) < n)
        ++m;
    if ((std::size_t{1} << m) != n)
        throw std::invalid_argument("blocklength is not a power of two");
    return m;
}
} // namespace detail

std::vector<std::uint32_t> sort_perm(std::span<const double> r) {
    std::vector<std::uint32_t> pi(r.size());
    std::iota(pi.begin(), pi.end(), 0u);
    std::stable_sort(pi.begin(), pi.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return r[a] < r[b]; });
    return pi;
}

namespace {
BitVector index_bits(std::uint32_t idx, std::size_t m) {
    BitVector v(m);
    for (std::size_t j = 0; j < m; ++j)
        if (idx >> j & 1u)
            v.set(j, true);
    return v;
}

std::uint32_t bits_index(const BitVector& v) {
    std::uint32_t idx = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v.get(j))
            idx |= 1u << j;
    return idx;
}

std::vector<std::uint32_t> build_lookup(const BitMatrix& a, const BitVector& b) {
    const std::size_t m = b.size();
    const std::size_t n = std::size_t{1} << m;
    std::vector<std::uint32_t> lookup(n);
    std::vector<std::uint8_t> hit(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const BitVector v = index_bits(static_cast<std::uint32_t>(i), m);
        BitVector t = mat_vec_mul(a, v);
        t ^= b;
        const std::uint32_t out = bits_index(t);
        lookup[i] = out;
        hit[out] = 1;
    }
    for (auto h : hit)
        if (!h)
            throw std::logic_error("affine permutation lookup is not a bijection");
    return lookup;
}
} // namespace

AffinePerm affine_perm_from(BitMatrix a, BitVector b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw std::invalid_argument("affine_perm_from: shape mismatch");
    if (gf2_rank(a) != a.rows())
        throw std::invalid_argument("affine_perm_from: A is singular");
    AffinePerm perm;
    perm.lookup = build_lookup(a, b);
    perm.a = std::move(a);
    perm.b = std::move(b);
    return perm;
}

AffinePerm select_affine_perm(std::size_t m, std::span<const std::uint32_t> pi) {
    const std::size_t n = std::size_t{1} << m;
    if (pi.size() != n)
        throw std::invalid_argument("select_affine_perm: permutation length != 2^m");

    BitVector v0;
    std::vector<BitVector> diffs; // v_i - v_0, kept linearly independent
    std::vector<BitVector> selected;
    for (std::size_t t = 0; t < n && selected.size() < m + 1; ++t) {
        const BitVector v = index_bits(pi[t], m);
        if (selected.empty()) {
            v0 = v;
            selected.push_back(v);
            continue;
        }
        if (extend_independent(diffs, v ^ v0))
            selected.push_back(v);
    }
    // m+1 affinely independent points always exist among all 2^m indices

    BitMatrix a(m, m);
    for (std::size_t i = 1; i <= m; ++i) {
        const BitVector col = selected[i] ^ v0;
        for (std::size_t row = 0; row < m; ++row)
            if (col.get(row))
                a.set(row, i - 1, true);
    }
    AffinePerm perm;
    perm.lookup = build_lookup(a, v0);
    perm.a = std::move(a);
    perm.b = std::move(v0);
    return perm;
}

BitVector apply_perm(const AffinePerm& perm, const BitVector& x) {
    if (x.size() != perm.lookup.size())
        throw std::invalid_argument("apply_perm: length mismatch");
    BitVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.get(perm.lookup[i]))
            out.set(i, true);
    return out;
}

std::vector<double> apply_perm(const AffinePerm& perm, std::span<const double> x) {
    if (x.size() != perm.lookup.size())
        throw std::invalid_argument("apply_perm: length mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[perm.lookup[i]];
    return out;
}

BitVector invert_perm(const AffinePerm& perm, const BitVector& x) {
    if (x.size() != perm.lookup.size())
        throw std::invalid_argument("invert_perm: length mismatch");
    BitVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.get(i))
            out.set(perm.lookup[i], true);
    return out;
}

std::vector<double> invert_perm(const AffinePerm& perm, std::span<const double> x) {
    if (x.size() != perm.lookup.size())
        throw std::invalid_argument("invert_perm: length mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[perm.lookup[i]] = x[i];
    return out;
}

namespace {

std::vector<std::uint64_t> count_block_errors(const LinearCode& code, const SnrSpec& snr,
                                              std::uint64_t seed, std::uint64_t block,
                                              std::uint64_t words, std::size_t m) {
    std::vector<std::uint64_t> err(code.n, 0);
    Rng rng(seed, 0x70726f66ull, block); // profile stream
    std::vector<double> reliability(code.n);
    for (std::uint64_t w = 0; w < words; ++w) {
        const BitVector u = random_message(code, rng);
        const BitVector c = encode(code, u);
        const ChannelRealization rx = transmit_awgn(c, snr, rng);
        for (std::size_t i = 0; i < code.n; ++i)
            reliability[i] = std::abs(rx.soft[i]);
        const auto pi = sort_perm(reliability);
        const AffinePerm perm = select_affine_perm(m, pi);
        for (std::size_t i = 0; i < code.n; ++i) {
            const std::uint32_t src = perm.lookup[i];
            if (rx.hard.get(src) != rx.codeword.get(src))
                ++err[i];
        }
    }
    return err;
}

CrossoverProfile profile_from_counts(const std::vector<std::uint64_t>& err,
                                     std::uint64_t samples, const SnrSpec& snr) {
    CrossoverProfile prof;
    prof.snr = snr;
    prof.samples = samples;
    prof.p.resize(err.size());
    prof.llr_mag.resize(err.size());
    for (std::size_t i = 0; i < err.size(); ++i) {
        double p = static_cast<double>(err[i]) / static_cast<double>(samples);
        p = std::clamp(p, kCrossoverClamp, 0.5 - kCrossoverClamp);
        prof.p[i] = p;
        prof.llr_mag[i] = bsc_llr_magnitude(p);
    }
    return prof;
}

constexpr std::uint64_t kProfileBlockWords = 4096;

} // namespace

CrossoverProfile estimate_crossovers_serial(const LinearCode& code, const SnrSpec& snr,
                                            std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples < 100'000)
        throw std::invalid_argument("estimate_crossovers: need at least 1e5 samples");
    const std::size_t m = detail::log2_exact(code.n);
    std::vector<std::uint64_t> err(code.n, 0);
    std::uint64_t done = 0;
    for (std::uint64_t b = 0; done < n_samples; ++b) {
        const std::uint64_t words = std::min(kProfileBlockWords, n_samples - done);
        const auto blk = count_block_errors(code, snr, seed, b, words, m);
        for (std::size_t i = 0; i < code.n; ++i)
            err[i] += blk[i];
        done += words;
    }
    return profile_from_counts(err, n_samples, snr);
}

CrossoverProfile estimate_crossovers(const LinearCode& code, const SnrSpec& snr,
                                     std::uint64_t n_samples, std::uint64_t seed,
                                     int workers) {
    if (workers <= 1)
        return estimate_crossovers_serial(code, snr, n_samples, seed);
    if (n_samples < 100'000)
        throw std::invalid_argument("estimate_crossovers: need at least 1e5 samples");
    const std::size_t m = detail::log2_exact(code.n);

    const std::uint64_t blocks = (n_samples + kProfileBlockWords - 1) / kProfileBlockWords;
    std::vector<std::vector<std::uint64_t>> partial(blocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
#endif
    for (long b = 0; b < static_cast<long>(blocks); ++b) {
        const std::uint64_t start = static_cast<std::uint64_t>(b) * kProfileBlockWords;
        const std::uint64_t words = std::min(kProfileBlockWords, n_samples - start);
        partial[b] = count_block_errors(code, snr, seed, static_cast<std::uint64_t>(b),
                                        words, m);
    }
    std::vector<std::uint64_t> err(code.n, 0);
    for (const auto& blk : partial)
        for (std::size_t i = 0; i < code.n; ++i)
            err[i] += blk[i];
    return profile_from_counts(err, n_samples, snr);
}

void save_profile_csv(const CrossoverProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_profile_csv: cannot open " + path);
    char buf[128];
    std::snprintf(buf, sizeof buf, "# ebn0_db=%.10g,rate=%.10g,samples=%llu\n",
                  profile.snr.ebn0_db, profile.snr.rate,
                  static_cast<unsigned long long>(profile.samples));
    out << buf << "n,p_n,llr_mag_n\n";
    for (std::size_t i = 0; i < profile.p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", i, profile.p[i],
                      profile.llr_mag[i]);
        out << buf;
    }
    if (!out)
        throw std::runtime_error("save_profile_csv: write failed for " + path);
}

CrossoverProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_profile_csv: cannot open " + path);
    CrossoverProfile prof;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("load_profile_csv: missing header in " + path);
    double ebn0 = 0, rate = 0;
    unsigned long long samples = 0;
    if (std::sscanf(line.c_str(), "# ebn0_db=%lf,rate=%lf,samples=%llu", &ebn0, &rate,
                    &samples) != 3)
        throw std::runtime_error("load_profile_csv: bad header in " + path);
    prof.snr = snr_to_params(ebn0, rate);
    prof.samples = samples;
    if (!std::getline(in, line)) // column names
        throw std::runtime_error("load_profile_csv: truncated " + path);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::size_t n = 0;
        double p = 0, mag = 0;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &n, &p, &mag) != 3)
            throw std::runtime_error("load_profile_csv: bad row in " + path);
        if (n != prof.p.size())
            throw std::runtime_error("load_profile_csv: rows out of order in " + path);
        prof.p.push_back(p);
        prof.llr_mag.push_back(mag);
    }
    return prof;
}

EpisodeSource sort_discard_episode_source(const LinearCode& code, SnrSpec snr) {
    const std::size_t m = detail::log2_exact(code.n);
    return [&code, snr, m](Rng& rng) {
        const BitVector u = random_message(code, rng);
        const BitVector c = encode(code, u);
        const ChannelRealization rx = transmit_awgn(c, snr, rng);
        std::vector<double> reliability(code.n);
        for (std::size_t i = 0; i < code.n; ++i)
            reliability[i] = std::abs(rx.soft[i]);
        const AffinePerm perm = select_affine_perm(m, sort_perm(reliability));
        return EpisodeSample{apply_perm(perm, rx.hard),
                             apply_perm(perm, rx.error_pattern)};
    };
}

} // namespace lbf
