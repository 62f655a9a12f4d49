#ifndef LBF_AUTOPERM_HPP
#define LBF_AUTOPERM_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbf/channel.hpp"
#include "lbf/codes.hpp"
#include "lbf/decoders.hpp"
#include "lbf/mdp.hpp"
#include "lbf/rl.hpp"

namespace lbf {

/// Affine index map T(v) = A v + b on F_2^m, acting on bit positions
/// through their binary representation. For Reed-Muller codes every such
/// map (with A invertible) is a code automorphism.
struct AffinePerm {
    BitMatrix a;                        // m x m, invertible
    BitVector b;                        // length m
    std::vector<std::uint32_t> lookup;  // out[i] = x[lookup[i]], lookup[i] = T(i)
};

/// Stable permutation sorting r ascending: r[pi[0]] <= r[pi[1]] <= ...
std::vector<std::uint32_t> sort_perm(std::span<const double> r);

/// Walks pi in order, collects the first m+1 affinely independent position
/// indices v_0..v_m, and returns the map with b = v_0 and A columns
/// v_i - v_0. Positions {0, 1, 2, 4, ..., 2^(m-1)} then receive the
/// selected (least reliable) positions: T(0) = v_0, T(2^(i-1)) = v_i.
AffinePerm select_affine_perm(std::size_t m, std::span<const std::uint32_t> pi);

/// Builds the lookup for given (A, b); throws if A is singular.
AffinePerm affine_perm_from(BitMatrix a, BitVector b);

BitVector apply_perm(const AffinePerm& perm, const BitVector& x);
std::vector<double> apply_perm(const AffinePerm& perm, std::span<const double> x);
BitVector invert_perm(const AffinePerm& perm, const BitVector& x);
std::vector<double> invert_perm(const AffinePerm& perm, std::span<const double> x);

/// Per-position crossover probabilities of the N parallel BSCs induced by
/// permuting AWGN words by reliability and discarding the soft values.
struct CrossoverProfile {
    std::vector<double> p;       // clamped to [1e-6, 0.5 - 1e-6]
    std::vector<double> llr_mag; // log((1-p)/p)
    SnrSpec snr;
    std::uint64_t samples = 0;
};

inline constexpr double kCrossoverClamp = 1e-6;

/// Monte Carlo estimate with per-block random streams; worker-count
/// invariant. Requires n_samples >= 1e5.
CrossoverProfile estimate_crossovers(const LinearCode& code, const SnrSpec& snr,
                                     std::uint64_t n_samples, std::uint64_t seed,
                                     int workers = 1);
/// Single-loop reference used to validate the parallel kernel.
CrossoverProfile estimate_crossovers_serial(const LinearCode& code, const SnrSpec& snr,
                                            std::uint64_t n_samples, std::uint64_t seed);

/// CSV: one comment header row carrying SNR/samples, then n, p_n, llr_mag_n.
void save_profile_csv(const CrossoverProfile& profile, const std::string& path);
CrossoverProfile load_profile_csv(const std::string& path);

/// Sort-and-discard decoding: select the reliability-driven automorphism,
/// permute the hard decisions, run the learned policy on syndromes alone,
/// and unpermute the estimate.
template <typename Q>
DecodeResult sort_and_discard_decode(const Q& q, const MdpConfig& cfg,
                                     std::span<const double> y, std::size_t max_flips);

/// Training episodes for sort-and-discard: a fresh permutation is selected
/// per codeword, exactly as at inference.
EpisodeSource sort_discard_episode_source(const LinearCode& code, SnrSpec snr);

// --- template implementation ---

namespace detail {
std::size_t log2_exact(std::size_t n);
}

template <typename Q>
DecodeResult sort_and_discard_decode(const Q& q, const MdpConfig& cfg,
                                     std::span<const double> y, std::size_t max_flips) {
    const std::size_t n = cfg.pc.cols();
    if (y.size() != n)
        throw std::invalid_argument("sort_and_discard_decode: dimension mismatch");
    const std::size_t m = detail::log2_exact(n);

    std::vector<double> reliability(n);
    for (std::size_t i = 0; i < n; ++i)
        reliability[i] = std::abs(y[i]);
    const auto pi = sort_perm(reliability);
    const AffinePerm perm = select_affine_perm(m, pi);

    BitVector z(n);
    for (std::size_t i = 0; i < n; ++i)
        if (y[i] < 0.0)
            z.set(i, true);
    const BitVector z_perm = apply_perm(perm, z);

    DecodeResult inner = lbf_decode(q, cfg, z_perm, max_flips);
    DecodeResult res;
    res.estimate = invert_perm(perm, inner.estimate);
    res.converged = inner.converged;
    res.flips_used = inner.flips_used;
    return res;
}

} // namespace lbf

#endif
