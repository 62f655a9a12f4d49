#ifndef LBF_CHANNEL_HPP
#define LBF_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "lbf/gf2.hpp"

namespace lbf {

/// Counter-based random stream: a SplitMix64 chain keyed by
/// (master seed, stream id, block id). Workers processing disjoint blocks
/// draw from disjoint streams, so results do not depend on the worker
/// count or scheduling.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : Rng(seed, 0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }
    result_type operator()();

    /// Uniform double in [0, 1).
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via the polar method.
    double normal();

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct SnrSpec {
    double ebn0_db = 0.0;
    double rate = 0.0;
    double sigma = 0.0; // noise std dev for unit-energy BPSK
    double bsc_p = 0.0; // hard-decision crossover Q(1/sigma)
};

/// Gaussian tail probability Q(x).
double gaussian_q(double x);

/// log((1-p)/p), the LLR magnitude of a BSC with crossover p.
double bsc_llr_magnitude(double p);

SnrSpec snr_to_params(double ebn0_db, double rate);

struct ChannelRealization {
    BitVector codeword;
    std::vector<double> soft; // y
    BitVector hard;           // z, sign map +1 -> 0, -1 -> 1 (tie y=0 -> 0)
    std::vector<double> llr;  // lambda
    BitVector error_pattern;  // z xor c
};

/// BPSK over AWGN: y_n = (-1)^{c_n} + sigma * g_n, llr = 2 y / sigma^2.
ChannelRealization transmit_awgn(const BitVector& c, const SnrSpec& spec, Rng& rng);

/// BSC with crossover p; soft mirrors the +-1 hard values and
/// |llr| = log((1-p)/p) everywhere.
ChannelRealization transmit_bsc(const BitVector& c, double p, Rng& rng);

} // namespace lbf

#endif
