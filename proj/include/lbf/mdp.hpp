#ifndef LBF_MDP_HPP
#define LBF_MDP_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "lbf/gf2.hpp"

namespace lbf {

/// Syndrome-domain decoding MDP. States are binary syndromes, actions are
/// bit positions, transitions add the corresponding parity-check column,
/// and the zero syndrome is terminal. Episodes are truncated after
/// `max_flips` actions.
struct MdpConfig {
    ColumnCache pc;
    std::size_t max_flips = 10;          // T
    std::vector<double> llr_mag;         // |lambda_n| per position
    double c_scale = 0.0;                // penalty scale in the reward
    double gamma = 0.99;

    /// Uniform-reliability (BSC) reward: flipping costs exactly 1/T, so a
    /// decode in k flips returns 1 - k/T at gamma = 1.
    static MdpConfig bsc(BitMatrix h, std::size_t max_flips, double gamma,
                         double llr_magnitude);

    /// Per-position reliabilities; c is scaled so that the +1 syndrome
    /// match bonus dominates any cumulative flip penalty with 1% margin.
    static MdpConfig profiled(BitMatrix h, std::size_t max_flips, double gamma,
                              std::vector<double> llr_mag);
};

struct MdpState {
    BitVector syndrome;
    std::size_t steps_taken = 0;

    bool terminal() const { return syndrome.is_zero(); }
};

MdpState mdp_reset(const MdpConfig& cfg, const BitVector& z);

struct MdpStep {
    MdpState state;
    double reward = 0.0;
    bool done = false;
};

MdpStep mdp_step(const MdpConfig& cfg, const MdpState& state, std::size_t action);

/// sum_t gamma^t r_t
double episode_return(std::span<const double> rewards, double gamma);

} // namespace lbf

#endif
