#include "lbf/mdp.hpp"

#include <algorithm>
#include <stdexcept>

namespace lbf {

MdpConfig MdpConfig::bsc(BitMatrix h, std::size_t max_flips, double gamma,
                         double llr_magnitude) {
    if (max_flips < 1)
        throw std::invalid_argument("MdpConfig: max_flips must be >= 1");
    if (!(llr_magnitude > 0.0))
        throw std::invalid_argument("MdpConfig: llr magnitude must be positive");
    MdpConfig cfg;
    cfg.max_flips = max_flips;
    cfg.gamma = gamma;
    cfg.llr_mag.assign(h.cols(), llr_magnitude);
    cfg.c_scale = 1.0 / (static_cast<double>(max_flips) * llr_magnitude);
    cfg.pc = ColumnCache(std::move(h));
    return cfg;
}

MdpConfig MdpConfig::profiled(BitMatrix h, std::size_t max_flips, double gamma,
                              std::vector<double> llr_mag) {
    if (max_flips < 1)
        throw std::invalid_argument("MdpConfig: max_flips must be >= 1");
    if (llr_mag.size() != h.cols())
        throw std::invalid_argument("MdpConfig: llr_mag length mismatch");
    const double max_mag = *std::max_element(llr_mag.begin(), llr_mag.end());
    if (!(max_mag > 0.0) ||
        !(*std::min_element(llr_mag.begin(), llr_mag.end()) > 0.0))
        throw std::invalid_argument("MdpConfig: llr magnitudes must be positive");
    MdpConfig cfg;
    cfg.max_flips = max_flips;
    cfg.gamma = gamma;
    cfg.llr_mag = std::move(llr_mag);
    cfg.c_scale = 1.0 / (static_cast<double>(max_flips) * max_mag * 1.01);
    cfg.pc = ColumnCache(std::move(h));
    return cfg;
}

MdpState mdp_reset(const MdpConfig& cfg, const BitVector& z) {
    if (z.size() != cfg.pc.cols())
        throw std::invalid_argument("mdp_reset: dimension mismatch");
    return MdpState{mat_vec_mul(cfg.pc.matrix, z), 0};
}

MdpStep mdp_step(const MdpConfig& cfg, const MdpState& state, std::size_t action) {
    if (state.terminal())
        throw std::logic_error("mdp_step: state is terminal");
    if (state.steps_taken >= cfg.max_flips)
        throw std::logic_error("mdp_step: episode already truncated");
    if (action >= cfg.pc.cols())
        throw std::invalid_argument("mdp_step: action out of range");

    MdpStep out;
    out.state.syndrome = state.syndrome ^ cfg.pc.col[action];
    out.state.steps_taken = state.steps_taken + 1;
    const bool matched = out.state.syndrome.is_zero();
    out.reward = -cfg.c_scale * cfg.llr_mag[action] + (matched ? 1.0 : 0.0);
    out.done = matched || out.state.steps_taken == cfg.max_flips;
    return out;
}

double episode_return(std::span<const double> rewards, double gamma) {
    double total = 0.0;
    double scale = 1.0;
    for (double r : rewards) {
        total += scale * r;
        scale *= gamma;
    }
    return total;
}

} // namespace lbf
