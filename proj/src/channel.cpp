#include "lbf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace lbf {

namespace {
std::uint64_t splitmix_next(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    std::uint64_t s = seed;
    state_ = splitmix_next(s);
    s = state_ ^ (stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
    state_ = splitmix_next(s);
    s = state_ ^ (block * 0x9e3779b97f4a7c15ull + 0x6a09e667f3bcc909ull);
    state_ = splitmix_next(s);
}

Rng::result_type Rng::operator()() { return splitmix_next(state_); }

double Rng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = (*this)();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double bsc_llr_magnitude(double p) { return std::log((1.0 - p) / p); }

SnrSpec snr_to_params(double ebn0_db, double rate) {
    if (!(rate > 0.0) || rate > 1.0)
        throw std::invalid_argument("snr_to_params: rate must be in (0,1]");
    SnrSpec s;
    s.ebn0_db = ebn0_db;
    s.rate = rate;
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    s.sigma = 1.0 / std::sqrt(2.0 * rate * ebn0);
    s.bsc_p = gaussian_q(1.0 / s.sigma);
    return s;
}

ChannelRealization transmit_awgn(const BitVector& c, const SnrSpec& spec, Rng& rng) {
    const std::size_t n = c.size();
    ChannelRealization out;
    out.codeword = c;
    out.soft.resize(n);
    out.llr.resize(n);
    out.hard = BitVector(n);
    const double two_over_var = 2.0 / (spec.sigma * spec.sigma);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = (c.get(i) ? -1.0 : 1.0) + spec.sigma * rng.normal();
        out.soft[i] = y;
        out.llr[i] = two_over_var * y;
        if (y < 0.0) // tie y = 0 maps to hard 0
            out.hard.set(i, true);
    }
    out.error_pattern = out.hard ^ c;
    return out;
}

ChannelRealization transmit_bsc(const BitVector& c, double p, Rng& rng) {
    if (p < 0.0 || p >= 0.5)
        throw std::invalid_argument("transmit_bsc: p must be in [0, 0.5)");
    const std::size_t n = c.size();
    const double mag = bsc_llr_magnitude(p);
    ChannelRealization out;
    out.codeword = c;
    out.soft.resize(n);
    out.llr.resize(n);
    out.hard = c;
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < p)
            out.hard.flip(i);
        const bool bit = out.hard.get(i);
        out.soft[i] = bit ? -1.0 : 1.0;
        out.llr[i] = bit ? -mag : mag;
    }
    out.error_pattern = out.hard ^ c;
    return out;
}

} // namespace lbf
