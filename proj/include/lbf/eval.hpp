#ifndef LBF_EVAL_HPP
#define LBF_EVAL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbf/channel.hpp"
#include "lbf/codes.hpp"

namespace lbf {

struct ErrorStats {
    std::uint64_t codewords = 0;
    std::uint64_t codeword_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;

    double cer() const {
        return codewords ? static_cast<double>(codeword_errors) / codewords : 0.0;
    }
    double ber() const { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
    double stderr_cer() const;

    void merge(const ErrorStats& o);
    bool operator==(const ErrorStats&) const = default;
};

/// Per-episode success/failure log with a window-5000 moving-average CER.
class LearningCurve {
  public:
    static constexpr std::size_t kWindow = 5000;

    void record(bool success);
    std::size_t size() const { return outcomes_.size(); }
    bool outcome(std::size_t i) const { return outcomes_[i] != 0; }

    /// Moving-average CER ending at episode i (needs i >= kWindow - 1).
    double ma_cer_at(std::size_t i) const;

    /// First episode index whose moving average drops below `threshold`.
    std::optional<std::size_t> first_ma_below(double threshold) const;

    void write_csv(const std::string& path, std::size_t stride = 1) const;

  private:
    std::vector<std::uint8_t> outcomes_;
    std::vector<std::uint32_t> cum_; // cum_[i] = successes among episodes [0, i)
};

void record_outcome(LearningCurve& curve, bool success);

/// Channel draw for one transmitted codeword.
using TransmitFn = std::function<ChannelRealization(const BitVector& c, Rng& rng)>;
/// Decoder under test; returns the codeword estimate.
using DecodeFn = std::function<BitVector(const ChannelRealization& rx)>;

struct MonteCarloOptions {
    std::uint64_t min_errors = 100;
    std::uint64_t max_words = 10'000'000;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0; // unique per experiment point
    int workers = 1;
    std::uint64_t block_words = 256;
    bool info_bit_ber = false; // count bit errors on message bits instead
};

/// Shards the simulation into fixed blocks with per-block random streams;
/// the result is identical for any worker count. Blocks are merged in
/// index order and the stop rule is evaluated block by block.
ErrorStats run_monte_carlo(const LinearCode& code, const TransmitFn& transmit,
                           const DecodeFn& decode, const MonteCarloOptions& opt);

/// Plain single-loop reference with the same block semantics.
ErrorStats run_monte_carlo_serial(const LinearCode& code, const TransmitFn& transmit,
                                  const DecodeFn& decode, const MonteCarloOptions& opt);

struct ResultRow {
    double snr_db = 0.0;
    std::string decoder;
    std::string pc_matrix;
    ErrorStats stats;
};

/// CSV columns: snr_db, decoder, pc_matrix, codewords, cer, ber, stderr_cer.
void write_results_csv(std::span<const ResultRow> rows, const std::string& path);
std::vector<ResultRow> read_results_csv(const std::string& path);

} // namespace lbf

#endif
