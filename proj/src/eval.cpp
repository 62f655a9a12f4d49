#include "lbf/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbf {

double ErrorStats::stderr_cer() const {
    if (codewords == 0)
        return 0.0;
    const double p = cer();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(codewords));
}

void ErrorStats::merge(const ErrorStats& o) {
    codewords += o.codewords;
    codeword_errors += o.codeword_errors;
    bit_errors += o.bit_errors;
    bits += o.bits;
}

void LearningCurve::record(bool success) {
    outcomes_.push_back(success ? 1 : 0);
    const std::uint32_t prev = cum_.empty() ? 0 : cum_.back();
    cum_.push_back(prev + (success ? 1 : 0));
}

double LearningCurve::ma_cer_at(std::size_t i) const {
    if (i + 1 < kWindow || i >= outcomes_.size())
        throw std::out_of_range("LearningCurve::ma_cer_at");
    // cum_[j] counts successes among episodes [0, j]
    const std::uint32_t hi = cum_[i];
    const std::uint32_t lo = (i >= kWindow) ? cum_[i - kWindow] : 0;
    return 1.0 - static_cast<double>(hi - lo) / static_cast<double>(kWindow);
}

std::optional<std::size_t> LearningCurve::first_ma_below(double threshold) const {
    for (std::size_t i = kWindow - 1; i < outcomes_.size(); ++i)
        if (ma_cer_at(i) < threshold)
            return i;
    return std::nullopt;
}

void LearningCurve::write_csv(const std::string& path, std::size_t stride) const {
    if (stride == 0)
        stride = 1;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("LearningCurve::write_csv: cannot open " + path);
    out << "episode,ma_cer\n";
    for (std::size_t i = kWindow - 1; i < outcomes_.size(); i += stride) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%.6g\n", i, ma_cer_at(i));
        out << buf;
    }
}

void record_outcome(LearningCurve& curve, bool success) { curve.record(success); }

namespace {

struct BlockPlan {
    std::uint64_t index;
    std::uint64_t words;
};

ErrorStats simulate_block(const LinearCode& code, const TransmitFn& transmit,
                          const DecodeFn& decode, const MonteCarloOptions& opt,
                          const MessageRecovery* recover, const BlockPlan& plan) {
    ErrorStats st;
    Rng rng(opt.seed, opt.stream, plan.index);
    for (std::uint64_t w = 0; w < plan.words; ++w) {
        const BitVector u = random_message(code, rng);
        const BitVector c = encode(code, u);
        const ChannelRealization rx = transmit(c, rng);
        const BitVector est = decode(rx);
        ++st.codewords;
        if (est != c)
            ++st.codeword_errors;
        if (recover) {
            st.bit_errors += xor_popcount(recover->message_of(est), u);
            st.bits += code.k;
        } else {
            st.bit_errors += xor_popcount(est, c);
            st.bits += code.n;
        }
    }
    return st;
}

bool should_stop(const ErrorStats& st, const MonteCarloOptions& opt) {
    return st.codeword_errors >= opt.min_errors || st.codewords >= opt.max_words;
}

std::uint64_t block_words(const MonteCarloOptions& opt, std::uint64_t block_index) {
    const std::uint64_t start = block_index * opt.block_words;
    if (start >= opt.max_words)
        return 0;
    return std::min(opt.block_words, opt.max_words - start);
}

} // namespace

ErrorStats run_monte_carlo_serial(const LinearCode& code, const TransmitFn& transmit,
                                  const DecodeFn& decode, const MonteCarloOptions& opt) {
    if (opt.min_errors < 1)
        throw std::invalid_argument("run_monte_carlo: min_errors must be >= 1");
    const std::optional<MessageRecovery> recover =
        opt.info_bit_ber ? std::optional<MessageRecovery>(MessageRecovery(code))
                         : std::nullopt;
    ErrorStats total;
    for (std::uint64_t b = 0;; ++b) {
        const std::uint64_t words = block_words(opt, b);
        if (words == 0)
            break;
        total.merge(simulate_block(code, transmit, decode, opt,
                                   recover ? &*recover : nullptr, {b, words}));
        if (should_stop(total, opt))
            break;
    }
    return total;
}

ErrorStats run_monte_carlo(const LinearCode& code, const TransmitFn& transmit,
                           const DecodeFn& decode, const MonteCarloOptions& opt) {
    if (opt.min_errors < 1)
        throw std::invalid_argument("run_monte_carlo: min_errors must be >= 1");
    if (opt.workers <= 1)
        return run_monte_carlo_serial(code, transmit, decode, opt);

    const std::optional<MessageRecovery> recover =
        opt.info_bit_ber ? std::optional<MessageRecovery>(MessageRecovery(code))
                         : std::nullopt;
    const MessageRecovery* rec = recover ? &*recover : nullptr;

    const std::uint64_t chunk = static_cast<std::uint64_t>(opt.workers) * 4;
    ErrorStats total;
    bool stop = false;
    for (std::uint64_t base = 0; !stop; base += chunk) {
        std::vector<BlockPlan> plans;
        for (std::uint64_t i = 0; i < chunk; ++i) {
            const std::uint64_t words = block_words(opt, base + i);
            if (words == 0)
                break;
            plans.push_back({base + i, words});
        }
        if (plans.empty())
            break;
        std::vector<ErrorStats> results(plans.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(opt.workers)
#endif
        for (long i = 0; i < static_cast<long>(plans.size()); ++i)
            results[i] = simulate_block(code, transmit, decode, opt, rec, plans[i]);

        // merge in block order; later blocks are discarded once the stop
        // rule fires so the outcome matches the serial reference exactly
        for (const auto& st : results) {
            total.merge(st);
            if (should_stop(total, opt)) {
                stop = true;
                break;
            }
        }
        if (plans.size() < chunk)
            break; // max_words exhausted
    }
    return total;
}

namespace {
std::string format_stats_row(const ResultRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6g,%s,%s,%llu,%.10g,%.10g,%.10g\n", r.snr_db,
                  r.decoder.c_str(), r.pc_matrix.c_str(),
                  static_cast<unsigned long long>(r.stats.codewords), r.stats.cer(),
                  r.stats.ber(), r.stats.stderr_cer());
    return buf;
}
} // namespace

void write_results_csv(std::span<const ResultRow> rows, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_results_csv: cannot open " + path);
    out << "snr_db,decoder,pc_matrix,codewords,cer,ber,stderr_cer\n";
    for (const auto& r : rows)
        out << format_stats_row(r);
    if (!out)
        throw std::runtime_error("write_results_csv: write failed for " + path);
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_results_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_results_csv: empty file " + path);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        ResultRow r;
        std::getline(ss, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ss, r.decoder, ',');
        std::getline(ss, r.pc_matrix, ',');
        std::getline(ss, field, ',');
        r.stats.codewords = std::stoull(field);
        std::getline(ss, field, ',');
        const double cer = std::stod(field);
        r.stats.codeword_errors =
            static_cast<std::uint64_t>(std::llround(cer * static_cast<double>(r.stats.codewords)));
        std::getline(ss, field, ',');
        // ber and stderr are derived quantities; bits are not serialized
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace lbf
