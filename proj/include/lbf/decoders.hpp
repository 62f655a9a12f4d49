#ifndef LBF_DECODERS_HPP
#define LBF_DECODERS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lbf/codes.hpp"
#include "lbf/gf2.hpp"

namespace lbf {

inline constexpr std::size_t kDefaultMaxIters = 10;

struct DecodeResult {
    BitVector estimate;
    bool converged = false; // syndrome zero at exit
    std::size_t flips_used = 0;
    bool stalled = false; // bit-flipping revisited a syndrome and bailed out
};

/// Greedy bit-flipping: repeatedly flip the bit that maximally reduces the
/// number of unsatisfied checks. Ties go to the lowest index. A repeated
/// syndrome ends the loop early with `stalled` set.
DecodeResult bf_decode(const ColumnCache& pc, const BitVector& z,
                       std::size_t max_iters = kDefaultMaxIters);

/// Weighted bit-flipping: check m carries weight phi_m = min_{n in N_m}
/// |y_n|; bit metric E_n = sum_{m in M_n} (2 s_m - 1) phi_m; the argmax-E
/// bit is flipped each iteration.
DecodeResult wbf_decode(const ColumnCache& pc, std::span<const double> y,
                        std::size_t max_iters = kDefaultMaxIters);

/// Dense coset-leader table over all 2^M syndromes (M <= 18, N <= 64),
/// filled breadth-first by error weight.
struct SyndromeTable {
    std::size_t m_bits = 0;
    std::size_t n = 0;
    std::vector<std::uint32_t> col_syndrome; // per-position single-error syndrome
    std::vector<std::uint64_t> leader;       // coset leader bits, indexed by syndrome
    std::vector<std::uint8_t> filled;
    std::size_t max_leader_weight = 0;
};

SyndromeTable build_syndrome_table(const BitMatrix& h, std::size_t max_weight = ~std::size_t{0});
DecodeResult syndrome_ml_decode(const SyndromeTable& table, const BitVector& z);

/// Exhaustive ML over all 2^K codewords (K <= 20). Hard metric: Hamming
/// distance to z. Soft metric: maximize sum (-1)^{c_n} llr_n.
DecodeResult brute_force_ml_hard(const LinearCode& code, const BitVector& z);
DecodeResult brute_force_ml_soft(const LinearCode& code, std::span<const double> llr);

/// Ordered statistics decoding of order <= 4 over the most-reliable basis.
DecodeResult osd_decode(const LinearCode& code, std::span<const double> y, unsigned order);

} // namespace lbf

#endif
