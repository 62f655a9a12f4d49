#ifndef LBF_CODES_HPP
#define LBF_CODES_HPP

#include <cstddef>
#include <string>

#include "lbf/channel.hpp"
#include "lbf/gf2.hpp"

namespace lbf {

struct RmParams {
    unsigned r = 0; // order
    unsigned m = 0; // log2 blocklength
};

/// (N,K) binary linear code with a generator and a default (standard)
/// parity-check matrix. Immutable after construction.
struct LinearCode {
    std::size_t n = 0;
    std::size_t k = 0;
    BitMatrix generator; // K x N
    BitMatrix pc;        // M x N, M >= N-K
    std::string label;

    double rate() const { return static_cast<double>(k) / static_cast<double>(n); }
};

/// Validates G*H^T = 0 and rank(G) = K; throws std::invalid_argument.
LinearCode code_from_matrices(std::string label, BitMatrix generator, BitMatrix pc);

/// Reed-Muller RM(r,m). Generator rows are the evaluation vectors of all
/// monomials of degree <= r in m boolean variables (position i read as the
/// binary vector of i); the parity-check matrix is the generator of the
/// dual code RM(m-r-1, m).
LinearCode build_rm(RmParams params);

/// All distinct nonzero minimum-weight dual codewords, as matrix rows in
/// lexicographic order. Enumerates the full dual code; refuses when the
/// dual dimension exceeds 24 (use gen-h --force-enumerate or load_pc).
BitMatrix overcomplete_pc(const LinearCode& code);

/// Enumeration engine behind overcomplete_pc with a caller-chosen dual
/// dimension bound. Dimension 29 (RM(128,99)) takes a few seconds.
BitMatrix minweight_dual_rows(const LinearCode& code, std::size_t max_dual_dim);

/// Text format: first line "M N", then M lines of N space-separated {0,1}.
BitMatrix load_pc(const std::string& path);
void save_pc(const BitMatrix& h, const std::string& path);

/// Code from generator/parity-check files (used for the file-defined BCH
/// codes whose matrices ship under data/).
LinearCode code_from_files(std::string label, const std::string& gen_path,
                           const std::string& pc_path);

/// c = u^T G.
BitVector encode(const LinearCode& code, const BitVector& u);

/// s = H z.
BitVector syndrome(const BitMatrix& h, const BitVector& z);

BitVector random_message(const LinearCode& code, Rng& rng);

/// Recovers the message u with u*G = c for codewords c (left inverse of
/// the encoder), for information-bit error counting.
class MessageRecovery {
  public:
    explicit MessageRecovery(const LinearCode& code);
    BitVector message_of(const BitVector& codeword) const;

  private:
    std::vector<std::size_t> pivot_cols_;
    BitMatrix transform_; // K x K map from codeword bits on pivots to u
};

} // namespace lbf

#endif
