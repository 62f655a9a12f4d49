#ifndef LBF_RL_HPP
#define LBF_RL_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbf/channel.hpp"
#include "lbf/codes.hpp"
#include "lbf/decoders.hpp"
#include "lbf/eval.hpp"
#include "lbf/mdp.hpp"

namespace lbf {

/// Sparse action-value table keyed by syndrome; absent keys read as the
/// all-zero value vector.
class QTable {
  public:
    QTable() = default;
    QTable(std::size_t syndrome_bits, std::size_t num_actions);

    std::size_t syndrome_bits() const { return m_; }
    std::size_t num_actions() const { return n_; }
    std::size_t entry_count() const { return q_.size(); }

    std::span<const float> row(const BitVector& s) const;
    float value(const BitVector& s, std::size_t a) const { return row(s)[a]; }
    void set_value(const BitVector& s, std::size_t a, float v);

    void save(const std::string& path) const;
    static QTable load(const std::string& path);

    const std::unordered_map<BitVector, std::vector<float>, BitVectorHash>&
    entries() const {
        return q_;
    }

  private:
    std::size_t m_ = 0, n_ = 0;
    std::unordered_map<BitVector, std::vector<float>, BitVectorHash> q_;
    std::vector<float> zeros_;
};

/// One-hidden-layer ReLU network mapping syndromes to per-action values,
/// trained with Adam. Weights are double internally and persist as f32.
class QNetwork {
  public:
    QNetwork() = default;
    static QNetwork init(std::size_t in, std::size_t hidden, std::size_t out,
                         double learning_rate, Rng& rng);

    std::size_t input_size() const { return in_; }
    std::size_t hidden_size() const { return hidden_; }
    std::size_t output_size() const { return out_; }
    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }

    /// Syndrome bits enter as {0.0, 1.0}.
    std::vector<double> forward(const BitVector& s) const;

    void save(const std::string& path, bool with_adam = true) const;
    static QNetwork load(const std::string& path);

    // parameter blocks (exposed for gradient checks and persistence)
    std::vector<double> w1, b1, w2, b2; // w1: hidden x in, w2: out x hidden

    struct Adam {
        std::vector<double> m, v;
        std::uint64_t t = 0;
    };
    Adam adam;

  private:
    std::size_t in_ = 0, hidden_ = 0, out_ = 0;
    double lr_ = 3e-5;
};

struct Transition {
    BitVector s;
    std::size_t a = 0;
    double r = 0.0;
    BitVector next;
    bool terminal = false;
};

/// Fixed-capacity transition store, flushed exactly when full.
class TransitionBatch {
  public:
    explicit TransitionBatch(std::size_t capacity) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return items_.size(); }
    bool full() const { return items_.size() == capacity_; }
    void push(Transition t);
    void clear() { items_.clear(); }
    std::span<const Transition> items() const { return items_; }

  private:
    std::size_t capacity_;
    std::vector<Transition> items_;
};

std::size_t greedy_action(const QTable& q, const BitVector& s);
std::size_t greedy_action(const QNetwork& q, const BitVector& s);

struct ExploreSpec {
    enum class Kind { eps_greedy, eps_goal };
    enum class Schedule { constant, linear_decay };

    Kind kind = Kind::eps_greedy;
    Schedule schedule = Schedule::constant;
    double eps = 0.0;
    double eps_g = 0.0;
    double eps_start = 0.0, eps_end = 0.0;
    std::size_t decay_episodes = 0;

    static ExploreSpec greedy(double eps);
    static ExploreSpec goal(double eps, double eps_g);
    static ExploreSpec greedy_linear(double start, double end, std::size_t episodes);

    double eps_at(std::size_t episode) const;
};

/// Eq.-style exploration: uniform over all actions w.p. eps; for goal
/// exploration additionally uniform over supp(error) w.p. eps_g (falling
/// back to greedy when the support is empty); otherwise greedy.
template <typename Q>
std::size_t explore_action(const ExploreSpec& spec, std::size_t episode, const Q& q,
                           const BitVector& s, const BitVector* error, Rng& rng);

void q_update(QTable& table, const BitVector& s, std::size_t a, double r,
              const BitVector& next, bool done, double alpha, double gamma);

/// Greedy rollout of a learned policy on the decoding MDP.
template <typename Q>
DecodeResult lbf_decode(const Q& q, const MdpConfig& cfg, const BitVector& z,
                        std::size_t max_flips);

struct NetGrads {
    std::vector<double> w1, b1, w2, b2;
    void resize_like(const QNetwork& net);
};

/// Squared Bellman-residual loss over the batch with the bootstrap target
/// held constant (semi-gradient). Returns the loss; grads are accumulated
/// fresh.
double fitted_loss_and_grads(const QNetwork& net, std::span<const Transition> batch,
                             double gamma, NetGrads& grads);

/// One Adam step on the batch loss; empties the batch. Returns the loss.
double fitted_q_step(QNetwork& net, TransitionBatch& batch, double gamma);

/// One channel draw as seen by the MDP: hard decisions plus the true error
/// pattern (training-only ground truth), both already permuted when a
/// sort-and-discard pipeline produced them.
struct EpisodeSample {
    BitVector hard;
    BitVector error;
};
using EpisodeSource = std::function<EpisodeSample(Rng&)>;

/// Draws over a BSC with crossover p.
EpisodeSource bsc_episode_source(const LinearCode& code, double p);

struct TabularTrainResult {
    QTable table;
    LearningCurve curve;
};

TabularTrainResult train_tabular(const MdpConfig& cfg, const EpisodeSource& source,
                                 const ExploreSpec& explore, double alpha,
                                 std::size_t episodes, std::uint64_t seed);

struct FittedTrainResult {
    QNetwork net;
    LearningCurve curve;
};

FittedTrainResult train_fitted(const MdpConfig& cfg, const EpisodeSource& source,
                               const ExploreSpec& explore, std::size_t hidden,
                               std::size_t batch_size, double learning_rate,
                               std::size_t episodes, std::uint64_t seed);

// --- template implementations ---

namespace detail {
template <typename Values>
std::size_t argmax_action(const Values& v, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] > v[best])
            best = i;
    return best;
}
} // namespace detail

inline std::size_t num_actions_of(const QTable& q) { return q.num_actions(); }
inline std::size_t num_actions_of(const QNetwork& q) { return q.output_size(); }

template <typename Q>
std::size_t explore_action(const ExploreSpec& spec, std::size_t episode, const Q& q,
                           const BitVector& s, const BitVector* error, Rng& rng) {
    const double eps = spec.eps_at(episode);
    const double u = rng.uniform();
    if (u < eps)
        return static_cast<std::size_t>(rng.below(num_actions_of(q)));
    if (spec.kind == ExploreSpec::Kind::eps_goal && u < eps + spec.eps_g) {
        if (error != nullptr && !error->is_zero()) {
            const std::size_t w = error->popcount();
            std::size_t pick = static_cast<std::size_t>(rng.below(w));
            for (std::size_t i = 0; i < error->size(); ++i)
                if (error->get(i)) {
                    if (pick == 0)
                        return i;
                    --pick;
                }
        }
        // empty support: fall through to greedy
    }
    return greedy_action(q, s);
}

template <typename Q>
DecodeResult lbf_decode(const Q& q, const MdpConfig& cfg, const BitVector& z,
                        std::size_t max_flips) {
    DecodeResult res;
    res.estimate = z;
    BitVector s = mat_vec_mul(cfg.pc.matrix, z);
    while (!s.is_zero() && res.flips_used < max_flips) {
        const std::size_t a = greedy_action(q, s);
        res.estimate.flip(a);
        s ^= cfg.pc.col[a];
        ++res.flips_used;
    }
    res.converged = s.is_zero();
    return res;
}

} // namespace lbf

#endif
