#include "lbf/rl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lbf {

namespace {

void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error("unexpected end of file");
    return v;
}

void write_f32_block(std::ofstream& out, std::span<const double> vals) {
    for (double d : vals) {
        const float f = static_cast<float>(d);
        out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
}

void read_f32_block(std::ifstream& in, std::span<double> vals) {
    for (double& d : vals) {
        float f = 0;
        if (!in.read(reinterpret_cast<char*>(&f), sizeof f))
            throw std::runtime_error("unexpected end of file");
        d = f;
    }
}

std::vector<std::uint8_t> key_bytes(const BitVector& s) {
    const std::size_t nbytes = (s.size() + 7) / 8;
    std::vector<std::uint8_t> bytes(nbytes, 0);
    auto ws = s.words();
    for (std::size_t b = 0; b < nbytes; ++b)
        bytes[b] = static_cast<std::uint8_t>(ws[b / 8] >> (8 * (b % 8)));
    return bytes;
}

BitVector key_from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
    BitVector s(bits);
    auto ws = s.words();
    for (std::size_t b = 0; b < bytes.size(); ++b)
        ws[b / 8] |= static_cast<std::uint64_t>(bytes[b]) << (8 * (b % 8));
    return s;
}

} // namespace

QTable::QTable(std::size_t syndrome_bits, std::size_t num_actions)
    : m_(syndrome_bits), n_(num_actions), zeros_(num_actions, 0.0f) {}

std::span<const float> QTable::row(const BitVector& s) const {
    auto it = q_.find(s);
    if (it == q_.end())
        return zeros_;
    return it->second;
}

void QTable::set_value(const BitVector& s, std::size_t a, float v) {
    auto it = q_.find(s);
    if (it == q_.end())
        it = q_.emplace(s, std::vector<float>(n_, 0.0f)).first;
    it->second[a] = v;
}

void QTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("QTable::save: cannot open " + path);
    write_u64(out, m_);
    write_u64(out, n_);
    write_u64(out, q_.size());
    std::vector<const BitVector*> keys;
    keys.reserve(q_.size());
    for (const auto& [k, v] : q_)
        keys.push_back(&k);
    std::sort(keys.begin(), keys.end(),
              [](const BitVector* a, const BitVector* b) { return lex_less(*a, *b); });
    for (const BitVector* k : keys) {
        const auto bytes = key_bytes(*k);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        for (float f : q_.at(*k))
            out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
    if (!out)
        throw std::runtime_error("QTable::save: write failed for " + path);
}

QTable QTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("QTable::load: cannot open " + path);
    const std::uint64_t m = read_u64(in);
    const std::uint64_t n = read_u64(in);
    const std::uint64_t count = read_u64(in);
    QTable t(m, n);
    const std::size_t nbytes = (m + 7) / 8;
    std::vector<std::uint8_t> bytes(nbytes);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (!in.read(reinterpret_cast<char*>(bytes.data()),
                     static_cast<std::streamsize>(nbytes)))
            throw std::runtime_error("QTable::load: truncated file " + path);
        std::vector<float> vals(n);
        if (!in.read(reinterpret_cast<char*>(vals.data()),
                     static_cast<std::streamsize>(n * sizeof(float))))
            throw std::runtime_error("QTable::load: truncated file " + path);
        t.q_.emplace(key_from_bytes(bytes, m), std::move(vals));
    }
    return t;
}

QNetwork QNetwork::init(std::size_t in, std::size_t hidden, std::size_t out,
                        double learning_rate, Rng& rng) {
    QNetwork net;
    net.in_ = in;
    net.hidden_ = hidden;
    net.out_ = out;
    net.lr_ = learning_rate;
    net.w1.resize(hidden * in);
    net.b1.assign(hidden, 0.0);
    net.w2.resize(out * hidden);
    net.b2.assign(out, 0.0);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
    for (auto& w : net.w1)
        w = (2.0 * rng.uniform() - 1.0) * s1;
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& w : net.w2)
        w = (2.0 * rng.uniform() - 1.0) * s2;
    const std::size_t params = net.w1.size() + net.b1.size() + net.w2.size() + net.b2.size();
    net.adam.m.assign(params, 0.0);
    net.adam.v.assign(params, 0.0);
    net.adam.t = 0;
    return net;
}

namespace {
std::vector<std::uint32_t> set_bits(const BitVector& s) {
    std::vector<std::uint32_t> bits;
    auto ws = s.words();
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
        std::uint64_t w = ws[wi];
        while (w) {
            const int b = std::countr_zero(w);
            w &= w - 1;
            bits.push_back(static_cast<std::uint32_t>(wi * 64 + b));
        }
    }
    return bits;
}

struct ForwardCache {
    std::vector<double> hidden; // post-ReLU
    std::vector<double> out;
};

ForwardCache forward_cached(const QNetwork& net, const BitVector& s) {
    const std::size_t in = net.input_size(), hidden = net.hidden_size(),
                      out = net.output_size();
    ForwardCache fc;
    fc.hidden = net.b1;
    const auto bits = set_bits(s);
    for (std::size_t j = 0; j < hidden; ++j) {
        const double* row = net.w1.data() + j * in;
        double acc = fc.hidden[j];
        for (auto i : bits)
            acc += row[i];
        fc.hidden[j] = acc > 0.0 ? acc : 0.0;
    }
    fc.out = net.b2;
    for (std::size_t k = 0; k < out; ++k) {
        const double* row = net.w2.data() + k * hidden;
        double acc = fc.out[k];
        for (std::size_t j = 0; j < hidden; ++j)
            acc += row[j] * fc.hidden[j];
        fc.out[k] = acc;
    }
    return fc;
}
} // namespace

std::vector<double> QNetwork::forward(const BitVector& s) const {
    if (s.size() != in_)
        throw std::invalid_argument("QNetwork::forward: input length mismatch");
    return forward_cached(*this, s).out;
}

void QNetwork::save(const std::string& path, bool with_adam) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("QNetwork::save: cannot open " + path);
    write_u64(out, in_);
    write_u64(out, hidden_);
    write_u64(out, out_);
    write_f32_block(out, w1);
    write_f32_block(out, b1);
    write_f32_block(out, w2);
    write_f32_block(out, b2);
    const std::uint8_t flag = with_adam ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&flag), 1);
    if (with_adam) {
        write_u64(out, adam.t);
        write_f32_block(out, adam.m);
        write_f32_block(out, adam.v);
    }
    if (!out)
        throw std::runtime_error("QNetwork::save: write failed for " + path);
}

QNetwork QNetwork::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("QNetwork::load: cannot open " + path);
    QNetwork net;
    net.in_ = read_u64(in);
    net.hidden_ = read_u64(in);
    net.out_ = read_u64(in);
    net.w1.resize(net.hidden_ * net.in_);
    net.b1.resize(net.hidden_);
    net.w2.resize(net.out_ * net.hidden_);
    net.b2.resize(net.out_);
    read_f32_block(in, net.w1);
    read_f32_block(in, net.b1);
    read_f32_block(in, net.w2);
    read_f32_block(in, net.b2);
    std::uint8_t flag = 0;
    if (!in.read(reinterpret_cast<char*>(&flag), 1))
        throw std::runtime_error("QNetwork::load: truncated file " + path);
    const std::size_t params = net.w1.size() + net.b1.size() + net.w2.size() + net.b2.size();
    net.adam.m.assign(params, 0.0);
    net.adam.v.assign(params, 0.0);
    net.adam.t = 0;
    if (flag) {
        net.adam.t = read_u64(in);
        read_f32_block(in, net.adam.m);
        read_f32_block(in, net.adam.v);
    }
    return net;
}

void TransitionBatch::push(Transition t) {
    if (full())
        throw std::logic_error("TransitionBatch::push: batch already full");
    items_.push_back(std::move(t));
}

std::size_t greedy_action(const QTable& q, const BitVector& s) {
    auto row = q.row(s);
    return detail::argmax_action(row, q.num_actions());
}

std::size_t greedy_action(const QNetwork& q, const BitVector& s) {
    const auto out = q.forward(s);
    return detail::argmax_action(out, q.output_size());
}

ExploreSpec ExploreSpec::greedy(double eps) {
    ExploreSpec s;
    s.kind = Kind::eps_greedy;
    s.eps = eps;
    return s;
}

ExploreSpec ExploreSpec::goal(double eps, double eps_g) {
    if (eps < 0 || eps_g < 0 || eps + eps_g >= 1.0)
        throw std::invalid_argument("ExploreSpec::goal: need 0 <= eps + eps_g < 1");
    ExploreSpec s;
    s.kind = Kind::eps_goal;
    s.eps = eps;
    s.eps_g = eps_g;
    return s;
}

ExploreSpec ExploreSpec::greedy_linear(double start, double end, std::size_t episodes) {
    ExploreSpec s;
    s.kind = Kind::eps_greedy;
    s.schedule = Schedule::linear_decay;
    s.eps_start = start;
    s.eps_end = end;
    s.decay_episodes = episodes;
    return s;
}

double ExploreSpec::eps_at(std::size_t episode) const {
    if (schedule == Schedule::constant)
        return eps;
    if (decay_episodes == 0 || episode >= decay_episodes)
        return eps_end;
    const double frac = static_cast<double>(episode) / static_cast<double>(decay_episodes);
    return eps_start + (eps_end - eps_start) * frac;
}

void q_update(QTable& table, const BitVector& s, std::size_t a, double r,
              const BitVector& next, bool done, double alpha, double gamma) {
    double future = 0.0;
    if (!done) {
        auto row = table.row(next);
        future = *std::max_element(row.begin(), row.end());
    }
    const double updated = (1.0 - alpha) * table.value(s, a) + alpha * (r + gamma * future);
    table.set_value(s, a, static_cast<float>(updated));
}

void NetGrads::resize_like(const QNetwork& net) {
    w1.assign(net.w1.size(), 0.0);
    b1.assign(net.b1.size(), 0.0);
    w2.assign(net.w2.size(), 0.0);
    b2.assign(net.b2.size(), 0.0);
}

double fitted_loss_and_grads(const QNetwork& net, std::span<const Transition> batch,
                             double gamma, NetGrads& grads) {
    grads.resize_like(net);
    const std::size_t in = net.input_size(), hidden = net.hidden_size();
    double loss = 0.0;
    for (const Transition& tr : batch) {
        double target = tr.r;
        if (!tr.terminal) {
            const auto next_out = forward_cached(net, tr.next).out;
            target += gamma * *std::max_element(next_out.begin(), next_out.end());
        }
        const ForwardCache fc = forward_cached(net, tr.s);
        const double diff = fc.out[tr.a] - target;
        loss += diff * diff;
        const double dout = 2.0 * diff; // gradient reaches only the taken action

        const double* w2row = net.w2.data() + tr.a * hidden;
        double* gw2row = grads.w2.data() + tr.a * hidden;
        grads.b2[tr.a] += dout;
        const auto bits = set_bits(tr.s);
        for (std::size_t j = 0; j < hidden; ++j) {
            gw2row[j] += dout * fc.hidden[j];
            if (fc.hidden[j] > 0.0) {
                const double dh = dout * w2row[j];
                grads.b1[j] += dh;
                double* gw1row = grads.w1.data() + j * in;
                for (auto i : bits)
                    gw1row[i] += dh;
            }
        }
    }
    return loss;
}

namespace {
void adam_update_block(std::span<double> params, std::span<const double> grads,
                       std::span<double> m, std::span<double> v, double lr,
                       double bc1, double bc2) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
        v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
    }
}
} // namespace

double fitted_q_step(QNetwork& net, TransitionBatch& batch, double gamma) {
    if (!batch.full())
        throw std::logic_error("fitted_q_step: batch not full");
    NetGrads grads;
    const double loss = fitted_loss_and_grads(net, batch.items(), gamma, grads);

    net.adam.t += 1;
    const double bc1 = 1.0 - std::pow(0.9, static_cast<double>(net.adam.t));
    const double bc2 = 1.0 - std::pow(0.999, static_cast<double>(net.adam.t));
    const double lr = net.learning_rate();
    std::size_t off = 0;
    auto block = [&](std::vector<double>& p, const std::vector<double>& g) {
        adam_update_block({p.data(), p.size()}, {g.data(), g.size()},
                          {net.adam.m.data() + off, p.size()},
                          {net.adam.v.data() + off, p.size()}, lr, bc1, bc2);
        off += p.size();
    };
    block(net.w1, grads.w1);
    block(net.b1, grads.b1);
    block(net.w2, grads.w2);
    block(net.b2, grads.b2);

    batch.clear();
    return loss;
}

EpisodeSource bsc_episode_source(const LinearCode& code, double p) {
    return [&code, p](Rng& rng) {
        const BitVector u = random_message(code, rng);
        const BitVector c = encode(code, u);
        const ChannelRealization rx = transmit_bsc(c, p, rng);
        return EpisodeSample{rx.hard, rx.error_pattern};
    };
}

namespace {
bool probe_success(const DecodeResult& probe, const EpisodeSample& sample) {
    // decoded correctly iff the applied flips equal the true error pattern
    return (probe.estimate ^ sample.hard) == sample.error;
}
} // namespace

TabularTrainResult train_tabular(const MdpConfig& cfg, const EpisodeSource& source,
                                 const ExploreSpec& explore, double alpha,
                                 std::size_t episodes, std::uint64_t seed) {
    TabularTrainResult res;
    res.table = QTable(cfg.pc.rows(), cfg.pc.cols());
    Rng rng(seed);
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        const EpisodeSample sample = source(rng);
        const DecodeResult probe = lbf_decode(res.table, cfg, sample.hard, cfg.max_flips);
        res.curve.record(probe_success(probe, sample));

        MdpState st = mdp_reset(cfg, sample.hard);
        BitVector err = sample.error;
        while (!st.terminal() && st.steps_taken < cfg.max_flips) {
            const std::size_t a =
                explore_action(explore, ep, res.table, st.syndrome, &err, rng);
            const MdpStep step = mdp_step(cfg, st, a);
            q_update(res.table, st.syndrome, a, step.reward, step.state.syndrome,
                     step.state.terminal(), alpha, cfg.gamma);
            err.flip(a);
            st = step.state;
        }
    }
    return res;
}

FittedTrainResult train_fitted(const MdpConfig& cfg, const EpisodeSource& source,
                               const ExploreSpec& explore, std::size_t hidden,
                               std::size_t batch_size, double learning_rate,
                               std::size_t episodes, std::uint64_t seed) {
    FittedTrainResult res;
    Rng rng(seed);
    res.net = QNetwork::init(cfg.pc.rows(), hidden, cfg.pc.cols(), learning_rate, rng);
    TransitionBatch batch(batch_size);
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        const EpisodeSample sample = source(rng);
        const DecodeResult probe = lbf_decode(res.net, cfg, sample.hard, cfg.max_flips);
        res.curve.record(probe_success(probe, sample));

        MdpState st = mdp_reset(cfg, sample.hard);
        BitVector err = sample.error;
        while (!st.terminal() && st.steps_taken < cfg.max_flips) {
            const std::size_t a =
                explore_action(explore, ep, res.net, st.syndrome, &err, rng);
            const MdpStep step = mdp_step(cfg, st, a);
            batch.push(Transition{st.syndrome, a, step.reward, step.state.syndrome,
                                  step.state.terminal()});
            if (batch.full())
                fitted_q_step(res.net, batch, cfg.gamma);
            err.flip(a);
            st = step.state;
        }
    }
    return res;
}

} // namespace lbf
