#include "doctest.h"

#include <cmath>

#include "lbf/channel.hpp"
#include "lbf/codes.hpp"
#include "lbf/mdp.hpp"

using namespace lbf;

TEST_SUITE("mdp") {

TEST_CASE("reset produces the received syndrome") {
    const LinearCode code = build_rm({2, 5});
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 10, 0.99, 1.0);
    Rng rng(1);
    const BitVector c = encode(code, random_message(code, rng));

    const MdpState on_codeword = mdp_reset(cfg, c);
    CHECK(on_codeword.terminal());
    CHECK(on_codeword.steps_taken == 0);

    const MdpState single = mdp_reset(cfg, c ^ BitVector::unit(code.n, 5));
    CHECK(single.syndrome == matrix_columns(code.pc)[5]);

    // identical error, different codeword: identical initial state
    const BitVector c2 = encode(code, random_message(code, rng));
    BitVector e(code.n);
    e.set(3, true);
    e.set(17, true);
    CHECK(mdp_reset(cfg, c ^ e).syndrome == mdp_reset(cfg, c2 ^ e).syndrome);

    CHECK_THROWS_AS(mdp_reset(cfg, BitVector(8)), std::invalid_argument);
}

TEST_CASE("bsc rewards are -1/T and -1/T + 1") {
    const LinearCode code = build_rm({2, 5});
    const double mag = bsc_llr_magnitude(0.0565);
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 10, 1.0, mag);
    Rng rng(2);
    const BitVector c = encode(code, random_message(code, rng));

    // non-matching flip
    MdpState st = mdp_reset(cfg, c ^ BitVector::unit(code.n, 4));
    const MdpStep miss = mdp_step(cfg, st, 9);
    CHECK(miss.reward == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK_FALSE(miss.done);

    // matching flip
    const MdpStep hit = mdp_step(cfg, st, 4);
    CHECK(hit.reward == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(hit.done);
    CHECK(hit.state.terminal());
}

TEST_CASE("double flip is an involution") {
    const LinearCode code = build_rm({2, 5});
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 10, 1.0, 1.0);
    Rng rng(3);
    const BitVector z =
        encode(code, random_message(code, rng)) ^ BitVector::unit(code.n, 7);
    const MdpState s0 = mdp_reset(cfg, z);
    const MdpStep s1 = mdp_step(cfg, s0, 12);
    const MdpStep s2 = mdp_step(cfg, s1.state, 12);
    CHECK(s2.state.syndrome == s0.syndrome);
    CHECK(s2.state.steps_taken == 2);
}

TEST_CASE("transitions are deterministic") {
    const LinearCode code = build_rm({2, 5});
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 10, 0.99, 2.0);
    Rng rng(4);
    const BitVector z = encode(code, random_message(code, rng)) ^
                        BitVector::unit(code.n, 3) ^ BitVector::unit(code.n, 19);
    const MdpState st = mdp_reset(cfg, z);
    const MdpStep a = mdp_step(cfg, st, 11);
    const MdpStep b = mdp_step(cfg, st, 11);
    CHECK(a.state.syndrome == b.state.syndrome);
    CHECK(a.reward == b.reward);
    CHECK(a.done == b.done);
}

TEST_CASE("stepping terminal or truncated states throws") {
    const LinearCode code = build_rm({2, 5});
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 2, 1.0, 1.0);
    Rng rng(5);
    const BitVector c = encode(code, random_message(code, rng));
    CHECK_THROWS_AS(mdp_step(cfg, mdp_reset(cfg, c), 0), std::logic_error);

    MdpState st = mdp_reset(cfg, c ^ BitVector::unit(code.n, 1));
    MdpStep one = mdp_step(cfg, st, 5); // miss
    CHECK_FALSE(one.state.terminal());
    MdpStep two = mdp_step(cfg, one.state, 6); // T = 2 reached
    CHECK(two.done);
    if (!two.state.terminal())
        CHECK_THROWS_AS(mdp_step(cfg, two.state, 0), std::logic_error);
}

TEST_CASE("truncation at T carries no extra penalty but still pays the bonus") {
    const LinearCode code = build_rm({2, 5});
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 1, 1.0, 1.0);
    Rng rng(6);
    const BitVector c = encode(code, random_message(code, rng));
    // match exactly at the last permitted step
    MdpState st = mdp_reset(cfg, c ^ BitVector::unit(code.n, 2));
    const MdpStep step = mdp_step(cfg, st, 2);
    CHECK(step.done);
    CHECK(step.reward == doctest::Approx(-1.0 + 1.0).epsilon(1e-12));
}

TEST_CASE("profiled reward keeps the match bonus dominant") {
    const LinearCode code = build_rm({2, 5});
    std::vector<double> mags(code.n);
    Rng rng(7);
    for (auto& m : mags)
        m = 0.5 + 4.0 * rng.uniform();
    const MdpConfig cfg = MdpConfig::profiled(code.pc, 10, 0.99, mags);

    // any T flips cost strictly less than 1 in total
    double worst = 0.0;
    for (double m : mags)
        worst = std::max(worst, m);
    CHECK(cfg.c_scale * worst * 10.0 < 1.0);

    // single-step rewards stay within (-1, 1]
    const BitVector z = encode(code, random_message(code, rng)) ^
                        BitVector::unit(code.n, 0);
    MdpState st = mdp_reset(cfg, z);
    for (std::size_t a = 0; a < code.n; ++a) {
        const MdpStep step = mdp_step(cfg, st, a);
        CHECK(step.reward > -1.0);
        CHECK(step.reward <= 1.0);
    }
}

TEST_CASE("episode return") {
    CHECK(episode_return({}, 0.5) == 0.0);
    const double single[] = {0.9};
    CHECK(episode_return(single, 0.3) == doctest::Approx(0.9));
    // three misses then a match at gamma 1: -0.1*3 + 1 = 0.7
    const double path[] = {-0.1, -0.1, -0.1, 0.9};
    CHECK(episode_return(path, 1.0) == doctest::Approx(0.7));
    const double pair[] = {1.0, 1.0};
    CHECK(episode_return(pair, 0.5) == doctest::Approx(1.5));
}

TEST_CASE("shortest syndrome-matching path maximizes the return") {
    // with uniform reliabilities a k-flip decode returns 1 - k/T at gamma 1
    const LinearCode code = build_rm({2, 5});
    const MdpConfig cfg = MdpConfig::bsc(code.pc, 10, 1.0, 1.0);
    const auto cols = matrix_columns(code.pc);
    Rng rng(8);
    const BitVector c = encode(code, random_message(code, rng));
    BitVector e(code.n);
    e.set(4, true);
    e.set(9, true);
    e.set(21, true);
    MdpState st = mdp_reset(cfg, c ^ e);
    std::vector<double> rewards;
    for (std::size_t a : {std::size_t{4}, std::size_t{9}, std::size_t{21}}) {
        const MdpStep step = mdp_step(cfg, st, a);
        rewards.push_back(step.reward);
        st = step.state;
    }
    CHECK(st.terminal());
    CHECK(episode_return(rewards, 1.0) == doctest::Approx(1.0 - 3.0 / 10.0));
}

} // TEST_SUITE
