#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "lbf/codes.hpp"

using namespace lbf;

#ifndef LBF_DATA_DIR
#define LBF_DATA_DIR "data"
#endif

namespace {
std::string data_path(const char* name) {
    return std::string(LBF_DATA_DIR) + "/" + name;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void check_orthogonal(const LinearCode& code, const BitMatrix& h) {
    for (std::size_t r = 0; r < code.k; ++r)
        CHECK(mat_vec_mul(h, code.generator.row(r)).is_zero());
}

LinearCode repetition3() {
    BitMatrix g(1, 3);
    g.set(0, 0, true);
    g.set(0, 1, true);
    g.set(0, 2, true);
    BitMatrix h(2, 3);
    h.set(0, 0, true);
    h.set(0, 1, true);
    h.set(1, 1, true);
    h.set(1, 2, true);
    return code_from_matrices("rep3", g, h);
}
} // namespace

TEST_SUITE("codes") {

TEST_CASE("reed-muller dimensions") {
    const LinearCode rm25 = build_rm({2, 5});
    CHECK(rm25.n == 32);
    CHECK(rm25.k == 16);
    CHECK(rm25.pc.rows() == 16);

    const LinearCode rm36 = build_rm({3, 6});
    CHECK(rm36.n == 64);
    CHECK(rm36.k == 42);
    CHECK(rm36.pc.rows() == 22);

    const LinearCode rm47 = build_rm({4, 7});
    CHECK(rm47.n == 128);
    CHECK(rm47.k == 99);
    CHECK(rm47.pc.rows() == 29);

    CHECK_THROWS_AS(build_rm({6, 5}), std::invalid_argument);
    CHECK_THROWS_AS(build_rm({2, 9}), std::invalid_argument);
}

TEST_CASE("generator and parity check are orthogonal") {
    for (auto params : {RmParams{2, 5}, RmParams{3, 6}, RmParams{1, 4}}) {
        const LinearCode code = build_rm(params);
        check_orthogonal(code, code.pc);
        CHECK(gf2_rank(code.generator) == code.k);
        CHECK(gf2_rank(code.pc) == code.n - code.k);
    }
}

TEST_CASE("overcomplete pc row counts match the minimum-weight dual sets") {
    const LinearCode rm25 = build_rm({2, 5});
    const BitMatrix oc25 = overcomplete_pc(rm25);
    CHECK(oc25.rows() == 620);
    CHECK(oc25.cols() == 32);
    check_orthogonal(rm25, oc25);
    // every row has the dual minimum weight
    const std::size_t w0 = oc25.row(0).popcount();
    CHECK(w0 == 8); // dual of RM(2,5) is RM(2,5), d_min 8
    for (std::size_t r = 1; r < oc25.rows(); ++r)
        CHECK(oc25.row(r).popcount() == w0);

    const LinearCode rm36 = build_rm({3, 6});
    const BitMatrix oc36 = overcomplete_pc(rm36);
    CHECK(oc36.rows() == 2604);
    CHECK(oc36.cols() == 64);
    check_orthogonal(rm36, oc36);
}

TEST_CASE("overcomplete pc of the repetition code") {
    const LinearCode rep = repetition3();
    const BitMatrix oc = overcomplete_pc(rep);
    REQUIRE(oc.rows() == 3);
    CHECK(oc.row(0).to_string() == "011");
    CHECK(oc.row(1).to_string() == "101");
    CHECK(oc.row(2).to_string() == "110");
}

TEST_CASE("overcomplete pc refuses large duals") {
    const LinearCode rm47 = build_rm({4, 7});
    CHECK_THROWS_WITH_AS(overcomplete_pc(rm47),
                         doctest::Contains("dual dimension 29"), std::invalid_argument);
}

TEST_CASE("encode basics") {
    const LinearCode code = build_rm({2, 5});
    CHECK(encode(code, BitVector(16)).is_zero());
    for (std::size_t i = 0; i < code.k; ++i)
        CHECK(encode(code, BitVector::unit(16, i)) == code.generator.row(i));
    CHECK_THROWS_AS(encode(code, BitVector(5)), std::invalid_argument);

    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        const BitVector c = encode(code, random_message(code, rng));
        CHECK(syndrome(code.pc, c).is_zero());
    }
}

TEST_CASE("syndrome decouples from the codeword") {
    const LinearCode code = build_rm({2, 5});
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        const BitVector c = encode(code, random_message(code, rng));
        BitVector e(code.n);
        for (std::size_t i = 0; i < code.n; ++i)
            e.set(i, rng.below(10) == 0);
        CHECK(syndrome(code.pc, c ^ e) == syndrome(code.pc, e));
    }
    // single error gives the matching column
    const BitVector h5 = matrix_columns(code.pc)[5];
    CHECK(syndrome(code.pc, BitVector::unit(code.n, 5)) == h5);
}

TEST_CASE("pc file round trip and errors") {
    const LinearCode code = build_rm({2, 5});
    const std::string path = temp_path("lbf_test_h.txt");
    save_pc(code.pc, path);
    CHECK(load_pc(path) == code.pc);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_pc("/nonexistent/h.txt"), std::runtime_error);

    const std::string bad = temp_path("lbf_test_bad.txt");
    {
        std::FILE* f = std::fopen(bad.c_str(), "w");
        std::fputs("2 3\n1 0 1\n0 1\n", f); // truncated row
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_pc(bad), std::runtime_error);
    std::remove(bad.c_str());
}

TEST_CASE("bch(63,45) data files") {
    const LinearCode bch = code_from_files("BCH(63,45)", data_path("bch_63_45_G.txt"),
                                           data_path("bch_63_45_Hstd.txt"));
    CHECK(bch.n == 63);
    CHECK(bch.k == 45);
    CHECK(bch.pc.rows() == 18);

    const BitMatrix oc_file = load_pc(data_path("bch_63_45_Hoc.txt"));
    CHECK(oc_file.rows() == 189);
    CHECK(oc_file.cols() == 63);

    // the shipped overcomplete matrix is exactly the enumerated
    // minimum-weight dual codeword set
    CHECK(overcomplete_pc(bch) == oc_file);
    check_orthogonal(bch, oc_file);
}

TEST_CASE("message recovery inverts the encoder") {
    for (auto params : {RmParams{2, 5}, RmParams{3, 6}}) {
        const LinearCode code = build_rm(params);
        const MessageRecovery rec(code);
        Rng rng(3);
        for (int t = 0; t < 100; ++t) {
            const BitVector u = random_message(code, rng);
            CHECK(rec.message_of(encode(code, u)) == u);
        }
    }
}

} // TEST_SUITE
