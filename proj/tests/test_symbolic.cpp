#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "t310/fixtures.hpp"
#include "t310/symbolic.hpp"

using namespace t310;

namespace {
BoolPoly P(const char* text) { return BoolPoly::parse(text); }
constexpr uint64_t kStateMask = (1ULL << 36) - 1;
} // namespace

TEST_CASE("551 symbolic round ANFs match the printed substitutions") {
    const Fixture& fx = fixture("551");
    RoundAnf anf = build_round_anf(fx.lzs, nullptr);
    CHECK(anf.symbolic);

    CHECK(anf.output(36) == P("b"));                     // a <- b
    CHECK(anf.output(35) == P("c"));                     // b <- c
    CHECK(anf.output(25) == P("F+Z1+O+q"));              // l <- F + Z1 + O + q
    CHECK(anf.output(1) == P("F+Z1+O+Z2+q+L+Z3+i+Z4+j+K")); // V <- ... + x_P27 + x_D1(K)

    // Z4's inputs are (w,u,a,h,e,n)
    const char* expect4[] = {"w", "u", "a", "h", "e", "n"};
    for (int j = 0; j < 6; ++j) CHECK(anf.z_inputs[3][j] == P(expect4[j]));
    // Z1's first input is the key bit L
    CHECK(anf.z_inputs[0][0] == P("L"));

    // every non-fresh output is the single shifted variable
    for (int i = 1; i <= 36; ++i) {
        if (i % 4 == 1) continue;
        CHECK(anf.output(i).term_count() == 1);
        CHECK(anf.output(i) == BoolPoly::var(state_var(i - 1)));
    }
}

TEST_CASE("concrete mode expands every placeholder") {
    const Fixture& fx = fixture("551");
    RoundAnf anf = build_round_anf(fx.lzs, &fx.z);
    CHECK(!anf.symbolic);
    constexpr uint64_t placeholders = 0xFULL << kFirstPlaceholder;
    for (int i = 1; i <= 36; ++i) CHECK((anf.output(i).support() & placeholders) == 0);
}

TEST_CASE("transform") {
    const Fixture& fx = fixture("551");
    RoundAnf anf = build_round_anf(fx.lzs, nullptr);
    CHECK(transform(P("a"), anf) == P("b"));
    CHECK(transform(BoolPoly::one(), anf) == BoolPoly::one());
    BoolPoly acbd = P("eg+fh+eo+fp+gm+hn+mo+np");
    CHECK(transform(acbd, anf) == acbd + P("(Z2+m)(g+o)"));
    CHECK_THROWS_AS((void)transform(P("F"), anf), Error); // state variables only
}

TEST_CASE("transform distributes over + and *") {
    const Fixture& fx = fixture("443");
    RoundAnf anf = build_round_anf(fx.lzs, &fx.z);
    std::mt19937_64 rng(99);
    for (int t = 0; t < 30; ++t) {
        std::vector<uint64_t> ta, tb;
        for (int i = 0; i < 12; ++i) {
            ta.push_back(rng() & kStateMask & 0x3FFFF);
            tb.push_back(rng() & kStateMask & 0x3FFFF);
        }
        BoolPoly p = BoolPoly::from_terms(std::move(ta));
        BoolPoly q = BoolPoly::from_terms(std::move(tb));
        CHECK(transform(p + q, anf) == transform(p, anf) + transform(q, anf));
        CHECK(transform(p * q, anf) == transform(p, anf) * transform(q, anf));
    }
}

TEST_CASE("fundamental equation fixtures") {
    const Fixture& fx = fixture("551");
    BoolPoly acbd = P("eg+fh+eo+fp+gm+hn+mo+np");
    BoolPoly abcd = P("(e+m)(f+n)(g+o)(h+p)");

    FeReport fe = fundamental_equation(acbd, fx.lzs, nullptr);
    CHECK(fe.symbolic);
    CHECK(fe.fe == P("(Z2+m)(g+o)"));
    CHECK(fe.survivor_mask == 0);
    CHECK(fe.survivors_str() == "none");

    CHECK(fundamental_equation(abcd, fx.lzs, nullptr).fe == P("(Z2+m)(f+n)(g+o)(h+p)"));

    // concrete mode: both vanish for the 551 Boolean function
    CHECK(fundamental_equation(acbd, fx.lzs, &fx.z).fe.is_zero());
    CHECK(fundamental_equation(abcd, fx.lzs, &fx.z).fe.is_zero());

    // 443: the two cycle equations
    const Fixture& f443 = fixture("443");
    CHECK(fundamental_equation(P("(q+i)(r+j)(s+k)(t+l)"), f443.lzs, nullptr).fe ==
          P("(r+j)(s+k)(t+l)(S+Z2)"));
    CHECK(fundamental_equation(P("(u+O)(v+P)(w+Q)(x+R)"), f443.lzs, nullptr).fe ==
          P("(v+P)(w+Q)(x+R)(y+Z4)"));

    // a transformed polynomial that keeps F: survivors are reported
    FeReport keeps = fundamental_equation(P("a"), fx.lzs, nullptr);
    CHECK(keeps.fe == P("a+b"));
    CHECK(keeps.survivor_mask == 0);
    FeReport fsurv = fundamental_equation(P("d"), fx.lzs, nullptr); // d <- F+m
    CHECK(fsurv.survives_f());
    CHECK(fsurv.survivors_str() == "F");
}

TEST_CASE("fe_in_local_inputs") {
    const Fixture& fx = fixture("551");
    RoundAnf anf = build_round_anf(fx.lzs, nullptr);
    BoolPoly fe = P("(Z2+m)(g+o)");
    CHECK(fe_in_local_inputs(fe, anf, 2) == P("(Z+f)(d+e)"));
    CHECK(fe_in_local_inputs(BoolPoly::zero(), anf, 2).is_zero());

    // 443: BCD(S+Z2) mentions x19,x27 (factor B) outside Y's inputs
    const Fixture& f443 = fixture("443");
    RoundAnf anf443 = build_round_anf(f443.lzs, nullptr);
    BoolPoly full = P("(r+j)(s+k)(t+l)(S+Z2)");
    CHECK_THROWS_WITH_AS((void)fe_in_local_inputs(full, anf443, 2), doctest::Contains("x19"),
                         Error);
    CHECK_THROWS_WITH_AS((void)fe_in_local_inputs(full, anf443, 2), doctest::Contains("x27"),
                         Error);
    // after the caller drops B the rewrite succeeds
    BoolPoly dropped = drop_affine_factor(full, P("r+j"));
    CHECK(fe_in_local_inputs(dropped, anf443, 2) == P("(a+b)(c+f)(e+Z)"));
}

TEST_CASE("symbolic FE vanishes iff the polynomial is empirically invariant") {
    std::mt19937_64 rng(3);
    for (const char* name : {"551", "558"}) {
        const Fixture& fx = fixture(name);
        for (const auto& [label, p] : fx.proven) {
            CHECK(fundamental_equation(p, fx.lzs, &fx.z).fe.is_zero());
            for (int t = 0; t < 2000; ++t) {
                CipherState s{rng() & kStateMask};
                RoundInputs ri{uint8_t(rng() & 1), uint8_t(rng() & 1), uint8_t(rng() & 1)};
                CipherState y = round(s, ri, fx.lzs, fx.z);
                REQUIRE(p.evaluate(s.bits, kStateMask) == p.evaluate(y.bits, kStateMask));
            }
        }
        for (const auto& [label, p] : fx.refuted) {
            CHECK(!fundamental_equation(p, fx.lzs, &fx.z).fe.is_zero());
            bool violated = false;
            for (int t = 0; t < 5000 && !violated; ++t) {
                CipherState s{rng() & kStateMask};
                RoundInputs ri{uint8_t(rng() & 1), uint8_t(rng() & 1), uint8_t(rng() & 1)};
                CipherState y = round(s, ri, fx.lzs, fx.z);
                violated = p.evaluate(s.bits, kStateMask) != p.evaluate(y.bits, kStateMask);
            }
            CHECK(violated);
        }
    }
}

TEST_CASE("multi-round composition uses fresh F/K/L per round") {
    const Fixture& fx = fixture("551");
    // D=h+p returns to itself after 4 rounds when Z = f (the weak setup)
    ZFunc zf = ZFunc::from_anf_text("f");
    BoolPoly d = P("h+p");
    CHECK(transform_rounds(d, fx.lzs, &zf, 4) == d);
    CHECK(transform_rounds(d, fx.lzs, &zf, 1) != d);
    CHECK_THROWS_AS((void)transform_rounds(d, fx.lzs, nullptr, 2), Error);
    CHECK_THROWS_AS((void)transform_rounds(d, fx.lzs, &zf, kMaxRoundTags + 1), Error);
}
