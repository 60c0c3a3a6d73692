#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "t310/boolpoly.hpp"

using namespace t310;

namespace {

BoolPoly P(const char* text) { return BoolPoly::parse(text); }

// small random polynomials over <= 12 variables for the property tests
struct RandomPolys {
    std::mt19937_64 rng{20240511};
    BoolPoly next() {
        std::uniform_int_distribution<int> nterms(0, 50);
        std::uniform_int_distribution<uint64_t> any;
        std::vector<uint64_t> terms;
        int n = nterms(rng);
        for (int i = 0; i < n; ++i) terms.push_back(any(rng) & 0xFFF); // vars V..N
        return BoolPoly::from_terms(std::move(terms));
    }
    uint64_t assignment() { return rng() & 0xFFF; }
};

} // namespace

TEST_CASE("variable names round-trip through parse and print") {
    // a=x36 ... z=x11, M=x10 ... V=x1, then F, K, L, Z1..Z4
    const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m",
                           "n", "o", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z",
                           "M", "N", "O", "P", "Q", "R", "S", "T", "U", "V", "F", "K", "L",
                           "Z1", "Z2", "Z3", "Z4"};
    for (const char* n : names) CHECK(P(n).str() == n);
    CHECK(var_name(var_from_name("a")) == "a");
    CHECK(var_from_name("a") == state_var(36));
    CHECK(var_from_name("z") == state_var(11));
    CHECK(var_from_name("M") == state_var(10));
    CHECK(var_from_name("V") == state_var(1));
}

TEST_CASE("parser grammar") {
    CHECK(P("a + b") == P("a+b"));           // whitespace ignored
    CHECK(P("ab") == P("a") * P("b"));       // juxtaposition multiplies
    CHECK(P("M") != P("m"));                 // case-sensitive
    CHECK(P("1+1").is_zero());
    CHECK(P("(a+b)(a+b)") == P("a+b"));      // parenthesized factors
    CHECK(P("fedcb") == P("bcdef"));         // letter order irrelevant
    CHECK(P("Z") == P("Z1"));                // bare placeholder aliases
    CHECK(P("Y") == P("Z2"));
    CHECK(P("X") == P("Z3"));
    CHECK(P("W") == P("Z4"));
    CHECK(P("0").is_zero());
    CHECK_THROWS_AS((void)P(""), Error);
    CHECK_THROWS_AS((void)P("a++b"), Error);
    CHECK_THROWS_AS((void)P("a+(b"), Error);
    CHECK_THROWS_AS((void)P("a$b"), Error);
}

TEST_CASE("add") {
    CHECK(P("a+b") + P("b+c") == P("a+c"));
    BoolPoly p = P("abc+de+M");
    CHECK((p + p).is_zero());
    // the 551 invariant is assembled from such sums
    CHECK(P("eg+fh") + P("eo+fp") == P("eg+fh+eo+fp"));
}

TEST_CASE("mul") {
    CHECK(P("a+b") * P("a+b") == P("a+b")); // Boolean square
    BoolPoly prod = P("e+m") * P("g+o");
    CHECK(prod == P("eg+eo+gm+mo"));
    // oracle: evaluation agreement on all 16 assignments of e,m,g,o
    VarId vs[] = {var_from_name("e"), var_from_name("m"), var_from_name("g"), var_from_name("o")};
    for (int v = 0; v < 16; ++v) {
        uint64_t values = 0;
        for (int i = 0; i < 4; ++i)
            if (v >> i & 1) values |= 1ULL << vs[i];
        int lhs = P("e+m").evaluate(values) & P("g+o").evaluate(values);
        CHECK(prod.evaluate(values) == lhs);
    }
}

TEST_CASE("mul(AC, BD) expands to the 16-term degree-4 polynomial") {
    BoolPoly ac = P("(e+m)(g+o)");
    BoolPoly bd = P("(f+n)(h+p)");
    BoolPoly expect = P("efgh+fghm+eghn+ghmn+efho+fhmo+ehno+hmno+"
                        "efgp+fgmp+egnp+gmnp+efop+fmop+enop+mnop");
    CHECK(ac * bd == expect);
    CHECK((ac * bd).term_count() == 16);
    CHECK((ac * bd).degree() == 4);
}

TEST_CASE("substitute") {
    SubstMap to_b;
    to_b.set(var_from_name("a"), P("b"));
    CHECK(substitute(P("a"), to_b) == P("b"));

    SubstMap both_a;
    both_a.set(var_from_name("a"), P("a"));
    both_a.set(var_from_name("b"), P("a"));
    CHECK(substitute(P("ab"), both_a) == P("a")); // idempotence

    SubstMap incomplete;
    incomplete.set(var_from_name("a"), P("b"));
    CHECK_THROWS_WITH_AS((void)substitute(P("ab"), incomplete),
                         doctest::Contains("no substitution for b"), Error);
}

TEST_CASE("substitute is a ring homomorphism") {
    RandomPolys gen;
    for (int iter = 0; iter < 50; ++iter) {
        BoolPoly p = gen.next(), q = gen.next();
        SubstMap subs;
        for (int v = 0; v < 12; ++v) subs.set(v, gen.next());
        CHECK(substitute(p + q, subs) == substitute(p, subs) + substitute(q, subs));
        CHECK(substitute(p * q, subs) == substitute(p, subs) * substitute(q, subs));
    }
}

TEST_CASE("evaluate") {
    CHECK(BoolPoly::zero().evaluate(~0ULL) == 0);
    CHECK(P("a+b").evaluate(~0ULL) == 0);
    CHECK(P("eg+fh+eo+fp+gm+hn+mo+np").evaluate(~0ULL) == 0); // 8 terms, XOR of ones
    CHECK(P("abc").evaluate(~0ULL) == 1);
    CHECK_THROWS_WITH_AS((void)P("a+b").evaluate(0, 1ULL << var_from_name("a")),
                         doctest::Contains("unassigned"), Error);
}

TEST_CASE("ring axioms on random polynomials") {
    RandomPolys gen;
    for (int iter = 0; iter < 40; ++iter) {
        BoolPoly p = gen.next(), q = gen.next(), r = gen.next();
        CHECK(p + q == q + p);
        CHECK(p * q == q * p);
        CHECK((p + q) + r == p + (q + r));
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK((p + p).is_zero());
        CHECK(p * p == p);
        // canonical-form equality must agree with pointwise equality
        for (int s = 0; s < 256; ++s) {
            uint64_t v = gen.assignment();
            CHECK(((p * q) + r).evaluate(v) == ((p.evaluate(v) & q.evaluate(v)) ^ r.evaluate(v)));
        }
    }
}

TEST_CASE("degree reports a distinct zero marker") {
    CHECK(!BoolPoly::zero().degree().has_value());
    CHECK(BoolPoly::one().degree() == 0);
    CHECK(P("a+b").degree() == 1);
    CHECK(P("abc+d").degree() == 3);
}

TEST_CASE("truth table and ANF") {
    CHECK(anf_from_truth_table(0).is_zero());

    // table of the 6th input alone is the single-term polynomial f
    uint64_t table_f = 0;
    for (int i = 0; i < 64; ++i)
        if (i >> 5 & 1) table_f |= 1ULL << i;
    CHECK(anf_from_truth_table(table_f) == P("f"));

    // the 551 Boolean function: exactly the seven printed terms
    BoolPoly z551 = P("1+d+e+f+de+cde+def");
    uint64_t tt = truth_table_from_anf(z551);
    CHECK(anf_from_truth_table(tt) == z551);
    CHECK(anf_from_truth_table(tt).term_count() == 7);

    // pointwise agreement with direct evaluation (independent oracle)
    for (int i = 0; i < 64; ++i) {
        uint64_t values = 0;
        for (int j = 0; j < 6; ++j)
            if (i >> j & 1) values |= 1ULL << local_var(j);
        CHECK(int(tt >> i & 1) == z551.evaluate(values, kLocalWindow));
    }

    CHECK_THROWS_AS((void)truth_table_from_anf(P("g")), Error); // outside a..f
}

TEST_CASE("Moebius round-trip on random tables") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        uint64_t tt = rng();
        CHECK(truth_table_from_anf(anf_from_truth_table(tt)) == tt);
    }
}

TEST_CASE("truth table hex serialization") {
    CHECK(tt_to_hex(0) == "0000000000000000");
    CHECK(tt_from_hex(tt_to_hex(0xDEADBEEF12345678ULL)) == 0xDEADBEEF12345678ULL);
    CHECK_THROWS_AS((void)tt_from_hex("123"), Error);
    CHECK_THROWS_AS((void)tt_from_hex("123456789abcdefg"), Error);
}

TEST_CASE("divides") {
    BoolPoly abcd = P("(e+m)(f+n)(g+o)(h+p)");
    BoolPoly acbd = P("eg+fh+eo+fp+gm+hn+mo+np");
    CHECK(divides(P("e+m"), abcd));
    CHECK(!divides(P("e+m"), acbd));
    CHECK(divides(BoolPoly::one(), acbd));
    CHECK(divides(BoolPoly::one(), BoolPoly::zero()));
    // joint support cap
    BoolPoly wide = BoolPoly::monomial((1ULL << 25) - 1);
    CHECK_THROWS_AS((void)divides(P("a"), wide), Error);
}

TEST_CASE("divides implies an explicit quotient, but factorization is not unique") {
    // q = p works as the quotient whenever a divides p
    BoolPoly abcd = P("(e+m)(f+n)(g+o)(h+p)");
    CHECK(P("e+m") * abcd == abcd);
    // distinct factor multisets give the same product: {a,ab} and {a,b}
    CHECK(P("a") * P("ab") == P("a") * P("b"));
}

TEST_CASE("is_irreducible_no_affine_factor") {
    CHECK(is_irreducible_no_affine_factor(P("eg+fh+eo+fp+gm+hn+mo+np"))); // AC+BD
    CHECK(!is_irreducible_no_affine_factor(P("(e+m)(f+n)(g+o)(h+p)")));
    CHECK(!is_irreducible_no_affine_factor(P("a")));
    CHECK(!is_irreducible_no_affine_factor(BoolPoly::zero()));
    CHECK(is_irreducible_no_affine_factor(BoolPoly::one()));
    CHECK_THROWS_AS((void)is_irreducible_no_affine_factor(BoolPoly::monomial((1ULL << 17) - 1)),
                    Error);
}

TEST_CASE("affine divisors and dropping a disjoint factor") {
    BoolPoly p = P("(g+o)(Z2+m)");
    auto divs = affine_divisors(p);
    REQUIRE(!divs.empty());
    bool found = false;
    for (const auto& d : divs) found = found || d == P("g+o");
    CHECK(found);

    CHECK(drop_affine_factor(p, P("g+o")) == P("Z2+m"));
    CHECK_THROWS_AS((void)drop_affine_factor(p, P("e+m")), Error); // not a divisor
}

TEST_CASE("print order is deterministic and matches the paper for the Z ANFs") {
    CHECK(P("def+1+cde+de+f+e+d").str(PrintStyle::local) == "1+d+e+f+de+cde+def");
    CHECK(P("(Z2+m)(g+o)").str() == "gm+gZ2+mo+oZ2");
    CHECK(BoolPoly::zero().str() == "0");
    CHECK(BoolPoly::one().str() == "1");
}
