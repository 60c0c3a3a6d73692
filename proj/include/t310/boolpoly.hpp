#ifndef T310_BOOLPOLY_HPP
#define T310_BOOLPOLY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "t310/error.hpp"

namespace t310 {

// Variable slots inside the 64-bit monomial mask.
//
// State bits use the backwards letter convention: a=x36, b=x35, ... z=x11,
// then M=x10 ... V=x1.  Slot v (0..35) holds x_{v+1}, so 'a' lives in slot 35
// and 'V' in slot 0.  F/K/L are the per-round inputs, Z1..Z4 the opaque
// Boolean-function outputs used by the symbolic engine.  Slots 44..62 hold
// per-round copies of F/K/L for multi-round composition.
using VarId = int;

constexpr VarId kVarF = 36;
constexpr VarId kVarK = 37;
constexpr VarId kVarL = 38;
constexpr VarId kFirstPlaceholder = 40; // Z1..Z4 = 40..43
constexpr int kMaxRoundTags = 7;        // rounds with distinct F/K/L variables

constexpr VarId state_var(int bit) { return bit - 1; }       // x-bit 1..36
constexpr int state_bit(VarId v) { return v + 1; }
constexpr VarId placeholder_var(int k) { return kFirstPlaceholder + k - 1; } // k=1..4
constexpr bool is_state(VarId v) { return v >= 0 && v < 36; }
constexpr bool is_placeholder(VarId v) { return v >= 40 && v < 44; }
// Local names a..f for the 6 inputs of a Boolean function reuse the state
// slots of letters a..f (x36..x31); j = 0 is 'a'.
constexpr VarId local_var(int j) { return 35 - j; }
constexpr uint64_t kLocalWindow = 0x3FULL << 30;

// F/K/L for round r (1-based).  Round 1 uses the plain slots.
VarId round_var(VarId base, int round);

std::string var_name(VarId v);
VarId var_from_name(std::string_view name); // throws Errc::parse on unknown

enum class PrintStyle {
    global, // placeholders as Z1..Z4
    local,  // any placeholder as plain Z (annihilation-condition notation)
};

// Multivariate polynomial over GF(2), stored as a canonical XOR-set of
// monomials.  A monomial is a variable-set mask; the empty mask is the
// constant 1 and an empty polynomial is 0.
class BoolPoly {
public:
    BoolPoly() = default;

    static BoolPoly zero() { return {}; }
    static BoolPoly one();
    static BoolPoly var(VarId v);
    static BoolPoly monomial(uint64_t mask);
    static BoolPoly from_terms(std::vector<uint64_t> masks); // canonicalizes

    // Grammar: terms split on '+', juxtaposed names multiply, '1' is the
    // constant, whitespace ignored, case-sensitive.  Parenthesized factors
    // are accepted so the paper's factored forms like (Z2+m)(g+o) parse too.
    static BoolPoly parse(std::string_view text);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const { return terms_.size() == 1 && terms_[0] == 0; }
    size_t term_count() const { return terms_.size(); }
    const std::vector<uint64_t>& terms() const { return terms_; }
    bool contains_term(uint64_t mask) const;

    // nullopt for the zero polynomial (distinct "zero" marker, not -1)
    std::optional<int> degree() const;
    uint64_t support() const;

    bool operator==(const BoolPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const BoolPoly& o) const { return terms_ != o.terms_; }

    BoolPoly operator+(const BoolPoly& o) const;
    BoolPoly& operator+=(const BoolPoly& o);
    BoolPoly operator*(const BoolPoly& o) const;
    BoolPoly& operator*=(const BoolPoly& o);

    // values holds the bit of every assigned variable at its slot; defined
    // marks which slots are assigned.  Unassigned support -> Errc::domain.
    int evaluate(uint64_t values, uint64_t defined = ~0ULL) const;

    std::string str(PrintStyle style = PrintStyle::global) const;

private:
    std::vector<uint64_t> terms_; // sorted ascending, no duplicates
    void canonicalize();
};

std::string to_string(const BoolPoly& p, PrintStyle style = PrintStyle::global);

// Simultaneous substitution table.  Every variable in the polynomial's
// support must be covered (identity entries allowed); a gap raises
// Errc::domain naming the variable.
class SubstMap {
public:
    void set(VarId v, BoolPoly p);
    void set_identity(VarId v);
    bool covers(VarId v) const { return defined_ >> v & 1; }
    const BoolPoly& at(VarId v) const { return entries_[v]; }
    uint64_t defined_mask() const { return defined_; }

private:
    std::array<BoolPoly, 64> entries_;
    uint64_t defined_ = 0;
};

BoolPoly substitute(const BoolPoly& p, const SubstMap& subs);

// Truth tables for 6-input Boolean functions: bit i of the table is the
// function value on input i, where input bit 0 (LSB) is local variable 'a'.
BoolPoly anf_from_truth_table(uint64_t table);
uint64_t truth_table_from_anf(const BoolPoly& p); // support must be local a..f
std::string tt_to_hex(uint64_t table);            // 16 hex digits, MSB first
uint64_t tt_from_hex(std::string_view hex);

// True iff p vanishes wherever a vanishes (equivalently p = a*q for some q
// in the Boolean function ring).  Joint support above 24 variables raises
// Errc::domain.
bool divides(const BoolPoly& a, const BoolPoly& p);

// True iff no non-constant affine polynomial over support(p) divides p.
// Support above 16 variables raises Errc::domain.
bool is_irreducible_no_affine_factor(const BoolPoly& p);

// All monic affine divisors of p over its support (used for report display).
std::vector<BoolPoly> affine_divisors(const BoolPoly& p);

// Quotient for the special case where `affine` divides p and the rest of p
// does not mention affine's variables; verifies q*affine == p.
BoolPoly drop_affine_factor(const BoolPoly& p, const BoolPoly& affine);

} // namespace t310

#endif
