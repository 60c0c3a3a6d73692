#include "t310/boolpoly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace t310 {

namespace {

std::string list_vars(uint64_t mask) {
    std::string s;
    for (int v = 0; v < 64; ++v) {
        if (mask >> v & 1) {
            if (!s.empty()) s += ",";
            s += var_name(v);
        }
    }
    return s;
}

// Display rank: a..z M..V first (paper letter order), then F,K,L, then Z1..Z4,
// then the per-round tags.
int display_rank(VarId v) {
    if (is_state(v)) return 35 - v;
    if (v >= kVarF && v <= kVarL) return v;
    if (is_placeholder(v)) return 39 + (v - kFirstPlaceholder);
    return v; // 44.. already past the named ranks
}

// Lexicographic order on the ascending rank sequences of two monomials.
bool rank_lex_less(uint64_t a, uint64_t b) {
    // remap to rank masks
    uint64_t ra = 0, rb = 0;
    for (uint64_t t = a; t; t &= t - 1) ra |= 1ULL << display_rank(std::countr_zero(t));
    for (uint64_t t = b; t; t &= t - 1) rb |= 1ULL << display_rank(std::countr_zero(t));
    while (ra && rb) {
        int la = std::countr_zero(ra), lb = std::countr_zero(rb);
        if (la != lb) return la < lb;
        ra &= ra - 1;
        rb &= rb - 1;
    }
    return ra == 0 && rb != 0;
}

bool display_less(uint64_t a, uint64_t b) {
    int da = std::popcount(a), db = std::popcount(b);
    if (da != db) return da < db;
    return rank_lex_less(a, b);
}

} // namespace

VarId round_var(VarId base, int round) {
    if (base != kVarF && base != kVarK && base != kVarL)
        throw Error(Errc::domain, "round_var: base must be F, K or L");
    if (round < 1 || round > kMaxRoundTags)
        throw Error(Errc::budget, "round_var: only " + std::to_string(kMaxRoundTags) +
                                      " rounds of distinct F/K/L variables are available");
    if (round == 1) return base;
    return 44 + 3 * (round - 2) + (base - kVarF);
}

std::string var_name(VarId v) {
    if (is_state(v)) {
        int bit = state_bit(v); // 1..36
        if (bit >= 11) return std::string(1, char('a' + (36 - bit))); // a=x36 .. z=x11
        return std::string(1, char('M' + (10 - bit)));                // M=x10 .. V=x1
    }
    switch (v) {
        case kVarF: return "F";
        case kVarK: return "K";
        case kVarL: return "L";
    }
    if (is_placeholder(v)) return "Z" + std::to_string(v - kFirstPlaceholder + 1);
    if (v >= 44 && v < 44 + 3 * (kMaxRoundTags - 1)) {
        int idx = v - 44;
        const char* base = "FKL";
        return std::string(1, base[idx % 3]) + std::to_string(idx / 3 + 2);
    }
    return "?" + std::to_string(v);
}

VarId var_from_name(std::string_view name) {
    if (name.size() == 1) {
        char c = name[0];
        if (c >= 'a' && c <= 'z') return state_var(36 - (c - 'a'));
        if (c >= 'M' && c <= 'V') return state_var(10 - (c - 'M'));
        if (c == 'F') return kVarF;
        if (c == 'K') return kVarK;
        if (c == 'L') return kVarL;
        if (c == 'Z') return placeholder_var(1);
        if (c == 'Y') return placeholder_var(2);
        if (c == 'X') return placeholder_var(3);
        if (c == 'W') return placeholder_var(4);
    } else if (name.size() >= 2 && (name[0] == 'Z') && name[1] >= '1' && name[1] <= '4' &&
               name.size() == 2) {
        return placeholder_var(name[1] - '0');
    } else if (name.size() >= 2 && (name[0] == 'F' || name[0] == 'K' || name[0] == 'L')) {
        int round = 0;
        auto res = std::from_chars(name.data() + 1, name.data() + name.size(), round);
        if (res.ec == std::errc() && res.ptr == name.data() + name.size() && round >= 1 &&
            round <= kMaxRoundTags) {
            VarId base = name[0] == 'F' ? kVarF : name[0] == 'K' ? kVarK : kVarL;
            return round_var(base, round);
        }
    }
    throw Error(Errc::parse, "unknown variable name '" + std::string(name) + "'");
}

BoolPoly BoolPoly::one() {
    BoolPoly p;
    p.terms_.push_back(0);
    return p;
}

BoolPoly BoolPoly::var(VarId v) {
    if (v < 0 || v >= 64) throw Error(Errc::range, "variable slot out of range");
    BoolPoly p;
    p.terms_.push_back(1ULL << v);
    return p;
}

BoolPoly BoolPoly::monomial(uint64_t mask) {
    BoolPoly p;
    p.terms_.push_back(mask);
    return p;
}

BoolPoly BoolPoly::from_terms(std::vector<uint64_t> masks) {
    BoolPoly p;
    p.terms_ = std::move(masks);
    p.canonicalize();
    return p;
}

void BoolPoly::canonicalize() {
    std::sort(terms_.begin(), terms_.end());
    // XOR semantics: drop pairs
    size_t out = 0;
    for (size_t i = 0; i < terms_.size();) {
        size_t j = i;
        while (j < terms_.size() && terms_[j] == terms_[i]) ++j;
        if ((j - i) & 1) terms_[out++] = terms_[i];
        i = j;
    }
    terms_.resize(out);
}

bool BoolPoly::contains_term(uint64_t mask) const {
    return std::binary_search(terms_.begin(), terms_.end(), mask);
}

std::optional<int> BoolPoly::degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (uint64_t m : terms_) d = std::max(d, std::popcount(m));
    return d;
}

uint64_t BoolPoly::support() const {
    uint64_t s = 0;
    for (uint64_t m : terms_) s |= m;
    return s;
}

BoolPoly BoolPoly::operator+(const BoolPoly& o) const {
    BoolPoly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), b = o.terms_.begin();
    while (a != terms_.end() && b != o.terms_.end()) {
        if (*a < *b)
            r.terms_.push_back(*a++);
        else if (*b < *a)
            r.terms_.push_back(*b++);
        else {
            ++a;
            ++b; // cancellation
        }
    }
    r.terms_.insert(r.terms_.end(), a, terms_.end());
    r.terms_.insert(r.terms_.end(), b, o.terms_.end());
    return r;
}

BoolPoly& BoolPoly::operator+=(const BoolPoly& o) {
    *this = *this + o;
    return *this;
}

BoolPoly BoolPoly::operator*(const BoolPoly& o) const {
    std::vector<uint64_t> prods;
    prods.reserve(terms_.size() * o.terms_.size());
    for (uint64_t m1 : terms_)
        for (uint64_t m2 : o.terms_) prods.push_back(m1 | m2);
    return from_terms(std::move(prods));
}

BoolPoly& BoolPoly::operator*=(const BoolPoly& o) {
    *this = *this * o;
    return *this;
}

int BoolPoly::evaluate(uint64_t values, uint64_t defined) const {
    uint64_t missing = support() & ~defined;
    if (missing) throw Error(Errc::domain, "evaluate: unassigned variable(s) " + list_vars(missing));
    int acc = 0;
    for (uint64_t m : terms_) acc ^= ((values & m) == m);
    return acc;
}

std::string BoolPoly::str(PrintStyle style) const {
    if (terms_.empty()) return "0";
    std::vector<uint64_t> sorted = terms_;
    std::sort(sorted.begin(), sorted.end(), display_less);
    std::string out;
    for (uint64_t m : sorted) {
        if (!out.empty()) out += "+";
        if (m == 0) {
            out += "1";
            continue;
        }
        // letters in display-rank order
        std::vector<VarId> vs;
        for (uint64_t t = m; t; t &= t - 1) vs.push_back(std::countr_zero(t));
        std::sort(vs.begin(), vs.end(),
                  [](VarId x, VarId y) { return display_rank(x) < display_rank(y); });
        for (VarId v : vs) {
            if (style == PrintStyle::local && is_placeholder(v))
                out += "Z";
            else
                out += var_name(v);
        }
    }
    return out;
}

std::string to_string(const BoolPoly& p, PrintStyle style) { return p.str(style); }

// ---------------------------------------------------------------- parsing

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw Error(Errc::parse,
                    "polynomial parse error at position " + std::to_string(pos) + ": " + msg);
    }

    BoolPoly parse_sum() {
        BoolPoly acc = parse_term();
        while (peek() == '+') {
            ++pos;
            acc += parse_term();
        }
        return acc;
    }

    BoolPoly parse_term() {
        BoolPoly prod = BoolPoly::one();
        bool any = false;
        for (;;) {
            char c = peek();
            if (c == '(') {
                ++pos;
                BoolPoly inner = parse_sum();
                if (peek() != ')') fail("expected ')'");
                ++pos;
                prod *= inner;
                any = true;
            } else if (c == '1') {
                ++pos;
                any = true;
            } else if (c == '0') {
                ++pos;
                prod = BoolPoly::zero();
                any = true;
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                ++pos;
                std::string name(1, c);
                // Z1..Z4 and per-round F2/K2/L2 carry a digit suffix
                if ((c == 'Z' || c == 'F' || c == 'K' || c == 'L') && pos < text.size() &&
                    std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    name += text[pos++];
                }
                VarId v;
                try {
                    v = var_from_name(name);
                } catch (const Error&) {
                    --pos;
                    fail("unknown variable '" + name + "'");
                }
                prod *= BoolPoly::var(v);
                any = true;
            } else {
                break;
            }
        }
        if (!any) fail("empty term");
        return prod;
    }
};

} // namespace

BoolPoly BoolPoly::parse(std::string_view text) {
    Parser p{text};
    if (p.eof()) throw Error(Errc::parse, "empty polynomial text");
    BoolPoly r = p.parse_sum();
    if (!p.eof()) p.fail("trailing input");
    return r;
}

// ------------------------------------------------------------ substitution

void SubstMap::set(VarId v, BoolPoly p) {
    if (v < 0 || v >= 64) throw Error(Errc::range, "substitution slot out of range");
    entries_[v] = std::move(p);
    defined_ |= 1ULL << v;
}

void SubstMap::set_identity(VarId v) { set(v, BoolPoly::var(v)); }

BoolPoly substitute(const BoolPoly& p, const SubstMap& subs) {
    uint64_t missing = p.support() & ~subs.defined_mask();
    if (missing)
        throw Error(Errc::domain, "substitute: no substitution for " + list_vars(missing));

    // Split substitutions into cheap monomial relabels and general polynomials;
    // products over the general subset of each term are memoized since terms
    // share them heavily.
    uint64_t general = 0, zero_kill = 0;
    std::array<uint64_t, 64> relabel{};
    uint64_t supp = p.support();
    for (uint64_t t = supp; t; t &= t - 1) {
        VarId v = std::countr_zero(t);
        const BoolPoly& q = subs.at(v);
        if (q.is_zero())
            zero_kill |= 1ULL << v;
        else if (q.term_count() == 1)
            relabel[v] = q.terms()[0];
        else
            general |= 1ULL << v;
    }

    std::unordered_map<uint64_t, BoolPoly> memo;
    memo.emplace(0, BoolPoly::one());
    auto general_product = [&](uint64_t subset, auto&& self) -> const BoolPoly& {
        auto it = memo.find(subset);
        if (it != memo.end()) return it->second;
        VarId v = std::countr_zero(subset);
        const BoolPoly& rest = self(subset & (subset - 1), self);
        return memo.emplace(subset, rest * subs.at(v)).first->second;
    };

    std::unordered_set<uint64_t> acc;
    auto flip = [&](uint64_t m) {
        auto [it, inserted] = acc.insert(m);
        if (!inserted) acc.erase(it);
    };
    for (uint64_t m : p.terms()) {
        if (m & zero_kill) continue;
        uint64_t base = 0;
        for (uint64_t t = m & ~general; t; t &= t - 1) base |= relabel[std::countr_zero(t)];
        const BoolPoly& prod = general_product(m & general, general_product);
        for (uint64_t pm : prod.terms()) flip(base | pm);
    }
    return BoolPoly::from_terms(std::vector<uint64_t>(acc.begin(), acc.end()));
}

// ------------------------------------------------- truth tables and ANF

namespace {
constexpr uint64_t kHalfMask[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

uint64_t mobius64(uint64_t t) {
    for (int k = 0; k < 6; ++k) t ^= (t & kHalfMask[k]) << (1 << k);
    return t;
}

uint64_t local_monomial(int idx6) {
    uint64_t m = 0;
    for (int j = 0; j < 6; ++j)
        if (idx6 >> j & 1) m |= 1ULL << local_var(j);
    return m;
}
} // namespace

BoolPoly anf_from_truth_table(uint64_t table) {
    uint64_t coeff = mobius64(table);
    std::vector<uint64_t> terms;
    for (int i = 0; i < 64; ++i)
        if (coeff >> i & 1) terms.push_back(local_monomial(i));
    return BoolPoly::from_terms(std::move(terms));
}

uint64_t truth_table_from_anf(const BoolPoly& p) {
    uint64_t off = p.support() & ~kLocalWindow;
    if (off)
        throw Error(Errc::domain,
                    "truth_table_from_anf: non-local variable(s) " + list_vars(off));
    uint64_t coeff = 0;
    for (uint64_t m : p.terms()) {
        int idx = 0;
        for (int j = 0; j < 6; ++j)
            if (m >> local_var(j) & 1) idx |= 1 << j;
        coeff ^= 1ULL << idx;
    }
    return mobius64(coeff); // the transform is an involution
}

std::string tt_to_hex(uint64_t table) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 0; i < 16; ++i) s[i] = digits[(table >> (60 - 4 * i)) & 0xF];
    return s;
}

uint64_t tt_from_hex(std::string_view hex) {
    if (hex.size() != 16)
        throw Error(Errc::parse, "truth table hex must be exactly 16 digits");
    uint64_t t = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            d = c - 'A' + 10;
        else
            throw Error(Errc::parse, std::string("bad hex digit '") + c + "'");
        t = t << 4 | d;
    }
    return t;
}

// -------------------------------------------------------------- division

namespace {

// Remap a polynomial onto compact variable indices given by `slots`.
std::vector<uint64_t> compact_terms(const BoolPoly& p, const std::vector<int>& slots) {
    std::vector<uint64_t> out;
    out.reserve(p.term_count());
    for (uint64_t m : p.terms()) {
        uint64_t c = 0;
        for (size_t i = 0; i < slots.size(); ++i)
            if (m >> slots[i] & 1) c |= 1ULL << i;
        out.push_back(c);
    }
    return out;
}

int eval_compact(const std::vector<uint64_t>& terms, uint64_t v) {
    int acc = 0;
    for (uint64_t m : terms) acc ^= ((v & m) == m);
    return acc;
}

std::vector<int> support_slots(uint64_t mask) {
    std::vector<int> slots;
    for (uint64_t t = mask; t; t &= t - 1) slots.push_back(std::countr_zero(t));
    return slots;
}

} // namespace

bool divides(const BoolPoly& a, const BoolPoly& p) {
    uint64_t joint = a.support() | p.support();
    int k = std::popcount(joint);
    if (k > 24)
        throw Error(Errc::domain, "divides: joint support exceeds 24 variables (" +
                                      std::to_string(k) + ")");
    auto slots = support_slots(joint);
    auto ta = compact_terms(a, slots);
    auto tp = compact_terms(p, slots);
    for (uint64_t v = 0; v < (1ULL << k); ++v)
        if (eval_compact(ta, v) == 0 && eval_compact(tp, v) == 1) return false;
    return true;
}

namespace {

// Shared scan for affine divisors on the compact domain: for each linear mask
// u, p's ones must all have the same parity of u&x; the constant term follows.
template <typename Emit>
void scan_affine_divisors(const BoolPoly& p, Emit&& emit) {
    int k = std::popcount(p.support());
    if (k > 16)
        throw Error(Errc::domain, "affine-factor scan: support exceeds 16 variables (" +
                                      std::to_string(k) + ")");
    auto slots = support_slots(p.support());
    auto tp = compact_terms(p, slots);
    std::vector<uint64_t> ones;
    for (uint64_t v = 0; v < (1ULL << k); ++v)
        if (eval_compact(tp, v)) ones.push_back(v);
    for (uint64_t u = 1; u < (1ULL << k); ++u) {
        int par = -1;
        bool uniform = true;
        for (uint64_t x : ones) {
            int pr = std::popcount(u & x) & 1;
            if (par < 0)
                par = pr;
            else if (pr != par) {
                uniform = false;
                break;
            }
        }
        if (!uniform) continue;
        // divisor = sum of u's variables + c with c = par+1 (ones need a(x)=1)
        int c = ones.empty() ? 0 : (par ^ 1);
        std::vector<uint64_t> terms;
        for (uint64_t t = u; t; t &= t - 1)
            terms.push_back(1ULL << slots[std::countr_zero(t)]);
        if (c) terms.push_back(0);
        if (!emit(BoolPoly::from_terms(std::move(terms)))) return;
        if (ones.empty()) {
            // p == 0: the complementary constant also divides
            std::vector<uint64_t> t2;
            for (uint64_t t = u; t; t &= t - 1)
                t2.push_back(1ULL << slots[std::countr_zero(t)]);
            t2.push_back(0);
            if (!emit(BoolPoly::from_terms(std::move(t2)))) return;
        }
    }
}

} // namespace

bool is_irreducible_no_affine_factor(const BoolPoly& p) {
    if (p.is_zero()) return false; // 0 = a*0 for any affine a
    bool found = false;
    scan_affine_divisors(p, [&](BoolPoly) {
        found = true;
        return false; // stop
    });
    return !found;
}

std::vector<BoolPoly> affine_divisors(const BoolPoly& p) {
    std::vector<BoolPoly> out;
    scan_affine_divisors(p, [&](BoolPoly a) {
        out.push_back(std::move(a));
        return true;
    });
    return out;
}

BoolPoly drop_affine_factor(const BoolPoly& p, const BoolPoly& affine) {
    auto deg = affine.degree();
    if (!deg || *deg != 1)
        throw Error(Errc::domain, "drop_affine_factor: factor is not affine");
    if (!divides(affine, p))
        throw Error(Errc::domain,
                    "drop_affine_factor: '" + affine.str() + "' does not divide '" + p.str() + "'");
    // Substitute one of the factor's variables so the factor becomes 1; if the
    // quotient is disjoint from the factor's support this recovers it exactly.
    VarId u = std::countr_zero(affine.support());
    BoolPoly pin = affine + BoolPoly::var(u) + BoolPoly::one();
    SubstMap subs;
    subs.set(u, pin);
    for (uint64_t t = p.support() & ~(1ULL << u); t; t &= t - 1)
        subs.set_identity(std::countr_zero(t));
    BoolPoly q = substitute(p, subs);
    if (q * affine != p)
        throw Error(Errc::domain, "drop_affine_factor: quotient is entangled with factor '" +
                                      affine.str() + "'");
    return q;
}

} // namespace t310
