#include <algorithm>
#include <bit>
#include <map>
#include <ostream>
#include <set>

#include "t310/invariant.hpp"

namespace t310 {

namespace {

// A coefficient term: the set of unknown Z-coefficient indices (0..63) whose
// product appears.  Size 1 is a plain literal; the empty set is the constant.
using CoeffTerm = std::vector<int>;

uint64_t input_mask(const std::array<BoolPoly, 6>& inputs, int j6) {
    uint64_t m = 0;
    for (int b = 0; b < 6; ++b) {
        if (!(j6 >> b & 1)) continue;
        const BoolPoly& q = inputs[b];
        if (q.term_count() != 1)
            throw Error(Errc::domain, "placeholder input tuples must be single variables");
        m |= q.terms()[0];
    }
    return m;
}

} // namespace

CnfStats export_fe_cnf(const BoolPoly& p, const Lzs& lzs, std::ostream& out) {
    RoundAnf anf = build_round_anf(lzs, nullptr);
    BoolPoly fe = p + transform(p, anf);

    // Expand each placeholder as sum_j Zc_j * mu_j(its inputs); collect, per
    // resulting cipher-variable monomial, the XOR of coefficient terms.
    std::map<uint64_t, std::pair<std::set<CoeffTerm>, int>> equations; // terms, const parity
    auto toggle_term = [&](uint64_t mono, CoeffTerm term) {
        std::sort(term.begin(), term.end());
        term.erase(std::unique(term.begin(), term.end()), term.end());
        auto& eq = equations[mono];
        if (term.empty()) {
            eq.second ^= 1;
            return;
        }
        auto it = eq.first.find(term);
        if (it != eq.first.end())
            eq.first.erase(it);
        else
            eq.first.insert(std::move(term));
    };

    constexpr uint64_t kPlaceholderMask = 0xFULL << kFirstPlaceholder;
    size_t generated = 0;
    for (uint64_t m : fe.terms()) {
        uint64_t state_part = m & ~kPlaceholderMask;
        std::vector<int> phs;
        for (int k = 1; k <= 4; ++k)
            if (m >> placeholder_var(k) & 1) phs.push_back(k);
        // recursive expansion over the placeholders present in this monomial
        auto expand = [&](auto&& self, size_t i, uint64_t mono, CoeffTerm term) -> void {
            if (i == phs.size()) {
                toggle_term(mono, term);
                if (++generated > (1ULL << 24))
                    throw Error(Errc::budget, "CNF expansion exceeds the term budget");
                return;
            }
            const auto& inputs = anf.z_inputs[phs[i] - 1];
            for (int j = 0; j < 64; ++j) {
                CoeffTerm t2 = term;
                t2.push_back(j);
                self(self, i + 1, mono | input_mask(inputs, j), std::move(t2));
            }
        };
        expand(expand, 0, state_part, {});
    }

    // Tseitin encoding.  DIMACS vars 1..64 are the Z coefficients Z00..Z63.
    int next_var = 64;
    std::map<CoeffTerm, int> product_var;
    std::vector<std::string> clauses;
    auto lit = [](int var, bool pos) { return (pos ? "" : "-") + std::to_string(var); };
    auto emit = [&](std::initializer_list<std::string> ls) {
        std::string s;
        for (const auto& l : ls) s += l + " ";
        clauses.push_back(s + "0");
    };
    auto term_literal = [&](const CoeffTerm& t) -> int {
        if (t.size() == 1) return t[0] + 1;
        auto it = product_var.find(t);
        if (it != product_var.end()) return it->second;
        int w = ++next_var;
        std::string big;
        for (int j : t) {
            emit({lit(w, false), lit(j + 1, true)}); // w -> each input
            big += lit(j + 1, false) + " ";
        }
        clauses.push_back(lit(w, true) + " " + big + "0"); // inputs -> w
        product_var.emplace(t, w);
        return w;
    };
    auto xor_clauses = [&](int a, int b, int c) {
        // c = a xor b
        emit({lit(a, false), lit(b, false), lit(c, false)});
        emit({lit(a, true), lit(b, true), lit(c, false)});
        emit({lit(a, true), lit(b, false), lit(c, true)});
        emit({lit(a, false), lit(b, true), lit(c, true)});
    };

    std::vector<std::string> comments;
    for (const auto& [mono, eq] : equations) {
        const auto& [terms, constant] = eq;
        comments.push_back("c equation for monomial " +
                           (mono ? BoolPoly::monomial(mono).str() : std::string("1")) + ": " +
                           std::to_string(terms.size()) + " term(s), parity " +
                           std::to_string(constant));
        if (terms.empty()) {
            if (constant) clauses.push_back("0"); // unsatisfiable equation
            continue;
        }
        std::vector<int> lits;
        for (const auto& t : terms) lits.push_back(term_literal(t));
        // XOR(lits) must equal `constant`
        int acc = lits[0];
        for (size_t i = 1; i < lits.size(); ++i) {
            int nxt = ++next_var;
            xor_clauses(acc, lits[i], nxt);
            acc = nxt;
        }
        emit({lit(acc, constant != 0)});
    }

    out << "c FE coefficient system: DIMACS vars 1..64 are the ANF coefficients\n";
    out << "c Z00..Z63 of the unknown Boolean function (var j+1 = coefficient of\n";
    out << "c the monomial selected by the bits of j over inputs a..f, a = bit 0)\n";
    out << "c polynomial: " << p.str() << "\n";
    out << "c wiring: " << lzs.str() << "\n";
    for (const auto& c : comments) out << c << "\n";
    out << "p cnf " << next_var << " " << clauses.size() << "\n";
    for (const auto& c : clauses) out << c << "\n";

    CnfStats stats;
    stats.variables = next_var;
    stats.clauses = long(clauses.size());
    stats.equations = equations.size();
    return stats;
}

} // namespace t310
