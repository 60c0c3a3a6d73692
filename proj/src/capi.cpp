#include "t310.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "t310/fixtures.hpp"
#include "t310/invariant.hpp"
#include "t310/selftest.hpp"

using namespace t310;

struct t310_poly_t {
    BoolPoly v;
};
struct t310_lzs_t {
    Lzs v;
};
struct t310_zfunc_t {
    ZFunc v;
};

namespace {

thread_local std::string g_last_error;

t310_status set_error(t310_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

t310_status from_errc(const Error& e) {
    switch (e.code()) {
        case Errc::parse: return set_error(T310_ERR_PARSE, e.what());
        case Errc::range: return set_error(T310_ERR_RANGE, e.what());
        case Errc::domain: return set_error(T310_ERR_DOMAIN, e.what());
        case Errc::budget: return set_error(T310_ERR_BUDGET, e.what());
        case Errc::not_found: return set_error(T310_ERR_NOT_FOUND, e.what());
    }
    return set_error(T310_ERR_INTERNAL, e.what());
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
t310_status guarded(Fn&& fn) {
    try {
        fn();
        return T310_OK;
    } catch (const Error& e) {
        return from_errc(e);
    } catch (const std::exception& e) {
        return set_error(T310_ERR_INTERNAL, e.what());
    }
}

#define REQUIRE_ARG(cond)                                               \
    do {                                                                \
        if (!(cond)) return set_error(T310_ERR_INVALID, "null or invalid argument: " #cond); \
    } while (0)

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    // drop empty pieces caused by trailing separators
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

std::string trimmed(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

extern "C" {

const char* t310_last_error(void) { return g_last_error.c_str(); }

void t310_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------ polynomials */

t310_status t310_poly_parse(const char* text, t310_poly_t** out) {
    REQUIRE_ARG(text && out);
    return guarded([&] { *out = new t310_poly_t{BoolPoly::parse(text)}; });
}

t310_status t310_poly_print(const t310_poly_t* p, int style, char** out) {
    REQUIRE_ARG(p && out && (style == 0 || style == 1));
    return guarded([&] {
        *out = dup_string(p->v.str(style ? PrintStyle::local : PrintStyle::global));
    });
}

void t310_poly_free(t310_poly_t* p) { delete p; }

t310_status t310_poly_add(const t310_poly_t* p, const t310_poly_t* q, t310_poly_t** out) {
    REQUIRE_ARG(p && q && out);
    return guarded([&] { *out = new t310_poly_t{p->v + q->v}; });
}

t310_status t310_poly_mul(const t310_poly_t* p, const t310_poly_t* q, t310_poly_t** out) {
    REQUIRE_ARG(p && q && out);
    return guarded([&] { *out = new t310_poly_t{p->v * q->v}; });
}

t310_status t310_poly_degree(const t310_poly_t* p, int* degree, int* is_zero) {
    REQUIRE_ARG(p && degree && is_zero);
    auto d = p->v.degree();
    *is_zero = d ? 0 : 1;
    *degree = d.value_or(0);
    return T310_OK;
}

t310_status t310_poly_equal(const t310_poly_t* p, const t310_poly_t* q, int* equal) {
    REQUIRE_ARG(p && q && equal);
    *equal = p->v == q->v ? 1 : 0;
    return T310_OK;
}

t310_status t310_poly_eval(const t310_poly_t* p, const char* assignment, int* value) {
    REQUIRE_ARG(p && assignment && value);
    return guarded([&] {
        uint64_t values = 0, defined = 0;
        for (const std::string& piece : split(assignment, ',')) {
            std::string item = trimmed(piece);
            if (item.empty()) continue;
            size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw Error(Errc::parse, "assignment entries look like a=0: '" + item + "'");
            VarId v = var_from_name(trimmed(item.substr(0, eq)));
            std::string rhs = trimmed(item.substr(eq + 1));
            if (rhs != "0" && rhs != "1")
                throw Error(Errc::parse, "assignment value must be 0 or 1: '" + item + "'");
            defined |= 1ULL << v;
            if (rhs == "1") values |= 1ULL << v;
        }
        *value = p->v.evaluate(values, defined);
    });
}

t310_status t310_poly_substitute(const t310_poly_t* p, const char* map, t310_poly_t** out) {
    REQUIRE_ARG(p && map && out);
    return guarded([&] {
        SubstMap subs;
        for (const std::string& piece : split(map, ';')) {
            std::string item = trimmed(piece);
            if (item.empty()) continue;
            size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw Error(Errc::parse, "substitution entries look like a:b+c: '" + item + "'");
            VarId v = var_from_name(trimmed(item.substr(0, colon)));
            subs.set(v, BoolPoly::parse(item.substr(colon + 1)));
        }
        *out = new t310_poly_t{substitute(p->v, subs)};
    });
}

t310_status t310_poly_divides(const t310_poly_t* a, const t310_poly_t* p, int* result) {
    REQUIRE_ARG(a && p && result);
    return guarded([&] { *result = divides(a->v, p->v) ? 1 : 0; });
}

t310_status t310_poly_irreducible(const t310_poly_t* p, int* result) {
    REQUIRE_ARG(p && result);
    return guarded([&] { *result = is_irreducible_no_affine_factor(p->v) ? 1 : 0; });
}

t310_status t310_poly_drop_factor(const t310_poly_t* p, const t310_poly_t* affine,
                                  t310_poly_t** out) {
    REQUIRE_ARG(p && affine && out);
    return guarded([&] { *out = new t310_poly_t{drop_affine_factor(p->v, affine->v)}; });
}

/* ------------------------------------------------------------------ lzs */

t310_status t310_lzs_parse(const char* text, t310_lzs_t** out) {
    REQUIRE_ARG(text && out);
    return guarded([&] { *out = new t310_lzs_t{Lzs::parse(text)}; });
}

t310_status t310_lzs_print(const t310_lzs_t* lzs, char** out) {
    REQUIRE_ARG(lzs && out);
    return guarded([&] { *out = dup_string(lzs->v.str()); });
}

void t310_lzs_free(t310_lzs_t* lzs) { delete lzs; }

/* ---------------------------------------------------------------- zfunc */

t310_status t310_zfunc_from_anf(const char* text, t310_zfunc_t** out) {
    REQUIRE_ARG(text && out);
    return guarded([&] { *out = new t310_zfunc_t{ZFunc::from_anf_text(text)}; });
}

t310_status t310_zfunc_from_hex(const char* hex16, t310_zfunc_t** out) {
    REQUIRE_ARG(hex16 && out);
    return guarded([&] { *out = new t310_zfunc_t{ZFunc::from_hex(hex16)}; });
}

t310_status t310_zfunc_print_anf(const t310_zfunc_t* z, char** out) {
    REQUIRE_ARG(z && out);
    return guarded([&] { *out = dup_string(z->v.anf().str(PrintStyle::local)); });
}

t310_status t310_zfunc_print_hex(const t310_zfunc_t* z, char** out) {
    REQUIRE_ARG(z && out);
    return guarded([&] { *out = dup_string(z->v.hex()); });
}

void t310_zfunc_free(t310_zfunc_t* z) { delete z; }

t310_status t310_zfunc_metrics(const t310_zfunc_t* z, int* weight, int* degree,
                               int* degree_is_zero, int* nonlinearity) {
    REQUIRE_ARG(z && weight && degree && degree_is_zero && nonlinearity);
    return guarded([&] {
        ZMetrics m = z_metrics(z->v);
        *weight = m.weight;
        *degree_is_zero = m.algebraic_degree ? 0 : 1;
        *degree = m.algebraic_degree.value_or(0);
        *nonlinearity = m.nonlinearity;
    });
}

/* -------------------------------------------------------------- fixtures */

t310_status t310_fixture_names(char** out) {
    REQUIRE_ARG(out);
    return guarded([&] {
        std::string s;
        for (const Fixture& f : all_fixtures()) {
            if (!s.empty()) s += "\n";
            s += f.name;
        }
        *out = dup_string(s);
    });
}

t310_status t310_fixture(const char* name, t310_lzs_t** lzs_out, t310_zfunc_t** z_out) {
    REQUIRE_ARG(name && lzs_out && z_out);
    return guarded([&] {
        const Fixture& f = fixture(name);
        *lzs_out = new t310_lzs_t{f.lzs};
        *z_out = new t310_zfunc_t{f.z};
    });
}

t310_status t310_fixture_info(const char* name, char** out) {
    REQUIRE_ARG(name && out);
    return guarded([&] {
        const Fixture& f = fixture(name);
        std::ostringstream os;
        os << f.lzs.str() << "\n";
        os << "Z = " << f.z.anf().str(PrintStyle::local) << " (tt " << f.z.hex() << ")\n";
        for (const auto& [n, p] : f.factors) os << n << " = " << p.str() << "\n";
        for (const auto& [n, p] : f.proven) os << "invariant " << n << " = " << p.str() << "\n";
        for (const auto& [n, p] : f.refuted)
            os << "not-invariant " << n << " = " << p.str() << "\n";
        *out = dup_string(os.str());
    });
}

/* ---------------------------------------------------------------- cipher */

t310_status t310_encrypt(const t310_lzs_t* lzs, const t310_zfunc_t* z, const char* state_hex,
                         const char* key_hex, const char* f_bits, long rounds, char** out_hex) {
    REQUIRE_ARG(lzs && z && state_hex && key_hex && f_bits && out_hex && rounds >= 0);
    return guarded([&] {
        CipherState s = CipherState::parse_hex(state_hex);
        Key key = Key::parse_hex(key_hex);
        std::vector<uint8_t> fs;
        for (const char* c = f_bits; *c; ++c) {
            if (*c == '0' || *c == '1')
                fs.push_back(uint8_t(*c - '0'));
            else if (!std::isspace(static_cast<unsigned char>(*c)))
                throw Error(Errc::parse, "F stream must be a string of 0/1 bits");
        }
        CipherState out = encrypt(s, key, fs, rounds, lzs->v, z->v);
        *out_hex = dup_string(out.hex());
    });
}

t310_status t310_check_bijective(const t310_lzs_t* lzs, const t310_zfunc_t* z, int exhaustive,
                                 long samples, uint64_t seed, int jobs, int* verdict,
                                 char** report) {
    REQUIRE_ARG(lzs && z && verdict && report && samples >= 0);
    return guarded([&] {
        BijectiveOptions opt;
        opt.exhaustive = exhaustive != 0;
        opt.samples = samples;
        opt.seed = seed;
        opt.jobs = jobs;
        BijectiveVerdict v = check_bijective(lzs->v, z->v, opt);
        switch (v.kind) {
            case BijectiveVerdict::Kind::evidence: *verdict = 0; break;
            case BijectiveVerdict::Kind::proven: *verdict = 1; break;
            case BijectiveVerdict::Kind::collision: *verdict = 2; break;
        }
        *report = dup_string(v.str());
    });
}

/* -------------------------------------------------------- symbolic engine */

t310_status t310_derive_fe(const t310_lzs_t* lzs, const t310_zfunc_t* z, const t310_poly_t* p,
                           t310_poly_t** fe_out, char** survivors) {
    REQUIRE_ARG(lzs && p && fe_out && survivors);
    return guarded([&] {
        FeReport rep = fundamental_equation(p->v, lzs->v, z ? &z->v : nullptr);
        *fe_out = new t310_poly_t{rep.fe};
        *survivors = dup_string(rep.survivors_str());
    });
}

t310_status t310_fe_local(const t310_lzs_t* lzs, const t310_poly_t* fe, int placeholder,
                          t310_poly_t** out) {
    REQUIRE_ARG(lzs && fe && out);
    return guarded([&] {
        RoundAnf anf = build_round_anf(lzs->v, nullptr);
        *out = new t310_poly_t{fe_in_local_inputs(fe->v, anf, placeholder)};
    });
}

t310_status t310_round_anf(const t310_lzs_t* lzs, const t310_zfunc_t* z, char** out) {
    REQUIRE_ARG(lzs && out);
    return guarded([&] {
        RoundAnf anf = build_round_anf(lzs->v, z ? &z->v : nullptr);
        std::ostringstream os;
        for (int bit = 36; bit >= 1; --bit)
            os << var_name(state_var(bit)) << " <- " << anf.output(bit).str() << "\n";
        if (anf.symbolic) {
            for (int k = 1; k <= 4; ++k) {
                os << "Z" << k << " = Z(";
                for (int j = 0; j < 6; ++j)
                    os << (j ? "," : "") << anf.z_inputs[k - 1][j].str();
                os << ")\n";
            }
        }
        *out = dup_string(os.str());
    });
}

/* ------------------------------------------------------------- invariants */

t310_status t310_verify(const t310_lzs_t* lzs, const t310_zfunc_t* z, const t310_poly_t* p,
                        int rounds, int* proven, char** witness) {
    REQUIRE_ARG(lzs && z && p && proven && witness);
    return guarded([&] {
        VerifyVerdict v = verify_invariant(p->v, lzs->v, z->v, rounds);
        *proven = v.proven ? 1 : 0;
        *witness = dup_string(v.witness ? v.witness->str() : std::string());
    });
}

t310_status t310_verify_chain(const t310_lzs_t* lzs, const t310_zfunc_t* z,
                              const t310_poly_t* const* chain, size_t chain_len, int* proven,
                              char** witness) {
    REQUIRE_ARG(lzs && z && chain && chain_len > 0 && proven && witness);
    return guarded([&] {
        std::vector<BoolPoly> polys;
        polys.reserve(chain_len);
        for (size_t i = 0; i < chain_len; ++i) {
            if (!chain[i]) throw Error(Errc::domain, "null polynomial in chain");
            polys.push_back(chain[i]->v);
        }
        VerifyVerdict v = verify_chain(polys, lzs->v, z->v);
        *proven = v.proven ? 1 : 0;
        *witness = dup_string(v.witness ? v.witness->str() : std::string());
    });
}

t310_status t310_empirical(const t310_lzs_t* lzs, const t310_zfunc_t* z, const t310_poly_t* p,
                           long trials, int rounds_per_trial, uint64_t seed, int jobs,
                           long* violations, char** witness) {
    REQUIRE_ARG(lzs && z && p && trials >= 0 && rounds_per_trial >= 1 && violations && witness);
    return guarded([&] {
        EmpiricalResult r = empirical_check(p->v, lzs->v, z->v, trials, rounds_per_trial, seed, jobs);
        *violations = r.violations;
        *witness = dup_string(r.witness ? r.witness->str() : std::string());
    });
}

t310_status t310_search(const t310_lzs_t* lzs, const t310_zfunc_t* z, const char* variables,
                        int max_degree, int rounds, char** basis) {
    REQUIRE_ARG(lzs && z && variables && basis);
    return guarded([&] {
        InvariantSearchSpec spec;
        for (const char* c = variables; *c; ++c) {
            if (std::isspace(static_cast<unsigned char>(*c)) || *c == ',') continue;
            VarId v = var_from_name(std::string_view(c, 1));
            if (!is_state(v))
                throw Error(Errc::domain, "search variables must be state letters");
            spec.variables.push_back(v);
        }
        spec.max_degree = max_degree;
        spec.rounds = rounds;
        std::string out;
        for (const BoolPoly& p : search_invariants(spec, lzs->v, z->v)) {
            if (!out.empty()) out += "\n";
            out += p.str();
        }
        *basis = dup_string(out);
    });
}

t310_status t310_cycle(const t310_lzs_t* lzs, int seed_i, int seed_j, char** report) {
    REQUIRE_ARG(lzs && report);
    return guarded([&] {
        FactorCycle c = derive_cycle_factors(lzs->v, {seed_i, seed_j});
        *report = dup_string(c.str());
    });
}

t310_status t310_theorem3(const t310_lzs_t* lzs, const t310_zfunc_t* z, int* status_out,
                          char** report) {
    REQUIRE_ARG(lzs && z && status_out && report);
    return guarded([&] {
        Theorem3Report rep = check_theorem3(lzs->v, z->v);
        switch (rep.status) {
            case Theorem3Status::met_and_invariant: *status_out = 0; break;
            case Theorem3Status::unmet: *status_out = 1; break;
            case Theorem3Status::met_but_violated: *status_out = 2; break;
        }
        *report = dup_string(rep.str());
    });
}

t310_status t310_check_annihilation(const t310_zfunc_t* z, const char* offset,
                                    const char* factor, int* holds, int* counterexample) {
    REQUIRE_ARG(z && offset && factor && holds && counterexample);
    return guarded([&] {
        AnnihilationCondition cond(BoolPoly::parse(offset), BoolPoly::parse(factor));
        AnnihilationVerdict v = check_annihilation(z->v, cond);
        *holds = v.holds ? 1 : 0;
        *counterexample = v.counterexample;
    });
}

t310_status t310_solve_z(const char* offset, const char* factor, int* forced, int* free_count,
                         t310_zfunc_t** sample) {
    REQUIRE_ARG(offset && factor && forced && free_count && sample);
    return guarded([&] {
        AnnihilationCondition cond(BoolPoly::parse(offset), BoolPoly::parse(factor));
        ZSolution sol = solve_z(cond);
        *forced = int(sol.forced.size());
        *free_count = sol.free_count;
        *sample = new t310_zfunc_t{sol.sample};
    });
}

t310_status t310_synthesize(const char* constraints, const t310_lzs_t* base, const char* require,
                            const char* forbidden, const t310_zfunc_t* z, uint64_t seed,
                            int max_candidates, long budget, char** candidates) {
    REQUIRE_ARG(constraints && candidates && max_candidates >= 1 && budget >= 1);
    return guarded([&] {
        SynthesisRequest req;
        for (const std::string& piece : split(constraints, ';')) {
            std::string item = trimmed(piece);
            if (!item.empty()) req.constraints.push_back(WiringConstraint::parse(item));
        }
        if (base) req.base = base->v;
        if (require) {
            for (const std::string& piece : split(require, ';')) {
                std::string item = trimmed(piece);
                if (item.empty()) continue;
                size_t bar = item.find('|');
                if (bar == std::string::npos)
                    throw Error(Errc::parse, "require entries look like offset|factor");
                req.require.emplace_back(BoolPoly::parse(item.substr(0, bar)),
                                         BoolPoly::parse(item.substr(bar + 1)));
            }
        }
        if (forbidden) {
            for (const std::string& piece : split(forbidden, ';')) {
                std::string item = trimmed(piece);
                if (item.empty()) continue;
                InvariantSearchSpec spec;
                for (const std::string& field : split(item, ',')) {
                    size_t colon = field.find(':');
                    if (colon == std::string::npos)
                        throw Error(Errc::parse, "forbidden entries look like vars:efgh,deg:3");
                    std::string key = trimmed(field.substr(0, colon));
                    std::string val = trimmed(field.substr(colon + 1));
                    if (key == "vars") {
                        for (char c : val)
                            if (!std::isspace(static_cast<unsigned char>(c)))
                                spec.variables.push_back(var_from_name(std::string_view(&c, 1)));
                    } else if (key == "deg") {
                        spec.max_degree = std::stoi(val);
                    } else if (key == "rounds") {
                        spec.rounds = std::stoi(val);
                    } else {
                        throw Error(Errc::parse, "unknown forbidden field '" + key + "'");
                    }
                }
                req.forbidden.push_back(std::move(spec));
            }
        }
        if (z) req.z = z->v;
        req.seed = seed;
        req.max_candidates = max_candidates;
        req.budget = budget;
        std::string out;
        for (const Lzs& lzs : synthesize_wiring(req)) {
            if (!out.empty()) out += "\n";
            out += lzs.str();
        }
        *candidates = dup_string(out);
    });
}

t310_status t310_export_cnf(const t310_lzs_t* lzs, const t310_poly_t* p, char** cnf) {
    REQUIRE_ARG(lzs && p && cnf);
    return guarded([&] {
        std::ostringstream os;
        export_fe_cnf(p->v, lzs->v, os);
        *cnf = dup_string(os.str());
    });
}

t310_status t310_selftest(int quick, uint64_t seed, int jobs, int* all_passed, char** report) {
    REQUIRE_ARG(all_passed && report);
    return guarded([&] {
        SelftestOptions opt;
        opt.quick = quick != 0;
        opt.seed = seed;
        opt.jobs = jobs;
        std::ostringstream os;
        bool ok = true;
        for (const CriterionResult& r : run_selftest(opt)) {
            os << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name;
            if (!r.detail.empty()) os << " -- " << r.detail;
            os << "\n";
            ok = ok && r.passed;
        }
        *all_passed = ok ? 1 : 0;
        *report = dup_string(os.str());
    });
}

} // extern "C"
