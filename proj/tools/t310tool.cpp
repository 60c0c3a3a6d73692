// Command-line front end for the T-310 invariant-analysis library.  Talks to
// the shared library strictly through the C interface in t310.h.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "t310.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;       // proven / holds / evidence
constexpr int kExitRefuted = 1;  // refuted / collision / hypotheses unmet
constexpr int kExitError = 2;    // parse or configuration problem

struct CApiError {
    t310_status status;
    std::string message;
};

void check(t310_status st) {
    if (st != T310_OK) throw CApiError{st, t310_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    t310_string_free(s);
    return out;
}

using PolyPtr = std::unique_ptr<t310_poly_t, decltype(&t310_poly_free)>;
using LzsPtr = std::unique_ptr<t310_lzs_t, decltype(&t310_lzs_free)>;
using ZPtr = std::unique_ptr<t310_zfunc_t, decltype(&t310_zfunc_free)>;

PolyPtr parse_poly(const std::string& text) {
    t310_poly_t* p = nullptr;
    check(t310_poly_parse(text.c_str(), &p));
    return PolyPtr(p, &t310_poly_free);
}

std::string poly_str(const t310_poly_t* p, int style = 0) {
    char* s = nullptr;
    check(t310_poly_print(p, style, &s));
    return take(s);
}

// Options shared by the cipher-bound commands plus output plumbing.
struct Common {
    std::string fixture, lzs_text, lzs_file, z_anf, z_hex, config_file, out_file;
    uint64_t seed = 1;
    int jobs = 1;
    bool json_out = false;

    std::map<std::string, std::string> config;

    void add_target_flags(CLI::App* cmd) {
        cmd->add_option("--fixture", fixture, "built-in key: 551, 558, 550, 443 or 444");
        cmd->add_option("--lzs", lzs_text, "wiring text 'label: P=... D=...'");
        cmd->add_option("--lzs-file", lzs_file, "file containing the wiring text");
        cmd->add_option("--z", z_anf, "Boolean function as an ANF over a..f");
        cmd->add_option("--z-hex", z_hex, "Boolean function as a 16-digit truth table");
    }
    void add_output_flags(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "key=value file with fixture overrides");
        cmd->add_option("--out", out_file, "write the report to a file instead of stdout");
        cmd->add_option("--seed", seed, "seed for every randomized step");
        cmd->add_option("--jobs", jobs, "worker threads for sampling steps");
        cmd->add_flag("--json", json_out, "machine-readable output");
    }

    void load_config() {
        if (config_file.empty()) return;
        std::ifstream in(config_file);
        if (!in) throw CApiError{T310_ERR_NOT_FOUND, "cannot open config '" + config_file + "'"};
        std::string line;
        while (std::getline(in, line)) {
            size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t\r");
                size_t b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (!key.empty()) config[key] = value;
        }
    }

    std::string config_get(const std::string& key) const {
        auto it = config.find(key);
        return it == config.end() ? std::string() : it->second;
    }

    // Resolve the wiring and Boolean function from flags, fixture and config.
    std::pair<LzsPtr, ZPtr> resolve_target() {
        load_config();
        LzsPtr lzs(nullptr, &t310_lzs_free);
        ZPtr z(nullptr, &t310_zfunc_free);

        std::string lzs_src = lzs_text;
        if (!lzs_file.empty()) {
            std::ifstream in(lzs_file);
            if (!in) throw CApiError{T310_ERR_NOT_FOUND, "cannot open '" + lzs_file + "'"};
            std::stringstream ss;
            ss << in.rdbuf();
            lzs_src = ss.str();
        }
        std::string z_src = z_anf, zhex_src = z_hex;

        if (!fixture.empty()) {
            // config overrides take precedence over the built-in definition
            std::string o_lzs = config_get("fixture." + fixture + ".lzs");
            std::string o_z = config_get("fixture." + fixture + ".z");
            std::string o_zx = config_get("fixture." + fixture + ".z-hex");
            t310_lzs_t* lp = nullptr;
            t310_zfunc_t* zp = nullptr;
            check(t310_fixture(fixture.c_str(), &lp, &zp));
            lzs.reset(lp);
            z.reset(zp);
            if (!o_lzs.empty()) lzs_src = o_lzs;
            if (!o_z.empty()) z_src = o_z;
            if (!o_zx.empty()) zhex_src = o_zx;
        }
        if (!lzs_src.empty()) {
            t310_lzs_t* lp = nullptr;
            check(t310_lzs_parse(lzs_src.c_str(), &lp));
            lzs.reset(lp);
        }
        if (!z_src.empty()) {
            t310_zfunc_t* zp = nullptr;
            check(t310_zfunc_from_anf(z_src.c_str(), &zp));
            z.reset(zp);
        } else if (!zhex_src.empty()) {
            t310_zfunc_t* zp = nullptr;
            check(t310_zfunc_from_hex(zhex_src.c_str(), &zp));
            z.reset(zp);
        }
        if (!lzs.get())
            throw CApiError{T310_ERR_INVALID,
                            "no wiring given (use --fixture, --lzs or --lzs-file)"};
        return {std::move(lzs), std::move(z)};
    }

    ZPtr require_z(std::pair<LzsPtr, ZPtr>& target) {
        if (!target.second.get())
            throw CApiError{T310_ERR_INVALID,
                            "this command needs a Boolean function (--z, --z-hex or a fixture)"};
        return std::move(target.second);
    }

    void emit(const std::string& text, const json& structured) {
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!out_file.empty()) {
            file.open(out_file);
            if (!file) throw CApiError{T310_ERR_NOT_FOUND, "cannot write '" + out_file + "'"};
            os = &file;
        }
        if (json_out)
            *os << structured.dump(2) << "\n";
        else
            *os << text;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-310 block-cipher polynomial-invariant toolkit"};
    app.require_subcommand(1);
    Common common;

    auto* cmd_verify = app.add_subcommand("verify", "prove or refute a polynomial invariant");
    std::string poly_text;
    int rounds = 1;
    long trials = 0;
    std::vector<std::string> chain_texts;
    cmd_verify->add_option("--poly", poly_text, "invariant candidate")->required();
    cmd_verify->add_option("--rounds", rounds, "rounds the invariant must survive");
    cmd_verify->add_option("--trials", trials, "additional empirical trials (64 rounds each)");
    common.add_target_flags(cmd_verify);
    common.add_output_flags(cmd_verify);

    auto* cmd_chain = app.add_subcommand("verify-chain", "prove a cyclic chain p1 -> p2 -> ...");
    cmd_chain->add_option("--poly", chain_texts, "chain elements, in order")->required();
    common.add_target_flags(cmd_chain);
    common.add_output_flags(cmd_chain);

    auto* cmd_fe = app.add_subcommand("derive-fe", "construct the fundamental equation");
    bool fe_concrete = false;
    int fe_local = 0;
    std::vector<std::string> fe_drop;
    cmd_fe->add_option("--poly", poly_text, "invariant candidate")->required();
    cmd_fe->add_flag("--concrete", fe_concrete, "expand the Boolean function instead of Z1..Z4");
    cmd_fe->add_option("--local", fe_local, "rewrite over the local inputs of placeholder 1..4");
    cmd_fe->add_option("--drop", fe_drop, "affine factor(s) to divide out before --local");
    common.add_target_flags(cmd_fe);
    common.add_output_flags(cmd_fe);

    auto* cmd_search = app.add_subcommand("search", "basis of all invariants in a monomial space");
    std::string vars;
    int degree = 2;
    cmd_search->add_option("--vars", vars, "state variables, e.g. efghmnop")->required();
    cmd_search->add_option("--degree", degree, "maximum monomial degree");
    cmd_search->add_option("--rounds", rounds, "rounds the invariants must survive");
    common.add_target_flags(cmd_search);
    common.add_output_flags(cmd_search);

    auto* cmd_solvez = app.add_subcommand("solve-z", "solve an annihilation condition for Z");
    std::string offset_text, factor_text;
    cmd_solvez->add_option("--offset", offset_text, "the linear l in (Z+l)")->required();
    cmd_solvez->add_option("--factor", factor_text, "the annihilating factor")->required();
    common.add_output_flags(cmd_solvez);

    auto* cmd_thm =
        app.add_subcommand("check-theorem3", "check the KT1-compatible invariant conditions");
    common.add_target_flags(cmd_thm);
    common.add_output_flags(cmd_thm);

    auto* cmd_bij = app.add_subcommand("bijective", "check the round function is a bijection");
    std::string mode = "sampled";
    long samples = 10000;
    cmd_bij->add_option("--mode", mode, "sampled or exhaustive")
        ->check(CLI::IsMember({"sampled", "exhaustive"}));
    cmd_bij->add_option("--samples", samples, "contexts in sampled mode");
    common.add_target_flags(cmd_bij);
    common.add_output_flags(cmd_bij);

    auto* cmd_cycle = app.add_subcommand("cycle", "derive the factor cycle from a seed pair");
    std::string pair_text = "29,21";
    cmd_cycle->add_option("--pair", pair_text, "fresh output pair i,j (both = 1 mod 4)");
    common.add_target_flags(cmd_cycle);
    common.add_output_flags(cmd_cycle);

    auto* cmd_metrics = app.add_subcommand("metrics-z", "weight, degree and nonlinearity of Z");
    common.add_target_flags(cmd_metrics);
    common.add_output_flags(cmd_metrics);

    auto* cmd_enc = app.add_subcommand("encrypt", "run the cipher");
    std::string state_hex, key_hex, f_bits;
    int f_all = -1;
    long enc_rounds = 1;
    cmd_enc->add_option("--state", state_hex, "36-bit state, 9 hex digits")->required();
    cmd_enc->add_option("--key", key_hex, "240-bit key, 60 hex digits")->required();
    cmd_enc->add_option("--f", f_bits, "F stream as a 0/1 string, one bit per round");
    cmd_enc->add_option("--f-all", f_all, "use a constant F bit for every round");
    cmd_enc->add_option("--rounds", enc_rounds, "round count");
    common.add_target_flags(cmd_enc);
    common.add_output_flags(cmd_enc);

    auto* cmd_syn = app.add_subcommand("synthesize", "search for wirings under constraints");
    std::vector<std::string> constraints, requires_, forbids;
    int max_candidates = 1;
    long budget = 20000;
    cmd_syn->add_option("--constrain", constraints, "constraint D8=P6 or D6=32 (repeatable)");
    cmd_syn->add_option("--require", requires_, "annihilation 'offset|factor' (repeatable)");
    cmd_syn->add_option("--forbid", forbids, "search spec 'vars:efgh,deg:3' that must be empty");
    cmd_syn->add_option("--max", max_candidates, "candidates to emit");
    cmd_syn->add_option("--budget", budget, "fill attempts before giving up");
    common.add_target_flags(cmd_syn); // --fixture/--lzs act as the base wiring
    common.add_output_flags(cmd_syn);

    auto* cmd_cnf =
        app.add_subcommand("export-cnf", "DIMACS CNF of the FE system with Z00..Z63 unknown");
    cmd_cnf->add_option("--poly", poly_text, "invariant candidate")->required();
    common.add_target_flags(cmd_cnf);
    common.add_output_flags(cmd_cnf);

    auto* cmd_round = app.add_subcommand("print-round", "the 36 substitution ANFs of one round");
    bool round_concrete = false;
    cmd_round->add_flag("--concrete", round_concrete, "expand the Boolean function");
    common.add_target_flags(cmd_round);
    common.add_output_flags(cmd_round);

    auto* cmd_fixtures = app.add_subcommand("fixtures", "list the built-in keys");
    common.add_output_flags(cmd_fixtures);

    auto* cmd_self = app.add_subcommand("selftest", "run the acceptance criteria");
    bool quick = false;
    cmd_self->add_flag("--quick", quick, "reduced trial counts");
    common.add_output_flags(cmd_self);

    // small polynomial tools
    auto* cmd_padd = app.add_subcommand("poly-add", "sum of two polynomials");
    auto* cmd_pmul = app.add_subcommand("poly-mul", "product of two polynomials");
    std::string pa_text, pb_text;
    for (auto* c : {cmd_padd, cmd_pmul}) {
        c->add_option("a", pa_text, "first polynomial")->required();
        c->add_option("b", pb_text, "second polynomial")->required();
        common.add_output_flags(c);
    }
    auto* cmd_peval = app.add_subcommand("poly-eval", "evaluate a polynomial");
    std::string assign_text;
    cmd_peval->add_option("--poly", poly_text, "polynomial")->required();
    cmd_peval->add_option("--assign", assign_text, "assignment a=1,b=0,...")->required();
    common.add_output_flags(cmd_peval);
    auto* cmd_psub = app.add_subcommand("poly-subst", "substitute variables");
    std::string map_text;
    cmd_psub->add_option("--poly", poly_text, "polynomial")->required();
    cmd_psub->add_option("--map", map_text, "map a:b+c;d:1 covering the support")->required();
    common.add_output_flags(cmd_psub);
    auto* cmd_pdiv = app.add_subcommand("poly-divides", "does a divide p?");
    cmd_pdiv->add_option("a", pa_text, "candidate divisor")->required();
    cmd_pdiv->add_option("b", pb_text, "polynomial")->required();
    common.add_output_flags(cmd_pdiv);
    auto* cmd_pirr = app.add_subcommand("poly-irreducible", "no affine factor?");
    cmd_pirr->add_option("--poly", poly_text, "polynomial")->required();
    common.add_output_flags(cmd_pirr);
    auto* cmd_tt = app.add_subcommand("tt-to-anf", "truth table hex to ANF");
    std::string hex_text;
    cmd_tt->add_option("hex", hex_text, "16 hex digits")->required();
    common.add_output_flags(cmd_tt);
    auto* cmd_anf = app.add_subcommand("anf-to-tt", "ANF to truth table hex");
    cmd_anf->add_option("--poly", poly_text, "ANF over a..f")->required();
    common.add_output_flags(cmd_anf);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_verify->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            PolyPtr p = parse_poly(poly_text);
            int proven = 0;
            char* witness = nullptr;
            check(t310_verify(target.first.get(), z.get(), p.get(), rounds, &proven, &witness));
            std::string w = take(witness);
            std::ostringstream os;
            os << (proven ? "proven" : "refuted") << ": " << poly_str(p.get()) << "\n";
            if (!proven) os << "witness: " << w << "\n";
            long violations = 0;
            if (trials > 0) {
                char* ew = nullptr;
                check(t310_empirical(target.first.get(), z.get(), p.get(), trials, 64, common.seed,
                                     common.jobs, &violations, &ew));
                take(ew);
                os << "empirical: " << violations << " violation(s) in " << trials
                   << " trials of 64 rounds\n";
            }
            common.emit(os.str(), json{{"command", "verify"},
                                       {"poly", poly_str(p.get())},
                                       {"proven", proven == 1},
                                       {"witness", w},
                                       {"trials", trials},
                                       {"violations", violations}});
            return proven ? kExitOk : kExitRefuted;
        }

        if (cmd_chain->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            std::vector<PolyPtr> polys;
            std::vector<const t310_poly_t*> raw;
            for (const auto& t : chain_texts) {
                polys.push_back(parse_poly(t));
                raw.push_back(polys.back().get());
            }
            int proven = 0;
            char* witness = nullptr;
            check(t310_verify_chain(target.first.get(), z.get(), raw.data(), raw.size(), &proven,
                                    &witness));
            std::string w = take(witness);
            std::ostringstream os;
            os << (proven ? "proven" : "refuted") << ": chain of " << raw.size() << "\n";
            if (!proven) os << "witness: " << w << "\n";
            common.emit(os.str(), json{{"command", "verify-chain"},
                                       {"length", raw.size()},
                                       {"proven", proven == 1},
                                       {"witness", w}});
            return proven ? kExitOk : kExitRefuted;
        }

        if (cmd_fe->parsed()) {
            auto target = common.resolve_target();
            PolyPtr p = parse_poly(poly_text);
            const t310_zfunc_t* z = nullptr;
            if (fe_concrete) {
                ZPtr zp = common.require_z(target);
                target.second = std::move(zp); // keep alive for the call
                z = target.second.get();
            }
            t310_poly_t* fe_raw = nullptr;
            char* survivors = nullptr;
            check(t310_derive_fe(target.first.get(), z, p.get(), &fe_raw, &survivors));
            PolyPtr fe(fe_raw, &t310_poly_free);
            std::string surv = take(survivors);
            std::ostringstream os;
            os << "FE = " << poly_str(fe.get()) << "\n";
            os << "survivors: " << surv << "\n";
            std::string local_str;
            if (!fe_drop.empty() || fe_local) {
                PolyPtr cur = std::move(fe);
                for (const auto& d : fe_drop) {
                    PolyPtr factor = parse_poly(d);
                    t310_poly_t* next = nullptr;
                    check(t310_poly_drop_factor(cur.get(), factor.get(), &next));
                    cur.reset(next);
                }
                if (!fe_drop.empty()) os << "after drop: " << poly_str(cur.get()) << "\n";
                if (fe_local) {
                    t310_poly_t* loc = nullptr;
                    check(t310_fe_local(target.first.get(), cur.get(), fe_local, &loc));
                    PolyPtr local(loc, &t310_poly_free);
                    local_str = poly_str(local.get(), 1);
                    os << "local(Z" << fe_local << "): " << local_str << "\n";
                }
                fe = std::move(cur);
            }
            common.emit(os.str(), json{{"command", "derive-fe"},
                                       {"fe", poly_str(fe.get())},
                                       {"survivors", surv},
                                       {"local", local_str}});
            return kExitOk;
        }

        if (cmd_search->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            char* basis = nullptr;
            check(t310_search(target.first.get(), z.get(), vars.c_str(), degree, rounds, &basis));
            std::string b = take(basis);
            std::ostringstream os;
            if (b.empty()) {
                os << "no invariants (empty basis)\n";
            } else {
                os << "basis:\n";
                std::istringstream is(b);
                std::string line;
                while (std::getline(is, line)) os << "  " << line << "\n";
            }
            json arr = json::array();
            {
                std::istringstream is(b);
                std::string line;
                while (std::getline(is, line)) arr.push_back(line);
            }
            common.emit(os.str(), json{{"command", "search"}, {"basis", arr}});
            return kExitOk;
        }

        if (cmd_solvez->parsed()) {
            int forced = 0, free_count = 0;
            t310_zfunc_t* sample_raw = nullptr;
            check(t310_solve_z(offset_text.c_str(), factor_text.c_str(), &forced, &free_count,
                               &sample_raw));
            ZPtr sample(sample_raw, &t310_zfunc_free);
            char* anf = nullptr;
            char* hex = nullptr;
            check(t310_zfunc_print_anf(sample.get(), &anf));
            check(t310_zfunc_print_hex(sample.get(), &hex));
            std::string anf_s = take(anf), hex_s = take(hex);
            std::ostringstream os;
            os << "forced entries: " << forced << " of 64\n";
            os << "free entries: " << free_count << " (2^" << free_count << " solutions)\n";
            os << "sample (balanced): tt=" << hex_s << "\n";
            os << "sample ANF: " << anf_s << "\n";
            common.emit(os.str(), json{{"command", "solve-z"},
                                       {"forced", forced},
                                       {"free", free_count},
                                       {"sample_tt", hex_s},
                                       {"sample_anf", anf_s}});
            return kExitOk;
        }

        if (cmd_thm->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            int status = -1;
            char* report = nullptr;
            check(t310_theorem3(target.first.get(), z.get(), &status, &report));
            std::string rep = take(report);
            common.emit(rep + "\n",
                        json{{"command", "check-theorem3"}, {"status", status}, {"report", rep}});
            if (status == 0) return kExitOk;
            return status == 1 ? kExitRefuted : kExitError;
        }

        if (cmd_bij->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            int verdict = -1;
            char* report = nullptr;
            check(t310_check_bijective(target.first.get(), z.get(), mode == "exhaustive", samples,
                                       common.seed, common.jobs, &verdict, &report));
            std::string rep = take(report);
            common.emit(rep + "\n",
                        json{{"command", "bijective"}, {"verdict", verdict}, {"report", rep}});
            return verdict == 2 ? kExitRefuted : kExitOk;
        }

        if (cmd_cycle->parsed()) {
            auto target = common.resolve_target();
            size_t comma = pair_text.find(',');
            if (comma == std::string::npos) throw CApiError{T310_ERR_PARSE, "--pair wants i,j"};
            int i = std::stoi(pair_text.substr(0, comma));
            int j = std::stoi(pair_text.substr(comma + 1));
            char* report = nullptr;
            check(t310_cycle(target.first.get(), i, j, &report));
            std::string rep = take(report);
            common.emit(rep + "\n", json{{"command", "cycle"}, {"report", rep}});
            return kExitOk;
        }

        if (cmd_metrics->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            int weight = 0, deg = 0, zero = 0, nl = 0;
            check(t310_zfunc_metrics(z.get(), &weight, &deg, &zero, &nl));
            char* anf = nullptr;
            check(t310_zfunc_print_anf(z.get(), &anf));
            std::string anf_s = take(anf);
            std::ostringstream os;
            os << "Z = " << anf_s << "\n";
            os << "weight: " << weight << "\n";
            os << "algebraic degree: "
               << (zero ? std::string("zero polynomial") : std::to_string(deg)) << "\n";
            os << "nonlinearity: " << nl << "\n";
            common.emit(os.str(), json{{"command", "metrics-z"},
                                       {"anf", anf_s},
                                       {"weight", weight},
                                       {"degree", zero ? json(nullptr) : json(deg)},
                                       {"nonlinearity", nl}});
            return kExitOk;
        }

        if (cmd_enc->parsed()) {
            auto target = common.resolve_target();
            ZPtr z = common.require_z(target);
            std::string fs = f_bits;
            if (fs.empty() && f_all >= 0) fs.assign(size_t(enc_rounds), f_all ? '1' : '0');
            char* out_hex = nullptr;
            check(t310_encrypt(target.first.get(), z.get(), state_hex.c_str(), key_hex.c_str(),
                               fs.c_str(), enc_rounds, &out_hex));
            std::string hex = take(out_hex);
            common.emit(hex + "\n", json{{"command", "encrypt"}, {"state", hex}});
            return kExitOk;
        }

        if (cmd_syn->parsed()) {
            common.load_config();
            LzsPtr base(nullptr, &t310_lzs_free);
            ZPtr z(nullptr, &t310_zfunc_free);
            if (!common.fixture.empty() || !common.lzs_text.empty() || !common.lzs_file.empty()) {
                auto target = common.resolve_target();
                base = std::move(target.first);
                z = std::move(target.second);
            }
            auto join = [](const std::vector<std::string>& v) {
                std::string s;
                for (const auto& e : v) {
                    if (!s.empty()) s += ";";
                    s += e;
                }
                return s;
            };
            char* cands = nullptr;
            check(t310_synthesize(join(constraints).c_str(), base.get(), join(requires_).c_str(),
                                  join(forbids).c_str(), z.get(), common.seed, max_candidates,
                                  budget, &cands));
            std::string out = take(cands);
            json arr = json::array();
            {
                std::istringstream is(out);
                std::string line;
                while (std::getline(is, line)) arr.push_back(line);
            }
            common.emit(out + "\n", json{{"command", "synthesize"}, {"candidates", arr}});
            return kExitOk;
        }

        if (cmd_cnf->parsed()) {
            auto target = common.resolve_target();
            PolyPtr p = parse_poly(poly_text);
            char* cnf = nullptr;
            check(t310_export_cnf(target.first.get(), p.get(), &cnf));
            std::string out = take(cnf);
            common.emit(out, json{{"command", "export-cnf"}, {"dimacs", out}});
            return kExitOk;
        }

        if (cmd_round->parsed()) {
            auto target = common.resolve_target();
            const t310_zfunc_t* z = nullptr;
            if (round_concrete) {
                ZPtr zp = common.require_z(target);
                target.second = std::move(zp);
                z = target.second.get();
            }
            char* out = nullptr;
            check(t310_round_anf(target.first.get(), z, &out));
            std::string text = take(out);
            common.emit(text, json{{"command", "print-round"}, {"substitutions", text}});
            return kExitOk;
        }

        if (cmd_fixtures->parsed()) {
            char* names = nullptr;
            check(t310_fixture_names(&names));
            std::string list = take(names);
            std::ostringstream os;
            json arr = json::array();
            std::istringstream is(list);
            std::string name;
            while (std::getline(is, name)) {
                char* info = nullptr;
                check(t310_fixture_info(name.c_str(), &info));
                std::string text = take(info);
                os << text << "\n";
                arr.push_back(json{{"name", name}, {"info", text}});
            }
            common.emit(os.str(), json{{"command", "fixtures"}, {"fixtures", arr}});
            return kExitOk;
        }

        if (cmd_self->parsed()) {
            int all_passed = 0;
            char* report = nullptr;
            check(t310_selftest(quick ? 1 : 0, common.seed, common.jobs, &all_passed, &report));
            std::string rep = take(report);
            common.emit(rep,
                        json{{"command", "selftest"}, {"passed", all_passed == 1}, {"report", rep}});
            return all_passed ? kExitOk : kExitRefuted;
        }

        auto binary_poly_op = [&](bool is_add) -> int {
            PolyPtr a = parse_poly(pa_text), b = parse_poly(pb_text);
            t310_poly_t* r = nullptr;
            check(is_add ? t310_poly_add(a.get(), b.get(), &r)
                         : t310_poly_mul(a.get(), b.get(), &r));
            PolyPtr res(r, &t310_poly_free);
            std::string s = poly_str(res.get());
            common.emit(s + "\n", json{{"result", s}});
            return kExitOk;
        };
        if (cmd_padd->parsed()) return binary_poly_op(true);
        if (cmd_pmul->parsed()) return binary_poly_op(false);

        if (cmd_peval->parsed()) {
            PolyPtr p = parse_poly(poly_text);
            int value = -1;
            check(t310_poly_eval(p.get(), assign_text.c_str(), &value));
            common.emit(std::to_string(value) + "\n", json{{"value", value}});
            return kExitOk;
        }
        if (cmd_psub->parsed()) {
            PolyPtr p = parse_poly(poly_text);
            t310_poly_t* r = nullptr;
            check(t310_poly_substitute(p.get(), map_text.c_str(), &r));
            PolyPtr res(r, &t310_poly_free);
            std::string s = poly_str(res.get());
            common.emit(s + "\n", json{{"result", s}});
            return kExitOk;
        }
        if (cmd_pdiv->parsed()) {
            PolyPtr a = parse_poly(pa_text), b = parse_poly(pb_text);
            int result = 0;
            check(t310_poly_divides(a.get(), b.get(), &result));
            common.emit(result ? "divides\n" : "does-not-divide\n", json{{"divides", result == 1}});
            return result ? kExitOk : kExitRefuted;
        }
        if (cmd_pirr->parsed()) {
            PolyPtr p = parse_poly(poly_text);
            int result = 0;
            check(t310_poly_irreducible(p.get(), &result));
            common.emit(result ? "irreducible (no affine factor)\n" : "has an affine factor\n",
                        json{{"irreducible", result == 1}});
            return result ? kExitOk : kExitRefuted;
        }
        if (cmd_tt->parsed()) {
            t310_zfunc_t* z = nullptr;
            check(t310_zfunc_from_hex(hex_text.c_str(), &z));
            ZPtr zp(z, &t310_zfunc_free);
            char* anf = nullptr;
            check(t310_zfunc_print_anf(zp.get(), &anf));
            std::string s = take(anf);
            common.emit(s + "\n", json{{"anf", s}});
            return kExitOk;
        }
        if (cmd_anf->parsed()) {
            t310_zfunc_t* z = nullptr;
            check(t310_zfunc_from_anf(poly_text.c_str(), &z));
            ZPtr zp(z, &t310_zfunc_free);
            char* hex = nullptr;
            check(t310_zfunc_print_hex(zp.get(), &hex));
            std::string s = take(hex);
            common.emit(s + "\n", json{{"tt", s}});
            return kExitOk;
        }
    } catch (const CApiError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
