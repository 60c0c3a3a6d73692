#include "t310/invariant.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace t310 {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr uint64_t kStateMask = (1ULL << 36) - 1;

// Find an assignment (as a values mask over the poly's support) on which q
// evaluates to 1.  Exhaustive over the support when feasible.
std::optional<uint64_t> satisfying_assignment(const BoolPoly& q, uint64_t seed) {
    if (q.is_zero()) return std::nullopt;
    uint64_t supp = q.support();
    int k = std::popcount(supp);
    std::vector<int> slots;
    for (uint64_t t = supp; t; t &= t - 1) slots.push_back(std::countr_zero(t));
    auto scatter = [&](uint64_t v) {
        uint64_t m = 0;
        for (int i = 0; i < k; ++i)
            if (v >> i & 1) m |= 1ULL << slots[i];
        return m;
    };
    if (k <= 20) {
        for (uint64_t v = 0; v < (1ULL << k); ++v) {
            uint64_t values = scatter(v);
            if (q.evaluate(values)) return values;
        }
        return std::nullopt;
    }
    // a nonzero degree-d function is 1 on at least a 2^-d fraction of inputs
    for (long t = 0; t < (1L << 22); ++t) {
        uint64_t values = scatter(splitmix64(seed ^ uint64_t(t)));
        if (q.evaluate(values)) return values;
    }
    throw Error(Errc::budget, "could not construct a witness for a nonzero residual");
}

RoundInputs inputs_from_values(uint64_t values, int round_index) {
    RoundInputs r;
    r.f = values >> round_var(kVarF, round_index) & 1;
    r.k = values >> round_var(kVarK, round_index) & 1;
    r.l = values >> round_var(kVarL, round_index) & 1;
    return r;
}

} // namespace

std::string Witness::str() const {
    std::string s = "state=" + state.hex();
    for (size_t i = 0; i < rounds.size(); ++i) {
        s += " round" + std::to_string(i + 1) + "(F=" + std::to_string(rounds[i].f) +
             ",K=" + std::to_string(rounds[i].k) + ",L=" + std::to_string(rounds[i].l) + ")";
    }
    s += " p_before=" + std::to_string(before) + " p_after=" + std::to_string(after);
    return s;
}

VerifyVerdict verify_invariant(const BoolPoly& p, const Lzs& lzs, const ZFunc& z, int rounds) {
    if (rounds < 1) throw Error(Errc::range, "round count must be >= 1");
    VerifyVerdict v;
    BoolPoly composed =
        rounds == 1 ? fundamental_equation(p, lzs, &z).fe : transform_rounds(p, lzs, &z, rounds) + p;
    v.residual = composed;
    if (composed.is_zero()) {
        v.proven = true;
        return v;
    }
    // The residual is over state variables and per-round F/K/L; any satisfying
    // assignment yields a concrete violation which we re-check on the cipher.
    auto values = satisfying_assignment(composed, 0x7310);
    if (!values) throw Error(Errc::domain, "residual nonzero but unsatisfiable"); // unreachable
    Witness w;
    w.state.bits = *values & kStateMask;
    CipherState s = w.state;
    for (int r = 1; r <= rounds; ++r) {
        RoundInputs ri = inputs_from_values(*values, r);
        w.rounds.push_back(ri);
        s = round(s, ri, lzs, z);
    }
    w.before = p.evaluate(w.state.bits, kStateMask);
    w.after = p.evaluate(s.bits, kStateMask);
    if (w.before == w.after)
        throw Error(Errc::domain, "witness re-check failed; symbolic engine is inconsistent");
    v.witness = std::move(w);
    return v;
}

VerifyVerdict verify_chain(std::span<const BoolPoly> chain, const Lzs& lzs, const ZFunc& z) {
    if (chain.empty()) throw Error(Errc::domain, "chain must be non-empty");
    RoundAnf anf = build_round_anf(lzs, &z);
    VerifyVerdict v;
    size_t k = chain.size();
    for (size_t i = 0; i < k; ++i) {
        BoolPoly diff = transform(chain[(i + 1) % k], anf) + chain[i];
        if (diff.is_zero()) continue;
        v.residual = diff;
        auto values = satisfying_assignment(diff, 0x7311);
        if (!values) throw Error(Errc::domain, "residual nonzero but unsatisfiable");
        Witness w;
        w.state.bits = *values & kStateMask;
        RoundInputs ri = inputs_from_values(*values, 1);
        w.rounds.push_back(ri);
        CipherState after = round(w.state, ri, lzs, z);
        w.before = chain[i].evaluate(w.state.bits, kStateMask);
        w.after = chain[(i + 1) % k].evaluate(after.bits, kStateMask);
        v.witness = std::move(w);
        return v;
    }
    v.proven = true;
    return v;
}

EmpiricalResult empirical_check(const BoolPoly& p, const Lzs& lzs, const ZFunc& z, long trials,
                                int rounds_per_trial, uint64_t seed, int jobs) {
    EmpiricalResult res;
    res.trials = trials;
    std::atomic<long> violations{0};
    std::mutex guard;
    std::optional<Witness> first;
    long first_idx = -1;

    int njobs = std::max(1, jobs);
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            long t = next.fetch_add(64);
            if (t >= trials) break;
            long end = std::min(trials, t + 64);
            for (long i = t; i < end; ++i) {
                uint64_t h = splitmix64(seed ^ splitmix64(uint64_t(i) + 1));
                CipherState s{h & kStateMask};
                CipherState cur = s;
                int before = p.evaluate(s.bits, kStateMask);
                std::vector<RoundInputs> used;
                bool bad = false;
                for (int r = 0; r < rounds_per_trial && !bad; ++r) {
                    uint64_t hr = splitmix64(h ^ splitmix64(uint64_t(r) + 0x1234));
                    RoundInputs ri{uint8_t(hr & 1), uint8_t(hr >> 1 & 1), uint8_t(hr >> 2 & 1)};
                    used.push_back(ri);
                    cur = round(cur, ri, lzs, z);
                    if (p.evaluate(cur.bits, kStateMask) != before) bad = true;
                }
                if (bad) {
                    violations.fetch_add(1);
                    std::lock_guard<std::mutex> lk(guard);
                    if (first_idx < 0 || i < first_idx) {
                        Witness w;
                        w.state = s;
                        w.rounds = used;
                        w.before = before;
                        w.after = before ^ 1;
                        first = std::move(w);
                        first_idx = i;
                    }
                }
            }
        }
    };
    if (njobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < njobs; ++t) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }
    res.violations = violations.load();
    res.witness = std::move(first);
    return res;
}

// ------------------------------------------------------------------ search

namespace {

void collect_monomials(const std::vector<VarId>& vars, int max_degree, size_t budget,
                       std::vector<uint64_t>& out) {
    // combinations of each degree 1..max_degree (constant excluded: it is
    // always invariant and would only add noise to the basis)
    size_t n = vars.size();
    for (int d = 1; d <= max_degree && d <= int(n); ++d) {
        std::vector<size_t> idx(d);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            uint64_t m = 0;
            for (size_t i : idx) m |= 1ULL << vars[i];
            out.push_back(m);
            if (out.size() > budget)
                throw Error(Errc::budget, "monomial basis exceeds the solver budget");
            int j = d - 1;
            while (j >= 0 && idx[j] == n - d + j) --j;
            if (j < 0) break;
            ++idx[j];
            for (int l = j + 1; l < d; ++l) idx[l] = idx[l - 1] + 1;
        }
    }
}

using BitRow = std::vector<uint64_t>;

void row_flip(BitRow& r, size_t col) { r[col >> 6] ^= 1ULL << (col & 63); }
bool row_get(const BitRow& r, size_t col) { return r[col >> 6] >> (col & 63) & 1; }
void row_xor(BitRow& a, const BitRow& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

// Kernel basis of the column space of `rows` (each row one GF(2) equation).
std::vector<BitRow> nullspace(std::vector<BitRow>& rows, size_t ncols) {
    size_t words = (ncols + 63) / 64;
    std::vector<long> pivot_row(ncols, -1);
    size_t rank = 0;
    for (size_t c = 0; c < ncols && rank < rows.size(); ++c) {
        size_t sel = rank;
        while (sel < rows.size() && !row_get(rows[sel], c)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (size_t r = 0; r < rows.size(); ++r)
            if (r != rank && row_get(rows[r], c)) row_xor(rows[r], rows[rank]);
        pivot_row[c] = long(rank);
        ++rank;
    }
    std::vector<BitRow> basis;
    for (size_t f = 0; f < ncols; ++f) {
        if (pivot_row[f] >= 0) continue;
        BitRow vec(words, 0);
        row_flip(vec, f);
        for (size_t c = 0; c < ncols; ++c)
            if (pivot_row[c] >= 0 && row_get(rows[pivot_row[c]], f)) row_flip(vec, c);
        basis.push_back(std::move(vec));
    }
    return basis;
}

} // namespace

std::vector<BoolPoly> search_invariants(const InvariantSearchSpec& spec, const Lzs& lzs,
                                        const ZFunc& z) {
    for (VarId v : spec.variables)
        if (!is_state(v)) throw Error(Errc::domain, "search variables must be state variables");
    if (spec.max_degree < 1) throw Error(Errc::range, "max_degree must be >= 1");

    std::vector<VarId> vars = spec.variables;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    std::vector<uint64_t> cands;
    collect_monomials(vars, spec.max_degree, spec.budget, cands);

    // Equations: for every monomial of sum_m c_m (m + transform^r(m)), the
    // coefficient must vanish.
    size_t ncols = cands.size();
    size_t words = (ncols + 63) / 64;
    std::map<uint64_t, BitRow> eq;
    for (size_t j = 0; j < ncols; ++j) {
        BoolPoly m = BoolPoly::monomial(cands[j]);
        BoolPoly fe = spec.rounds == 1 ? fundamental_equation(m, lzs, &z).fe
                                       : transform_rounds(m, lzs, &z, spec.rounds) + m;
        for (uint64_t t : fe.terms()) {
            auto it = eq.find(t);
            if (it == eq.end()) it = eq.emplace(t, BitRow(words, 0)).first;
            row_flip(it->second, j);
        }
    }
    std::vector<BitRow> rows;
    rows.reserve(eq.size());
    for (auto& [t, r] : eq) rows.push_back(std::move(r));

    std::vector<BoolPoly> out;
    for (const BitRow& vec : nullspace(rows, ncols)) {
        std::vector<uint64_t> terms;
        for (size_t j = 0; j < ncols; ++j)
            if (row_get(vec, j)) terms.push_back(cands[j]);
        out.push_back(BoolPoly::from_terms(std::move(terms)));
    }
    return out;
}

bool space_contains(std::span<const BoolPoly> basis, const BoolPoly& p) {
    // echelonize by leading term, then reduce p
    std::vector<BoolPoly> ech;
    auto leading = [](const BoolPoly& q) { return q.terms().back(); };
    auto reduce = [&](BoolPoly q) {
        for (bool changed = true; changed && !q.is_zero();) {
            changed = false;
            for (const BoolPoly& b : ech) {
                if (!q.is_zero() && q.contains_term(leading(b))) {
                    q += b;
                    changed = true;
                }
            }
        }
        return q;
    };
    for (const BoolPoly& b : basis) {
        BoolPoly r = reduce(b);
        if (!r.is_zero()) ech.push_back(std::move(r));
    }
    return reduce(p).is_zero();
}

// ------------------------------------------------------------ factor cycles

namespace {

bool is_fresh(int bit) { return bit % 4 == 1; }

BoolPoly pair_poly(int i, int j) {
    return BoolPoly::var(state_var(i)) + BoolPoly::var(state_var(j));
}

} // namespace

std::string FactorCycle::str() const {
    std::string s;
    size_t n = factors.size();
    for (size_t i = 0; i < n; ++i) {
        s += std::string(1, char('A' + i)) + " = " + factors[i].str() + "\n";
    }
    s += "cycle:";
    // paper arrows run down the letters, the wrap edge last
    auto arrow = [&](size_t i) {
        s += " " + std::string(1, char('A' + (i + 1) % n)) + "->" + std::string(1, char('A' + i));
        const CycleEdge& e = edges[i];
        if (e.kind == CycleEdge::Kind::z_perturbed)
            s += " (Z" + std::to_string(e.placeholder) + "+" + e.offset.str() + ")";
        else if (e.kind == CycleEdge::Kind::linear_bridge)
            s += " (+" + e.offset.str() + ")";
    };
    for (size_t i = n - 1; i-- > 0;) arrow(i);
    arrow(n - 1);
    return s;
}

FactorCycle derive_cycle_factors(const Lzs& lzs, std::pair<int, int> seed) {
    auto [si, sj] = seed;
    if (si < 1 || si > 36 || sj < 1 || sj > 36 || !is_fresh(si) || !is_fresh(sj) || si == sj)
        throw Error(Errc::domain,
                    "seed must be two distinct fresh output indexes (congruent 1 mod 4)");

    RoundAnf anf = build_round_anf(lzs, nullptr);

    struct Run {
        int top_i, top_j; // the pair the run starts from (both = 0 mod 4)
        int placeholder;  // of the closing edge out of this run's seed
        BoolPoly offset;
        int next_i, next_j; // top pair of the following run
    };
    std::vector<Run> runs;
    std::vector<std::pair<int, int>> seen;
    int ci = si, cj = sj;
    for (;;) {
        if (int(runs.size()) >= 9) throw Error(Errc::domain, "wiring does not close into a cycle");
        for (auto& s : seen)
            if (s == std::make_pair(ci, cj))
                throw Error(Errc::domain, "wiring walk revisits a pair without closing");
        seen.emplace_back(ci, cj);

        // transform of the seed pair, placeholders opaque
        BoolPoly r = transform(pair_poly(ci, cj), anf);
        if (r.degree().value_or(0) > 1)
            throw Error(Errc::domain, "wiring does not close into a cycle (nonlinear pair image)");
        uint64_t supp = r.support();
        if (supp & ((1ULL << kVarF) | (1ULL << kVarK) | (1ULL << kVarL)))
            throw Error(Errc::domain,
                        "wiring does not close into a cycle (F/K/L survive the pair image)");
        std::vector<int> ph;
        for (int k = 1; k <= 4; ++k)
            if (supp >> placeholder_var(k) & 1) ph.push_back(k);
        if (ph.size() > 1)
            throw Error(Errc::domain,
                        "wiring does not close into a cycle (two Boolean functions on one edge)");

        BoolPoly linear = r;
        int placeholder = 0;
        if (!ph.empty()) {
            placeholder = ph[0];
            linear += BoolPoly::var(placeholder_var(placeholder));
        }

        // candidate offsets: subsets of the placeholder's input variables
        std::vector<VarId> in_vars;
        if (placeholder) {
            for (const BoolPoly& q : anf.z_inputs[placeholder - 1]) {
                VarId v = std::countr_zero(q.terms()[0]);
                if (std::find(in_vars.begin(), in_vars.end(), v) == in_vars.end())
                    in_vars.push_back(v);
            }
        }
        std::optional<std::pair<int, int>> next;
        BoolPoly offset;
        int nsub = 1 << in_vars.size();
        std::vector<int> order(nsub);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [](int a, int b) { return std::popcount(unsigned(a)) < std::popcount(unsigned(b)); });
        for (int sub : order) {
            BoolPoly ell;
            for (size_t b = 0; b < in_vars.size(); ++b)
                if (sub >> b & 1) ell += BoolPoly::var(in_vars[b]);
            BoolPoly t = linear + ell;
            if (t.term_count() != 2) continue;
            VarId u = std::countr_zero(t.terms()[0]);
            VarId w = std::countr_zero(t.terms()[1]);
            if (!is_state(u) || !is_state(w)) continue;
            int bu = state_bit(u), bw = state_bit(w);
            if (bu % 4 != 0 || bw % 4 != 0) continue;
            next = std::make_pair(bu, bw);
            offset = ell;
            break;
        }
        if (!next) throw Error(Errc::domain, "wiring does not close into a cycle");

        runs.push_back(
            Run{ci + 3, cj + 3, placeholder, offset, next->first, next->second});
        int ni = next->first - 3, nj = next->second - 3;
        if ((ni == si && nj == sj) || (ni == sj && nj == si)) break; // closed
        ci = ni;
        cj = nj;
    }

    // sanity: each run's next-top must be the following run's top pair
    size_t nr = runs.size();
    for (size_t r = 0; r < nr; ++r) {
        const Run& cur = runs[r];
        const Run& nxt = runs[(r + 1) % nr];
        bool match = (cur.next_i == nxt.top_i && cur.next_j == nxt.top_j) ||
                     (cur.next_i == nxt.top_j && cur.next_j == nxt.top_i);
        if (!match) throw Error(Errc::domain, "wiring does not close into a cycle");
        // orient the next run's top to line up factor-wise
        if (cur.next_i != nxt.top_i) {
            Run& w = runs[(r + 1) % nr];
            std::swap(w.top_i, w.top_j);
        }
    }

    // rotate so the run with the highest top bit comes first (matches the
    // paper's letter assignment)
    size_t best = 0;
    for (size_t r = 1; r < nr; ++r)
        if (std::max(runs[r].top_i, runs[r].top_j) > std::max(runs[best].top_i, runs[best].top_j))
            best = r;
    std::rotate(runs.begin(), runs.begin() + best, runs.end());

    FactorCycle cycle;
    for (size_t r = 0; r < nr; ++r) {
        const Run& run = runs[r];
        for (int step = 0; step < 4; ++step)
            cycle.factors.push_back(pair_poly(run.top_i - step, run.top_j - step));
        for (int step = 0; step < 3; ++step) cycle.edges.push_back(CycleEdge{});
        CycleEdge closing;
        closing.kind = run.placeholder ? CycleEdge::Kind::z_perturbed
                                       : CycleEdge::Kind::linear_bridge;
        closing.placeholder = run.placeholder;
        closing.offset = run.offset;
        cycle.edges.push_back(std::move(closing));
    }

    // self-check the transform relations the structure claims
    size_t n = cycle.factors.size();
    for (size_t i = 0; i < n; ++i) {
        BoolPoly expect = cycle.factors[(i + 1) % n];
        const CycleEdge& e = cycle.edges[i];
        if (e.kind != CycleEdge::Kind::shift) {
            expect += e.offset;
            if (e.placeholder) expect += BoolPoly::var(placeholder_var(e.placeholder));
        }
        if (transform(cycle.factors[i], anf) != expect)
            throw Error(Errc::domain, "cycle self-check failed");
    }
    return cycle;
}

// ------------------------------------------------------- annihilation and Z

AnnihilationCondition::AnnihilationCondition(BoolPoly off, BoolPoly fac)
    : offset(std::move(off)), factor(std::move(fac)) {
    if (offset.support() & ~kLocalWindow || factor.support() & ~kLocalWindow)
        throw Error(Errc::domain, "annihilation condition must be over local variables a..f");
    if (offset.degree().value_or(0) > 1)
        throw Error(Errc::domain, "annihilation offset must be linear");
}

AnnihilationCondition AnnihilationCondition::from_affine_factors(BoolPoly off,
                                                                 std::span<const BoolPoly> parts) {
    BoolPoly prod = BoolPoly::one();
    for (const BoolPoly& part : parts) {
        if (part.degree().value_or(0) > 1)
            throw Error(Errc::domain, "cycle factor '" + part.str() + "' is not affine");
        prod *= part;
    }
    for (const BoolPoly& part : parts)
        if (!divides(part, prod))
            throw Error(Errc::domain, "factor '" + part.str() + "' does not divide the product");
    return AnnihilationCondition(std::move(off), std::move(prod));
}

namespace {
uint64_t local_values(int idx6) {
    uint64_t v = 0;
    for (int j = 0; j < 6; ++j)
        if (idx6 >> j & 1) v |= 1ULL << local_var(j);
    return v;
}
} // namespace

AnnihilationVerdict check_annihilation(const ZFunc& z, const AnnihilationCondition& cond) {
    // (z + offset) * factor == 0 as an ANF iff it vanishes pointwise
    BoolPoly prod = (z.anf() + cond.offset) * cond.factor;
    AnnihilationVerdict v;
    if (prod.is_zero()) return v;
    v.holds = false;
    for (int i = 0; i < 64; ++i) {
        if (prod.evaluate(local_values(i), kLocalWindow)) {
            v.counterexample = i;
            break;
        }
    }
    return v;
}

ZSolution solve_z(const AnnihilationCondition& cond) {
    ZSolution sol;
    uint64_t tt = 0;
    int forced_ones = 0;
    for (int i = 0; i < 64; ++i) {
        uint64_t vals = local_values(i);
        if (cond.factor.evaluate(vals, kLocalWindow)) {
            sol.forced.push_back(i);
            int bit = cond.offset.evaluate(vals, kLocalWindow);
            if (bit) {
                tt |= 1ULL << i;
                ++forced_ones;
            }
        }
    }
    sol.free_count = 64 - int(sol.forced.size());
    // balance the sample toward weight 32 with the free entries
    int want = std::clamp(32 - forced_ones, 0, sol.free_count);
    for (int i = 0; i < 64 && want > 0; ++i) {
        if (std::find(sol.forced.begin(), sol.forced.end(), i) != sol.forced.end()) continue;
        tt |= 1ULL << i;
        --want;
    }
    sol.sample = ZFunc::from_truth_table(tt);
    return sol;
}

ZMetrics z_metrics(const ZFunc& z) {
    ZMetrics m;
    m.weight = std::popcount(z.truth_table());
    m.algebraic_degree = z.anf().degree();
    int w[64];
    for (int x = 0; x < 64; ++x) w[x] = z.eval(x) ? -1 : 1;
    for (int len = 1; len < 64; len <<= 1) {
        for (int i = 0; i < 64; i += len << 1) {
            for (int j = i; j < i + len; ++j) {
                int a = w[j], b = w[j + len];
                w[j] = a + b;
                w[j + len] = a - b;
            }
        }
    }
    int peak = 0;
    for (int x = 0; x < 64; ++x) peak = std::max(peak, std::abs(w[x]));
    m.nonlinearity = 32 - peak / 2;
    return m;
}

// -------------------------------------------------------------- theorem 3

std::string Theorem3Report::str() const {
    switch (status) {
        case Theorem3Status::met_and_invariant:
            return "hypotheses-met-and-invariant";
        case Theorem3Status::met_but_violated:
            return "hypotheses-met-but-violated (engine self-test failure)";
        case Theorem3Status::unmet: {
            std::string s = "hypotheses-unmet:";
            for (const auto& f : failed) s += " [" + f + "]";
            return s;
        }
    }
    return {};
}

Theorem3Report check_theorem3(const Lzs& lzs, const ZFunc& z) {
    Theorem3Report rep;
    auto expect_eq = [&](const std::string& what, int got, int want) {
        if (got != want)
            rep.failed.push_back(what + "=" + std::to_string(got) + ", expected " +
                                 std::to_string(want));
    };
    if (lzs.dtap(8) != lzs.ptap(6))
        rep.failed.push_back("D(8)=" + std::to_string(lzs.dtap(8)) +
                             " != P(6)=" + std::to_string(lzs.ptap(6)));
    expect_eq("D(6)", lzs.dtap(6), 32);
    expect_eq("P(10)", lzs.ptap(10), 30);
    expect_eq("P(11)", lzs.ptap(11), 22);
    expect_eq("P(12)", lzs.ptap(12), 24);
    AnnihilationCondition cond(BoolPoly::parse("f"), BoolPoly::parse("d+e"));
    auto ann = check_annihilation(z, cond);
    if (!ann.holds)
        rep.failed.push_back("(Z+f)(d+e)=0 fails at input " + std::to_string(ann.counterexample));
    if (!rep.failed.empty()) {
        rep.status = Theorem3Status::unmet;
        return rep;
    }
    // cross-validate against the generic engine
    BoolPoly p = BoolPoly::parse("(e+m)(g+o)+(f+n)(h+p)");
    rep.status = verify_invariant(p, lzs, z).proven ? Theorem3Status::met_and_invariant
                                                    : Theorem3Status::met_but_violated;
    return rep;
}

// -------------------------------------------------------------- synthesis

SlotRef SlotRef::parse(std::string_view text) {
    if (text.size() < 2 || (text[0] != 'D' && text[0] != 'P'))
        throw Error(Errc::parse, "slot must look like D8 or P6: '" + std::string(text) + "'");
    SlotRef s;
    s.is_d = text[0] == 'D';
    int idx = 0;
    auto res = std::from_chars(text.data() + 1, text.data() + text.size(), idx);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw Error(Errc::parse, "bad slot index in '" + std::string(text) + "'");
    if (s.is_d ? (idx < 1 || idx > 9) : (idx < 1 || idx > 27))
        throw Error(Errc::range, "slot index out of range in '" + std::string(text) + "'");
    s.index = idx;
    return s;
}

std::string SlotRef::str() const {
    return (is_d ? "D" : "P") + std::to_string(index);
}

WiringConstraint WiringConstraint::parse(std::string_view text) {
    size_t eq = text.find('=');
    if (eq == std::string_view::npos)
        throw Error(Errc::parse, "constraint must look like D8=P6 or D6=32");
    WiringConstraint c;
    c.slot = SlotRef::parse(text.substr(0, eq));
    std::string_view rhs = text.substr(eq + 1);
    if (!rhs.empty() && (rhs[0] == 'D' || rhs[0] == 'P')) {
        c.other = SlotRef::parse(rhs);
    } else {
        int value = 0;
        auto res = std::from_chars(rhs.data(), rhs.data() + rhs.size(), value);
        if (res.ec != std::errc() || res.ptr != rhs.data() + rhs.size())
            throw Error(Errc::parse, "bad constraint value '" + std::string(rhs) + "'");
        c.value = value;
    }
    return c;
}

namespace {

int slot_id(const SlotRef& s) { return s.is_d ? s.index - 1 : 9 + s.index - 1; }

struct UnionFind {
    std::array<int, 36> parent;
    UnionFind() { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

std::vector<Lzs> synthesize_wiring(const SynthesisRequest& req) {
    UnionFind uf;
    std::array<std::optional<int>, 36> pinned;

    for (const auto& c : req.constraints) {
        if (c.other) uf.unite(slot_id(c.slot), slot_id(*c.other));
    }
    for (const auto& c : req.constraints) {
        if (!c.value) continue;
        int root = uf.find(slot_id(c.slot));
        if (pinned[root] && *pinned[root] != *c.value)
            throw Error(Errc::domain, "infeasible constraints: " + c.slot.str() + " pinned to both " +
                                          std::to_string(*pinned[root]) + " and " +
                                          std::to_string(*c.value));
        pinned[root] = *c.value;
    }

    // per-class value range: D slots allow 0 (key tap), P slots do not
    std::array<int, 36> lo;
    lo.fill(0);
    for (int s = 9; s < 36; ++s) lo[uf.find(s)] = 1;
    for (int s = 0; s < 36; ++s) {
        int root = uf.find(s);
        if (pinned[root] && (*pinned[root] < lo[root] || *pinned[root] > 36))
            throw Error(Errc::domain, "infeasible constraints: pinned value out of range");
    }

    // classes ordered by their lowest slot (D1..D9 then P1..P27)
    std::vector<int> order;
    for (int s = 0; s < 36; ++s) {
        int r = uf.find(s);
        if (std::find(order.begin(), order.end(), r) == order.end()) order.push_back(r);
    }

    // candidate value lists per class (pinned classes have a single value)
    std::vector<std::vector<int>> choices(order.size());
    for (size_t c = 0; c < order.size(); ++c) {
        int root = order[c];
        if (pinned[root]) {
            choices[c] = {*pinned[root]};
            continue;
        }
        std::vector<int> vals;
        for (int v = lo[root]; v <= 36; ++v) vals.push_back(v);
        // ascending order under a seeded shuffle
        for (size_t i = vals.size(); i > 1; --i) {
            size_t j = splitmix64(req.seed ^ splitmix64(uint64_t(c) << 8 | (i - 1))) % i;
            std::swap(vals[i - 1], vals[j]);
        }
        if (req.base) {
            int fs = -1;
            for (int s = 0; s < 36; ++s)
                if (uf.find(s) == root) {
                    fs = s;
                    break;
                }
            int bv = fs < 9 ? req.base->d[fs] : req.base->p[fs - 9];
            auto it = std::find(vals.begin(), vals.end(), bv);
            if (it != vals.end()) std::iter_swap(vals.begin(), it);
        }
        choices[c] = std::move(vals);
    }

    ZFunc zval;
    if (req.z)
        zval = *req.z;
    else if (!req.require.empty())
        zval = solve_z(req.require[0]).sample;
    else
        throw Error(Errc::domain,
                    "synthesize_wiring needs a validation Z or an annihilation requirement");
    for (const auto& cond : req.require)
        if (!check_annihilation(zval, cond).holds)
            throw Error(Errc::domain, "validation Z does not satisfy an annihilation requirement");

    std::vector<Lzs> found;
    long attempts = 0;
    std::vector<size_t> idx(order.size(), 0);

    auto build = [&]() {
        Lzs lzs;
        lzs.label = "synth-" + std::to_string(found.size() + 1);
        for (size_t c = 0; c < order.size(); ++c) {
            int v = choices[c][idx[c]];
            for (int s = 0; s < 36; ++s)
                if (uf.find(s) == order[c]) (s < 9 ? lzs.d[s] : lzs.p[s - 9]) = v;
        }
        return lzs;
    };

    for (;;) {
        if (attempts++ >= req.budget) break;
        Lzs cand = build();
        BijectiveOptions bopt;
        bopt.samples = req.bijective_samples;
        bopt.seed = req.seed;
        bool ok = check_bijective(cand, zval, bopt).kind != BijectiveVerdict::Kind::collision;
        if (ok) {
            for (const auto& spec : req.forbidden) {
                if (!search_invariants(spec, cand, zval).empty()) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            found.push_back(cand);
            if (int(found.size()) >= req.max_candidates) return found;
        }
        // odometer step over the choice lists
        bool wrapped = true;
        for (size_t c = order.size(); c-- > 0;) {
            if (++idx[c] < choices[c].size()) {
                wrapped = false;
                break;
            }
            idx[c] = 0;
        }
        if (wrapped) break; // space exhausted
    }
    if (found.empty())
        throw Error(Errc::budget, "synthesis budget exhausted with no valid candidate");
    return found;
}

} // namespace t310
