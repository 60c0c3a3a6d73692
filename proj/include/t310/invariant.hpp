#ifndef T310_INVARIANT_HPP
#define T310_INVARIANT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "t310/boolpoly.hpp"
#include "t310/cipher.hpp"
#include "t310/symbolic.hpp"

namespace t310 {

// ----------------------------------------------------------- verification

struct Witness {
    CipherState state;
    std::vector<RoundInputs> rounds; // per-round F/K/L used to violate p
    int before = 0, after = 0;       // p before and after the rounds
    std::string str() const;
};

struct VerifyVerdict {
    bool proven = false;
    BoolPoly residual; // the non-vanishing FE (empty when proven)
    std::optional<Witness> witness;
};

// Proven iff the composed concrete FE is exactly 0; otherwise a concrete
// violating (state, per-round F/K/L) witness is produced.
VerifyVerdict verify_invariant(const BoolPoly& p, const Lzs& lzs, const ZFunc& z, int rounds = 1);

// Proven iff transform(chain[(i+1) mod k]) == chain[i] for all i, making every
// element invariant under k rounds.
VerifyVerdict verify_chain(std::span<const BoolPoly> chain, const Lzs& lzs, const ZFunc& z);

// Uniform random (state, F, K, L) falsification attempt; returns the number of
// violations observed and the first witness.  Deterministic for a given seed.
struct EmpiricalResult {
    long trials = 0;
    long violations = 0;
    std::optional<Witness> witness;
};
EmpiricalResult empirical_check(const BoolPoly& p, const Lzs& lzs, const ZFunc& z, long trials,
                                int rounds_per_trial = 1, uint64_t seed = 1, int jobs = 1);

// ----------------------------------------------------------------- search

struct InvariantSearchSpec {
    std::vector<VarId> variables; // subset of the 36 state variables
    int max_degree = 1;
    int rounds = 1;
    size_t budget = 1ULL << 20; // maximum monomial-basis size
};

// Solves the GF(2) linear system over candidate-monomial coefficients and
// returns a basis of the invariant space, excluding the constant polynomial.
std::vector<BoolPoly> search_invariants(const InvariantSearchSpec& spec, const Lzs& lzs,
                                        const ZFunc& z);

// Is p in the GF(2) span of the basis?
bool space_contains(std::span<const BoolPoly> basis, const BoolPoly& p);

// ----------------------------------------------------------- factor cycles

struct CycleEdge {
    enum class Kind { shift, z_perturbed, linear_bridge };
    Kind kind = Kind::shift;
    int placeholder = 0; // 1..4 for z_perturbed
    BoolPoly offset;     // linear offset over the placeholder's inputs
};

// factors[k] transforms to factors[(k+1) mod n]; edges[k] describes that step.
// In the paper's arrow notation the edge runs factors[k+1] -> factors[k].
struct FactorCycle {
    std::vector<BoolPoly> factors;
    std::vector<CycleEdge> edges;
    std::string str() const;
};

// Follows the shift wiring backward from a fresh output pair (i,j), both
// congruent 1 mod 4, until the walk closes.  Errc::domain if it cannot.
FactorCycle derive_cycle_factors(const Lzs& lzs, std::pair<int, int> seed);

// ------------------------------------------------------ annihilation and Z

// Requirement (Z + offset) * factor == 0 over the 6 local inputs a..f.
struct AnnihilationCondition {
    BoolPoly offset;
    BoolPoly factor;

    AnnihilationCondition() = default;
    AnnihilationCondition(BoolPoly off, BoolPoly fac);
    // Builds the factor as a product, checking each part is affine and
    // divides the product.
    static AnnihilationCondition from_affine_factors(BoolPoly off,
                                                     std::span<const BoolPoly> parts);
};

struct AnnihilationVerdict {
    bool holds = true;
    int counterexample = -1; // 6-bit input index where (z+offset)*factor = 1
};
AnnihilationVerdict check_annihilation(const ZFunc& z, const AnnihilationCondition& cond);

struct ZSolution {
    std::vector<int> forced; // input indices with a forced value
    int free_count = 0;      // total solutions = 2^free_count
    ZFunc sample;            // one solution, free entries balanced toward weight 32
};
ZSolution solve_z(const AnnihilationCondition& cond);

// ---------------------------------------------------------------- metrics

struct ZMetrics {
    int weight = 0;
    std::optional<int> algebraic_degree; // nullopt for the zero function
    int nonlinearity = 0;
};
ZMetrics z_metrics(const ZFunc& z);

// ---------------------------------------------------------- theorem check

enum class Theorem3Status {
    met_and_invariant,
    unmet,
    met_but_violated, // impossible if the engine is sound; treated as fatal
};

struct Theorem3Report {
    Theorem3Status status = Theorem3Status::unmet;
    std::vector<std::string> failed; // unmet hypotheses, in check order
    std::string str() const;
};

// Hypotheses: D(8)=P(6), D(6)=32, P(10)=30, P(11)=22, P(12)=24 and the
// pointwise annihilation (Z+f)(d+e)=0; when all hold, cross-validates that
// the generic engine proves AC+BD.
Theorem3Report check_theorem3(const Lzs& lzs, const ZFunc& z);

// ------------------------------------------------------------- synthesis

struct SlotRef {
    bool is_d = true;
    int index = 1; // D: 1..9, P: 1..27
    static SlotRef parse(std::string_view text); // "D8" or "P6"
    std::string str() const;
};

// Either slot == value or slot == other slot.
struct WiringConstraint {
    SlotRef slot;
    std::optional<int> value;
    std::optional<SlotRef> other;
    static WiringConstraint parse(std::string_view text); // "D8=P6" or "D6=32"
};

struct SynthesisRequest {
    std::vector<WiringConstraint> constraints;
    std::optional<Lzs> base;                       // default values for free slots
    std::vector<AnnihilationCondition> require;    // Z requirements
    std::vector<InvariantSearchSpec> forbidden;    // searches that must be empty
    std::optional<ZFunc> z;                        // validation Z; defaults to
                                                   // solve_z(require[0]).sample
    uint64_t seed = 1;
    int max_candidates = 1;
    long budget = 20000;        // wiring fill attempts
    long bijective_samples = 256;
};

std::vector<Lzs> synthesize_wiring(const SynthesisRequest& req);

// -------------------------------------------------------------- CNF export

struct CnfStats {
    int variables = 0;
    long clauses = 0;
    size_t equations = 0;
};

// Emits the coefficient system of FE(p) with the 64 ANF coefficients of Z
// unknown, as DIMACS CNF (Tseitin encoding for products and XOR chains).
CnfStats export_fe_cnf(const BoolPoly& p, const Lzs& lzs, std::ostream& out);

} // namespace t310

#endif
