#ifndef T310_SYMBOLIC_HPP
#define T310_SYMBOLIC_HPP

#include <array>
#include <optional>
#include <string>

#include "t310/boolpoly.hpp"
#include "t310/cipher.hpp"

namespace t310 {

// One round expressed as 36 output ANFs in the input variables plus F, K, L.
// In symbolic mode the Boolean-function outputs stay opaque as Z1..Z4; with a
// concrete ZFunc they are expanded through their input tuples.
struct RoundAnf {
    std::array<BoolPoly, 36> outputs;             // outputs[i-1] = ANF of y_i
    std::array<std::array<BoolPoly, 6>, 4> z_inputs; // Z1..Z4 input tuples
    bool symbolic = true;

    const BoolPoly& output(int bit) const { return outputs[bit - 1]; } // bit 1..36
};

RoundAnf build_round_anf(const Lzs& lzs, const ZFunc* z = nullptr);

// P -> P(round outputs); p must be over state variables only.  Placeholders
// in the round ANFs multiply and cancel like ordinary variables.
BoolPoly transform(const BoolPoly& p, const RoundAnf& round_anf);

// k-fold composition with fresh F/K/L variables per round (rounds beyond
// kMaxRoundTags raise Errc::budget).
BoolPoly transform_rounds(const BoolPoly& p, const Lzs& lzs, const ZFunc* z, int rounds);

struct FeReport {
    BoolPoly fe;
    bool symbolic = true;
    uint8_t survivor_mask = 0; // bit 0=F, 1=K, 2=L

    bool survives_f() const { return survivor_mask & 1; }
    bool survives_k() const { return survivor_mask & 2; }
    bool survives_l() const { return survivor_mask & 4; }
    std::string survivors_str() const; // "F,K,L" or "none"
};

// FE = p + transform(p).  An empty concrete-mode FE certifies p as a 1-round
// invariant for every key, IV and round count.
FeReport fundamental_equation(const BoolPoly& p, const Lzs& lzs, const ZFunc* z = nullptr);

// Rewrites fe over the 6 local input names a..f of the chosen placeholder
// (1..4).  Any state variable outside that input tuple is an error listing
// the offenders; the caller is expected to drop non-local factors first.
// The placeholder itself is renamed to Z1 so local forms print as plain Z.
BoolPoly fe_in_local_inputs(const BoolPoly& fe, const RoundAnf& round_anf, int placeholder);

} // namespace t310

#endif
