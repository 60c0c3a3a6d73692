#include "t310/symbolic.hpp"

#include <bit>

namespace t310 {

namespace {

BoolPoly tap_d(const Lzs& lzs, int j) {
    int i = lzs.dtap(j);
    return i == 0 ? BoolPoly::var(kVarK) : BoolPoly::var(state_var(i)); // x0 := K
}

BoolPoly tap_p(const Lzs& lzs, int j) { return BoolPoly::var(state_var(lzs.ptap(j))); }

// Compose z's ANF with the placeholder's 6 input polynomials.
BoolPoly expand_z(const ZFunc& z, const std::array<BoolPoly, 6>& inputs) {
    SubstMap subs;
    for (int j = 0; j < 6; ++j) subs.set(local_var(j), inputs[j]);
    return substitute(z.anf(), subs);
}

} // namespace

RoundAnf build_round_anf(const Lzs& lzs, const ZFunc* z) {
    lzs.validate();
    RoundAnf r;
    r.symbolic = (z == nullptr);

    r.z_inputs[0][0] = BoolPoly::var(kVarL); // (z1): Z(L, x_P1..x_P5)
    for (int j = 1; j < 6; ++j) r.z_inputs[0][j] = tap_p(lzs, j);
    for (int j = 0; j < 6; ++j) r.z_inputs[1][j] = tap_p(lzs, 7 + j);
    for (int j = 0; j < 6; ++j) r.z_inputs[2][j] = tap_p(lzs, 14 + j);
    for (int j = 0; j < 6; ++j) r.z_inputs[3][j] = tap_p(lzs, 21 + j);

    std::array<BoolPoly, 4> zed;
    for (int k = 0; k < 4; ++k)
        zed[k] = z ? expand_z(*z, r.z_inputs[k]) : BoolPoly::var(placeholder_var(k + 1));

    for (int i = 1; i <= 36; ++i)
        if (i % 4 != 1) r.outputs[i - 1] = BoolPoly::var(state_var(i - 1));

    // cascading chain of the fresh bits
    BoolPoly acc = BoolPoly::var(kVarF);
    r.outputs[33 - 1] = acc + tap_d(lzs, 9);
    acc += zed[0];
    r.outputs[29 - 1] = acc + tap_d(lzs, 8);
    acc += tap_p(lzs, 6);
    r.outputs[25 - 1] = acc + tap_d(lzs, 7);
    acc += zed[1];
    r.outputs[21 - 1] = acc + tap_d(lzs, 6);
    acc += tap_p(lzs, 13);
    r.outputs[17 - 1] = acc + tap_d(lzs, 5);
    acc += BoolPoly::var(kVarL) + zed[2];
    r.outputs[13 - 1] = acc + tap_d(lzs, 4);
    acc += tap_p(lzs, 20);
    r.outputs[9 - 1] = acc + tap_d(lzs, 3);
    acc += zed[3];
    r.outputs[5 - 1] = acc + tap_d(lzs, 2);
    acc += tap_p(lzs, 27);
    r.outputs[1 - 1] = acc + tap_d(lzs, 1);
    return r;
}

BoolPoly transform(const BoolPoly& p, const RoundAnf& round_anf) {
    uint64_t non_state = p.support() & ~((1ULL << 36) - 1);
    if (non_state)
        throw Error(Errc::domain, "transform: polynomial must be over state variables only");
    SubstMap subs;
    for (uint64_t t = p.support(); t; t &= t - 1) {
        VarId v = std::countr_zero(t);
        subs.set(v, round_anf.outputs[v]);
    }
    return substitute(p, subs);
}

BoolPoly transform_rounds(const BoolPoly& p, const Lzs& lzs, const ZFunc* z, int rounds) {
    if (rounds < 1) throw Error(Errc::range, "round count must be >= 1");
    if (!z && rounds > 1)
        throw Error(Errc::domain,
                    "symbolic multi-round composition is ambiguous; supply a concrete Z");
    RoundAnf base = build_round_anf(lzs, z);
    BoolPoly q = p;
    for (int r = 1; r <= rounds; ++r) {
        // shift this round's F/K/L to their per-round variables
        SubstMap retag;
        retag.set(kVarF, BoolPoly::var(round_var(kVarF, r)));
        retag.set(kVarK, BoolPoly::var(round_var(kVarK, r)));
        retag.set(kVarL, BoolPoly::var(round_var(kVarL, r)));
        for (int v = 0; v < 36; ++v) retag.set_identity(v);
        for (int k = 1; k <= 4; ++k) retag.set_identity(placeholder_var(k));

        SubstMap subs;
        for (uint64_t t = q.support(); t; t &= t - 1) {
            VarId v = std::countr_zero(t);
            if (is_state(v))
                subs.set(v, substitute(base.outputs[v], retag));
            else
                subs.set_identity(v); // earlier rounds' F/K/L pass through
        }
        q = substitute(q, subs);
    }
    return q;
}

std::string FeReport::survivors_str() const {
    if (!survivor_mask) return "none";
    std::string s;
    if (survives_f()) s += "F";
    if (survives_k()) s += s.empty() ? "K" : ",K";
    if (survives_l()) s += s.empty() ? "L" : ",L";
    return s;
}

FeReport fundamental_equation(const BoolPoly& p, const Lzs& lzs, const ZFunc* z) {
    RoundAnf r = build_round_anf(lzs, z);
    FeReport rep;
    rep.symbolic = r.symbolic;
    rep.fe = p + transform(p, r);
    uint64_t s = rep.fe.support();
    rep.survivor_mask = uint8_t((s >> kVarF & 1) | (s >> kVarK & 1) << 1 | (s >> kVarL & 1) << 2);
    return rep;
}

BoolPoly fe_in_local_inputs(const BoolPoly& fe, const RoundAnf& round_anf, int placeholder) {
    if (placeholder < 1 || placeholder > 4)
        throw Error(Errc::range, "placeholder index must be 1..4");
    const auto& inputs = round_anf.z_inputs[placeholder - 1];

    SubstMap subs;
    uint64_t offenders = 0;
    for (uint64_t t = fe.support(); t; t &= t - 1) {
        VarId v = std::countr_zero(t);
        if (v == placeholder_var(placeholder)) {
            subs.set(v, BoolPoly::var(placeholder_var(1))); // local forms print as plain Z
            continue;
        }
        int local = -1;
        for (int j = 0; j < 6; ++j) {
            if (inputs[j].term_count() == 1 && inputs[j].terms()[0] == (1ULL << v)) {
                local = j;
                break;
            }
        }
        if (local < 0) {
            offenders |= 1ULL << v;
            continue;
        }
        subs.set(v, BoolPoly::var(local_var(local)));
    }
    if (offenders) {
        std::string names;
        for (uint64_t t = offenders; t; t &= t - 1) {
            VarId v = std::countr_zero(t);
            if (!names.empty()) names += ",";
            names += is_state(v) ? "x" + std::to_string(state_bit(v)) + " (" + var_name(v) + ")"
                                 : var_name(v);
        }
        throw Error(Errc::domain,
                    "fe_in_local_inputs: variable(s) outside the Z" + std::to_string(placeholder) +
                        " input tuple: " + names);
    }
    return substitute(fe, subs);
}

} // namespace t310
