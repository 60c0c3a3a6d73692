#include "t310/cipher.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <charconv>
#include <mutex>
#include <thread>

namespace t310 {

// ----------------------------------------------------------------- Lzs

void Lzs::validate() const {
    for (int j = 1; j <= 9; ++j)
        if (dtap(j) < 0 || dtap(j) > 36)
            throw Error(Errc::range, "D(" + std::to_string(j) + ")=" + std::to_string(dtap(j)) +
                                         " out of range 0..36");
    for (int j = 1; j <= 27; ++j)
        if (ptap(j) < 1 || ptap(j) > 36)
            throw Error(Errc::range, "P(" + std::to_string(j) + ")=" + std::to_string(ptap(j)) +
                                         " out of range 1..36");
}

namespace {

std::vector<int> parse_int_list(std::string_view s, size_t& pos) {
    std::vector<int> out;
    for (;;) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        int value = 0;
        auto res = std::from_chars(s.data() + pos, s.data() + s.size(), value);
        if (res.ec != std::errc()) break;
        pos = res.ptr - s.data();
        out.push_back(value);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size() && s[pos] == ',')
            ++pos;
        else
            break;
    }
    return out;
}

} // namespace

Lzs Lzs::parse(std::string_view text) {
    Lzs lzs;
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    // optional "label:" prefix (label may not contain '=' or ',')
    size_t colon = text.find(':');
    if (colon != std::string_view::npos) {
        std::string_view head = text.substr(pos, colon - pos);
        if (head.find('=') == std::string_view::npos &&
            head.find(',') == std::string_view::npos) {
            lzs.label = std::string(head);
            while (!lzs.label.empty() && std::isspace(static_cast<unsigned char>(lzs.label.back())))
                lzs.label.pop_back();
            pos = colon + 1;
        }
    }
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == 'P' && text[pos + 1] == '=') pos += 2;
    auto pvals = parse_int_list(text, pos);
    if (pvals.size() != 27)
        throw Error(Errc::parse,
                    "expected 27 P entries, got " + std::to_string(pvals.size()));
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == 'D' && text[pos + 1] == '=')
        pos += 2;
    else
        throw Error(Errc::parse, "expected 'D=' after the P entries");
    auto dvals = parse_int_list(text, pos);
    if (dvals.size() != 9)
        throw Error(Errc::parse, "expected 9 D entries, got " + std::to_string(dvals.size()));
    skip_ws();
    if (pos != text.size()) throw Error(Errc::parse, "trailing input after D entries");
    std::copy(pvals.begin(), pvals.end(), lzs.p.begin());
    std::copy(dvals.begin(), dvals.end(), lzs.d.begin());
    lzs.validate();
    return lzs;
}

std::string Lzs::str() const {
    std::string s;
    if (!label.empty()) s = label + ": ";
    s += "P=";
    for (int j = 1; j <= 27; ++j) {
        if (j > 1) s += ",";
        s += std::to_string(ptap(j));
    }
    s += " D=";
    for (int j = 1; j <= 9; ++j) {
        if (j > 1) s += ",";
        s += std::to_string(dtap(j));
    }
    return s;
}

// ---------------------------------------------------------------- ZFunc

ZFunc ZFunc::from_truth_table(uint64_t tt) {
    ZFunc z;
    z.tt_ = tt;
    z.anf_ = anf_from_truth_table(tt);
    return z;
}

ZFunc ZFunc::from_anf(const BoolPoly& anf) {
    ZFunc z;
    z.tt_ = truth_table_from_anf(anf); // validates the local support
    z.anf_ = anf;
    return z;
}

ZFunc ZFunc::from_anf_text(std::string_view text) { return from_anf(BoolPoly::parse(text)); }

ZFunc ZFunc::from_hex(std::string_view hex16) { return from_truth_table(tt_from_hex(hex16)); }

// ----------------------------------------------------------- state & key

int CipherState::get(int i) const {
    if (i < 1 || i > 36) throw Error(Errc::range, "state bit index out of 1..36");
    return bits >> (i - 1) & 1;
}

void CipherState::set(int i, int value) {
    if (i < 1 || i > 36) throw Error(Errc::range, "state bit index out of 1..36");
    uint64_t m = 1ULL << (i - 1);
    bits = value ? bits | m : bits & ~m;
}

namespace {
int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(Errc::parse, std::string("bad hex digit '") + c + "'");
}
} // namespace

CipherState CipherState::parse_hex(std::string_view hex9) {
    if (hex9.size() != 9) throw Error(Errc::parse, "state hex must be exactly 9 digits");
    CipherState s;
    for (int q = 0; q < 9; ++q) {
        int d = hex_digit(hex9[q]);
        for (int b = 0; b < 4; ++b) s.set(4 * q + 1 + b, d >> (3 - b) & 1);
    }
    return s;
}

std::string CipherState::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(9, '0');
    for (int q = 0; q < 9; ++q) {
        int d = 0;
        for (int b = 0; b < 4; ++b) d |= get(4 * q + 1 + b) << (3 - b);
        out[q] = digits[d];
    }
    return out;
}

Key Key::parse_hex(std::string_view hex60) {
    if (hex60.size() != 60) throw Error(Errc::parse, "key hex must be exactly 60 digits");
    Key k;
    for (int q = 0; q < 60; ++q) {
        int d = hex_digit(hex60[q]);
        for (int b = 0; b < 4; ++b) k.bits[4 * q + b] = d >> (3 - b) & 1;
    }
    return k;
}

std::string Key::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(60, '0');
    for (int q = 0; q < 60; ++q) {
        int d = 0;
        for (int b = 0; b < 4; ++b) d |= bits[4 * q + b] << (3 - b);
        out[q] = digits[d];
    }
    return out;
}

// ---------------------------------------------------------------- round

namespace {

constexpr uint64_t kStateMask = (1ULL << 36) - 1;
// Fresh output bits y1,y5,...,y33 (positions 0,4,...,32 in the mask).
constexpr uint64_t kFreshMask = 0x111111111ULL;

} // namespace

CipherState round(const CipherState& state, const RoundInputs& r, const Lzs& lzs, const ZFunc& z) {
    const uint64_t x = state.bits;
    auto xbit = [&](int i) -> unsigned {
        return i == 0 ? r.k : unsigned(x >> (i - 1) & 1); // x0 := K
    };
    auto xp = [&](int j) { return unsigned(x >> (lzs.ptap(j) - 1) & 1); };

    unsigned z1 = z.eval(r.l | xp(1) << 1 | xp(2) << 2 | xp(3) << 3 | xp(4) << 4 | xp(5) << 5);
    unsigned z2 = z.eval(xp(7) | xp(8) << 1 | xp(9) << 2 | xp(10) << 3 | xp(11) << 4 | xp(12) << 5);
    unsigned z3 =
        z.eval(xp(14) | xp(15) << 1 | xp(16) << 2 | xp(17) << 3 | xp(18) << 4 | xp(19) << 5);
    unsigned z4 =
        z.eval(xp(21) | xp(22) << 1 | xp(23) << 2 | xp(24) << 3 | xp(25) << 4 | xp(26) << 5);

    // cumulative chain down the fresh bits
    unsigned acc = r.f;
    unsigned y33 = acc ^ xbit(lzs.dtap(9));
    acc ^= z1;
    unsigned y29 = acc ^ xbit(lzs.dtap(8));
    acc ^= xp(6);
    unsigned y25 = acc ^ xbit(lzs.dtap(7));
    acc ^= z2;
    unsigned y21 = acc ^ xbit(lzs.dtap(6));
    acc ^= xp(13);
    unsigned y17 = acc ^ xbit(lzs.dtap(5));
    acc ^= r.l ^ z3;
    unsigned y13 = acc ^ xbit(lzs.dtap(4));
    acc ^= xp(20);
    unsigned y9 = acc ^ xbit(lzs.dtap(3));
    acc ^= z4;
    unsigned y5 = acc ^ xbit(lzs.dtap(2));
    acc ^= xp(27);
    unsigned y1 = acc ^ xbit(lzs.dtap(1));

    uint64_t y = (x << 1) & kStateMask & ~kFreshMask; // y_{i+1} = x_i for i != 4k
    y |= uint64_t(y1) | uint64_t(y5) << 4 | uint64_t(y9) << 8 | uint64_t(y13) << 12 |
         uint64_t(y17) << 16 | uint64_t(y21) << 20 | uint64_t(y25) << 24 | uint64_t(y29) << 28 |
         uint64_t(y33) << 32;
    return CipherState{y};
}

CipherState encrypt(const CipherState& state, const Key& key,
                    const std::vector<uint8_t>& f_stream, long rounds, const Lzs& lzs,
                    const ZFunc& z) {
    if (rounds < 0) throw Error(Errc::range, "negative round count");
    if (static_cast<long>(f_stream.size()) < rounds)
        throw Error(Errc::domain, "F stream shorter than the round count");
    CipherState s = state;
    for (long m = 0; m < rounds; ++m) {
        RoundInputs r{f_stream[m], static_cast<uint8_t>(key.k_bit(m)),
                      static_cast<uint8_t>(key.l_bit(m))};
        s = round(s, r, lzs, z);
    }
    return s;
}

// ----------------------------------------------------------- bijectivity

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Scatter the 9 free bits (x4,x8,...,x36) of `v` into a state mask.
uint64_t scatter_free(unsigned v) {
    uint64_t m = 0;
    for (int k = 0; k < 9; ++k)
        if (v >> k & 1) m |= 1ULL << (4 * k + 3); // bit index of x_{4(k+1)}
    return m;
}

// Gather fresh outputs y1,y5,...,y33 into 9 bits.
unsigned gather_fresh(uint64_t y) {
    unsigned v = 0;
    for (int k = 0; k < 9; ++k) v |= unsigned(y >> (4 * k) & 1) << k;
    return v;
}

// Tests one context: returns the first colliding free-bit pair, if any.
std::optional<std::pair<unsigned, unsigned>> context_collision(uint64_t fixed_bits,
                                                               const RoundInputs& r,
                                                               const Lzs& lzs, const ZFunc& z) {
    std::array<int16_t, 512> seen_at;
    seen_at.fill(-1);
    for (unsigned v = 0; v < 512; ++v) {
        CipherState s{fixed_bits | scatter_free(v)};
        unsigned img = gather_fresh(round(s, r, lzs, z).bits);
        if (seen_at[img] >= 0) return std::make_pair(unsigned(seen_at[img]), v);
        seen_at[img] = int16_t(v);
    }
    return std::nullopt;
}

} // namespace

std::string BijectiveVerdict::str() const {
    switch (kind) {
        case Kind::proven:
            return "proven-bijective (all " + std::to_string(contexts_checked) + " contexts)";
        case Kind::evidence:
            return "bijective-evidence (" + std::to_string(contexts_checked) +
                   " contexts, no collision)";
        case Kind::collision:
            return "non-bijective: states " + state_a.hex() + " and " + state_b.hex() +
                   " collide under F=" + std::to_string(inputs.f) +
                   " K=" + std::to_string(inputs.k) + " L=" + std::to_string(inputs.l);
    }
    return {};
}

BijectiveVerdict check_bijective(const Lzs& lzs, const ZFunc& z, const BijectiveOptions& opt) {
    lzs.validate();
    const long total = opt.exhaustive ? (1L << 30) : opt.samples;
    const int jobs = std::max(1, opt.jobs);

    std::atomic<long> next{0};
    std::atomic<bool> found{false};
    BijectiveVerdict result;
    std::mutex guard;
    const long chunk = opt.exhaustive ? 4096 : 256;

    auto worker = [&] {
        for (;;) {
            long start = next.fetch_add(chunk);
            if (start >= total || found.load()) break;
            long end = std::min(total, start + chunk);
            for (long idx = start; idx < end; ++idx) {
                uint64_t ctx;
                if (opt.exhaustive) {
                    ctx = static_cast<uint64_t>(idx);
                } else {
                    ctx = splitmix64(opt.seed ^ splitmix64(static_cast<uint64_t>(idx)));
                }
                // lower 27 bits: the fixed state positions; bits 27..29: F,K,L
                uint64_t fixed = 0;
                int b = 0;
                for (int i = 1; i <= 36; ++i) {
                    if (i % 4 == 0) continue;
                    if (ctx >> b & 1) fixed |= 1ULL << (i - 1);
                    ++b;
                }
                RoundInputs r{uint8_t(ctx >> 27 & 1), uint8_t(ctx >> 28 & 1),
                              uint8_t(ctx >> 29 & 1)};
                if (auto col = context_collision(fixed, r, lzs, z)) {
                    std::lock_guard<std::mutex> lk(guard);
                    if (!found.exchange(true)) {
                        result.kind = BijectiveVerdict::Kind::collision;
                        result.state_a = CipherState{fixed | scatter_free(col->first)};
                        result.state_b = CipherState{fixed | scatter_free(col->second)};
                        result.inputs = r;
                    }
                    return;
                }
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (!found.load()) {
        result.kind =
            opt.exhaustive ? BijectiveVerdict::Kind::proven : BijectiveVerdict::Kind::evidence;
        result.contexts_checked = total;
    }
    return result;
}

} // namespace t310
