#ifndef T310_CIPHER_HPP
#define T310_CIPHER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "t310/boolpoly.hpp"

namespace t310 {

// Long-term key (LZS): the wiring functions D(1..9) -> {0..36} and
// P(1..27) -> {1..36}.  D(j)=0 wires the key bit K.  P need not be injective.
struct Lzs {
    std::array<int, 9> d{};
    std::array<int, 27> p{};
    std::string label;

    int dtap(int j) const { return d[j - 1]; } // j in 1..9
    int ptap(int j) const { return p[j - 1]; } // j in 1..27

    void validate() const; // range check, throws Errc::range
    // Text form "label: P=a,b,... D=a,b,..." ("P=" and label optional).
    static Lzs parse(std::string_view text);
    std::string str() const;
};

// 6-input Boolean function with truth table and ANF kept in sync.
// Truth-table bit i is the value on input i, input bit 0 = first argument.
class ZFunc {
public:
    ZFunc() = default;
    static ZFunc from_truth_table(uint64_t tt);
    static ZFunc from_anf(const BoolPoly& anf); // support must be local a..f
    static ZFunc from_anf_text(std::string_view text);
    static ZFunc from_hex(std::string_view hex16);

    uint64_t truth_table() const { return tt_; }
    const BoolPoly& anf() const { return anf_; }
    int eval(unsigned input6) const { return tt_ >> (input6 & 63) & 1; }
    std::string hex() const { return tt_to_hex(tt_); }
    bool operator==(const ZFunc& o) const { return tt_ == o.tt_; }

private:
    uint64_t tt_ = 0;
    BoolPoly anf_;
};

// 36-bit block, bit i (1..36) at mask position i-1.
struct CipherState {
    uint64_t bits = 0;

    int get(int i) const;         // i in 1..36
    void set(int i, int value);
    static CipherState parse_hex(std::string_view hex9);
    std::string hex() const; // 9 digits, x1 is the MSB of the first digit
    bool operator==(const CipherState& o) const { return bits == o.bits; }
};

// 240-bit key s[1..120][1..2]; round m uses K=s[m mod 120 +1][1],
// L=s[m mod 120 +1][2] (m counted from 0).
struct Key {
    std::array<uint8_t, 240> bits{}; // bits[2t]=s(t+1,1), bits[2t+1]=s(t+1,2)

    int s(int row, int part) const { return bits[2 * (row - 1) + (part - 1)]; }
    int k_bit(long round) const { return bits[2 * (round % 120)]; }
    int l_bit(long round) const { return bits[2 * (round % 120) + 1]; }
    static Key parse_hex(std::string_view hex60);
    std::string hex() const;
};

struct RoundInputs {
    uint8_t f = 0, k = 0, l = 0;
};

// One round per (r0)-(r9): 27 shifted bits plus the 9 fresh bits
// y33,y29,...,y1 built from the cascading XOR chain through Z1..Z4.
CipherState round(const CipherState& state, const RoundInputs& r, const Lzs& lzs, const ZFunc& z);

// Iterated rounds with the 120-periodic key schedule starting at m=0 and
// F drawn from f_stream (must cover `rounds` entries, else Errc::domain).
CipherState encrypt(const CipherState& state, const Key& key,
                    const std::vector<uint8_t>& f_stream, long rounds, const Lzs& lzs,
                    const ZFunc& z);

struct BijectiveOptions {
    bool exhaustive = false;
    long samples = 10000; // contexts tested in sampled mode
    uint64_t seed = 1;
    int jobs = 1;
};

struct BijectiveVerdict {
    enum class Kind { evidence, proven, collision };
    Kind kind = Kind::evidence;
    long contexts_checked = 0;
    // populated for collisions; the two states differ only on x4,x8,...,x36
    CipherState state_a, state_b;
    RoundInputs inputs;
    std::string str() const;
};

// Two inputs colliding under fixed (F,K,L) can differ only on the 9 bits
// x4,x8,...,x36, so each context checks a 9-bit-to-9-bit map for bijectivity.
// Exhaustive mode walks all 2^30 contexts and yields a proof.
BijectiveVerdict check_bijective(const Lzs& lzs, const ZFunc& z, const BijectiveOptions& opt = {});

} // namespace t310

#endif
