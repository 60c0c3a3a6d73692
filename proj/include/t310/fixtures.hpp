#ifndef T310_FIXTURES_HPP
#define T310_FIXTURES_HPP

#include <string>
#include <utility>
#include <vector>

#include "t310/boolpoly.hpp"
#include "t310/cipher.hpp"

namespace t310 {

// A built-in long-term key together with its Boolean function and the
// invariant behaviour it is known to exhibit.
struct Fixture {
    std::string name;
    Lzs lzs;
    ZFunc z;
    std::vector<std::pair<std::string, BoolPoly>> factors; // A, B, ... as wired
    std::vector<std::pair<std::string, BoolPoly>> proven;  // invariants that hold
    std::vector<std::pair<std::string, BoolPoly>> refuted; // candidates that fail
};

const std::vector<Fixture>& all_fixtures();
const Fixture& fixture(std::string_view name); // Errc::not_found if unknown
bool has_fixture(std::string_view name);

} // namespace t310

#endif
