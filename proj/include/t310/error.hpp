#ifndef T310_ERROR_HPP
#define T310_ERROR_HPP

#include <stdexcept>
#include <string>

namespace t310 {

enum class Errc {
    parse = 1,      // malformed input text
    range = 2,      // index or value out of range
    domain = 3,     // operation precondition violated
    budget = 4,     // search/solver budget exceeded
    not_found = 5,  // unknown fixture or name
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace t310

#endif
