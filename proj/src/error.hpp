#pragma once

#include <stdexcept>
#include <string>

namespace profilium {

enum class Errc {
    domain,
    resource,
    numeric,
    boundary,
    regime,
    certificate,
    invalid_argument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace profilium
