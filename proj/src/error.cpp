#include "error.hpp"

namespace profilium {

const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::domain: return "domain";
    case Errc::resource: return "resource";
    case Errc::numeric: return "numeric";
    case Errc::boundary: return "boundary";
    case Errc::regime: return "regime";
    case Errc::certificate: return "certificate";
    case Errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

}  // namespace profilium
