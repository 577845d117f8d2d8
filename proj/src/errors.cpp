#include "mapcalc/errors.hpp"

namespace mapcalc {

Error::Error(std::string code, const std::string& what)
    : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

}  // namespace mapcalc
