#include "uhlfid/version.hpp"

namespace uhlfid {

std::string_view version() { return UHLFID_VERSION; }

}  // namespace uhlfid
