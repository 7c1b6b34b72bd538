#pragma once

#include <string_view>

namespace uhlfid {

std::string_view version();

}  // namespace uhlfid
