#pragma once

#include <string>
#include <string_view>

namespace ssq {

/// Identifiers are case-insensitive; this is the canonical folded form.
std::string fold(std::string_view ident);
bool iequals(std::string_view a, std::string_view b);

}
