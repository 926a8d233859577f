#pragma once

#include <optional>
#include <string_view>

namespace forge::embedded {

// Data files compiled into the library: "stopwords", "blocklist", "queries",
// and "prompt/<template id>".
std::optional<std::string_view> lookup(std::string_view name);

}  // namespace forge::embedded
