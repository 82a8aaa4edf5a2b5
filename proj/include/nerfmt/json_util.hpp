#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nerfmt/core.hpp"

namespace nerfmt {

/// Parses JSON as it tends to arrive from a text generator: possibly
/// wrapped in markdown fences or prose, possibly truncated mid-structure.
/// A successful repair (fence stripping alone does not count) adds a
/// JsonRepaired warning; nullopt means nothing parseable was found and a
/// ParseFailure warning was added.
std::optional<nlohmann::ordered_json> parse_json_lenient(std::string_view raw,
                                                         std::vector<Warning>& warnings);

/// Single-line serialization with a space after ':' and ',', the way the
/// formats are shown to the model: {"a": 1, "b": [1, 2]}.
std::string dump_spaced(const nlohmann::ordered_json& value);

}  // namespace nerfmt
