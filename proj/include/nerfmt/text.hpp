#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nerfmt {

// All span offsets in this library count Unicode scalar values, not bytes.
// Text is held as UTF-32 internally and converted at the I/O boundary.

/// Decodes UTF-8; invalid byte sequences become U+FFFD.
std::u32string utf8_to_u32(std::string_view s);

std::string u32_to_utf8(std::u32string_view s);

bool is_valid_utf8(std::string_view s);

/// Non-overlapping left-to-right occurrences of `needle` in `text` as
/// half-open [start, end) offset pairs. Empty needle yields no occurrences.
std::vector<std::pair<std::size_t, std::size_t>> occurrences(std::u32string_view text,
                                                             std::u32string_view needle);

}  // namespace nerfmt
