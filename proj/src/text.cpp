#include "nerfmt/text.hpp"

namespace nerfmt {

namespace {
constexpr char32_t kReplacement = 0xFFFD;

// Returns the number of continuation bytes expected after a lead byte,
// or -1 if the byte cannot start a sequence.
int utf8_trail_count(unsigned char b) {
  if (b < 0x80) return 0;
  if ((b & 0xE0) == 0xC0) return 1;
  if ((b & 0xF0) == 0xE0) return 2;
  if ((b & 0xF8) == 0xF0) return 3;
  return -1;
}
}  // namespace

std::u32string utf8_to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char lead = static_cast<unsigned char>(s[i]);
    int trail = utf8_trail_count(lead);
    if (trail == 0) {
      out.push_back(lead);
      ++i;
      continue;
    }
    if (trail < 0 || i + static_cast<std::size_t>(trail) >= s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    char32_t cp = lead & (0x3F >> trail);
    bool ok = true;
    for (int k = 1; k <= trail; ++k) {
      unsigned char b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    // Reject overlong forms, surrogates, and out-of-range values.
    static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[trail] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(trail) + 1;
  }
  return out;
}

std::string u32_to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char lead = static_cast<unsigned char>(s[i]);
    int trail = utf8_trail_count(lead);
    if (trail < 0 || i + static_cast<std::size_t>(trail) >= s.size()) return false;
    char32_t cp = lead & (0x3F >> trail);
    for (int k = 1; k <= trail; ++k) {
      unsigned char b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (trail > 0 && (cp < kMin[trail] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)))
      return false;
    i += static_cast<std::size_t>(trail) + 1;
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> occurrences(std::u32string_view text,
                                                             std::u32string_view needle) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (needle.empty()) return out;
  std::size_t pos = 0;
  while (pos + needle.size() <= text.size()) {
    std::size_t hit = text.find(needle, pos);
    if (hit == std::u32string_view::npos) break;
    out.emplace_back(hit, hit + needle.size());
    pos = hit + needle.size();
  }
  return out;
}

}  // namespace nerfmt
