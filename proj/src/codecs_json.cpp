#include <json.hpp>

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codecs_detail.hpp"
#include "nerfmt/codecs.hpp"
#include "nerfmt/json_util.hpp"
#include "nerfmt/text.hpp"

namespace nerfmt {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_fences(std::string_view s) {
  s = trim_view(s);
  if (s.starts_with("```")) {
    s.remove_prefix(3);
    while (!s.empty() && (std::isalnum(static_cast<unsigned char>(s.front())) ||
                          s.front() == '-' || s.front() == '_')) {
      s.remove_prefix(1);  // language tag
    }
    if (s.ends_with("```")) s.remove_suffix(3);
  }
  return trim_view(s);
}

std::optional<ordered_json> try_parse(const std::string& s) {
  ordered_json j = ordered_json::parse(s, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

void rtrim(std::string& s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
}

std::string repair_candidate(std::string_view prefix, const std::string& stack, bool in_string) {
  std::string r(prefix);
  if (in_string) r += '"';
  rtrim(r);
  if (!r.empty() && r.back() == ',') {
    r.pop_back();
    rtrim(r);
  }
  if (!r.empty() && r.back() == ':') r += " null";
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    r += (*it == '{') ? '}' : ']';
  }
  return r;
}

}  // namespace

std::optional<ordered_json> parse_json_lenient(std::string_view raw, std::vector<Warning>& warnings) {
  std::string_view s = strip_fences(raw);
  std::size_t first = s.find_first_of("{[");
  if (first == std::string_view::npos) {
    warnings.push_back({WarnCode::ParseFailure, "no JSON value found",
                        std::string(s.substr(0, 120)), ""});
    return std::nullopt;
  }
  bool prose_skipped = first != 0;
  std::string_view body = s.substr(first);

  struct CutPoint {
    std::size_t pos;
    std::string stack;
  };
  std::string stack;
  bool in_string = false, escape = false;
  std::size_t close_pos = std::string_view::npos;
  std::vector<CutPoint> cuts;
  for (std::size_t i = 0; i < body.size() && close_pos == std::string_view::npos; ++i) {
    char c = body[i];
    if (in_string) {
      if (escape) {
        escape = false;
      } else if (c == '\\') {
        escape = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    switch (c) {
      case '"': in_string = true; break;
      case '{':
      case '[': stack.push_back(c); break;
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        if (stack.empty()) close_pos = i + 1;
        break;
      case ',': cuts.push_back({i, stack}); break;
      default: break;
    }
  }

  if (close_pos != std::string_view::npos) {
    std::string_view trailing = trim_view(body.substr(close_pos));
    if (auto j = try_parse(std::string(body.substr(0, close_pos)))) {
      if (prose_skipped || !trailing.empty()) {
        warnings.push_back({WarnCode::JsonRepaired, "ignored text surrounding the JSON value",
                            std::string(trim_view(raw).substr(0, 120)), ""});
      }
      return j;
    }
    warnings.push_back({WarnCode::ParseFailure, "malformed JSON value",
                        std::string(body.substr(0, 120)), ""});
    return std::nullopt;
  }

  // Truncated output: close what is open, backing off comma by comma.
  if (auto j = try_parse(repair_candidate(body, stack, in_string))) {
    warnings.push_back({WarnCode::JsonRepaired, "truncated JSON completed",
                        std::string(body.substr(body.size() > 120 ? body.size() - 120 : 0)), ""});
    return j;
  }
  std::size_t tries = 0;
  for (auto it = cuts.rbegin(); it != cuts.rend() && tries < 128; ++it, ++tries) {
    if (auto j = try_parse(repair_candidate(body.substr(0, it->pos), it->stack, false))) {
      warnings.push_back({WarnCode::JsonRepaired, "truncated JSON completed",
                          std::string(body.substr(body.size() > 120 ? body.size() - 120 : 0)), ""});
      return j;
    }
  }
  warnings.push_back({WarnCode::ParseFailure, "unrecoverable JSON output",
                      std::string(body.substr(0, 120)), ""});
  return std::nullopt;
}

std::string dump_spaced(const ordered_json& value) {
  std::string out;
  std::function<void(const ordered_json&)> emit = [&](const ordered_json& v) {
    if (v.is_object()) {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        out += ordered_json(it.key()).dump();
        out += ": ";
        emit(it.value());
      }
      out += '}';
    } else if (v.is_array()) {
      out += '[';
      bool first = true;
      for (const auto& el : v) {
        if (!first) out += ", ";
        first = false;
        emit(el);
      }
      out += ']';
    } else {
      out += v.dump();
    }
  };
  emit(value);
  return out;
}

namespace {

/// Fetches the array payload, unwrapping a single-key {"...": [...]}
/// wrapper object if that is what arrived.
const ordered_json* expect_array(const ordered_json& j, std::vector<Warning>& warnings) {
  if (j.is_array()) return &j;
  if (j.is_object() && j.size() == 1 && j.begin().value().is_array()) {
    warnings.push_back({WarnCode::JsonRepaired, "unwrapped single-key object around the list",
                        j.begin().key(), ""});
    return &j.begin().value();
  }
  warnings.push_back({WarnCode::InvalidItem, "expected a JSON array of records", j.dump().substr(0, 120), ""});
  return nullptr;
}

bool get_string(const ordered_json& rec, const char* key, std::string& out) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) return false;
  out = it->get<std::string>();
  return true;
}

/// Accepts non-negative integers, including floats with integral value.
bool get_index(const ordered_json& v, std::size_t& out) {
  if (v.is_number_unsigned()) {
    out = v.get<std::size_t>();
    return true;
  }
  if (v.is_number_integer()) {
    auto n = v.get<long long>();
    if (n < 0) return false;
    out = static_cast<std::size_t>(n);
    return true;
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d < 0 || d != static_cast<double>(static_cast<long long>(d))) return false;
    out = static_cast<std::size_t>(d);
    return true;
  }
  return false;
}

}  // namespace

std::vector<MentionItem> parse_category_items(const LabelSchema& schema, std::string_view output,
                                              std::vector<Warning>& warnings, bool schema_closed) {
  std::vector<MentionItem> items;
  auto j = parse_json_lenient(output, warnings);
  if (!j) return items;
  if (!j->is_object()) {
    warnings.push_back({WarnCode::InvalidItem, "expected a JSON object keyed by label",
                        j->dump().substr(0, 120), ""});
    return items;
  }
  std::set<std::string> seen;
  for (auto it = j->begin(); it != j->end(); ++it) {
    const std::string& label = it.key();
    seen.insert(label);
    if (!schema.contains(label)) {
      warnings.push_back({WarnCode::UnknownLabel, "label not in schema", label, label});
      if (schema_closed) continue;
    }
    const auto& val = it.value();
    if (!val.is_array()) {
      warnings.push_back({WarnCode::InvalidItem, "label value is not an array", label, label});
      continue;
    }
    for (const auto& el : val) {
      if (!el.is_string()) {
        warnings.push_back({WarnCode::InvalidItem, "mention is not a string",
                            el.dump().substr(0, 120), label});
        continue;
      }
      std::string mention = el.get<std::string>();
      if (mention.empty()) {
        warnings.push_back({WarnCode::InvalidItem, "empty mention", "", label});
        continue;
      }
      items.push_back({label, utf8_to_u32(mention)});
    }
  }
  for (const auto& info : schema.labels()) {
    if (!seen.count(info.id)) {
      warnings.push_back({WarnCode::MissingField, "label key absent", info.id, info.id});
    }
  }
  return items;
}

ParsedOutput decode_category_json(const LabelSchema& schema, std::u32string_view source,
                                  std::string_view output, const DecodeOptions& opts) {
  ParsedOutput out;
  auto items = parse_category_items(schema, output, out.warnings, opts.schema_closed);
  std::map<std::u32string, std::size_t> consumed;
  for (const auto& item : items) {
    std::size_t k = ++consumed[item.mention];
    if (auto extents = resolve_occurrence(source, item.mention, k)) {
      out.entities.push_back({extents->first, extents->second, item.label});
    } else {
      out.add_warning(WarnCode::MentionNotFound, "listed mention has no remaining occurrence",
                      u32_to_utf8(item.mention), item.label);
    }
  }
  detail::finalize(out, source);
  return out;
}

ParsedOutput decode_occurrence_json(const LabelSchema& schema, std::u32string_view source,
                                    std::string_view output, const DecodeOptions& opts) {
  ParsedOutput out;
  auto j = parse_json_lenient(output, out.warnings);
  if (!j) {
    detail::finalize(out, source);
    return out;
  }
  const ordered_json* arr = expect_array(*j, out.warnings);
  if (!arr) {
    detail::finalize(out, source);
    return out;
  }
  for (const auto& rec : *arr) {
    if (!rec.is_object()) {
      out.add_warning(WarnCode::InvalidItem, "record is not an object", rec.dump().substr(0, 120),
                      "");
      continue;
    }
    std::string text8;
    if (!get_string(rec, "text", text8)) {
      out.add_warning(WarnCode::MissingField, "record lacks a text string",
                      rec.dump().substr(0, 120), "");
      continue;
    }
    std::u32string mention = utf8_to_u32(text8);
    if (mention.empty()) {
      out.add_warning(WarnCode::InvalidItem, "empty text", "", "");
      continue;
    }
    std::string label;
    if (!get_string(rec, "label", label)) {
      out.add_warning(WarnCode::MissingField, "record lacks a label string", text8, "");
      continue;
    }
    if (!detail::admit_label(schema, label, opts, out.warnings)) continue;
    std::size_t k = 1;
    auto ki = rec.find("occurrence_index");
    if (ki == rec.end()) {
      out.add_warning(WarnCode::MissingField, "occurrence_index missing; assuming 1", text8,
                      label);
    } else if (!get_index(*ki, k)) {
      out.add_warning(WarnCode::InvalidItem, "occurrence_index is not a non-negative integer",
                      text8, label);
      continue;
    }
    if (k == 0) {
      out.add_warning(WarnCode::OccurrenceOutOfRange, "occurrence_index is 1-based", text8, label);
      continue;
    }
    auto occs = occurrences(source, mention);
    if (occs.empty()) {
      out.add_warning(WarnCode::MentionNotFound, "text does not occur in source", text8, label);
      continue;
    }
    if (k > occs.size()) {
      out.add_warning(WarnCode::OccurrenceOutOfRange,
                      "occurrence_index exceeds the occurrence count", text8, label);
      continue;
    }
    out.entities.push_back({occs[k - 1].first, occs[k - 1].second, label});
  }
  detail::finalize(out, source);
  return out;
}

ParsedOutput decode_offset_json(const LabelSchema& schema, std::u32string_view source,
                                std::string_view output, const DecodeOptions& opts) {
  ParsedOutput out;
  auto j = parse_json_lenient(output, out.warnings);
  if (!j) {
    detail::finalize(out, source);
    return out;
  }
  const ordered_json* arr = expect_array(*j, out.warnings);
  if (!arr) {
    detail::finalize(out, source);
    return out;
  }
  std::set<std::pair<std::size_t, std::size_t>> claimed;
  for (const auto& rec : *arr) {
    if (!rec.is_object()) {
      out.add_warning(WarnCode::InvalidItem, "record is not an object", rec.dump().substr(0, 120),
                      "");
      continue;
    }
    std::string label;
    if (!get_string(rec, "label", label)) {
      out.add_warning(WarnCode::MissingField, "record lacks a label string",
                      rec.dump().substr(0, 120), "");
      continue;
    }
    if (!detail::admit_label(schema, label, opts, out.warnings)) continue;

    std::string text8;
    bool has_text = get_string(rec, "text", text8);
    std::u32string mention = utf8_to_u32(text8);
    if (has_text && mention.empty()) {
      out.add_warning(WarnCode::InvalidItem, "empty text", "", label);
      has_text = false;
    }

    auto recover = [&]() {
      if (!has_text || !opts.lenient_offsets) return;
      for (const auto& occ : occurrences(source, mention)) {
        if (!claimed.count(occ)) {
          claimed.insert(occ);
          out.entities.push_back({occ.first, occ.second, label});
          return;
        }
      }
      out.add_warning(WarnCode::MentionNotFound, "no unclaimed occurrence of text", text8, label);
    };

    std::size_t start = 0, end = 0;
    auto si = rec.find("start");
    auto ei = rec.find("end");
    if (si == rec.end() || ei == rec.end()) {
      out.add_warning(WarnCode::MissingField, "record lacks start/end offsets", text8, label);
      recover();
      continue;
    }
    if (!get_index(*si, start) || !get_index(*ei, end)) {
      out.add_warning(WarnCode::InvalidItem, "offsets are not non-negative integers", text8,
                      label);
      recover();
      continue;
    }
    if (start >= end || end > source.size()) {
      out.add_warning(WarnCode::InvalidOffsets,
                      "offsets do not denote a non-empty range inside the source", text8, label);
      recover();
      continue;
    }
    std::u32string_view at_offsets = source.substr(start, end - start);
    if (has_text && at_offsets != mention) {
      out.add_warning(WarnCode::OffsetTextMismatch, "text differs from source at given offsets",
                      text8, label);
      recover();
      continue;
    }
    if (!has_text) {
      out.add_warning(WarnCode::MissingField, "record lacks a text string; offsets taken as-is",
                      u32_to_utf8(at_offsets), label);
    }
    claimed.insert({start, end});
    out.entities.push_back({start, end, label});
  }
  detail::finalize(out, source);
  return out;
}

}  // namespace nerfmt
