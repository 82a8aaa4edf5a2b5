#include "nerfmt/codecs.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>

#include "codecs_detail.hpp"
#include "nerfmt/json_util.hpp"
#include "nerfmt/text.hpp"

namespace nerfmt {

std::string_view format_id(OutputFormat f) {
  switch (f) {
    case OutputFormat::InlineBracketed: return "inline-bracketed";
    case OutputFormat::InlineXml: return "inline-xml";
    case OutputFormat::CategoryJson: return "category-json";
    case OutputFormat::OccurrenceJson: return "occurrence-json";
    case OutputFormat::OffsetJson: return "offset-json";
  }
  return "unknown";
}

std::optional<OutputFormat> parse_format(std::string_view id) {
  for (OutputFormat f : kAllFormats) {
    if (format_id(f) == id) return f;
  }
  return std::nullopt;
}

namespace detail {

namespace {
constexpr std::u32string_view kMeta = U"[]|<>\\";
}

std::u32string escape_inline(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (kMeta.find(c) != std::u32string_view::npos) out.push_back(U'\\');
    out.push_back(c);
  }
  return out;
}

std::u32string unescape_inline(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == U'\\' && i + 1 < text.size()) ++i;
    out.push_back(text[i]);
  }
  return out;
}

bool admit_label(const LabelSchema& schema, const std::string& label, const DecodeOptions& opts,
                 std::vector<Warning>& warnings) {
  if (schema.contains(label)) return true;
  warnings.push_back({WarnCode::UnknownLabel, "label not in schema", label, label});
  return !opts.schema_closed;
}

void finalize(ParsedOutput& out, std::u32string_view source) {
  std::sort(out.entities.begin(), out.entities.end(), span_less);
  std::vector<EntitySpan> unique;
  unique.reserve(out.entities.size());
  for (auto& e : out.entities) {
    if (!unique.empty() && unique.back() == e) {
      std::u32string_view mention = source.substr(e.start, e.end - e.start);
      out.add_warning(WarnCode::DuplicateSpan, "duplicate span dropped", u32_to_utf8(mention),
                      e.label);
      continue;
    }
    unique.push_back(std::move(e));
  }
  out.entities = std::move(unique);
  out.exact = out.warnings.empty();
}

}  // namespace detail

std::optional<std::pair<std::size_t, std::size_t>> resolve_occurrence(std::u32string_view source,
                                                                      std::u32string_view mention,
                                                                      std::size_t k) {
  if (k == 0) return std::nullopt;
  auto occs = occurrences(source, mention);
  if (k > occs.size()) return std::nullopt;
  return occs[k - 1];
}

namespace {

void require_schema_labels(const LabelSchema& schema, const AnnotatedSentence& sent) {
  for (const auto& e : sent.entities) {
    if (!schema.contains(e.label)) {
      throw UnknownLabelError("label '" + e.label + "' is not in schema '" +
                              schema.dataset_name() + "'");
    }
  }
}

std::u32string render_inline(const AnnotatedSentence& sent, const std::vector<SpanNode>& nodes,
                             std::size_t seg_start, std::size_t seg_end,
                             const std::function<std::u32string(const std::string&)>& open,
                             const std::function<std::u32string(const std::string&)>& close) {
  std::u32string out;
  std::size_t pos = seg_start;
  for (const auto& node : nodes) {
    out += detail::escape_inline(
        std::u32string_view(sent.text).substr(pos, node.span.start - pos));
    out += open(node.span.label);
    out += render_inline(sent, node.children, node.span.start, node.span.end, open, close);
    out += close(node.span.label);
    pos = node.span.end;
  }
  out += detail::escape_inline(std::u32string_view(sent.text).substr(pos, seg_end - pos));
  return out;
}

std::string encode_inline(const LabelSchema& schema, const AnnotatedSentence& sent,
                          bool bracketed) {
  require_schema_labels(schema, sent);
  auto forest = nesting_forest(sent.entities, schema.label_ids());
  std::function<std::u32string(const std::string&)> open, close;
  if (bracketed) {
    open = [](const std::string&) { return std::u32string(U"["); };
    close = [](const std::string& label) { return U" | " + utf8_to_u32(label) + U"]"; };
  } else {
    open = [](const std::string& label) { return U"<" + utf8_to_u32(label) + U">"; };
    close = [](const std::string& label) { return U"</" + utf8_to_u32(label) + U">"; };
  }
  return u32_to_utf8(render_inline(sent, forest, 0, sent.text.size(), open, close));
}

std::string encode_category(const LabelSchema& schema, const AnnotatedSentence& sent) {
  require_schema_labels(schema, sent);
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& info : schema.labels()) {
    obj[info.id] = nlohmann::ordered_json::array();
  }
  for (const auto& e : sent.entities) {
    obj[e.label].push_back(u32_to_utf8(sent.mention(e)));
  }
  return dump_spaced(obj);
}

std::string encode_occurrence(const LabelSchema& schema, const AnnotatedSentence& sent) {
  require_schema_labels(schema, sent);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : sent.entities) {
    std::u32string_view mention = sent.mention(e);
    auto occs = occurrences(sent.text, mention);
    std::size_t index = 0;
    for (std::size_t i = 0; i < occs.size(); ++i) {
      if (occs[i].first == e.start && occs[i].second == e.end) {
        index = i + 1;
        break;
      }
    }
    if (index == 0) {
      throw UnrepresentableSpanError(
          "span [" + std::to_string(e.start) + ", " + std::to_string(e.end) + ") '" +
          u32_to_utf8(mention) +
          "' does not fall on a non-overlapping occurrence of its own text");
    }
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    rec["text"] = u32_to_utf8(mention);
    rec["label"] = e.label;
    rec["occurrence_index"] = index;
    arr.push_back(std::move(rec));
  }
  return dump_spaced(arr);
}

std::string encode_offset(const LabelSchema& schema, const AnnotatedSentence& sent) {
  require_schema_labels(schema, sent);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : sent.entities) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    rec["text"] = u32_to_utf8(sent.mention(e));
    rec["label"] = e.label;
    rec["start"] = e.start;
    rec["end"] = e.end;
    arr.push_back(std::move(rec));
  }
  return dump_spaced(arr);
}

}  // namespace

std::string encode(OutputFormat f, const LabelSchema& schema, const AnnotatedSentence& sent) {
  switch (f) {
    case OutputFormat::InlineBracketed: return encode_inline(schema, sent, /*bracketed=*/true);
    case OutputFormat::InlineXml: return encode_inline(schema, sent, /*bracketed=*/false);
    case OutputFormat::CategoryJson: return encode_category(schema, sent);
    case OutputFormat::OccurrenceJson: return encode_occurrence(schema, sent);
    case OutputFormat::OffsetJson: return encode_offset(schema, sent);
  }
  throw Error("unknown output format");
}

ParsedOutput decode(OutputFormat f, const LabelSchema& schema, std::u32string_view source,
                    std::string_view output, const DecodeOptions& opts) {
  switch (f) {
    case OutputFormat::InlineBracketed: return decode_inline_bracketed(schema, source, output, opts);
    case OutputFormat::InlineXml: return decode_inline_xml(schema, source, output, opts);
    case OutputFormat::CategoryJson: return decode_category_json(schema, source, output, opts);
    case OutputFormat::OccurrenceJson: return decode_occurrence_json(schema, source, output, opts);
    case OutputFormat::OffsetJson: return decode_offset_json(schema, source, output, opts);
  }
  throw Error("unknown output format");
}

}  // namespace nerfmt
