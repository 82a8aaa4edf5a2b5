#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nerfmt/core.hpp"
#include "nerfmt/schema.hpp"

namespace nerfmt {

/// The five output formats a model can be asked to generate.
enum class OutputFormat {
  InlineBracketed,
  InlineXml,
  CategoryJson,
  OccurrenceJson,
  OffsetJson,
};

inline constexpr std::array<OutputFormat, 5> kAllFormats = {
    OutputFormat::InlineBracketed, OutputFormat::InlineXml, OutputFormat::CategoryJson,
    OutputFormat::OccurrenceJson, OutputFormat::OffsetJson};

/// Stable identifiers used by CLI flags and file metadata.
std::string_view format_id(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view id);

struct DecodeOptions {
  /// Drop spans whose label is not in the schema (with a warning). Turning
  /// this off keeps raw out-of-schema labels for error analysis.
  bool schema_closed = true;
  /// Re-resolve offset records whose text does not match the claimed
  /// extents by occurrence of the text, instead of dropping them.
  bool lenient_offsets = false;
};

/// One record of the occurrence-based list format.
struct OccurrenceRecord {
  std::u32string text;
  std::string label;
  std::size_t occurrence_index = 1;  // 1-based
};

/// Serializes a sentence in the given format.
///
/// Inline formats require a laminar span family (NotLaminarError otherwise).
/// All labels must be in the schema (UnknownLabelError). The occurrence
/// format can only express spans that fall on the non-overlapping
/// left-to-right occurrence grid of their own mention text; anything else
/// raises UnrepresentableSpanError.
std::string encode(OutputFormat f, const LabelSchema& schema, const AnnotatedSentence& sent);

/// Decoders are total: arbitrary input yields a (possibly empty)
/// ParsedOutput and never throws. Recovered spans are canonically ordered
/// and always valid against `source`.
ParsedOutput decode(OutputFormat f, const LabelSchema& schema, std::u32string_view source,
                    std::string_view output, const DecodeOptions& opts = {});

ParsedOutput decode_inline_bracketed(const LabelSchema& schema, std::u32string_view source,
                                     std::string_view output, const DecodeOptions& opts = {});
ParsedOutput decode_inline_xml(const LabelSchema& schema, std::u32string_view source,
                               std::string_view output, const DecodeOptions& opts = {});
ParsedOutput decode_category_json(const LabelSchema& schema, std::u32string_view source,
                                  std::string_view output, const DecodeOptions& opts = {});
ParsedOutput decode_occurrence_json(const LabelSchema& schema, std::u32string_view source,
                                    std::string_view output, const DecodeOptions& opts = {});
ParsedOutput decode_offset_json(const LabelSchema& schema, std::u32string_view source,
                                std::string_view output, const DecodeOptions& opts = {});

/// Extents of the k-th (1-based) non-overlapping left-to-right occurrence
/// of `mention` in `source`, or nullopt when fewer than k exist.
std::optional<std::pair<std::size_t, std::size_t>> resolve_occurrence(std::u32string_view source,
                                                                      std::u32string_view mention,
                                                                      std::size_t k);

/// One (label, mention) pair as listed in a category-grouped JSON object,
/// in document order. Used by the string-multiset scoring mode, which
/// needs the raw pairs before positional resolution.
struct MentionItem {
  std::string label;
  std::u32string mention;
};
std::vector<MentionItem> parse_category_items(const LabelSchema& schema, std::string_view output,
                                              std::vector<Warning>& warnings,
                                              bool schema_closed = true);

namespace detail {
/// Escapes markup metacharacters ([ ] | < > \) with a backslash.
std::u32string escape_inline(std::u32string_view text);
/// Inverse of escape_inline; a backslash makes the next character literal.
std::u32string unescape_inline(std::u32string_view text);
}  // namespace detail

}  // namespace nerfmt
