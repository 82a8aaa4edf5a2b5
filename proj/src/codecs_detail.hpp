#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nerfmt/codecs.hpp"
#include "nerfmt/core.hpp"
#include "nerfmt/schema.hpp"

namespace nerfmt::detail {

/// Checks a recovered label against the schema. In-schema labels are
/// always admitted. Out-of-schema labels are warned about and admitted
/// only when schema closure is off.
bool admit_label(const LabelSchema& schema, const std::string& label, const DecodeOptions& opts,
                 std::vector<Warning>& warnings);

/// Canonical ordering, duplicate removal (with DuplicateSpan warnings),
/// and the exactness flag. Every decoder ends here.
void finalize(ParsedOutput& out, std::u32string_view source);

/// A parse-tree node shared by both inline decoders: either a literal
/// text run or a labeled group wrapping child nodes. A group whose label
/// could not be determined keeps its children but yields no span.
struct InlineNode {
  bool is_group = false;
  bool is_pipe = false;  // bracketed-form separator marker, only during parsing
  std::u32string text;   // text-run content (unescaped)
  bool has_label = false;
  std::u32string label;
  std::vector<InlineNode> children;
};

/// Converts a parsed inline tree into spans over `source`. When the
/// reconstructed plain text equals `source`, group boundaries are taken
/// verbatim; otherwise each mention is re-anchored by occurrence counting
/// (AlignmentFallback).
ParsedOutput resolve_inline_tree(const InlineNode& root, const LabelSchema& schema,
                                 std::u32string_view source, const DecodeOptions& opts,
                                 std::vector<Warning> parse_warnings);

}  // namespace nerfmt::detail
