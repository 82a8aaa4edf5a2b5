#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nerfmt/text.hpp"

namespace nerfmt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotLaminarError : Error {
  using Error::Error;
};
struct UnknownLabelError : Error {
  using Error::Error;
};
struct UnrepresentableSpanError : Error {
  using Error::Error;
};
struct SpanBoundsError : Error {
  using Error::Error;
};
struct AlphabetTooSmallError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct EncodingError : IoError {
  using IoError::IoError;
};
struct SchemaViolationError : Error {
  using Error::Error;
};
struct MismatchedIdsError : Error {
  using Error::Error;
};

/// One labeled mention as half-open character offsets into a source sentence.
/// Offsets count Unicode scalar values.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

inline std::size_t overlap_length(const EntitySpan& a, const EntitySpan& b) {
  std::size_t lo = std::max(a.start, b.start);
  std::size_t hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

/// a covers b, allowing equal extents.
inline bool contains(const EntitySpan& a, const EntitySpan& b) {
  return a.start <= b.start && b.end <= a.end;
}

/// Canonical span order: by start, longer (outer) spans first, then label.
/// This is pre-order over a nesting forest when the family is laminar.
inline bool span_less(const EntitySpan& a, const EntitySpan& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end > b.end;
  return a.label < b.label;
}

/// Source text plus a set of entity spans (possibly nested).
/// Duplicate (start, end, label) triples are collapsed on construction;
/// spans with invalid offsets raise SpanBoundsError.
struct AnnotatedSentence {
  std::string id;
  std::u32string text;
  std::vector<EntitySpan> entities;  // canonically ordered, no duplicates

  static AnnotatedSentence make(std::string id, std::u32string text,
                                std::vector<EntitySpan> spans,
                                std::vector<std::string>* warnings = nullptr);
  static AnnotatedSentence make_utf8(std::string id, std::string_view utf8_text,
                                     std::vector<EntitySpan> spans,
                                     std::vector<std::string>* warnings = nullptr);

  std::string text_utf8() const { return u32_to_utf8(text); }
  std::u32string_view mention(const EntitySpan& s) const {
    return std::u32string_view(text).substr(s.start, s.end - s.start);
  }
  std::string mention_utf8(const EntitySpan& s) const { return u32_to_utf8(mention(s)); }
};

/// True iff every pair of spans is disjoint or one contains the other
/// (equal extents count as containment).
bool is_laminar(std::span<const EntitySpan> spans);

struct SpanNode {
  EntitySpan span;
  std::vector<SpanNode> children;
};

/// Builds the containment forest of a laminar family. Parents contain
/// children (strictly, except for equal-extent pairs, which nest in the
/// given tie-break order); siblings are ordered by start. Throws
/// NotLaminarError otherwise.
///
/// `tie_rank(label)` orders equal-extent spans: lower rank nests outside.
/// Defaults to lexicographic label order.
std::vector<SpanNode> nesting_forest(std::vector<EntitySpan> spans);
std::vector<SpanNode> nesting_forest(std::vector<EntitySpan> spans,
                                     const std::vector<std::string>& label_order);

/// Pre-order flattening; inverse of nesting_forest up to ordering.
std::vector<EntitySpan> flatten_forest(const std::vector<SpanNode>& forest);

enum class WarnCode {
  UnknownLabel,
  MentionNotFound,
  OccurrenceOutOfRange,
  InvalidOffsets,
  OffsetTextMismatch,
  ParseFailure,
  JsonRepaired,
  UnbalancedMarkup,
  MismatchedTag,
  MissingLabel,
  AlignmentFallback,
  MissingField,
  InvalidItem,
  DuplicateSpan,
  UnknownSymbol,
};

std::string_view warn_code_name(WarnCode code);

struct Warning {
  WarnCode code;
  std::string message;
  std::string fragment;  // offending raw text, when available
  std::string label;     // label tied to the warning, when known
};

/// Spans recovered from model output text plus structured parse warnings.
/// `exact` is true iff parsing consumed the whole output with zero
/// recovery actions; equivalently, warnings is empty.
struct ParsedOutput {
  std::vector<EntitySpan> entities;
  std::vector<Warning> warnings;
  bool exact = false;

  void add_warning(WarnCode code, std::string message, std::string fragment = {},
                   std::string label = {}) {
    warnings.push_back({code, std::move(message), std::move(fragment), std::move(label)});
  }
};

}  // namespace nerfmt
