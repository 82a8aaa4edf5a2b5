#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nerfmt/core.hpp"
#include "nerfmt/schema.hpp"

namespace nerfmt {

/// The eight mutually exclusive error types. Order is fixed and used for
/// array indexing and report layout.
enum class ErrorType {
  OodTypes = 0,
  WrongTypes,
  OodMentions,
  ContainGold,
  ContainedByGold,
  OverlapWithGold,
  CompletelyO,
  OmittedMentions,
};

inline constexpr std::size_t kErrorTypeCount = 8;

inline constexpr std::array<ErrorType, kErrorTypeCount> kAllErrorTypes = {
    ErrorType::OodTypes,       ErrorType::WrongTypes,      ErrorType::OodMentions,
    ErrorType::ContainGold,    ErrorType::ContainedByGold, ErrorType::OverlapWithGold,
    ErrorType::CompletelyO,    ErrorType::OmittedMentions,
};

std::string_view error_type_name(ErrorType t);
std::optional<ErrorType> parse_error_type(std::string_view name);

/// One classified error. OmittedMentions records carry a gold span and no
/// prediction; OodMentions records carry predicted text and label but no
/// extents (the mention never anchored in the source); all other types
/// carry a full predicted span, plus the gold span they were judged
/// against when one exists.
struct ErrorRecord {
  std::string sentence_id;
  ErrorType type = ErrorType::CompletelyO;
  std::string pred_label;
  std::string pred_text;
  std::optional<std::pair<std::size_t, std::size_t>> pred_extents;
  std::optional<EntitySpan> gold;
};

/// Classification of a single resolved prediction against the gold spans
/// of its sentence. `type` is meaningful only when `correct` is false;
/// `gold` points at the gold span the decision was made against (null for
/// CompletelyO).
struct PredClassification {
  bool correct = false;
  ErrorType type = ErrorType::CompletelyO;
  const EntitySpan* gold = nullptr;
};

/// Fixed-priority classification:
///   1. a gold with identical extents exists → OodTypes when the label is
///      outside the schema, Correct when it matches some such gold,
///      WrongTypes otherwise;
///   2. otherwise the overlapping gold with maximal overlap (ties: the
///      earliest gold) decides — ContainGold / ContainedByGold /
///      OverlapWithGold by strict boundary relation;
///   3. no overlap at all → CompletelyO.
PredClassification classify_prediction(const EntitySpan& pred, std::span<const EntitySpan> gold,
                                       const LabelSchema& schema);

struct ErrorSummary {
  std::vector<ErrorRecord> records;
  std::array<std::size_t, kErrorTypeCount> counts{};
  std::size_t correct = 0;  // predictions that matched exactly

  std::size_t total_errors() const;
  /// count(type) / total_errors(); all zeros when there are no errors.
  double fraction(ErrorType t) const;
};

/// Classifies every prediction of every sentence. Duplicate predicted
/// spans are collapsed first, so each unmatched prediction yields exactly
/// one record; golds no prediction overlaps become OmittedMentions;
/// MentionNotFound decoder warnings become OodMentions.
ErrorSummary classify_corpus(const std::vector<AnnotatedSentence>& gold,
                             const std::vector<ParsedOutput>& pred, const LabelSchema& schema);

nlohmann::ordered_json record_to_json(const ErrorRecord& record);
nlohmann::ordered_json summary_to_json(const ErrorSummary& summary);
/// Eight-row proportions table.
std::string summary_to_table(const ErrorSummary& summary);

}  // namespace nerfmt
