#pragma once

#include <json.hpp>

#include <map>
#include <span>
#include <string>
#include <vector>

#include "nerfmt/codecs.hpp"
#include "nerfmt/core.hpp"

namespace nerfmt {

struct EvalCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;  // tp / (tp + fp); 0 when the denominator is 0
  double recall() const;     // tp / (tp + fn); 0 when the denominator is 0
  double f1() const;         // harmonic mean; 0 when p + r == 0

  EvalCounts& operator+=(const EvalCounts& other);
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

struct EvalReport {
  EvalCounts counts;                            // micro counts over the corpus
  std::map<std::string, EvalCounts> per_label;  // exhaustive over labels seen

  double precision() const { return counts.precision(); }
  double recall() const { return counts.recall(); }
  double f1() const { return counts.f1(); }
};

/// Exact multiset matching on (start, end, label).
EvalCounts match_spans(std::span<const EntitySpan> gold, std::span<const EntitySpan> pred);

/// Exact multiset matching on (label, mention string): the position-free
/// scoring mode for the category-grouped format.
EvalCounts match_items(std::span<const MentionItem> gold, std::span<const MentionItem> pred);

/// Micro-averaged scores over aligned gold/prediction sentence pairs.
/// Throws MismatchedIdsError when the two sequences differ in length.
EvalReport score_corpus(const std::vector<AnnotatedSentence>& gold,
                        const std::vector<std::vector<EntitySpan>>& pred);

/// Position-free variant over per-sentence (label, mention) multisets.
EvalReport score_corpus_items(const std::vector<std::vector<MentionItem>>& gold,
                              const std::vector<std::vector<MentionItem>>& pred);

/// {"precision": .., "recall": .., "f1": .., "tp": .., "fp": .., "fn": ..,
///  "per_label": {label: {..same six..}}}. `label_order` fixes the
/// per_label key order; labels not listed follow lexicographically.
nlohmann::ordered_json report_to_json(const EvalReport& report,
                                      const std::vector<std::string>& label_order = {});

/// Aligned plain-text table, one row per label plus an ALL row.
std::string report_to_table(const EvalReport& report,
                            const std::vector<std::string>& label_order = {});

}  // namespace nerfmt
