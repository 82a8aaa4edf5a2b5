#include "nerfmt/error_analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "nerfmt/text.hpp"

namespace nerfmt {

std::string_view error_type_name(ErrorType t) {
  switch (t) {
    case ErrorType::OodTypes: return "ood-types";
    case ErrorType::WrongTypes: return "wrong-types";
    case ErrorType::OodMentions: return "ood-mentions";
    case ErrorType::ContainGold: return "contain-gold";
    case ErrorType::ContainedByGold: return "contained-by-gold";
    case ErrorType::OverlapWithGold: return "overlap-with-gold";
    case ErrorType::CompletelyO: return "completely-o";
    case ErrorType::OmittedMentions: return "omitted-mentions";
  }
  return "unknown";
}

std::optional<ErrorType> parse_error_type(std::string_view name) {
  for (ErrorType t : kAllErrorTypes) {
    if (error_type_name(t) == name) return t;
  }
  return std::nullopt;
}

PredClassification classify_prediction(const EntitySpan& pred, std::span<const EntitySpan> gold,
                                       const LabelSchema& schema) {
  const EntitySpan* same_extents = nullptr;
  const EntitySpan* same_label = nullptr;
  for (const auto& g : gold) {
    if (g.start != pred.start || g.end != pred.end) continue;
    if (!same_extents) same_extents = &g;
    if (!same_label && g.label == pred.label) same_label = &g;
  }
  if (same_extents) {
    if (!schema.contains(pred.label)) return {false, ErrorType::OodTypes, same_extents};
    if (same_label) return {true, ErrorType::CompletelyO, same_label};
    return {false, ErrorType::WrongTypes, same_extents};
  }

  const EntitySpan* best = nullptr;
  std::size_t best_overlap = 0;
  for (const auto& g : gold) {
    std::size_t ov = overlap_length(pred, g);
    if (ov == 0) continue;
    if (!best || ov > best_overlap ||
        (ov == best_overlap &&
         std::tie(g.start, g.end, g.label) < std::tie(best->start, best->end, best->label))) {
      best = &g;
      best_overlap = ov;
    }
  }
  if (!best) return {false, ErrorType::CompletelyO, nullptr};
  if (contains(pred, *best)) return {false, ErrorType::ContainGold, best};
  if (contains(*best, pred)) return {false, ErrorType::ContainedByGold, best};
  return {false, ErrorType::OverlapWithGold, best};
}

std::size_t ErrorSummary::total_errors() const {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  return total;
}

double ErrorSummary::fraction(ErrorType t) const {
  std::size_t total = total_errors();
  if (total == 0) return 0.0;
  return static_cast<double>(counts[static_cast<std::size_t>(t)]) / static_cast<double>(total);
}

ErrorSummary classify_corpus(const std::vector<AnnotatedSentence>& gold,
                             const std::vector<ParsedOutput>& pred, const LabelSchema& schema) {
  if (gold.size() != pred.size()) {
    throw MismatchedIdsError("gold and prediction sentence counts differ: " +
                             std::to_string(gold.size()) + " vs " + std::to_string(pred.size()));
  }
  ErrorSummary summary;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& sent = gold[i];
    const auto& golds = sent.entities;

    std::vector<EntitySpan> preds = pred[i].entities;
    std::sort(preds.begin(), preds.end(), span_less);
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());

    std::vector<char> touched(golds.size(), 0);
    for (const auto& p : preds) {
      for (std::size_t j = 0; j < golds.size(); ++j) {
        if (overlap_length(p, golds[j]) > 0) touched[j] = 1;
      }
      auto cls = classify_prediction(p, golds, schema);
      if (cls.correct) {
        ++summary.correct;
        continue;
      }
      ErrorRecord record;
      record.sentence_id = sent.id;
      record.type = cls.type;
      record.pred_label = p.label;
      record.pred_text = u32_to_utf8(sent.mention(p));
      record.pred_extents = {{p.start, p.end}};
      if (cls.gold) record.gold = *cls.gold;
      summary.records.push_back(std::move(record));
    }

    for (const auto& w : pred[i].warnings) {
      if (w.code != WarnCode::MentionNotFound) continue;
      ErrorRecord record;
      record.sentence_id = sent.id;
      record.type = ErrorType::OodMentions;
      record.pred_label = w.label;
      record.pred_text = w.fragment;
      summary.records.push_back(std::move(record));
    }

    for (std::size_t j = 0; j < golds.size(); ++j) {
      if (touched[j]) continue;
      ErrorRecord record;
      record.sentence_id = sent.id;
      record.type = ErrorType::OmittedMentions;
      record.gold = golds[j];
      summary.records.push_back(std::move(record));
    }
  }
  for (const auto& record : summary.records) {
    ++summary.counts[static_cast<std::size_t>(record.type)];
  }
  return summary;
}

nlohmann::ordered_json record_to_json(const ErrorRecord& record) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["sentence_id"] = record.sentence_id;
  j["type"] = std::string(error_type_name(record.type));
  if (record.type == ErrorType::OmittedMentions) {
    j["pred"] = nullptr;
  } else {
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    p["text"] = record.pred_text;
    p["label"] = record.pred_label;
    if (record.pred_extents) {
      p["start"] = record.pred_extents->first;
      p["end"] = record.pred_extents->second;
    }
    j["pred"] = std::move(p);
  }
  if (record.gold) {
    nlohmann::ordered_json g = nlohmann::ordered_json::object();
    g["start"] = record.gold->start;
    g["end"] = record.gold->end;
    g["label"] = record.gold->label;
    j["gold"] = std::move(g);
  } else {
    j["gold"] = nullptr;
  }
  return j;
}

nlohmann::ordered_json summary_to_json(const ErrorSummary& summary) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["total_errors"] = summary.total_errors();
  j["correct"] = summary.correct;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  nlohmann::ordered_json distribution = nlohmann::ordered_json::object();
  for (ErrorType t : kAllErrorTypes) {
    counts[std::string(error_type_name(t))] = summary.counts[static_cast<std::size_t>(t)];
    distribution[std::string(error_type_name(t))] = summary.fraction(t);
  }
  j["counts"] = std::move(counts);
  j["distribution"] = std::move(distribution);
  return j;
}

std::string summary_to_table(const ErrorSummary& summary) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-18s  %8s  %10s\n", "error type", "count", "proportion");
  out += line;
  for (ErrorType t : kAllErrorTypes) {
    std::snprintf(line, sizeof(line), "%-18s  %8zu  %10.4f\n",
                  std::string(error_type_name(t)).c_str(),
                  summary.counts[static_cast<std::size_t>(t)], summary.fraction(t));
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-18s  %8zu\n", "total", summary.total_errors());
  out += line;
  return out;
}

}  // namespace nerfmt
