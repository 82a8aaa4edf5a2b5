#include "nerfmt/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "nerfmt/text.hpp"

namespace nerfmt {

double EvalCounts::precision() const {
  std::size_t denom = tp + fp;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double EvalCounts::recall() const {
  std::size_t denom = tp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double EvalCounts::f1() const {
  double p = precision(), r = recall();
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

namespace {

/// Multiset matching over any key type with operator<.
template <typename Key, typename GetLabel>
void tally(const std::vector<Key>& gold, const std::vector<Key>& pred, GetLabel label_of,
           EvalReport& report) {
  std::map<Key, std::size_t> remaining;
  for (const auto& g : gold) ++remaining[g];
  for (const auto& p : pred) {
    auto it = remaining.find(p);
    EvalCounts& bucket = report.per_label[label_of(p)];
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++bucket.tp;
      ++report.counts.tp;
    } else {
      ++bucket.fp;
      ++report.counts.fp;
    }
  }
  for (const auto& [key, count] : remaining) {
    if (count == 0) continue;
    report.per_label[label_of(key)].fn += count;
    report.counts.fn += count;
  }
}

std::string label_of_span(const EntitySpan& s) { return s.label; }

}  // namespace

EvalCounts match_spans(std::span<const EntitySpan> gold, std::span<const EntitySpan> pred) {
  EvalReport r;
  tally(std::vector<EntitySpan>(gold.begin(), gold.end()),
        std::vector<EntitySpan>(pred.begin(), pred.end()), label_of_span, r);
  return r.counts;
}

namespace {
struct ItemKey {
  std::string label;
  std::u32string mention;
  auto operator<=>(const ItemKey&) const = default;
};
}  // namespace

EvalCounts match_items(std::span<const MentionItem> gold, std::span<const MentionItem> pred) {
  auto to_keys = [](std::span<const MentionItem> items) {
    std::vector<ItemKey> keys;
    keys.reserve(items.size());
    for (const auto& m : items) keys.push_back({m.label, m.mention});
    return keys;
  };
  EvalReport r;
  tally(to_keys(gold), to_keys(pred), [](const ItemKey& k) { return k.label; }, r);
  return r.counts;
}

EvalReport score_corpus(const std::vector<AnnotatedSentence>& gold,
                        const std::vector<std::vector<EntitySpan>>& pred) {
  if (gold.size() != pred.size()) {
    throw MismatchedIdsError("gold and prediction sentence counts differ: " +
                             std::to_string(gold.size()) + " vs " + std::to_string(pred.size()));
  }
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    tally(gold[i].entities, pred[i], label_of_span, report);
  }
  return report;
}

EvalReport score_corpus_items(const std::vector<std::vector<MentionItem>>& gold,
                              const std::vector<std::vector<MentionItem>>& pred) {
  if (gold.size() != pred.size()) {
    throw MismatchedIdsError("gold and prediction sentence counts differ: " +
                             std::to_string(gold.size()) + " vs " + std::to_string(pred.size()));
  }
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto to_keys = [](const std::vector<MentionItem>& items) {
      std::vector<ItemKey> keys;
      keys.reserve(items.size());
      for (const auto& m : items) keys.push_back({m.label, m.mention});
      return keys;
    };
    tally(to_keys(gold[i]), to_keys(pred[i]), [](const ItemKey& k) { return k.label; }, report);
  }
  return report;
}

namespace {

std::vector<std::string> ordered_labels(const EvalReport& report,
                                        const std::vector<std::string>& label_order) {
  std::vector<std::string> out;
  std::set<std::string> emitted;
  for (const auto& label : label_order) {
    if (report.per_label.count(label) && emitted.insert(label).second) out.push_back(label);
  }
  for (const auto& [label, counts] : report.per_label) {
    if (emitted.insert(label).second) out.push_back(label);
  }
  return out;
}

nlohmann::ordered_json counts_to_json(const EvalCounts& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["precision"] = c.precision();
  j["recall"] = c.recall();
  j["f1"] = c.f1();
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  return j;
}

}  // namespace

nlohmann::ordered_json report_to_json(const EvalReport& report,
                                      const std::vector<std::string>& label_order) {
  nlohmann::ordered_json j = counts_to_json(report.counts);
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& label : ordered_labels(report, label_order)) {
    per[label] = counts_to_json(report.per_label.at(label));
  }
  j["per_label"] = std::move(per);
  return j;
}

std::string report_to_table(const EvalReport& report, const std::vector<std::string>& label_order) {
  std::size_t width = 5;  // "label"
  auto labels = ordered_labels(report, label_order);
  for (const auto& label : labels) width = std::max(width, label.size());
  width = std::max(width, std::size_t(3));  // "ALL"

  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s  %9s  %9s  %9s  %6s  %6s  %6s\n",
                static_cast<int>(width), "label", "precision", "recall", "f1", "tp", "fp", "fn");
  out += line;
  auto emit = [&](const std::string& name, const EvalCounts& c) {
    std::snprintf(line, sizeof(line), "%-*s  %9.4f  %9.4f  %9.4f  %6zu  %6zu  %6zu\n",
                  static_cast<int>(width), name.c_str(), c.precision(), c.recall(), c.f1(), c.tp,
                  c.fp, c.fn);
    out += line;
  };
  for (const auto& label : labels) emit(label, report.per_label.at(label));
  emit("ALL", report.counts);
  return out;
}

}  // namespace nerfmt
