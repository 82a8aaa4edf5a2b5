#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "nerfmt/core.hpp"

namespace nerfmt {

/// Token-per-line column data with BIO tags in the last column, blank
/// lines between sentences, -DOCSTART- headers skipped. Tokens are joined
/// with single spaces; offsets are computed from the join. An I- tag that
/// cannot continue the previous entity opens a new one (repair is
/// reported through `warnings` when given). Sentence ids are "0", "1", …
std::vector<AnnotatedSentence> read_conll_columns(const std::string& path,
                                                  std::vector<std::string>* warnings = nullptr);
std::vector<AnnotatedSentence> parse_conll_columns(std::string_view content,
                                                   std::vector<std::string>* warnings = nullptr);

/// JSONL, one {"id", "text", "entities": [{"start","end","label"}]} per
/// line. Invalid records raise SchemaViolationError with the line number.
std::vector<AnnotatedSentence> read_standoff_jsonl(const std::string& path);
std::vector<AnnotatedSentence> parse_standoff_jsonl(std::string_view content,
                                                    const std::string& origin = "<input>");

/// Canonical single-line records; entities in canonical span order.
std::string standoff_to_jsonl(const std::vector<AnnotatedSentence>& sents);
void write_standoff_jsonl(const std::string& path, const std::vector<AnnotatedSentence>& sents);

/// One raw model output tied to a gold sentence id.
struct PredictionRecord {
  std::string id;
  std::string output;
  std::optional<std::string> format;  // per-record format override
};

/// JSONL of {"id", "output", "format"?}.
std::vector<PredictionRecord> read_predictions_jsonl(const std::string& path);
std::vector<PredictionRecord> parse_predictions_jsonl(std::string_view content,
                                                      const std::string& origin = "<input>");

/// Per-split summary used by corpus statistics.
struct SplitStats {
  std::size_t sentences = 0;
  std::size_t entities = 0;
  std::set<std::string> labels;
  bool nested = false;  // any containment-related span pair (equal extents count)
  std::size_t same_extent_label_pairs = 0;  // equal extents, different labels
};

SplitStats split_stats(const std::vector<AnnotatedSentence>& sents);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// Order-preserving parallel map; `jobs` ≤ 1 runs inline. The first
/// exception thrown by `fn` is rethrown after all workers finish.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, Fn fn, unsigned jobs)
    -> std::vector<decltype(fn(items.front()))> {
  using Out = decltype(fn(items.front()));
  std::vector<Out> results(items.size());
  if (jobs <= 1 || items.size() <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        results[i] = fn(items[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  unsigned n = std::min<std::size_t>(jobs, items.size());
  threads.reserve(n);
  for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace nerfmt
