#pragma once

// Shared helpers for the unit and acceptance binaries: fixture paths, small
// deterministic RNG wrappers, random corpus generators, and independently
// written oracle implementations that the library code is checked against.
// Oracles here deliberately use different algorithms from src/ (exhaustive
// pairwise scans, Kuhn matching, a separate BIO automaton) so that agreement
// is evidence, not tautology.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nerfmt/codecs.hpp"
#include "nerfmt/core.hpp"
#include "nerfmt/io.hpp"
#include "nerfmt/schema.hpp"

#ifndef NERFMT_REPO_DIR
#error "NERFMT_REPO_DIR must be defined by the build"
#endif

namespace testsup {

inline std::string repo_path(const std::string& rel) {
  return std::string(NERFMT_REPO_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& rel) {
  return nerfmt::read_text_file(repo_path(rel));
}

inline nerfmt::LabelSchema load_schema(const std::string& name) {
  return nerfmt::LabelSchema::from_json_file(repo_path("data/schemas/" + name + ".json"));
}

/// Small in-code schema for property tests (definitions irrelevant there).
inline nerfmt::LabelSchema tiny_schema() {
  return nerfmt::LabelSchema(
      "Tiny", {{"ORG", "organization", "An organization."},
               {"PER", "person", "A person."},
               {"LOC", "location", "A location."},
               {"MISC", "miscellaneous", "Anything else."}});
}

// ---------------------------------------------------------------------------
// RNG

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }
  /// Uniform integer in [0, n); n must be > 0.
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
  }
  /// Uniform integer in [lo, hi] inclusive.
  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_) < p; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Generators

/// Random sentence text. Mixes plain ASCII with markup metacharacters,
/// JSON-significant characters, and multi-byte codepoints so that escaping
/// and offset arithmetic are exercised.
inline std::u32string random_text(Rng& rng, std::size_t max_len, bool with_meta = true) {
  static const std::u32string plain = U"abcdefghij XYZ019.,'";
  static const std::u32string meta = U"[]|<>\\{}\":é中\U0001F600";
  std::size_t len = rng.below(max_len + 1);
  std::u32string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (with_meta && rng.chance(0.18)) {
      out.push_back(meta[rng.below(meta.size())]);
    } else {
      out.push_back(plain[rng.below(plain.size())]);
    }
  }
  return out;
}

/// Random laminar span family: disjoint sibling intervals, strictly or
/// equal-extent nested children, depth <= max_depth, at most max_spans spans.
inline std::vector<nerfmt::EntitySpan> random_laminar(Rng& rng, std::size_t text_len,
                                                      const std::vector<std::string>& labels,
                                                      std::size_t max_spans = 8,
                                                      std::size_t max_depth = 3) {
  std::vector<nerfmt::EntitySpan> out;
  if (text_len == 0 || labels.empty()) return out;
  std::size_t budget = max_spans;
  std::function<void(std::size_t, std::size_t, std::size_t)> place =
      [&](std::size_t lo, std::size_t hi, std::size_t depth) {
        if (depth >= max_depth || budget == 0 || hi <= lo) return;
        std::size_t cursor = lo;
        std::size_t siblings = rng.below(3);  // 0..2 disjoint intervals
        for (std::size_t i = 0; i < siblings && budget > 0; ++i) {
          if (hi <= cursor) break;
          std::size_t s = cursor + rng.below(hi - cursor);
          std::size_t e = s + 1 + rng.below(hi - s);
          out.push_back({s, e, labels[rng.below(labels.size())]});
          --budget;
          // Occasionally stack an equal-extent span with another label.
          if (budget > 0 && depth + 1 < max_depth && rng.chance(0.1)) {
            out.push_back({s, e, labels[rng.below(labels.size())]});
            --budget;
          }
          place(s, e, depth + 1);
          cursor = e;
        }
      };
  place(0, text_len, 0);
  return out;
}

/// Random span set with overlaps allowed (for the offset format).
inline std::vector<nerfmt::EntitySpan> random_spans(Rng& rng, std::size_t text_len,
                                                    const std::vector<std::string>& labels,
                                                    std::size_t max_spans = 8) {
  std::vector<nerfmt::EntitySpan> out;
  if (text_len == 0 || labels.empty()) return out;
  std::size_t n = rng.below(max_spans + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = rng.below(text_len);
    std::size_t e = s + 1 + rng.below(text_len - s);
    out.push_back({s, e, labels[rng.below(labels.size())]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

/// O(n^2) pairwise laminarity check, straight from the definition.
inline bool oracle_laminar(const std::vector<nerfmt::EntitySpan>& spans) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      const auto& a = spans[i];
      const auto& b = spans[j];
      bool disjoint = a.end <= b.start || b.end <= a.start;
      bool a_in_b = b.start <= a.start && a.end <= b.end;
      bool b_in_a = a.start <= b.start && b.end <= a.end;
      if (!disjoint && !a_in_b && !b_in_a) return false;
    }
  }
  return true;
}

/// Brute-force non-overlapping left-to-right occurrence enumerator.
inline std::vector<std::pair<std::size_t, std::size_t>> oracle_occurrences(
    std::u32string_view text, std::u32string_view needle) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (needle.empty()) return out;
  std::size_t i = 0;
  while (i + needle.size() <= text.size()) {
    bool hit = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (text[i + k] != needle[k]) {
        hit = false;
        break;
      }
    }
    if (hit) {
      out.emplace_back(i, i + needle.size());
      i += needle.size();
    } else {
      ++i;
    }
  }
  return out;
}

/// Maximum bipartite matching (Kuhn's algorithm) on the equality graph
/// between gold and predicted spans: the matched cardinality is the oracle
/// true-positive count for exact multiset matching.
inline std::size_t oracle_match_tp(const std::vector<nerfmt::EntitySpan>& gold,
                                   const std::vector<nerfmt::EntitySpan>& pred) {
  std::vector<std::vector<std::size_t>> adj(pred.size());
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (pred[p] == gold[g]) adj[p].push_back(g);
    }
  }
  std::vector<long> match_of_gold(gold.size(), -1);
  std::function<bool(std::size_t, std::vector<char>&)> augment =
      [&](std::size_t p, std::vector<char>& seen) -> bool {
    for (std::size_t g : adj[p]) {
      if (seen[g]) continue;
      seen[g] = 1;
      if (match_of_gold[g] < 0 || augment(static_cast<std::size_t>(match_of_gold[g]), seen)) {
        match_of_gold[g] = static_cast<long>(p);
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    std::vector<char> seen(gold.size(), 0);
    if (augment(p, seen)) ++matched;
  }
  return matched;
}

struct OracleScore {
  long double precision = 0, recall = 0, f1 = 0;
  std::size_t tp = 0, fp = 0, fn = 0;
};

/// Micro scores over aligned sentence pairs via the Kuhn oracle and
/// long-double arithmetic.
inline OracleScore oracle_score(const std::vector<std::vector<nerfmt::EntitySpan>>& gold,
                                const std::vector<std::vector<nerfmt::EntitySpan>>& pred) {
  OracleScore s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::size_t tp = oracle_match_tp(gold[i], pred[i]);
    s.tp += tp;
    s.fp += pred[i].size() - tp;
    s.fn += gold[i].size() - tp;
  }
  if (s.tp + s.fp > 0) s.precision = static_cast<long double>(s.tp) / (s.tp + s.fp);
  if (s.tp + s.fn > 0) s.recall = static_cast<long double>(s.tp) / (s.tp + s.fn);
  if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

/// Independent BIO automaton over (token, tag) pairs. Tokens are joined with
/// single spaces; an I- tag that cannot continue the open entity starts a new
/// one. Returns spans in the order they close.
inline std::vector<nerfmt::EntitySpan> oracle_bio_spans(
    const std::vector<std::u32string>& tokens, const std::vector<std::string>& tags) {
  std::vector<std::size_t> tok_start(tokens.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    tok_start[i] = pos;
    pos += tokens[i].size() + 1;
  }
  std::vector<nerfmt::EntitySpan> out;
  bool open = false;
  std::string open_label;
  std::size_t open_first = 0, open_last = 0;
  auto close = [&] {
    if (!open) return;
    out.push_back({tok_start[open_first], tok_start[open_last] + tokens[open_last].size(),
                   open_label});
    open = false;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag.size() > 2 && tag[1] == '-' && (tag[0] == 'B' || tag[0] == 'I')) {
      std::string label = tag.substr(2);
      if (tag[0] == 'I' && open && open_label == label) {
        open_last = i;
      } else {
        close();
        open = true;
        open_label = label;
        open_first = open_last = i;
      }
    } else {
      close();
    }
  }
  close();
  return out;
}

// ---------------------------------------------------------------------------
// Representability filters for round-trip generators

/// Keeps only spans that fall on the non-overlapping occurrence grid of
/// their own mention text (the occurrence format cannot express the rest).
inline std::vector<nerfmt::EntitySpan> occurrence_representable(
    std::u32string_view text, const std::vector<nerfmt::EntitySpan>& spans) {
  std::vector<nerfmt::EntitySpan> out;
  for (const auto& sp : spans) {
    auto mention = text.substr(sp.start, sp.end - sp.start);
    auto grid = oracle_occurrences(text, mention);
    for (const auto& g : grid) {
      if (g.first == sp.start && g.second == sp.end) {
        out.push_back(sp);
        break;
      }
    }
  }
  return out;
}

/// Restricts a span family to what the category-grouped format can carry
/// losslessly: all spans sharing a mention string take one label, and the
/// occupied occurrences form a prefix of that string's occurrence grid.
inline std::vector<nerfmt::EntitySpan> category_safe(std::u32string_view text,
                                                     const std::vector<nerfmt::EntitySpan>& spans) {
  std::map<std::u32string, std::vector<nerfmt::EntitySpan>> by_mention;
  std::map<std::u32string, std::string> label_of;
  for (const auto& sp : spans) {
    std::u32string m(text.substr(sp.start, sp.end - sp.start));
    if (!label_of.count(m)) label_of[m] = sp.label;
    by_mention[m].push_back({sp.start, sp.end, label_of[m]});
  }
  std::vector<nerfmt::EntitySpan> out;
  for (auto& [mention, group] : by_mention) {
    auto grid = oracle_occurrences(text, mention);
    std::sort(group.begin(), group.end(),
              [](const auto& a, const auto& b) { return a.start < b.start; });
    group.erase(std::unique(group.begin(), group.end()), group.end());
    std::size_t next = 0;
    for (const auto& sp : group) {
      if (next < grid.size() && grid[next].first == sp.start && grid[next].second == sp.end) {
        out.push_back(sp);
        ++next;
      } else {
        break;  // not a grid prefix; drop the rest of this mention group
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fuzz helpers

inline std::string random_garbage(Rng& rng, std::size_t max_len) {
  std::size_t len = rng.below(max_len + 1);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (rng.chance(0.15)) {
      out.push_back(static_cast<char>(rng.below(256)));  // arbitrary bytes, often invalid UTF-8
    } else {
      static const std::string pool =
          "abcdef [](){}<>|\\\"':,.0123456789\nPERORGLOCtextlabelstartend";
      out.push_back(pool[rng.below(pool.size())]);
    }
  }
  return out;
}

/// Applies 1..4 random edits: insert, delete, replace, swap, truncate,
/// duplicate a slice, or splice garbage.
inline std::string mutate(Rng& rng, std::string s) {
  std::size_t edits = 1 + rng.below(4);
  for (std::size_t e = 0; e < edits; ++e) {
    if (s.empty()) {
      s = random_garbage(rng, 12);
      continue;
    }
    switch (rng.below(7)) {
      case 0:
        s.insert(rng.below(s.size() + 1), 1, static_cast<char>(rng.below(256)));
        break;
      case 1:
        s.erase(rng.below(s.size()), 1);
        break;
      case 2:
        s[rng.below(s.size())] = static_cast<char>(rng.below(256));
        break;
      case 3: {
        std::size_t i = rng.below(s.size());
        std::size_t j = rng.below(s.size());
        std::swap(s[i], s[j]);
        break;
      }
      case 4:
        s.resize(rng.below(s.size() + 1));  // truncate
        break;
      case 5: {
        std::size_t i = rng.below(s.size());
        std::size_t n = std::min<std::size_t>(1 + rng.below(8), s.size() - i);
        s.insert(rng.below(s.size() + 1), s.substr(i, n));
        break;
      }
      default:
        s.insert(rng.below(s.size() + 1), random_garbage(rng, 8));
        break;
    }
  }
  return s;
}

}  // namespace testsup
