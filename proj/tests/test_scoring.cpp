#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "nerfmt/scoring.hpp"
#include "support/test_support.hpp"

using namespace nerfmt;

TEST_CASE("match_spans: identity, mismatch, multiset semantics") {
  std::vector<EntitySpan> gold = {{0, 5, "PER"}};
  SUBCASE("identity") {
    auto c = match_spans(gold, gold);
    CHECK(c == EvalCounts{1, 0, 0});
  }
  SUBCASE("label mismatch is not a true positive") {
    std::vector<EntitySpan> pred = {{0, 5, "LOC"}};
    auto c = match_spans(gold, pred);
    CHECK(c == EvalCounts{0, 1, 1});
  }
  SUBCASE("a duplicate of a matched prediction becomes a false positive") {
    std::vector<EntitySpan> pred = {{0, 5, "PER"}, {0, 5, "PER"}};
    auto c = match_spans(gold, pred);
    CHECK(c == EvalCounts{1, 1, 0});
  }
  SUBCASE("duplicated gold needs duplicated predictions") {
    std::vector<EntitySpan> gold2 = {{0, 5, "PER"}, {0, 5, "PER"}};
    std::vector<EntitySpan> pred = {{0, 5, "PER"}};
    auto c = match_spans(gold2, pred);
    CHECK(c == EvalCounts{1, 0, 1});
  }
}

TEST_CASE("zero-denominator conventions") {
  EvalCounts none{0, 0, 0};
  CHECK(none.precision() == 0.0);
  CHECK(none.recall() == 0.0);
  CHECK(none.f1() == 0.0);
  EvalCounts only_fn{0, 0, 3};
  CHECK(only_fn.precision() == 0.0);
  CHECK(only_fn.recall() == 0.0);
  CHECK(only_fn.f1() == 0.0);
  EvalCounts only_fp{0, 3, 0};
  CHECK(only_fp.f1() == 0.0);
}

TEST_CASE("planted counts reproduce the textbook scores") {
  // tp=80, fp=20, fn=10 spread over a hundred sentences.
  std::vector<AnnotatedSentence> gold;
  std::vector<std::vector<EntitySpan>> pred;
  std::u32string text(40, U'x');
  for (int i = 0; i < 100; ++i) {
    std::vector<EntitySpan> g, p;
    // Eight matched spans per ten sentences: put one matched span in 80
    // sentences, one spurious in 20, one missed in 10.
    if (i < 80) {
      g.push_back({0, 4, "PER"});
      p.push_back({0, 4, "PER"});
    }
    if (i < 20) p.push_back({10, 14, "LOC"});
    if (i < 10) g.push_back({20, 24, "ORG"});
    gold.push_back(AnnotatedSentence::make(std::to_string(i), text, g));
    pred.push_back(p);
  }
  auto report = score_corpus(gold, pred);
  CHECK(report.counts == EvalCounts{80, 20, 10});
  CHECK(report.precision() == doctest::Approx(0.8000).epsilon(1e-12));
  CHECK(report.recall() == doctest::Approx(80.0 / 90.0).epsilon(1e-12));
  CHECK(report.f1() == doctest::Approx(2 * 0.8 * (8.0 / 9.0) / (0.8 + 8.0 / 9.0)).epsilon(1e-12));
  CHECK(std::abs(report.f1() - 0.8421) < 5e-5);
}

TEST_CASE("two entities per sentence, one correct one spurious → 0.5 everywhere") {
  std::vector<AnnotatedSentence> gold;
  std::vector<std::vector<EntitySpan>> pred;
  std::u32string text(30, U'x');
  for (int i = 0; i < 25; ++i) {
    gold.push_back(
        AnnotatedSentence::make(std::to_string(i), text, {{0, 3, "PER"}, {5, 9, "ORG"}}));
    pred.push_back({{0, 3, "PER"}, {11, 14, "LOC"}});
  }
  auto report = score_corpus(gold, pred);
  CHECK(report.precision() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.recall() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.f1() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scorer agrees with the Kuhn matching oracle on random corpora") {
  testsup::Rng rng(401);
  auto schema = testsup::tiny_schema();
  auto labels = schema.label_ids();
  for (int corpus = 0; corpus < 300; ++corpus) {
    std::size_t n = 1 + rng.below(12);
    std::vector<AnnotatedSentence> gold;
    std::vector<std::vector<EntitySpan>> gold_raw, pred;
    std::u32string text(25, U'x');
    for (std::size_t i = 0; i < n; ++i) {
      auto g = testsup::random_spans(rng, text.size(), labels, 5);
      auto p = testsup::random_spans(rng, text.size(), labels, 5);
      // Bias toward collisions so tp is frequently nonzero.
      if (!g.empty() && rng.chance(0.7)) p.push_back(g[rng.below(g.size())]);
      gold.push_back(AnnotatedSentence::make(std::to_string(i), text, g));
      gold_raw.push_back(gold.back().entities);
      pred.push_back(p);
    }
    auto report = score_corpus(gold, pred);
    // The scorer receives deduplicated gold (sentence construction collapses
    // duplicates), so the oracle must see the same sets.
    std::vector<std::vector<EntitySpan>> pred_raw = pred;
    auto oracle = testsup::oracle_score(gold_raw, pred_raw);
    CHECK(report.counts.tp == oracle.tp);
    CHECK(report.counts.fp == oracle.fp);
    CHECK(report.counts.fn == oracle.fn);
    CHECK(std::abs(report.precision() - static_cast<double>(oracle.precision)) < 1e-12);
    CHECK(std::abs(report.recall() - static_cast<double>(oracle.recall)) < 1e-12);
    CHECK(std::abs(report.f1() - static_cast<double>(oracle.f1)) < 1e-12);
  }
}

TEST_CASE("micro counts equal the sum of per-label counts") {
  testsup::Rng rng(402);
  auto labels = testsup::tiny_schema().label_ids();
  std::u32string text(25, U'x');
  for (int corpus = 0; corpus < 200; ++corpus) {
    std::vector<AnnotatedSentence> gold;
    std::vector<std::vector<EntitySpan>> pred;
    for (std::size_t i = 0; i < 6; ++i) {
      gold.push_back(AnnotatedSentence::make(std::to_string(i), text,
                                             testsup::random_spans(rng, text.size(), labels, 4)));
      pred.push_back(testsup::random_spans(rng, text.size(), labels, 4));
    }
    auto report = score_corpus(gold, pred);
    EvalCounts sum;
    for (const auto& [label, counts] : report.per_label) sum += counts;
    CHECK(sum == report.counts);
  }
}

TEST_CASE("f1 is invariant under sentence and entity permutation") {
  testsup::Rng rng(403);
  auto labels = testsup::tiny_schema().label_ids();
  std::u32string text(25, U'x');
  std::vector<AnnotatedSentence> gold;
  std::vector<std::vector<EntitySpan>> pred;
  for (std::size_t i = 0; i < 10; ++i) {
    gold.push_back(AnnotatedSentence::make(std::to_string(i), text,
                                           testsup::random_spans(rng, text.size(), labels, 5)));
    pred.push_back(testsup::random_spans(rng, text.size(), labels, 5));
  }
  auto before = score_corpus(gold, pred);
  std::vector<std::size_t> order(gold.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<AnnotatedSentence> gold2;
  std::vector<std::vector<EntitySpan>> pred2;
  for (std::size_t i : order) {
    gold2.push_back(gold[i]);
    auto p = pred[i];
    std::shuffle(p.begin(), p.end(), rng.engine());
    pred2.push_back(p);
  }
  auto after = score_corpus(gold2, pred2);
  CHECK(before.counts == after.counts);
  CHECK(before.f1() == after.f1());
}

TEST_CASE("score_corpus rejects mismatched lengths") {
  std::vector<AnnotatedSentence> gold;
  gold.push_back(AnnotatedSentence::make("0", U"abc", {}));
  std::vector<std::vector<EntitySpan>> pred(2);
  CHECK_THROWS_AS(score_corpus(gold, pred), MismatchedIdsError);
}

TEST_CASE("match_items: position-free multiset matching") {
  std::vector<MentionItem> gold = {{"PER", U"Havel"}, {"PER", U"Havel"}, {"MISC", U"Czech"}};
  std::vector<MentionItem> pred = {{"PER", U"Havel"}, {"MISC", U"Czech"}, {"LOC", U"Havel"}};
  auto c = match_items(gold, pred);
  CHECK(c == EvalCounts{2, 1, 1});
}

TEST_CASE("report serialization: field names and label order") {
  std::vector<AnnotatedSentence> gold;
  gold.push_back(AnnotatedSentence::make("0", U"abcdef", {{0, 3, "PER"}, {3, 6, "ORG"}}));
  std::vector<std::vector<EntitySpan>> pred = {{{0, 3, "PER"}, {1, 4, "LOC"}}};
  auto report = score_corpus(gold, pred);
  auto j = report_to_json(report, {"ORG", "PER", "LOC", "MISC"});
  for (const char* key : {"precision", "recall", "f1", "tp", "fp", "fn", "per_label"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["tp"] == 1);
  CHECK(j["fp"] == 1);
  CHECK(j["fn"] == 1);
  // Requested order is respected.
  std::vector<std::string> keys;
  for (auto it = j["per_label"].begin(); it != j["per_label"].end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() == 3);  // labels actually seen
  CHECK(keys[0] == "ORG");
  CHECK(keys[1] == "PER");
  CHECK(keys[2] == "LOC");
  std::string table = report_to_table(report, {"ORG", "PER", "LOC", "MISC"});
  CHECK(table.find("ALL") != std::string::npos);
  CHECK(table.find("PER") != std::string::npos);
}
