#include "nerfmt/core.hpp"

#include <algorithm>
#include <unordered_map>

namespace nerfmt {

AnnotatedSentence AnnotatedSentence::make(std::string id, std::u32string text,
                                          std::vector<EntitySpan> spans,
                                          std::vector<std::string>* warnings) {
  for (const auto& s : spans) {
    if (s.start >= s.end || s.end > text.size()) {
      throw SpanBoundsError("sentence '" + id + "': span [" + std::to_string(s.start) + ", " +
                            std::to_string(s.end) + ") with label '" + s.label +
                            "' is out of bounds for text of length " +
                            std::to_string(text.size()));
    }
  }
  std::sort(spans.begin(), spans.end(), span_less);
  auto dup = std::unique(spans.begin(), spans.end());
  if (dup != spans.end()) {
    if (warnings) {
      for (auto it = dup; it != spans.end(); ++it) {
        warnings->push_back("sentence '" + id + "': duplicate span [" +
                            std::to_string(it->start) + ", " + std::to_string(it->end) + ") '" +
                            it->label + "' collapsed");
      }
    }
    spans.erase(dup, spans.end());
  }
  return AnnotatedSentence{std::move(id), std::move(text), std::move(spans)};
}

AnnotatedSentence AnnotatedSentence::make_utf8(std::string id, std::string_view utf8_text,
                                               std::vector<EntitySpan> spans,
                                               std::vector<std::string>* warnings) {
  return make(std::move(id), utf8_to_u32(utf8_text), std::move(spans), warnings);
}

bool is_laminar(std::span<const EntitySpan> spans) {
  std::vector<EntitySpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(), span_less);
  // Stack of currently open extents; each new span must either start after
  // the top closes or be contained in it.
  std::vector<const EntitySpan*> open;
  for (const auto& s : sorted) {
    while (!open.empty() && open.back()->end <= s.start) open.pop_back();
    if (!open.empty() && s.end > open.back()->end) return false;
    open.push_back(&s);
  }
  return true;
}

namespace {

std::vector<SpanNode> build_forest(std::vector<EntitySpan> spans,
                                   const std::unordered_map<std::string, std::size_t>* rank) {
  auto less = [&](const EntitySpan& a, const EntitySpan& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    if (rank) {
      auto ra = rank->find(a.label);
      auto rb = rank->find(b.label);
      std::size_t ia = ra == rank->end() ? rank->size() : ra->second;
      std::size_t ib = rb == rank->end() ? rank->size() : rb->second;
      if (ia != ib) return ia < ib;
    }
    return a.label < b.label;
  };
  std::sort(spans.begin(), spans.end(), less);

  std::vector<SpanNode> roots;
  // Open path from a root to the innermost open node.
  std::vector<SpanNode*> path;
  for (auto& s : spans) {
    while (!path.empty() && path.back()->span.end <= s.start) path.pop_back();
    if (!path.empty() && !contains(path.back()->span, s))
      throw NotLaminarError("spans [" + std::to_string(path.back()->span.start) + ", " +
                            std::to_string(path.back()->span.end) + ") and [" +
                            std::to_string(s.start) + ", " + std::to_string(s.end) +
                            ") partially overlap");
    std::vector<SpanNode>& siblings = path.empty() ? roots : path.back()->children;
    siblings.push_back(SpanNode{std::move(s), {}});
    path.push_back(&siblings.back());
  }
  return roots;
}

void flatten_into(const std::vector<SpanNode>& forest, std::vector<EntitySpan>& out) {
  for (const auto& node : forest) {
    out.push_back(node.span);
    flatten_into(node.children, out);
  }
}

}  // namespace

std::vector<SpanNode> nesting_forest(std::vector<EntitySpan> spans) {
  return build_forest(std::move(spans), nullptr);
}

std::vector<SpanNode> nesting_forest(std::vector<EntitySpan> spans,
                                     const std::vector<std::string>& label_order) {
  std::unordered_map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < label_order.size(); ++i) rank.emplace(label_order[i], i);
  return build_forest(std::move(spans), &rank);
}

std::vector<EntitySpan> flatten_forest(const std::vector<SpanNode>& forest) {
  std::vector<EntitySpan> out;
  flatten_into(forest, out);
  return out;
}

std::string_view warn_code_name(WarnCode code) {
  switch (code) {
    case WarnCode::UnknownLabel: return "UnknownLabel";
    case WarnCode::MentionNotFound: return "MentionNotFound";
    case WarnCode::OccurrenceOutOfRange: return "OccurrenceOutOfRange";
    case WarnCode::InvalidOffsets: return "InvalidOffsets";
    case WarnCode::OffsetTextMismatch: return "OffsetTextMismatch";
    case WarnCode::ParseFailure: return "ParseFailure";
    case WarnCode::JsonRepaired: return "JsonRepaired";
    case WarnCode::UnbalancedMarkup: return "UnbalancedMarkup";
    case WarnCode::MismatchedTag: return "MismatchedTag";
    case WarnCode::MissingLabel: return "MissingLabel";
    case WarnCode::AlignmentFallback: return "AlignmentFallback";
    case WarnCode::MissingField: return "MissingField";
    case WarnCode::InvalidItem: return "InvalidItem";
    case WarnCode::DuplicateSpan: return "DuplicateSpan";
    case WarnCode::UnknownSymbol: return "UnknownSymbol";
  }
  return "Unknown";
}

}  // namespace nerfmt
