#include <algorithm>
#include <utility>

#include "codecs_detail.hpp"
#include "nerfmt/codecs.hpp"
#include "nerfmt/text.hpp"

namespace nerfmt {

namespace detail {

namespace {

void append_text(InlineNode& group, std::u32string& buf) {
  if (buf.empty()) return;
  InlineNode node;
  node.text = std::move(buf);
  buf.clear();
  group.children.push_back(std::move(node));
}

std::u32string flat_text(const InlineNode& node) {
  if (!node.is_group) return node.text;
  std::u32string out;
  for (const auto& child : node.children) out += flat_text(child);
  return out;
}

bool is_space(char32_t c) { return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r'; }

std::u32string trim(std::u32string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::u32string(s.substr(b, e - b));
}

/// Splits a just-closed bracketed group at its last top-level separator:
/// children before it form the mention (one padding space removed),
/// the text after it is the label (whitespace-trimmed).
void split_bracketed_group(InlineNode& node, std::vector<Warning>& warnings) {
  std::size_t pipe = node.children.size();
  for (std::size_t i = node.children.size(); i-- > 0;) {
    if (node.children[i].is_pipe) {
      pipe = i;
      break;
    }
  }
  if (pipe == node.children.size()) {
    warnings.push_back({WarnCode::MissingLabel, "bracketed group has no label separator",
                        u32_to_utf8(flat_text(node)), ""});
    return;
  }
  std::u32string label_text;
  bool label_has_markup = false;
  for (std::size_t i = pipe + 1; i < node.children.size(); ++i) {
    const auto& child = node.children[i];
    if (child.is_pipe) continue;  // unreachable: pipe is the last separator
    if (child.is_group) label_has_markup = true;
    label_text += flat_text(child);
  }
  if (label_has_markup) {
    warnings.push_back({WarnCode::UnbalancedMarkup, "markup in label position flattened",
                        u32_to_utf8(label_text), ""});
  }
  node.children.resize(pipe);
  for (auto& child : node.children) {
    if (child.is_pipe) {  // earlier separators belong to the mention text
      child.is_pipe = false;
      child.text = U"|";
    }
  }
  if (!node.children.empty() && !node.children.back().is_group) {
    auto& text = node.children.back().text;
    if (!text.empty() && text.back() == U' ') text.pop_back();
    if (text.empty()) node.children.pop_back();
  }
  std::u32string label = trim(label_text);
  if (label.empty()) {
    warnings.push_back({WarnCode::MissingLabel, "bracketed group has empty label",
                        u32_to_utf8(flat_text(node)), ""});
    return;
  }
  node.has_label = true;
  node.label = std::move(label);
}

constexpr bool is_tag_char(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z') || (c >= U'0' && c <= U'9') ||
         c == U'_' || c == U'.' || c == U'-';
}

struct TagToken {
  bool closing = false;
  std::u32string name;
  std::size_t next = 0;  // scan position after the tag
};

/// Parses <NAME> or </NAME> at position i; nullopt if the text there is
/// not a well-formed tag.
std::optional<TagToken> parse_tag(std::u32string_view s, std::size_t i) {
  TagToken tok;
  std::size_t j = i + 1;
  if (j < s.size() && s[j] == U'/') {
    tok.closing = true;
    ++j;
  }
  std::size_t name_start = j;
  while (j < s.size() && is_tag_char(s[j])) ++j;
  if (j == name_start || j >= s.size() || s[j] != U'>') return std::nullopt;
  tok.name = std::u32string(s.substr(name_start, j - name_start));
  tok.next = j + 1;
  return tok;
}

struct StrippedView {
  std::u32string text;
  struct Cand {
    std::size_t start = 0;
    std::size_t end = 0;
    std::u32string label;
  };
  std::vector<Cand> cands;
};

void strip_tree(const InlineNode& node, StrippedView& view) {
  for (const auto& child : node.children) {
    if (!child.is_group) {
      view.text += child.text;
      continue;
    }
    std::size_t start = view.text.size();
    strip_tree(child, view);
    if (child.has_label) {
      view.cands.push_back({start, view.text.size(), child.label});
    }
  }
}

}  // namespace

ParsedOutput resolve_inline_tree(const InlineNode& root, const LabelSchema& schema,
                                 std::u32string_view source, const DecodeOptions& opts,
                                 std::vector<Warning> parse_warnings) {
  ParsedOutput out;
  out.warnings = std::move(parse_warnings);

  StrippedView view;
  strip_tree(root, view);

  struct Admitted {
    std::size_t start, end;
    std::string label;
  };
  std::vector<Admitted> admitted;
  for (const auto& cand : view.cands) {
    std::string label = u32_to_utf8(cand.label);
    std::string mention = u32_to_utf8(
        std::u32string_view(view.text).substr(cand.start, cand.end - cand.start));
    if (cand.start == cand.end) {
      out.add_warning(WarnCode::InvalidItem, "empty mention", mention, label);
      continue;
    }
    if (!admit_label(schema, label, opts, out.warnings)) continue;
    admitted.push_back({cand.start, cand.end, std::move(label)});
  }

  if (view.text == source) {
    for (auto& a : admitted) out.entities.push_back({a.start, a.end, std::move(a.label)});
  } else {
    out.add_warning(WarnCode::AlignmentFallback,
                    "reconstructed text differs from source; re-anchoring mentions by occurrence",
                    u32_to_utf8(view.text), "");
    for (auto& a : admitted) {
      std::u32string_view mention =
          std::u32string_view(view.text).substr(a.start, a.end - a.start);
      auto occs = occurrences(view.text, mention);
      std::size_t k = 1;
      for (const auto& occ : occs) {
        if (occ.second <= a.start) ++k;
      }
      if (auto extents = resolve_occurrence(source, mention, k)) {
        out.entities.push_back({extents->first, extents->second, std::move(a.label)});
      } else {
        out.add_warning(WarnCode::MentionNotFound, "mention not anchorable in source",
                        u32_to_utf8(mention), a.label);
      }
    }
  }

  finalize(out, source);
  return out;
}

}  // namespace detail

ParsedOutput decode_inline_bracketed(const LabelSchema& schema, std::u32string_view source,
                                     std::string_view output, const DecodeOptions& opts) {
  std::u32string text = utf8_to_u32(output);
  std::vector<Warning> warnings;

  std::vector<detail::InlineNode> stack(1);
  stack.front().is_group = true;
  std::u32string buf;

  auto close_top = [&] {
    detail::append_text(stack.back(), buf);
    detail::InlineNode node = std::move(stack.back());
    stack.pop_back();
    detail::split_bracketed_group(node, warnings);
    stack.back().children.push_back(std::move(node));
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char32_t c = text[i];
    if (c == U'\\') {
      if (i + 1 < text.size()) {
        buf.push_back(text[++i]);
      } else {
        buf.push_back(U'\\');
      }
    } else if (c == U'[') {
      detail::append_text(stack.back(), buf);
      detail::InlineNode group;
      group.is_group = true;
      stack.push_back(std::move(group));
    } else if (c == U']') {
      if (stack.size() > 1) {
        close_top();
      } else {
        warnings.push_back({WarnCode::UnbalancedMarkup, "stray ']' kept as text", "]", ""});
        buf.push_back(c);
      }
    } else if (c == U'|') {
      if (stack.size() > 1) {
        detail::append_text(stack.back(), buf);
        detail::InlineNode pipe;
        pipe.is_pipe = true;
        stack.back().children.push_back(std::move(pipe));
      } else {
        buf.push_back(c);
      }
    } else {
      buf.push_back(c);
    }
  }
  detail::append_text(stack.back(), buf);
  while (stack.size() > 1) {
    warnings.push_back({WarnCode::UnbalancedMarkup, "unclosed '[' auto-closed at end of output",
                        u32_to_utf8(detail::flat_text(stack.back())), ""});
    close_top();
  }

  return detail::resolve_inline_tree(stack.front(), schema, source, opts, std::move(warnings));
}

ParsedOutput decode_inline_xml(const LabelSchema& schema, std::u32string_view source,
                               std::string_view output, const DecodeOptions& opts) {
  std::u32string text = utf8_to_u32(output);
  std::vector<Warning> warnings;

  std::vector<detail::InlineNode> stack(1);
  stack.front().is_group = true;
  std::u32string buf;

  auto close_top = [&] {
    detail::append_text(stack.back(), buf);
    detail::InlineNode node = std::move(stack.back());
    stack.pop_back();
    stack.back().children.push_back(std::move(node));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char32_t c = text[i];
    if (c == U'\\' && i + 1 < text.size()) {
      buf.push_back(text[i + 1]);
      i += 2;
      continue;
    }
    if (c == U'<') {
      if (auto tag = detail::parse_tag(text, i)) {
        if (!tag->closing) {
          detail::append_text(stack.back(), buf);
          detail::InlineNode group;
          group.is_group = true;
          group.has_label = true;
          group.label = tag->name;
          stack.push_back(std::move(group));
        } else {
          std::size_t match = stack.size();
          for (std::size_t d = stack.size(); d-- > 1;) {
            if (stack[d].label == tag->name) {
              match = d;
              break;
            }
          }
          if (match == stack.size()) {
            warnings.push_back({WarnCode::MismatchedTag, "closing tag without matching opener",
                                u32_to_utf8(U"</" + tag->name + U">"), u32_to_utf8(tag->name)});
          } else {
            detail::append_text(stack.back(), buf);
            while (stack.size() - 1 > match) {
              warnings.push_back({WarnCode::MismatchedTag,
                                  "open tag closed implicitly by outer closing tag",
                                  u32_to_utf8(stack.back().label),
                                  u32_to_utf8(stack.back().label)});
              close_top();
            }
            close_top();
          }
        }
        i = tag->next;
        continue;
      }
    }
    buf.push_back(c);
    ++i;
  }
  detail::append_text(stack.back(), buf);
  while (stack.size() > 1) {
    warnings.push_back({WarnCode::UnbalancedMarkup, "open tag auto-closed at end of output",
                        u32_to_utf8(stack.back().label), u32_to_utf8(stack.back().label)});
    close_top();
  }

  return detail::resolve_inline_tree(stack.front(), schema, source, opts, std::move(warnings));
}

}  // namespace nerfmt
