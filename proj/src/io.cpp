#include "nerfmt/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "nerfmt/json_util.hpp"
#include "nerfmt/text.hpp"

namespace nerfmt {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failure: " + path);
}

namespace {

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t nl = content.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(content.substr(start));
      break;
    }
    std::string_view line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::vector<std::string_view> split_columns(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) cols.push_back(line.substr(start, i - start));
  }
  return cols;
}

}  // namespace

std::vector<AnnotatedSentence> parse_conll_columns(std::string_view content,
                                                   std::vector<std::string>* warnings) {
  if (!is_valid_utf8(content)) {
    throw EncodingError("column data is not valid UTF-8");
  }
  std::vector<AnnotatedSentence> sentences;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;

  auto flush = [&] {
    if (tokens.empty()) return;
    std::u32string text;
    std::vector<std::pair<std::size_t, std::size_t>> extents;  // codepoint extents per token
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) text += U' ';
      std::size_t start = text.size();
      text += utf8_to_u32(tokens[i]);
      extents.emplace_back(start, text.size());
    }

    std::vector<EntitySpan> spans;
    std::size_t open_start = 0, open_end = 0;
    std::string open_label;
    auto close_open = [&] {
      if (!open_label.empty()) {
        spans.push_back({open_start, open_end, open_label});
        open_label.clear();
      }
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::string_view tag = tags[i];
      if (tag == "O" || tag.empty()) {
        close_open();
        continue;
      }
      if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
        close_open();
        if (warnings) {
          warnings->push_back("sentence " + std::to_string(sentences.size()) +
                              ": unrecognized tag '" + std::string(tag) + "' treated as O");
        }
        continue;
      }
      std::string label(tag.substr(2));
      bool continues = tag[0] == 'I' && open_label == label;
      if (tag[0] == 'I' && !continues && warnings) {
        warnings->push_back("sentence " + std::to_string(sentences.size()) + ": I-" + label +
                            " without a preceding B-" + label + " opens a new entity");
      }
      if (continues) {
        open_end = extents[i].second;
      } else {
        close_open();
        open_label = label;
        open_start = extents[i].first;
        open_end = extents[i].second;
      }
    }
    close_open();

    sentences.push_back(
        AnnotatedSentence::make(std::to_string(sentences.size()), std::move(text), std::move(spans)));
    tokens.clear();
    tags.clear();
  };

  for (std::string_view line : split_lines(content)) {
    if (is_blank(line)) {
      flush();
      continue;
    }
    auto cols = split_columns(line);
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols.front() == "-DOCSTART-") {
      flush();
      continue;
    }
    tokens.emplace_back(cols.front());
    tags.emplace_back(cols.size() > 1 ? cols.back() : std::string_view("O"));
  }
  flush();
  return sentences;
}

std::vector<AnnotatedSentence> read_conll_columns(const std::string& path,
                                                  std::vector<std::string>* warnings) {
  return parse_conll_columns(read_text_file(path), warnings);
}

std::vector<AnnotatedSentence> parse_standoff_jsonl(std::string_view content,
                                                    const std::string& origin) {
  if (!is_valid_utf8(content)) {
    throw EncodingError(origin + ": not valid UTF-8");
  }
  std::vector<AnnotatedSentence> sentences;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(content)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto where = [&] { return origin + ":" + std::to_string(line_no) + ": "; };
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw SchemaViolationError(where() + "line is not a JSON object");
    }
    if (!j.contains("id") || !j["id"].is_string()) {
      throw SchemaViolationError(where() + "missing string field 'id'");
    }
    if (!j.contains("text") || !j["text"].is_string()) {
      throw SchemaViolationError(where() + "missing string field 'text'");
    }
    std::vector<EntitySpan> spans;
    if (j.contains("entities")) {
      if (!j["entities"].is_array()) {
        throw SchemaViolationError(where() + "'entities' is not an array");
      }
      for (const auto& e : j["entities"]) {
        if (!e.is_object() || !e.contains("start") || !e.contains("end") ||
            !e.contains("label") || !e["start"].is_number_unsigned() ||
            !e["end"].is_number_unsigned() || !e["label"].is_string()) {
          throw SchemaViolationError(where() +
                                     "entity records need numeric start/end and a string label");
        }
        spans.push_back({e["start"].get<std::size_t>(), e["end"].get<std::size_t>(),
                         e["label"].get<std::string>()});
      }
    }
    try {
      sentences.push_back(AnnotatedSentence::make_utf8(j["id"].get<std::string>(),
                                                       j["text"].get<std::string>(),
                                                       std::move(spans)));
    } catch (const Error& e) {
      throw SchemaViolationError(where() + e.what());
    }
  }
  return sentences;
}

std::vector<AnnotatedSentence> read_standoff_jsonl(const std::string& path) {
  return parse_standoff_jsonl(read_text_file(path), path);
}

std::string standoff_to_jsonl(const std::vector<AnnotatedSentence>& sents) {
  std::string out;
  for (const auto& sent : sents) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["id"] = sent.id;
    j["text"] = sent.text_utf8();
    nlohmann::ordered_json entities = nlohmann::ordered_json::array();
    for (const auto& e : sent.entities) {
      nlohmann::ordered_json rec = nlohmann::ordered_json::object();
      rec["start"] = e.start;
      rec["end"] = e.end;
      rec["label"] = e.label;
      entities.push_back(std::move(rec));
    }
    j["entities"] = std::move(entities);
    out += dump_spaced(j);
    out += '\n';
  }
  return out;
}

void write_standoff_jsonl(const std::string& path, const std::vector<AnnotatedSentence>& sents) {
  write_text_file(path, standoff_to_jsonl(sents));
}

std::vector<PredictionRecord> parse_predictions_jsonl(std::string_view content,
                                                      const std::string& origin) {
  if (!is_valid_utf8(content)) {
    throw EncodingError(origin + ": not valid UTF-8");
  }
  std::vector<PredictionRecord> records;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(content)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto where = [&] { return origin + ":" + std::to_string(line_no) + ": "; };
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw SchemaViolationError(where() + "line is not a JSON object");
    }
    if (!j.contains("id") || !j["id"].is_string()) {
      throw SchemaViolationError(where() + "missing string field 'id'");
    }
    if (!j.contains("output") || !j["output"].is_string()) {
      throw SchemaViolationError(where() + "missing string field 'output'");
    }
    PredictionRecord rec;
    rec.id = j["id"].get<std::string>();
    rec.output = j["output"].get<std::string>();
    if (j.contains("format")) {
      if (!j["format"].is_string()) {
        throw SchemaViolationError(where() + "'format' must be a string");
      }
      rec.format = j["format"].get<std::string>();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PredictionRecord> read_predictions_jsonl(const std::string& path) {
  return parse_predictions_jsonl(read_text_file(path), path);
}

SplitStats split_stats(const std::vector<AnnotatedSentence>& sents) {
  SplitStats stats;
  stats.sentences = sents.size();
  for (const auto& sent : sents) {
    stats.entities += sent.entities.size();
    for (const auto& e : sent.entities) stats.labels.insert(e.label);
    const auto& spans = sent.entities;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      for (std::size_t k = i + 1; k < spans.size(); ++k) {
        if (contains(spans[i], spans[k]) || contains(spans[k], spans[i])) {
          stats.nested = true;
          if (spans[i].start == spans[k].start && spans[i].end == spans[k].end &&
              spans[i].label != spans[k].label) {
            ++stats.same_extent_label_pairs;
          }
        }
      }
    }
  }
  return stats;
}

}  // namespace nerfmt
