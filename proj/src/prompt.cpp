#include "nerfmt/prompt.hpp"

#include <algorithm>

#include "nerfmt/text.hpp"

namespace nerfmt {

std::string_view task_description(OutputFormat f) {
  switch (f) {
    case OutputFormat::InlineBracketed:
      return "Your task is to identify all named entities in the input sentence and rewrite the "
             "sentence by enclosing each entity using the format [Entity Text | LABEL]. Use only "
             "the label tags defined in the Label Set below.";
    case OutputFormat::InlineXml:
      return "Your task is to identify all named entities in the input sentence and rewrite the "
             "sentence by enclosing each entity using the format <LABEL>Entity Text</LABEL>. Use "
             "only the label tags defined in the Label Set below.";
    case OutputFormat::CategoryJson:
      return "Your task is to identify all named entities in the input sentence and extract them "
             "into a JSON object grouped by label. The keys of the JSON object should be the "
             "label tags defined in the Label Set below, and the values should be lists of "
             "extracted entities. If a label has no corresponding entities, use an empty list.";
    case OutputFormat::OccurrenceJson:
      return "Your task is to identify all named entities in the input sentence and extract them "
             "into a JSON list. Output a JSON list where each object contains:\n\n1. \"text\": "
             "the entity string.\n\n2. \"label\": the label tags defined in the Label Set "
             "below.\n\n3. \"occurrence_index\": a 1-based integer indicating the order of "
             "appearance of this text in the sentence (e.g., 1 for the first appearance, 2 for "
             "the second).\n\nIf no entities are found, return an empty list.";
    case OutputFormat::OffsetJson:
      return "Your task is to identify all named entities in the input sentence and extract them "
             "with precise character offsets. Output a JSON list where each object contains:\n\n"
             "1. \"text\": the entity string.\n\n2. \"label\": the label tags defined in the "
             "Label Set below.\n\n3. \"start\": the 0-based index of the entity's first "
             "character.\n\n4. \"end\": the 0-based index of the first character after the "
             "entity(exclusive).";
  }
  return "";
}

std::string label_definition_line(const LabelInfo& info) {
  std::string line = info.id;
  if (!info.display.empty()) {
    line += "(" + info.display + ")";
  }
  line += ": " + info.definition;
  return line;
}

std::string build_instruction(OutputFormat f, const LabelSchema& schema) {
  if (schema.size() == 0) {
    throw SchemaViolationError("cannot build an instruction for an empty schema");
  }
  std::string prompt(task_description(f));
  prompt += "\n\n";
  prompt += kLabelBlockHeader;
  for (const auto& info : schema.labels()) {
    prompt += "\n" + label_definition_line(info);
  }
  prompt += "\n\n";
  prompt += kInputPreamble;
  return prompt;
}

const std::string* SymbolMapping::symbol_for(std::string_view label) const {
  for (const auto& [l, s] : pairs) {
    if (l == label) return &s;
  }
  return nullptr;
}

const std::string* SymbolMapping::label_for(std::string_view symbol) const {
  for (const auto& [l, s] : pairs) {
    if (s == symbol) return &l;
  }
  return nullptr;
}

SymbolMapping make_symbol_mapping(const LabelSchema& schema, SymbolMode mode,
                                  std::string_view alphabet) {
  std::u32string symbols = utf8_to_u32(alphabet);
  if (symbols.size() < schema.size()) {
    throw AlphabetTooSmallError("alphabet of " + std::to_string(symbols.size()) +
                                " symbols cannot cover " + std::to_string(schema.size()) +
                                " labels");
  }
  SymbolMapping mapping;
  mapping.mode = mode;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    mapping.pairs.emplace_back(schema.at(i).id, u32_to_utf8(std::u32string(1, symbols[i])));
  }
  return mapping;
}

LabelSchema symbol_schema(const LabelSchema& schema, const SymbolMapping& mapping) {
  std::vector<LabelInfo> labels;
  labels.reserve(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const LabelInfo& info = schema.at(i);
    const std::string* symbol = mapping.symbol_for(info.id);
    if (!symbol) {
      throw UnknownLabelError("label '" + info.id + "' has no symbol in the mapping");
    }
    labels.push_back({*symbol, "", info.definition});
  }
  std::string suffix = mapping.mode == SymbolMode::SE ? "-SE" : "-SO";
  return LabelSchema(schema.dataset_name() + suffix, std::move(labels));
}

AnnotatedSentence symbolize_sentence(const AnnotatedSentence& sent, const SymbolMapping& mapping) {
  AnnotatedSentence out = sent;
  for (auto& e : out.entities) {
    const std::string* symbol = mapping.symbol_for(e.label);
    if (!symbol) {
      throw UnknownLabelError("label '" + e.label + "' has no symbol in the mapping");
    }
    e.label = *symbol;
  }
  return out;
}

std::vector<AnnotatedSentence> symbolize_dataset(const std::vector<AnnotatedSentence>& sents,
                                                 const SymbolMapping& mapping) {
  std::vector<AnnotatedSentence> out;
  out.reserve(sents.size());
  for (const auto& sent : sents) out.push_back(symbolize_sentence(sent, mapping));
  return out;
}

namespace {

std::string list_phrase(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.size() == 1) return "label " + pairs[0].second;
  std::string out = "labels ";
  if (pairs.size() == 2) return out + pairs[0].second + " and " + pairs[1].second;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i + 1 == pairs.size()) {
      out += "and " + pairs[i].second;
    } else {
      out += pairs[i].second + ", ";
    }
  }
  return out;
}

}  // namespace

std::string symbol_instruction(const LabelSchema& schema, const SymbolMapping& mapping) {
  std::string text =
      "Your task is to do sequence labeling with " + list_phrase(mapping.pairs) + ".";
  if (mapping.mode == SymbolMode::SO) return text;
  for (const auto& [label, symbol] : mapping.pairs) {
    auto index = schema.index_of(label);
    if (!index) {
      throw UnknownLabelError("mapped label '" + label + "' is not in the schema");
    }
    text += "\n" + symbol + ": " + schema.at(*index).definition;
  }
  return text;
}

ParsedOutput desymbolize(const ParsedOutput& parsed, const SymbolMapping& mapping) {
  ParsedOutput out;
  out.warnings = parsed.warnings;
  for (const auto& e : parsed.entities) {
    const std::string* label = mapping.label_for(e.label);
    if (!label) {
      out.add_warning(WarnCode::UnknownSymbol, "symbol has no mapped label", e.label, e.label);
      continue;
    }
    out.entities.push_back({e.start, e.end, *label});
  }
  std::sort(out.entities.begin(), out.entities.end(), span_less);
  out.exact = parsed.exact && out.warnings.empty();
  return out;
}

AnnotatedSentence desymbolize_sentence(const AnnotatedSentence& sent,
                                       const SymbolMapping& mapping) {
  AnnotatedSentence out = sent;
  for (auto& e : out.entities) {
    const std::string* label = mapping.label_for(e.label);
    if (!label) {
      throw UnknownLabelError("symbol '" + e.label + "' has no mapped label");
    }
    e.label = *label;
  }
  std::sort(out.entities.begin(), out.entities.end(), span_less);
  return out;
}

}  // namespace nerfmt
