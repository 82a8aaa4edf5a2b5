#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nerfmt/codecs.hpp"
#include "nerfmt/core.hpp"
#include "nerfmt/schema.hpp"

namespace nerfmt {

/// The fixed task description shown to the model for a format.
std::string_view task_description(OutputFormat f);

inline constexpr std::string_view kLabelBlockHeader = "Label Set:";
inline constexpr std::string_view kInputPreamble = "Now process the input sentence:";

/// "ID(display): definition", or "ID: definition" without a display name.
std::string label_definition_line(const LabelInfo& info);

/// Three-part instruction: task description, label definition block,
/// input preamble. Deterministic; throws SchemaViolationError on an
/// empty schema.
std::string build_instruction(OutputFormat f, const LabelSchema& schema);

enum class SymbolMode { SE, SO };  // symbol with explanation / symbol only

inline constexpr std::string_view kDefaultAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Bijection label_id -> one-character symbol, drawn from the alphabet in
/// schema order.
struct SymbolMapping {
  SymbolMode mode = SymbolMode::SE;
  std::vector<std::pair<std::string, std::string>> pairs;  // (label, symbol), schema order

  const std::string* symbol_for(std::string_view label) const;
  const std::string* label_for(std::string_view symbol) const;
};

/// Throws AlphabetTooSmallError when the alphabet cannot cover the schema.
SymbolMapping make_symbol_mapping(const LabelSchema& schema, SymbolMode mode,
                                  std::string_view alphabet = kDefaultAlphabet);

/// The schema re-labeled with symbols (definitions kept, display names
/// dropped); dataset name gains a -SE / -SO suffix.
LabelSchema symbol_schema(const LabelSchema& schema, const SymbolMapping& mapping);

/// Label strings substituted; spans untouched.
AnnotatedSentence symbolize_sentence(const AnnotatedSentence& sent, const SymbolMapping& mapping);
std::vector<AnnotatedSentence> symbolize_dataset(const std::vector<AnnotatedSentence>& sents,
                                                 const SymbolMapping& mapping);

/// "Your task is to do sequence labeling with labels A, B, C, and D."
/// plus, in SE mode, one "A: <original definition>" line per symbol.
std::string symbol_instruction(const LabelSchema& schema, const SymbolMapping& mapping);

/// Inverse label substitution on parsed output. Spans with labels outside
/// the symbol range are dropped with an UnknownSymbol warning.
ParsedOutput desymbolize(const ParsedOutput& parsed, const SymbolMapping& mapping);

/// Inverse label substitution on gold-style sentences (strict: throws
/// UnknownLabelError on a label outside the symbol range).
AnnotatedSentence desymbolize_sentence(const AnnotatedSentence& sent, const SymbolMapping& mapping);

}  // namespace nerfmt
