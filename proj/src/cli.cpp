#include "nerfmt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "nerfmt/codecs.hpp"
#include "nerfmt/core.hpp"
#include "nerfmt/error_analysis.hpp"
#include "nerfmt/io.hpp"
#include "nerfmt/json_util.hpp"
#include "nerfmt/prompt.hpp"
#include "nerfmt/schema.hpp"
#include "nerfmt/scoring.hpp"
#include "nerfmt/text.hpp"

namespace nerfmt {

namespace {

std::vector<AnnotatedSentence> load_sentences(const std::string& path,
                                              const std::string& input_format) {
  if (input_format == "conll") return read_conll_columns(path);
  return read_standoff_jsonl(path);
}

std::vector<std::string> format_ids() {
  std::vector<std::string> ids;
  for (OutputFormat f : kAllFormats) ids.emplace_back(format_id(f));
  return ids;
}

/// Joins predictions to gold sentences by id. Returns one slot per gold
/// sentence (null when no prediction arrived). Duplicate ids, ids outside
/// the gold corpus, and unknown format overrides are data errors.
std::vector<const PredictionRecord*> join_predictions(
    const std::vector<AnnotatedSentence>& gold, const std::vector<PredictionRecord>& preds) {
  std::map<std::string_view, const PredictionRecord*> by_id;
  for (const auto& p : preds) {
    if (!by_id.emplace(p.id, &p).second) {
      throw MismatchedIdsError("duplicate prediction id: " + p.id);
    }
    if (p.format && !parse_format(*p.format)) {
      throw SchemaViolationError("unknown format override '" + *p.format + "' for id " + p.id);
    }
  }
  std::set<std::string_view> gold_ids;
  for (const auto& g : gold) gold_ids.insert(g.id);
  for (const auto& p : preds) {
    if (!gold_ids.count(p.id)) {
      throw MismatchedIdsError("prediction id not present in gold corpus: " + p.id);
    }
  }
  std::vector<const PredictionRecord*> joined;
  joined.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = by_id.find(g.id);
    joined.push_back(it == by_id.end() ? nullptr : it->second);
  }
  return joined;
}

std::vector<ParsedOutput> decode_corpus(const std::vector<AnnotatedSentence>& gold,
                                        const std::vector<const PredictionRecord*>& joined,
                                        OutputFormat fmt, const LabelSchema& schema,
                                        const DecodeOptions& opts, unsigned jobs) {
  std::vector<std::size_t> indices(gold.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  return parallel_map(
      indices,
      [&](std::size_t i) {
        const PredictionRecord* rec = joined[i];
        if (!rec) {
          ParsedOutput po;
          po.add_warning(WarnCode::MissingField, "no prediction for this sentence id", gold[i].id);
          return po;
        }
        OutputFormat f = rec->format ? *parse_format(*rec->format) : fmt;
        return decode(f, schema, gold[i].text, rec->output, opts);
      },
      jobs);
}

nlohmann::ordered_json warning_to_json(const Warning& w) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["code"] = std::string(warn_code_name(w.code));
  j["message"] = w.message;
  j["fragment"] = w.fragment;
  j["label"] = w.label;
  return j;
}

void write_body(const std::string& path, std::ostream& out, const std::string& body) {
  if (path.empty()) {
    out << body;
  } else {
    write_text_file(path, body);
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generative NER output formats: encode, decode, score, analyze"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file mirroring these flags");

  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for per-sentence processing")
      ->capture_default_str();

  std::string format_str;
  std::string schema_path;
  std::string gold_path;
  std::string pred_path;
  std::string input_path;
  std::string input_format = "jsonl";
  std::string output_path;
  std::string report_path;
  std::string offset_mode = "strict";
  bool raw_labels = false;
  bool schema_closed_errors = false;
  std::string category_scoring = "positional";
  bool table = false;
  std::string mode_str = "se";
  std::string alphabet{kDefaultAlphabet};
  std::string instruction_path;
  bool standoff_out = false;
  std::string train_path, dev_path, test_path;

  auto format_check = CLI::IsMember(format_ids());
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_str, "Output format")->required()->check(format_check);
  };
  auto add_schema = [&](CLI::App* cmd) {
    cmd->add_option("--schema", schema_path, "Label schema JSON file")->required();
  };
  auto add_input_format = [&](CLI::App* cmd) {
    cmd->add_option("--input-format", input_format, "Gold corpus format")
        ->check(CLI::IsMember({"jsonl", "conll"}))
        ->capture_default_str();
  };
  auto add_decode_opts = [&](CLI::App* cmd) {
    cmd->add_option("--offset-mode", offset_mode,
                    "Offset records whose text mismatches: strict drops, lenient re-resolves")
        ->check(CLI::IsMember({"strict", "lenient"}))
        ->capture_default_str();
  };

  CLI::App* cmd_encode = app.add_subcommand("encode", "Serialize gold sentences into a format");
  add_format(cmd_encode);
  add_schema(cmd_encode);
  cmd_encode->add_option("--input", input_path, "Gold corpus file")->required();
  add_input_format(cmd_encode);
  cmd_encode->add_option("--output", output_path, "Write JSONL here instead of stdout");

  CLI::App* cmd_decode = app.add_subcommand("decode", "Parse model outputs back into spans");
  add_format(cmd_decode);
  add_schema(cmd_decode);
  cmd_decode->add_option("--gold", gold_path, "Gold corpus file (source text and ids)")
      ->required();
  add_input_format(cmd_decode);
  cmd_decode->add_option("--pred", pred_path, "Prediction JSONL file")->required();
  cmd_decode->add_option("--output", output_path, "Write decoded JSONL here instead of stdout");
  cmd_decode->add_option("--report", report_path, "Write a JSON decode summary here");
  cmd_decode->add_flag("--raw-labels", raw_labels,
                       "Keep out-of-schema labels instead of dropping them");
  add_decode_opts(cmd_decode);

  CLI::App* cmd_score = app.add_subcommand("score", "Micro P/R/F1 of predictions against gold");
  add_format(cmd_score);
  add_schema(cmd_score);
  cmd_score->add_option("--gold", gold_path, "Gold corpus file")->required();
  add_input_format(cmd_score);
  cmd_score->add_option("--pred", pred_path, "Prediction JSONL file")->required();
  cmd_score->add_option("--report", report_path, "Also write the JSON report here");
  cmd_score->add_option("--category-scoring", category_scoring,
                        "Category-grouped scoring: positional spans or label-wise string multisets")
      ->check(CLI::IsMember({"positional", "multiset"}))
      ->capture_default_str();
  cmd_score->add_flag("--table", table, "Print the aligned text table instead of JSON");
  add_decode_opts(cmd_score);

  CLI::App* cmd_errors = app.add_subcommand("errors", "Classify prediction errors");
  add_format(cmd_errors);
  add_schema(cmd_errors);
  cmd_errors->add_option("--gold", gold_path, "Gold corpus file")->required();
  add_input_format(cmd_errors);
  cmd_errors->add_option("--pred", pred_path, "Prediction JSONL file")->required();
  cmd_errors->add_option("--output", output_path, "Write error-record JSONL here instead of stdout");
  cmd_errors->add_option("--report", report_path, "Write the JSON error summary here");
  cmd_errors->add_flag("--schema-closed", schema_closed_errors,
                       "Drop out-of-schema labels while decoding (suppresses ood-types)");
  add_decode_opts(cmd_errors);

  CLI::App* cmd_prompt = app.add_subcommand("prompt", "Emit the instruction prompt for a format");
  add_format(cmd_prompt);
  add_schema(cmd_prompt);
  cmd_prompt->add_option("--output", output_path,
                         "Write the exact prompt bytes here instead of stdout");

  CLI::App* cmd_symbolize = app.add_subcommand("symbolize", "Re-label a corpus with symbols");
  add_schema(cmd_symbolize);
  cmd_symbolize->add_option("--input", input_path, "Gold corpus file")->required();
  add_input_format(cmd_symbolize);
  cmd_symbolize->add_option("--mode", mode_str, "se = symbol with explanation, so = symbol only")
      ->check(CLI::IsMember({"se", "so"}))
      ->capture_default_str();
  cmd_symbolize->add_option("--alphabet", alphabet, "Symbols drawn in schema order")
      ->capture_default_str();
  cmd_symbolize->add_option("--output", output_path, "Write JSONL here instead of stdout");
  cmd_symbolize->add_option("--instruction-out", instruction_path,
                            "Write the transformed instruction here (otherwise diagnostics)");
  cmd_symbolize->add_flag("--standoff", standoff_out,
                          "Emit standoff JSONL instead of inline-XML renderings");

  CLI::App* cmd_stats = app.add_subcommand("stats", "Corpus statistics");
  cmd_stats->add_option("--train", train_path, "Training split file");
  cmd_stats->add_option("--dev", dev_path, "Development split file");
  cmd_stats->add_option("--test", test_path, "Test split file");
  add_input_format(cmd_stats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    DecodeOptions decode_opts;
    decode_opts.lenient_offsets = offset_mode == "lenient";

    if (cmd_encode->parsed()) {
      LabelSchema schema = LabelSchema::from_json_file(schema_path);
      OutputFormat fmt = *parse_format(format_str);
      auto sents = load_sentences(input_path, input_format);
      auto encoded = parallel_map(
          sents, [&](const AnnotatedSentence& s) { return encode(fmt, schema, s); }, jobs);
      std::string body;
      for (std::size_t i = 0; i < sents.size(); ++i) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        j["id"] = sents[i].id;
        j["output"] = encoded[i];
        body += dump_spaced(j);
        body += '\n';
      }
      write_body(output_path, out, body);
      return 0;
    }

    if (cmd_decode->parsed()) {
      LabelSchema schema = LabelSchema::from_json_file(schema_path);
      OutputFormat fmt = *parse_format(format_str);
      decode_opts.schema_closed = !raw_labels;
      auto gold = load_sentences(gold_path, input_format);
      auto preds = read_predictions_jsonl(pred_path);
      auto joined = join_predictions(gold, preds);
      auto decoded = decode_corpus(gold, joined, fmt, schema, decode_opts, jobs);

      std::string body;
      std::size_t exact_count = 0, warning_count = 0, missing = 0;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        const ParsedOutput& po = decoded[i];
        if (po.exact) ++exact_count;
        warning_count += po.warnings.size();
        if (!joined[i]) ++missing;
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        j["id"] = gold[i].id;
        nlohmann::ordered_json entities = nlohmann::ordered_json::array();
        for (const auto& e : po.entities) {
          nlohmann::ordered_json rec = nlohmann::ordered_json::object();
          rec["start"] = e.start;
          rec["end"] = e.end;
          rec["label"] = e.label;
          rec["text"] = gold[i].mention_utf8(e);
          entities.push_back(std::move(rec));
        }
        j["entities"] = std::move(entities);
        j["exact"] = po.exact;
        nlohmann::ordered_json warnings = nlohmann::ordered_json::array();
        for (const auto& w : po.warnings) warnings.push_back(warning_to_json(w));
        j["warnings"] = std::move(warnings);
        body += dump_spaced(j);
        body += '\n';
      }
      write_body(output_path, out, body);

      nlohmann::ordered_json summary = nlohmann::ordered_json::object();
      summary["sentences"] = gold.size();
      summary["exact_outputs"] = exact_count;
      summary["warnings"] = warning_count;
      summary["missing_predictions"] = missing;
      if (!report_path.empty()) write_text_file(report_path, summary.dump(2) + "\n");
      err << "decoded " << gold.size() << " sentences: " << exact_count << " exact, "
          << warning_count << " warnings, " << missing << " missing predictions\n";
      return 0;
    }

    if (cmd_score->parsed()) {
      LabelSchema schema = LabelSchema::from_json_file(schema_path);
      OutputFormat fmt = *parse_format(format_str);
      auto gold = load_sentences(gold_path, input_format);
      auto preds = read_predictions_jsonl(pred_path);
      auto joined = join_predictions(gold, preds);

      EvalReport report;
      if (category_scoring == "multiset" && fmt == OutputFormat::CategoryJson) {
        std::vector<std::vector<MentionItem>> gold_items(gold.size()), pred_items(gold.size());
        for (std::size_t i = 0; i < gold.size(); ++i) {
          for (const auto& e : gold[i].entities) {
            gold_items[i].push_back({e.label, std::u32string(gold[i].mention(e))});
          }
          if (joined[i]) {
            std::vector<Warning> warnings;
            pred_items[i] =
                parse_category_items(schema, joined[i]->output, warnings, /*schema_closed=*/true);
          }
        }
        report = score_corpus_items(gold_items, pred_items);
      } else {
        auto decoded = decode_corpus(gold, joined, fmt, schema, decode_opts, jobs);
        std::vector<std::vector<EntitySpan>> pred_spans(decoded.size());
        for (std::size_t i = 0; i < decoded.size(); ++i) pred_spans[i] = decoded[i].entities;
        report = score_corpus(gold, pred_spans);
      }
      for (const auto& id : schema.label_ids()) report.per_label[id];  // exhaustive breakdown

      if (table) {
        out << report_to_table(report, schema.label_ids());
      } else {
        out << report_to_json(report, schema.label_ids()).dump(2) << "\n";
      }
      if (!report_path.empty()) {
        write_text_file(report_path, report_to_json(report, schema.label_ids()).dump(2) + "\n");
      }
      return 0;
    }

    if (cmd_errors->parsed()) {
      LabelSchema schema = LabelSchema::from_json_file(schema_path);
      OutputFormat fmt = *parse_format(format_str);
      decode_opts.schema_closed = schema_closed_errors;
      auto gold = load_sentences(gold_path, input_format);
      auto preds = read_predictions_jsonl(pred_path);
      auto joined = join_predictions(gold, preds);
      auto decoded = decode_corpus(gold, joined, fmt, schema, decode_opts, jobs);
      ErrorSummary summary = classify_corpus(gold, decoded, schema);

      std::string body;
      for (const auto& record : summary.records) {
        body += dump_spaced(record_to_json(record));
        body += '\n';
      }
      write_body(output_path, out, body);
      err << summary_to_table(summary);
      if (!report_path.empty()) {
        write_text_file(report_path, summary_to_json(summary).dump(2) + "\n");
      }
      return 0;
    }

    if (cmd_prompt->parsed()) {
      LabelSchema schema = LabelSchema::from_json_file(schema_path);
      OutputFormat fmt = *parse_format(format_str);
      std::string prompt = build_instruction(fmt, schema);
      if (output_path.empty()) {
        out << prompt << "\n";
      } else {
        write_text_file(output_path, prompt);
      }
      return 0;
    }

    if (cmd_symbolize->parsed()) {
      LabelSchema schema = LabelSchema::from_json_file(schema_path);
      SymbolMode mode = mode_str == "so" ? SymbolMode::SO : SymbolMode::SE;
      auto sents = load_sentences(input_path, input_format);
      SymbolMapping mapping = make_symbol_mapping(schema, mode, alphabet);
      LabelSchema sym = symbol_schema(schema, mapping);
      auto sym_sents = symbolize_dataset(sents, mapping);

      std::string body;
      if (standoff_out) {
        body = standoff_to_jsonl(sym_sents);
      } else {
        auto rendered = parallel_map(
            sym_sents,
            [&](const AnnotatedSentence& s) { return encode(OutputFormat::InlineXml, sym, s); },
            jobs);
        for (std::size_t i = 0; i < sym_sents.size(); ++i) {
          nlohmann::ordered_json j = nlohmann::ordered_json::object();
          j["id"] = sym_sents[i].id;
          j["output"] = rendered[i];
          body += dump_spaced(j);
          body += '\n';
        }
      }
      write_body(output_path, out, body);

      std::string instruction = symbol_instruction(schema, mapping);
      if (instruction_path.empty()) {
        err << instruction << "\n";
      } else {
        write_text_file(instruction_path, instruction);
      }
      return 0;
    }

    if (cmd_stats->parsed()) {
      if (train_path.empty() && dev_path.empty() && test_path.empty()) {
        err << "usage error: stats needs at least one of --train/--dev/--test\n";
        return 1;
      }
      SplitStats train, dev, test;
      if (!train_path.empty()) train = split_stats(load_sentences(train_path, input_format));
      if (!dev_path.empty()) dev = split_stats(load_sentences(dev_path, input_format));
      if (!test_path.empty()) test = split_stats(load_sentences(test_path, input_format));

      std::set<std::string> labels;
      for (const auto* s : {&train, &dev, &test}) {
        labels.insert(s->labels.begin(), s->labels.end());
      }
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      j["train_sentences"] = train.sentences;
      j["dev_sentences"] = dev.sentences;
      j["test_sentences"] = test.sentences;
      j["labels"] = labels.size();
      j["entities"] = train.entities + dev.entities + test.entities;
      j["nested"] = train.nested || dev.nested || test.nested;
      j["same_extent_label_pairs"] = train.same_extent_label_pairs + dev.same_extent_label_pairs +
                                     test.same_extent_label_pairs;
      out << j.dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace nerfmt
