#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nerfmt {

struct LabelInfo {
  std::string id;          // short tag string, e.g. "ORG", "Protein"
  std::string display;     // optional display name, e.g. "organization"
  std::string definition;  // prose definition shown in instructions
};

/// Ordered label set for one dataset. Label ids are unique and non-empty;
/// the order is fixed and drives every serialization that lists labels.
class LabelSchema {
 public:
  LabelSchema(std::string dataset_name, std::vector<LabelInfo> labels);

  static LabelSchema from_json(const std::string& json_text);
  static LabelSchema from_json_file(const std::string& path);
  std::string to_json() const;

  const std::string& dataset_name() const { return dataset_name_; }
  const std::vector<LabelInfo>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  bool contains(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;
  const LabelInfo& at(std::size_t i) const { return labels_[i]; }

  std::vector<std::string> label_ids() const;

 private:
  std::string dataset_name_;
  std::vector<LabelInfo> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace nerfmt
