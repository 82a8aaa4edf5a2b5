#include "nerfmt/schema.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nerfmt/core.hpp"

namespace nerfmt {

using ordered_json = nlohmann::ordered_json;

LabelSchema::LabelSchema(std::string dataset_name, std::vector<LabelInfo> labels)
    : dataset_name_(std::move(dataset_name)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].id.empty())
      throw SchemaViolationError("schema '" + dataset_name_ + "': empty label id at position " +
                                 std::to_string(i));
    if (!index_.emplace(labels_[i].id, i).second)
      throw SchemaViolationError("schema '" + dataset_name_ + "': duplicate label id '" +
                                 labels_[i].id + "'");
  }
}

LabelSchema LabelSchema::from_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolationError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dataset") || !j.contains("labels") ||
      !j["labels"].is_array())
    throw SchemaViolationError("schema must be an object with 'dataset' and 'labels' fields");
  std::vector<LabelInfo> labels;
  for (const auto& item : j["labels"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string())
      throw SchemaViolationError("schema label entries need a string 'id'");
    LabelInfo info;
    info.id = item["id"].get<std::string>();
    if (item.contains("display") && item["display"].is_string())
      info.display = item["display"].get<std::string>();
    if (item.contains("definition") && item["definition"].is_string())
      info.definition = item["definition"].get<std::string>();
    labels.push_back(std::move(info));
  }
  return LabelSchema(j["dataset"].get<std::string>(), std::move(labels));
}

LabelSchema LabelSchema::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open schema file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string LabelSchema::to_json() const {
  ordered_json j;
  j["dataset"] = dataset_name_;
  j["labels"] = ordered_json::array();
  for (const auto& l : labels_) {
    ordered_json item;
    item["id"] = l.id;
    if (!l.display.empty()) item["display"] = l.display;
    item["definition"] = l.definition;
    j["labels"].push_back(std::move(item));
  }
  return j.dump(2);
}

bool LabelSchema::contains(std::string_view id) const {
  return index_.find(std::string(id)) != index_.end();
}

std::optional<std::size_t> LabelSchema::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> LabelSchema::label_ids() const {
  std::vector<std::string> ids;
  ids.reserve(labels_.size());
  for (const auto& l : labels_) ids.push_back(l.id);
  return ids;
}

}  // namespace nerfmt
