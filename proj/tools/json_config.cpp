#include "json_config.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace pun::cli {

namespace {

using nlohmann::json;

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

CLI::ConfigItem make_item(std::vector<std::string> parents, const std::string& key, const json& value) {
  if (value.is_object()) throw CLI::ConversionError("config key '" + key + "' must not hold an object");
  CLI::ConfigItem item;
  item.parents = std::move(parents);
  item.name = key;
  if (value.is_array()) {
    for (const auto& v : value) item.inputs.push_back(scalar_text(v));
  } else if (!value.is_null()) {
    item.inputs.push_back(scalar_text(value));
  }
  return item;
}

bool contains(const std::vector<std::string>& list, const std::string& s) {
  return std::find(list.begin(), list.end(), s) != list.end();
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options({})) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto results = opt->results();
      j[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else if (default_also && !opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json j;
  try {
    input >> j;
  } catch (const json::exception& e) {
    throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
  std::vector<CLI::ConfigItem> items;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() && contains(sections_, key)) {
      if (key != section_) continue;
      for (const auto& [inner, v] : value.items()) items.push_back(make_item({section_}, inner, v));
    } else if (contains(global_keys_, key)) {
      items.push_back(make_item({}, key, value));
    } else {
      items.push_back(make_item({section_}, key, value));
    }
  }
  return items;
}

}  // namespace pun::cli
