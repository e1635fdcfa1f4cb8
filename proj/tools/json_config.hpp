#pragma once

#include <istream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace pun::cli {

/// CLI11 config reader for a single JSON object. Keys are long flag names
/// without the leading dashes. Plain keys apply to `section` (the active
/// subcommand) except those in `global_keys`; an object under the section's
/// name is also accepted, and objects for other subcommands are ignored.
/// Values given on the command line take precedence.
class JsonConfig : public CLI::Config {
 public:
  JsonConfig(std::string section, std::vector<std::string> global_keys, std::vector<std::string> sections)
      : section_(std::move(section)), global_keys_(std::move(global_keys)), sections_(std::move(sections)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

 private:
  std::string section_;
  std::vector<std::string> global_keys_;
  std::vector<std::string> sections_;
};

}  // namespace pun::cli
