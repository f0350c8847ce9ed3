#ifndef PPATH_IO_CONFIG_HPP
#define PPATH_IO_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ppath/rl/train.hpp"

namespace ppath::io {

// `key = value` lines; `#` starts a comment, blank lines are skipped.
// Unknown keys, duplicate keys and malformed values throw InvalidConfig.
// The parsed config is validated before it is returned.
rl::RunConfig parse_run_config(const std::string& text);
rl::RunConfig load_run_config(const std::filesystem::path& file);

std::string format_run_config(const rl::RunConfig& config);

std::vector<std::string> run_config_keys();

}  // namespace ppath::io

#endif  // PPATH_IO_CONFIG_HPP
