#ifndef PPATH_CLI_HPP
#define PPATH_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppath/error.hpp"
#include "ppath/linalg.hpp"

namespace ppath::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3, kDataError = 4 };

ExitCode exit_code_for(ErrorKind kind);

struct TrainArgs {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::vector<std::uint64_t> seeds;  // empty: the config's own seed
};

struct ChangeArgs {
  std::filesystem::path archive;
  std::filesystem::path out_dir;
  std::optional<std::string> layer;
  double top_fraction = 0.8;
  double clip_quantile = 0.99;
  std::size_t bins = 50;
};

struct SvdArgs {
  std::filesystem::path archive;
  std::filesystem::path out_dir;
  std::optional<std::string> layer;
  std::size_t periods = 3;
  std::vector<double> beta_grid;  // empty: default grid
  Index directions = 8;
};

struct ReconArgs {
  std::filesystem::path archive;
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::vector<Index> rt_grid;  // empty: default grid
  std::optional<std::size_t> episodes;
};

// Each command reports failures on `err` and returns the exit code; none throw.
int cmd_train(const TrainArgs& args, std::ostream& err);
int cmd_analyze_change(const ChangeArgs& args, std::ostream& err);
int cmd_analyze_svd(const SvdArgs& args, std::ostream& err);
int cmd_recon_check(const ReconArgs& args, std::ostream& err);

// Name used for the whole parameter vector next to the real layers.
inline constexpr const char* kAllLayers = "all";

}  // namespace ppath::cli

#endif  // PPATH_CLI_HPP
