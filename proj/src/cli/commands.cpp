#include "ppath/cli.hpp"

#include <ostream>

#include "ppath/io/archive.hpp"
#include "ppath/io/config.hpp"
#include "ppath/io/csv.hpp"
#include "ppath/path_metrics.hpp"
#include "ppath/rl/train.hpp"
#include "ppath/svd_analysis.hpp"

namespace ppath::cli {

namespace fs = std::filesystem;
using io::CsvWriter;

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidRank:
    case ErrorKind::UnknownLayer:
      return kConfigError;
    case ErrorKind::Io:
      return kIoError;
    default:
      return kDataError;
  }
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
}

std::vector<std::string> layer_names(const ParameterPath& path, const std::optional<std::string>& only) {
  if (only) {
    if (*only != kAllLayers) path.layer(*only);  // throws UnknownLayer
    return {*only};
  }
  std::vector<std::string> names;
  for (const auto& seg : path.layers) names.push_back(seg.name);
  if (path.layers.size() != 1) names.push_back(kAllLayers);
  return names;
}

ParameterPath select(const ParameterPath& path, const std::string& name) {
  return name == kAllLayers ? path : slice_layer(path, name);
}

void write_eval(const fs::path& file, const rl::EvalReport& report) {
  CsvWriter csv(file, {"step", "avg_return"});
  for (const auto& c : report.checkpoints) {
    csv.cell(static_cast<unsigned long long>(c.step)).cell(c.avg_return);
    csv.end_row();
  }
}

void write_histogram(const fs::path& dir, const std::string& stem, const std::vector<double>& values, std::size_t bins) {
  const Histogram h = histogram(values, bins);
  CsvWriter counts(dir / (stem + "_hist.csv"), {"bin_left", "bin_right", "count"});
  CsvWriter cdf(dir / (stem + "_cdf.csv"), {"bin_right", "cumulative_fraction"});
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    counts.cell(h.edges[b]).cell(h.edges[b + 1]).cell(static_cast<unsigned long long>(h.counts[b]));
    counts.end_row();
    cdf.cell(h.edges[b + 1]).cell(h.cumulative_fractions[b]);
    cdf.end_row();
  }
}

}  // namespace

int cmd_train(const TrainArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const rl::RunConfig config = io::load_run_config(args.config);
    ensure_dir(args.out_dir);
    const std::vector<std::uint64_t> seeds = args.seeds.empty() ? std::vector<std::uint64_t>{config.seed} : args.seeds;
    const bool single = args.seeds.empty();

    CsvWriter summary(args.out_dir / "summary.csv", {"seed", "score", "auc", "random_return", "transforms"});
    std::vector<double> scores, aucs;
    for (std::uint64_t seed : seeds) {
      rl::RunConfig run = config;
      run.seed = seed;
      const rl::TrainResult result = rl::train(run);
      const fs::path dir = single ? args.out_dir : args.out_dir / ("seed_" + std::to_string(seed));
      ensure_dir(dir);
      io::write_archive(dir / "path.ppath", result.path);
      write_eval(dir / "eval.csv", result.report);
      summary.cell(std::to_string(seed)).cell(result.report.score).cell(result.report.auc).cell(result.random_return);
      summary.cell(static_cast<unsigned long long>(result.transforms));
      summary.end_row();
      scores.push_back(result.report.score);
      aucs.push_back(result.report.auc);
    }
    if (!single) {
      const rl::MeanStd s = rl::mean_std(scores), a = rl::mean_std(aucs);
      summary.cell(std::string("mean")).cell(s.mean).cell(a.mean).empty().empty();
      summary.end_row();
      summary.cell(std::string("std")).cell(s.std).cell(a.std).empty().empty();
      summary.end_row();
    }
  });
}

int cmd_analyze_change(const ChangeArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    if (!(args.top_fraction > 0.0 && args.top_fraction <= 1.0)) {
      throw Error(ErrorKind::InvalidConfig, "--top-fraction must lie in (0, 1]");
    }
    if (!(args.clip_quantile > 0.0 && args.clip_quantile <= 1.0)) {
      throw Error(ErrorKind::InvalidConfig, "--clip-quantile must lie in (0, 1]");
    }
    if (args.bins < 1) throw Error(ErrorKind::InvalidConfig, "--bins must be >= 1");
    const ParameterPath path = io::read_archive(args.archive);
    const auto names = layer_names(path, args.layer);
    ensure_dir(args.out_dir);

    for (const auto& name : names) {
      const ParameterPath part = select(path, name);
      const Vec apc = accumulated_change(part);
      const OptionalVec pud = detour_ratio(part);
      const std::vector<double> by(apc.data(), apc.data() + apc.size());

      std::vector<double> apc_kept, pud_kept;
      for (std::size_t i : top_fraction_indices(by, args.top_fraction)) {
        apc_kept.push_back(by[i]);
        if (pud[i]) pud_kept.push_back(*pud[i]);
      }
      write_histogram(args.out_dir, name + "_apc", clip_extremes(apc_kept, args.clip_quantile), args.bins);
      if (pud_kept.empty()) {
        err << "warning: " << name << ": no parameter has a nonzero final change, pud panels skipped\n";
        continue;
      }
      write_histogram(args.out_dir, name + "_pud", clip_extremes(pud_kept, args.clip_quantile), args.bins);
    }
  });
}

int cmd_analyze_svd(const SvdArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    if (args.periods < 1) throw Error(ErrorKind::InvalidConfig, "--periods must be >= 1");
    if (args.directions < 1) throw Error(ErrorKind::InvalidConfig, "--directions must be >= 1");
    const std::vector<double> grid = args.beta_grid.empty() ? default_beta_grid() : args.beta_grid;
    for (double b : grid) {
      if (!(b > 0.0 && b <= 1.0)) throw Error(ErrorKind::InvalidConfig, "beta values must lie in (0, 1]");
    }
    const ParameterPath path = io::read_archive(args.archive);
    if (path.size() < 2) throw Error(ErrorKind::PathTooShort, "archive holds fewer than 2 snapshots");
    const auto names = layer_names(path, args.layer);
    ensure_dir(args.out_dir);

    for (const auto& name : names) {
      const ParameterPath part = select(path, name);

      const auto periods = split_periods(part, args.periods);
      for (std::size_t p = 0; p < periods.size(); ++p) {
        const auto svd = temporal_svd(periods[p].params);
        const SvdInfoProfile profile = info_profile(svd.sigma, grid);
        const std::string stem = name + "_period" + std::to_string(p + 1);
        CsvWriter dims(args.out_dir / (stem + "_dbeta.csv"), {"beta", "major_dims", "d"});
        for (std::size_t b = 0; b < profile.thresholds.size(); ++b) {
          dims.cell(profile.thresholds[b]).cell(static_cast<long long>(profile.major_dims[b]));
          dims.cell(static_cast<long long>(svd.rank()));
          dims.end_row();
        }
        CsvWriter info(args.out_dir / (stem + "_info.csv"), {"k", "sigma", "info_amount"});
        for (Index k = 0; k < svd.rank(); ++k) {
          info.cell(static_cast<long long>(k + 1)).cell(svd.sigma(k)).cell(profile.info_amount(k));
          info.end_row();
        }
      }

      const auto svd = temporal_svd(part.params);
      const CoordinateCurves cc = coordinate_curves(svd);
      const Index k = std::min(args.directions, svd.rank());
      std::vector<std::string> header{"step"};
      for (Index j = 0; j < k; ++j) header.push_back("u" + std::to_string(j + 1));
      CsvWriter curves(args.out_dir / (name + "_u_curves.csv"), header);
      for (Index i = 0; i < part.size(); ++i) {
        curves.cell(static_cast<unsigned long long>(part.steps[static_cast<std::size_t>(i)]));
        for (Index j = 0; j < k; ++j) curves.cell(cc.curves(i, j));
        curves.end_row();
      }
      CsvWriter dirs(args.out_dir / (name + "_directions.csv"), {"direction", "sigma", "detour", "final_change"});
      for (Index j = 0; j < k; ++j) {
        dirs.cell(static_cast<long long>(j + 1)).cell(svd.sigma(j));
        const auto& det = cc.per_direction_detour[static_cast<std::size_t>(j)];
        if (det) dirs.cell(*det);
        else dirs.empty();
        dirs.cell(cc.per_direction_final_change(j));
        dirs.end_row();
      }
    }
  });
}

int cmd_recon_check(const ReconArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const rl::RunConfig config = io::load_run_config(args.config);
    const std::vector<Index> grid = args.rt_grid.empty() ? rl::default_rt_grid() : args.rt_grid;
    const std::size_t episodes = args.episodes.value_or(config.eval_episodes);
    if (episodes < 1) throw Error(ErrorKind::InvalidConfig, "--episodes must be >= 1");
    const ParameterPath path = io::read_archive(args.archive);
    ensure_dir(args.out_dir);

    const auto rows = rl::reconstruction_check(path, rl::make_actor(config), config.env, grid, episodes, config.eval_seed);
    CsvWriter csv(args.out_dir / "recon.csv", {"r_t", "avg_delta", "std_delta", "avg_abs_delta", "std_abs_delta",
                                               "max_delta", "min_delta", "mean_original", "mean_reconstructed"});
    for (const auto& r : rows) {
      csv.cell(static_cast<long long>(r.r_t)).cell(r.stats.delta.mean).cell(r.stats.delta.std);
      csv.cell(r.stats.abs_delta.mean).cell(r.stats.abs_delta.std).cell(r.stats.max).cell(r.stats.min);
      csv.cell(r.mean_original).cell(r.mean_reconstructed);
      csv.end_row();
    }
  });
}

}  // namespace ppath::cli
