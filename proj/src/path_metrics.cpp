#include "ppath/path_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ppath {

namespace {

void require_two(Index n) {
  if (n < 2) throw Error(ErrorKind::PathTooShort, "change metrics need at least 2 snapshots, got " + std::to_string(n));
}

}  // namespace

Vec accumulated_change(const Eigen::Ref<const Mat>& rows) {
  require_two(rows.rows());
  Vec acc = Vec::Zero(rows.cols());
  for (Index i = 0; i + 1 < rows.rows(); ++i) {
    acc += (rows.row(i + 1) - rows.row(i)).cwiseAbs().transpose();
  }
  return acc;
}

Vec final_change(const Eigen::Ref<const Mat>& rows) {
  require_two(rows.rows());
  return (rows.row(rows.rows() - 1) - rows.row(0)).cwiseAbs().transpose();
}

OptionalVec detour_ratio(const Eigen::Ref<const Mat>& rows) {
  const Vec apc = accumulated_change(rows);
  const Vec fpc = final_change(rows);
  OptionalVec out(static_cast<std::size_t>(apc.size()));
  for (Index j = 0; j < apc.size(); ++j) {
    if (fpc(j) > 0.0) out[static_cast<std::size_t>(j)] = apc(j) / fpc(j);
  }
  return out;
}

ChangeReport change_report(const ParameterPath& path) {
  ChangeReport r;
  r.apc = accumulated_change(path);
  r.fpc = final_change(path);
  r.pud.resize(static_cast<std::size_t>(r.apc.size()));
  for (Index j = 0; j < r.apc.size(); ++j) {
    if (r.fpc(j) > 0.0) r.pud[static_cast<std::size_t>(j)] = r.apc(j) / r.fpc(j);
  }
  r.layers = path.layers;
  return r;
}

std::vector<std::size_t> top_fraction_indices(const std::vector<double>& by, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "fraction must lie in (0, 1]");
  }
  std::vector<std::size_t> idx(by.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return by[a] > by[b]; });
  // 1e-9 absorbs representation error, e.g. 0.8 * 5.
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(by.size()) - 1e-9));
  idx.resize(std::min(keep, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<double> filter_top_fraction(const std::vector<double>& values, const std::vector<double>& by,
                                        double fraction) {
  if (values.size() != by.size()) throw Error(ErrorKind::ShapeMismatch, "values and keys differ in length");
  std::vector<double> out;
  for (std::size_t i : top_fraction_indices(by, fraction)) out.push_back(values[i]);
  return out;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> clip_extremes(const std::vector<double>& values, double upper_quantile) {
  if (!(upper_quantile > 0.0 && upper_quantile <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "clip quantile must lie in (0, 1]");
  }
  if (values.empty()) return {};
  const double cutoff = empirical_quantile(values, upper_quantile);
  std::vector<double> out;
  out.reserve(values.size());
  std::copy_if(values.begin(), values.end(), std::back_inserter(out), [&](double v) { return v <= cutoff; });
  return out;
}

Histogram histogram(const std::vector<double>& values, std::size_t bins) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "histogram of empty sample");
  if (bins < 1) throw Error(ErrorKind::InvalidConfig, "bins must be >= 1");
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorKind::InvalidMatrix, "histogram input must be finite");
  }
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);

  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::max(0.0, std::floor((v - lo) / width)));
    h.counts[std::min(b, bins - 1)] += 1;
  }
  h.cumulative_fractions.resize(bins);
  std::size_t running = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    running += h.counts[b];
    h.cumulative_fractions[b] = static_cast<double>(running) / static_cast<double>(values.size());
  }
  return h;
}

std::vector<ParameterPath> split_periods(const ParameterPath& path, std::size_t periods) {
  if (periods < 1) throw Error(ErrorKind::InvalidConfig, "periods must be >= 1");
  const auto n = static_cast<std::size_t>(path.size());
  if (n < periods) {
    throw Error(ErrorKind::PathTooShort,
                std::to_string(n) + " snapshots cannot form " + std::to_string(periods) + " periods");
  }
  std::vector<ParameterPath> out;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < periods; ++p) {
    const std::size_t len = n / periods + (p < n % periods ? 1 : 0);
    ParameterPath part;
    part.steps.assign(path.steps.begin() + static_cast<std::ptrdiff_t>(begin),
                      path.steps.begin() + static_cast<std::ptrdiff_t>(begin + len));
    part.params = path.params.middleRows(static_cast<Index>(begin), static_cast<Index>(len));
    part.layers = path.layers;
    out.push_back(std::move(part));
    begin += len;
  }
  return out;
}

ParameterPath slice_layer(const ParameterPath& path, const std::string& layer_name) {
  const LayerSegment& seg = path.layer(layer_name);
  ParameterPath out;
  out.steps = path.steps;
  out.params = path.params.middleCols(seg.offset, seg.length);
  out.layers = single_segment(seg.name, seg.length);
  return out;
}

}  // namespace ppath
