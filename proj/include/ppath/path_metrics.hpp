#ifndef PPATH_PATH_METRICS_HPP
#define PPATH_PATH_METRICS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ppath/path.hpp"

namespace ppath {

using OptionalVec = std::vector<std::optional<double>>;

// Per-parameter change statistics. Columns of a time-major matrix (rows are
// snapshots) are treated as independent parameter trajectories.
Vec accumulated_change(const Eigen::Ref<const Mat>& rows);
Vec final_change(const Eigen::Ref<const Mat>& rows);
// apc / fpc where fpc > 0, empty where the net change is zero.
OptionalVec detour_ratio(const Eigen::Ref<const Mat>& rows);

inline Vec accumulated_change(const ParameterPath& path) { return accumulated_change(path.params); }
inline Vec final_change(const ParameterPath& path) { return final_change(path.params); }
inline OptionalVec detour_ratio(const ParameterPath& path) { return detour_ratio(path.params); }

struct ChangeReport {
  Vec apc;
  Vec fpc;
  OptionalVec pud;
  std::vector<LayerSegment> layers;
};

ChangeReport change_report(const ParameterPath& path);

// Indices of the top `fraction` of `by` (largest first, lower index wins ties),
// returned in ascending index order. Keeps ceil(fraction * size) entries.
std::vector<std::size_t> top_fraction_indices(const std::vector<double>& by, double fraction);

std::vector<double> filter_top_fraction(const std::vector<double>& values, const std::vector<double>& by,
                                        double fraction);

// Linear-interpolated empirical quantile of an unsorted sample.
double empirical_quantile(std::vector<double> values, double q);

// Drops entries above the `upper_quantile` empirical quantile; order preserved.
std::vector<double> clip_extremes(const std::vector<double>& values, double upper_quantile = 0.99);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
  std::vector<double> cumulative_fractions;
};

// Equal-width bins over [min, max], last bin closed. A constant sample uses
// [v - 0.5, v + 0.5].
Histogram histogram(const std::vector<double>& values, std::size_t bins = 50);

// Contiguous near-equal chunks; the first n % periods chunks get one extra row.
std::vector<ParameterPath> split_periods(const ParameterPath& path, std::size_t periods);

ParameterPath slice_layer(const ParameterPath& path, const std::string& layer_name);

}  // namespace ppath

#endif  // PPATH_PATH_METRICS_HPP
