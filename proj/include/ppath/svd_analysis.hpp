#ifndef PPATH_SVD_ANALYSIS_HPP
#define PPATH_SVD_ANALYSIS_HPP

#include <vector>

#include "ppath/linalg.hpp"
#include "ppath/path_metrics.hpp"

namespace ppath {

// a_k = (sigma_1 + ... + sigma_k) / (sigma_1 + ... + sigma_d); the last entry is exactly 1.
Vec info_amount(const Eigen::Ref<const Vec>& sigma);

// Smallest k (1-based) with a_k >= beta.
Index major_dimensionality(const Eigen::Ref<const Vec>& sigma, double beta);

struct SvdInfoProfile {
  Vec info_amount;
  std::vector<double> thresholds;
  std::vector<Index> major_dims;
};

std::vector<double> default_beta_grid();

SvdInfoProfile info_profile(const Eigen::Ref<const Vec>& sigma,
                            const std::vector<double>& beta_grid = default_beta_grid());

// Columns of U as per-direction time series, with the same change statistics
// path_metrics computes for raw parameters.
struct CoordinateCurves {
  Mat curves;  // n x d
  OptionalVec per_direction_detour;
  Vec per_direction_final_change;
};

CoordinateCurves coordinate_curves(const TemporalSvd<double>& svd);

}  // namespace ppath

#endif  // PPATH_SVD_ANALYSIS_HPP
