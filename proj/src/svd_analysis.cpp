#include "ppath/svd_analysis.hpp"

#include <cmath>

namespace ppath {

Vec info_amount(const Eigen::Ref<const Vec>& sigma) {
  if (sigma.size() == 0) throw Error(ErrorKind::DegenerateSpectrum, "empty spectrum");
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!std::isfinite(sigma(i)) || sigma(i) < 0.0) {
      throw Error(ErrorKind::InvalidMatrix, "singular values must be finite and non-negative");
    }
  }
  Vec cumulative(sigma.size());
  double running = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    running += sigma(i);
    cumulative(i) = running;
  }
  if (running == 0.0) throw Error(ErrorKind::DegenerateSpectrum, "all singular values are zero");
  return cumulative / running;
}

Index major_dimensionality(const Eigen::Ref<const Vec>& sigma, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorKind::InvalidConfig, "beta must lie in (0, 1]");
  const Vec a = info_amount(sigma);
  for (Index k = 0; k < a.size(); ++k) {
    if (a(k) >= beta) return k + 1;
  }
  return a.size();
}

std::vector<double> default_beta_grid() { return {0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95, 0.99}; }

SvdInfoProfile info_profile(const Eigen::Ref<const Vec>& sigma, const std::vector<double>& beta_grid) {
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (!(beta_grid[i] > 0.0 && beta_grid[i] <= 1.0) || (i > 0 && beta_grid[i] <= beta_grid[i - 1])) {
      throw Error(ErrorKind::InvalidConfig, "beta grid must be strictly increasing within (0, 1]");
    }
  }
  SvdInfoProfile p;
  p.info_amount = info_amount(sigma);
  p.thresholds = beta_grid;
  for (double beta : beta_grid) p.major_dims.push_back(major_dimensionality(sigma, beta));
  return p;
}

CoordinateCurves coordinate_curves(const TemporalSvd<double>& svd) {
  CoordinateCurves c;
  c.curves = svd.u;
  if (svd.u.rows() >= 2) {
    c.per_direction_detour = detour_ratio(c.curves);
    c.per_direction_final_change = final_change(c.curves);
  } else {
    c.per_direction_detour.assign(static_cast<std::size_t>(svd.u.cols()), std::nullopt);
    c.per_direction_final_change = Vec::Zero(svd.u.cols());
  }
  return c;
}

}  // namespace ppath
