#ifndef PPATH_PPTB_HPP
#define PPATH_PPTB_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "ppath/linalg.hpp"
#include "ppath/path.hpp"

namespace ppath {

struct PptbConfig {
  Index r_t = 32;             // major directions kept
  Index r_b = 2;              // leading coordinates boosted
  double p_b = 0.1;           // boost amplitude
  std::uint64_t t_s = 25;     // store interval
  std::uint64_t t_p = 1000;   // transform interval
  std::size_t capacity_k = 1000;
  bool per_layer = false;     // run the transform on each layer segment separately

  // Throws InvalidConfig naming the violated rule.
  void validate() const;
};

namespace detail {

template <typename Scalar>
void check_row(const TemporalSvd<Scalar>& svd, Index row) {
  if (row < 0 || row >= svd.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "row index " + std::to_string(row) + " outside the path");
  }
}

template <typename Scalar>
void check_rank(const TemporalSvd<Scalar>& svd, Index r, const char* what) {
  if (r < 1 || r > svd.rank()) {
    throw Error(ErrorKind::InvalidRank, std::string(what) + "=" + std::to_string(r) + " outside [1, " +
                                            std::to_string(svd.rank()) + "]");
  }
}

// (coords .* sigma[:r]) * Vt[:r], r = coords.size()
template <typename Scalar>
Vector<Scalar> lift(const TemporalSvd<Scalar>& svd, const Vector<Scalar>& coords) {
  const Index r = coords.size();
  const Vector<Scalar> scaled = coords.cwiseProduct(svd.sigma.head(r));
  return svd.vt.topRows(r).transpose() * scaled;
}

}  // namespace detail

// Trimming: the policy at `row` rebuilt from its first r_t SVD directions.
template <typename Scalar>
Vector<Scalar> ppt(const TemporalSvd<Scalar>& svd, Index row, Index r_t) {
  detail::check_row(svd, row);
  detail::check_rank(svd, r_t, "r_t");
  const Vector<Scalar> coords = svd.u.row(row).head(r_t).transpose();
  return detail::lift(svd, coords);
}

// Boosting: the first r_b left-unitary coordinates of `row` moved along the
// path's temporal direction u_last - u_first by p_b. Full length d.
template <typename Scalar>
Vector<Scalar> ppb_row(const TemporalSvd<Scalar>& svd, Index row, Index r_b, Scalar p_b) {
  if (svd.rows() < 2) throw Error(ErrorKind::PathTooShort, "boosting needs at least 2 snapshots");
  detail::check_row(svd, row);
  detail::check_rank(svd, r_b, "r_b");
  if (!(p_b >= Scalar(0))) throw Error(ErrorKind::InvalidConfig, "p_b must be >= 0");
  Vector<Scalar> out = svd.u.row(row).transpose();
  if (p_b != Scalar(0)) {
    out.head(r_b) += p_b * (svd.u.row(svd.rows() - 1).head(r_b) - svd.u.row(0).head(r_b)).transpose();
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> pptb(const TemporalSvd<Scalar>& svd, Index row, Index r_t, Index r_b, Scalar p_b) {
  detail::check_rank(svd, r_t, "r_t");
  if (r_b > r_t) throw Error(ErrorKind::InvalidConfig, "r_b must not exceed r_t");
  const Vector<Scalar> boosted = ppb_row(svd, row, r_b, p_b);
  return detail::lift(svd, Vector<Scalar>(boosted.head(r_t)));
}

template <typename Scalar>
Vector<Scalar> pptb(const TemporalSvd<Scalar>& svd, Index row, const PptbConfig& config) {
  config.validate();
  return pptb(svd, row, config.r_t, config.r_b, Scalar(config.p_b));
}

struct Snapshot {
  std::uint64_t step = 0;
  Vec params;
};

// Bounded FIFO of policy snapshots; the oldest entry is evicted first.
class PolicyPathBuffer {
 public:
  explicit PolicyPathBuffer(std::size_t capacity);

  void push(std::uint64_t step, const Eigen::Ref<const Vec>& params);
  void replace_newest(const Eigen::Ref<const Vec>& params);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Snapshot& newest() const { return entries_.back(); }
  const std::deque<Snapshot>& entries() const { return entries_; }

  std::vector<std::uint64_t> steps() const;
  Mat matrix() const;

 private:
  std::size_t capacity_;
  std::deque<Snapshot> entries_;
};

struct SchedulerAction {
  bool stored = false;
  std::optional<Vec> transformed;
  Index effective_r_t = 0;  // after clamping to the buffer's rank

  bool none() const { return !stored && !transformed; }
};

// One training-step hook. Stores the current policy every t_s steps and, every
// t_p steps with at least two snapshots, returns the PPTB-transformed current
// policy, which also replaces the newest buffer entry. r_t and r_b are clamped
// to the rank of the buffer matrix. With `layers` non-empty and per_layer set,
// each segment is transformed independently.
SchedulerAction scheduler_step(std::uint64_t step, const PptbConfig& config, PolicyPathBuffer& buffer,
                               const Eigen::Ref<const Vec>& current_params,
                               std::span<const LayerSegment> layers = {});

}  // namespace ppath

#endif  // PPATH_PPTB_HPP
