#include "ppath/pptb.hpp"

#include <cmath>

namespace ppath {

void PptbConfig::validate() const {
  if (r_t < 1) throw Error(ErrorKind::InvalidConfig, "r_t must be >= 1");
  if (r_b < 1) throw Error(ErrorKind::InvalidConfig, "r_b must be >= 1");
  if (r_b > r_t) throw Error(ErrorKind::InvalidConfig, "r_b must not exceed r_t");
  if (!std::isfinite(p_b) || p_b < 0.0) throw Error(ErrorKind::InvalidConfig, "p_b must be finite and >= 0");
  if (t_s == 0 || t_p == 0) throw Error(ErrorKind::InvalidConfig, "t_s and t_p must be positive");
  if (t_p % t_s != 0) {
    throw Error(ErrorKind::InvalidConfig, "transform interval t_p=" + std::to_string(t_p) +
                                              " must be a multiple of store interval t_s=" + std::to_string(t_s) +
                                              " (t_p % t_s == 0)");
  }
  if (capacity_k < 2) throw Error(ErrorKind::InvalidConfig, "buffer capacity must be >= 2");
}

PolicyPathBuffer::PolicyPathBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw Error(ErrorKind::InvalidConfig, "buffer capacity must be >= 1");
}

void PolicyPathBuffer::push(std::uint64_t step, const Eigen::Ref<const Vec>& params) {
  if (!entries_.empty()) {
    if (step <= entries_.back().step) {
      throw Error(ErrorKind::OutOfOrderSnapshot, "step " + std::to_string(step) + " not after " +
                                                     std::to_string(entries_.back().step));
    }
    if (params.size() != entries_.back().params.size()) {
      throw Error(ErrorKind::ShapeMismatch, "snapshot width changed");
    }
  }
  entries_.push_back(Snapshot{step, params});
  while (entries_.size() > capacity_) entries_.pop_front();
}

void PolicyPathBuffer::replace_newest(const Eigen::Ref<const Vec>& params) {
  if (entries_.empty()) throw Error(ErrorKind::InsufficientData, "buffer is empty");
  if (params.size() != entries_.back().params.size()) throw Error(ErrorKind::ShapeMismatch, "snapshot width changed");
  entries_.back().params = params;
}

std::vector<std::uint64_t> PolicyPathBuffer::steps() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.step);
  return out;
}

Mat PolicyPathBuffer::matrix() const {
  if (entries_.empty()) return Mat(0, 0);
  Mat out(static_cast<Index>(entries_.size()), entries_.front().params.size());
  Index i = 0;
  for (const auto& e : entries_) out.row(i++) = e.params.transpose();
  return out;
}

namespace {

Vec transform_block(const Mat& block, const PptbConfig& config, Index& effective_r_t) {
  const TemporalSvd<double> svd = temporal_svd(block);
  const Index r_t = std::min(config.r_t, svd.rank());
  const Index r_b = std::min(config.r_b, r_t);
  effective_r_t = r_t;
  return pptb(svd, svd.rows() - 1, r_t, r_b, config.p_b);
}

}  // namespace

SchedulerAction scheduler_step(std::uint64_t step, const PptbConfig& config, PolicyPathBuffer& buffer,
                               const Eigen::Ref<const Vec>& current_params, std::span<const LayerSegment> layers) {
  config.validate();
  SchedulerAction action;
  if (step % config.t_s == 0) {
    buffer.push(step, current_params);
    action.stored = true;
  }
  if (step % config.t_p != 0 || buffer.size() < 2) return action;

  const Mat path = buffer.matrix();
  Vec out(path.cols());
  if (config.per_layer && !layers.empty()) {
    check_partition(std::vector<LayerSegment>(layers.begin(), layers.end()), path.cols());
    for (const auto& seg : layers) {
      Index r = 0;
      out.segment(seg.offset, seg.length) = transform_block(path.middleCols(seg.offset, seg.length), config, r);
      action.effective_r_t = std::max(action.effective_r_t, r);
    }
  } else {
    out = transform_block(path, config, action.effective_r_t);
  }
  buffer.replace_newest(out);
  action.transformed = std::move(out);
  return action;
}

}  // namespace ppath
