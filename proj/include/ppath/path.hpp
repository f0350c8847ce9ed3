#ifndef PPATH_PATH_HPP
#define PPATH_PATH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ppath/linalg.hpp"

namespace ppath {

struct LayerSegment {
  std::string name;
  Index offset = 0;
  Index length = 0;

  bool operator==(const LayerSegment&) const = default;
};

// Policy learning path: row i of `params` is the flattened policy at steps[i].
struct ParameterPath {
  std::vector<std::uint64_t> steps;
  Mat params;
  std::vector<LayerSegment> layers;

  Index size() const { return params.rows(); }
  Index width() const { return params.cols(); }

  // Throws ShapeMismatch / OutOfOrderSnapshot / InvalidMatrix on a broken path.
  void validate() const;

  const LayerSegment& layer(const std::string& name) const;
};

// One segment named `name` spanning [0, m).
std::vector<LayerSegment> single_segment(const std::string& name, Index m);

// Throws ShapeMismatch unless the segments are contiguous, in order, and cover [0, m).
void check_partition(const std::vector<LayerSegment>& layers, Index m);

}  // namespace ppath

#endif  // PPATH_PATH_HPP
