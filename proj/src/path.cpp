#include "ppath/path.hpp"

namespace ppath {

std::vector<LayerSegment> single_segment(const std::string& name, Index m) {
  return {LayerSegment{name, 0, m}};
}

void check_partition(const std::vector<LayerSegment>& layers, Index m) {
  Index expected = 0;
  for (const auto& seg : layers) {
    if (seg.offset != expected || seg.length <= 0) {
      throw Error(ErrorKind::ShapeMismatch, "layer '" + seg.name + "' breaks the partition of [0, m)");
    }
    expected += seg.length;
  }
  if (expected != m) {
    throw Error(ErrorKind::ShapeMismatch,
                "layers cover " + std::to_string(expected) + " of " + std::to_string(m) + " parameters");
  }
}

void ParameterPath::validate() const {
  if (static_cast<Index>(steps.size()) != params.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "step count does not match snapshot count");
  }
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] <= steps[i - 1]) throw Error(ErrorKind::OutOfOrderSnapshot, "steps must be strictly increasing");
  }
  if (!all_finite(params)) throw Error(ErrorKind::InvalidMatrix, "non-finite parameter");
  check_partition(layers, params.cols());
}

const LayerSegment& ParameterPath::layer(const std::string& name) const {
  for (const auto& seg : layers) {
    if (seg.name == name) return seg;
  }
  throw Error(ErrorKind::UnknownLayer, "no layer named '" + name + "'");
}

}  // namespace ppath
