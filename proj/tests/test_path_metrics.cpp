#include <random>

#include "doctest.h"
#include "ppath/path_metrics.hpp"
#include "test_support.hpp"

using namespace ppath;
using ppath::testing::path_from_columns;
using ppath::testing::random_path;

namespace {

Mat column(std::initializer_list<double> xs) {
  Mat m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("accumulated and final change on hand columns") {
  CHECK(accumulated_change(column({1.0, 2.0, 1.5, 1.5}))(0) == 1.5);
  CHECK(accumulated_change(column({4.0, 4.0, 4.0}))(0) == 0.0);
  CHECK(accumulated_change(column({0, 1, 2}))(0) == 2.0);

  CHECK(final_change(column({1.0, 2.0, 1.5, 1.5}))(0) == 0.5);
  CHECK(final_change(column({4.0, 4.0, 4.0}))(0) == 0.0);
  CHECK(final_change(column({3, -3}))(0) == 6.0);

  CHECK(kind_of([] { accumulated_change(column({1.0})); }) == ErrorKind::PathTooShort);
  CHECK(kind_of([] { final_change(column({1.0})); }) == ErrorKind::PathTooShort);
}

TEST_CASE("detour ratio") {
  CHECK(*detour_ratio(column({0, 1, 0, 1}))[0] == 3.0);
  CHECK(*detour_ratio(column({0, 1, 2}))[0] == 1.0);
  CHECK_FALSE(detour_ratio(column({2, 2, 2}))[0].has_value());
  CHECK(kind_of([] { detour_ratio(column({1.0})); }) == ErrorKind::PathTooShort);
}

TEST_CASE("change_report carries layers and presence rule") {
  Mat m(3, 2);
  m << 0, 5, 1, 6, 2, 5;
  ParameterPath p = path_from_columns(m);
  p.layers = {{"a", 0, 1}, {"b", 1, 1}};
  const auto r = change_report(p);
  CHECK(r.layers == p.layers);
  CHECK(r.pud[0].has_value());
  CHECK_FALSE(r.pud[1].has_value());
}

TEST_CASE("filter_top_fraction") {
  const std::vector<double> values{10, 20, 30, 40, 50};
  CHECK(filter_top_fraction(values, {1, 2, 3, 4, 5}, 0.8) == std::vector<double>{20, 30, 40, 50});
  CHECK(filter_top_fraction(values, {1, 2, 3, 4, 5}, 1.0) == values);
  CHECK(filter_top_fraction({7, 8, 9, 10}, {1, 1, 1, 1}, 0.5) == std::vector<double>{7, 8});
  CHECK(kind_of([] { filter_top_fraction({1, 2}, {1}, 0.5); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("clip_extremes") {
  CHECK(clip_extremes({1, 1, 1, 100}, 0.99) == std::vector<double>{1, 1, 1});
  CHECK(clip_extremes({1, 1, 1, 100}, 0.75) == std::vector<double>{1, 1, 1});
  CHECK(clip_extremes({3, 1, 2}, 1.0) == std::vector<double>{3, 1, 2});
  CHECK(clip_extremes({2, 2, 2}, 0.5) == std::vector<double>{2, 2, 2});
  CHECK(clip_extremes({}, 0.99).empty());
}

TEST_CASE("histogram") {
  auto h = histogram({0, 1, 2, 3}, 2);
  CHECK(h.counts == std::vector<std::size_t>{2, 2});
  CHECK(h.cumulative_fractions == std::vector<double>{0.5, 1.0});
  CHECK(h.edges == std::vector<double>{0.0, 1.5, 3.0});

  h = histogram({4.2}, 1);
  CHECK(h.counts == std::vector<std::size_t>{1});
  CHECK(h.cumulative_fractions == std::vector<double>{1.0});

  h = histogram({0, 0, 0, 9}, 3);
  CHECK(h.counts == std::vector<std::size_t>{3, 0, 1});
  CHECK(h.edges == std::vector<double>{0, 3, 6, 9});

  CHECK(kind_of([] { histogram({}, 3); }) == ErrorKind::EmptyInput);
}

TEST_CASE("split_periods") {
  std::mt19937_64 rng(1);
  auto sizes = [](const std::vector<ParameterPath>& parts) {
    std::vector<Index> out;
    for (const auto& p : parts) out.push_back(p.size());
    return out;
  };
  CHECK(sizes(split_periods(random_path(rng, 9, 3), 3)) == std::vector<Index>{3, 3, 3});
  const ParameterPath ten = random_path(rng, 10, 3);
  const auto parts = split_periods(ten, 3);
  CHECK(sizes(parts) == std::vector<Index>{4, 3, 3});
  CHECK(parts[1].steps.front() == ten.steps[4]);
  CHECK(parts[2].params.row(2) == ten.params.row(9));
  const auto whole = split_periods(ten, 1);
  CHECK(whole[0].params == ten.params);
  CHECK(whole[0].steps == ten.steps);
  CHECK(kind_of([&] { split_periods(random_path(rng, 2, 3), 3); }) == ErrorKind::PathTooShort);
}

TEST_CASE("slice_layer") {
  std::mt19937_64 rng(2);
  ParameterPath p = random_path(rng, 5, 10);
  p.layers = {{"Layer1", 0, 4}, {"Layer2", 4, 5}, {"Layer3", 9, 1}};
  p.validate();
  const auto l1 = slice_layer(p, "Layer1");
  CHECK(l1.width() == 4);
  CHECK(l1.layers == single_segment("Layer1", 4));
  CHECK(l1.params == p.params.leftCols(4));
  const auto l2 = slice_layer(p, "Layer2");
  CHECK(l2.params == p.params.middleCols(4, 5));

  ParameterPath full = random_path(rng, 4, 6);
  CHECK(slice_layer(full, "all").params == full.params);
  CHECK(kind_of([&] { slice_layer(p, "Layer9"); }) == ErrorKind::UnknownLayer);
}

TEST_CASE("path validation") {
  std::mt19937_64 rng(3);
  ParameterPath p = random_path(rng, 4, 5);
  p.validate();
  p.steps[2] = p.steps[1];
  CHECK(kind_of([&] { p.validate(); }) == ErrorKind::OutOfOrderSnapshot);
  p = random_path(rng, 4, 5);
  p.layers = {{"a", 0, 2}, {"b", 3, 2}};
  CHECK(kind_of([&] { p.validate(); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("path metric laws on random paths") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Index> len(2, 30), width(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const ParameterPath p = random_path(rng, len(rng), width(rng));
    const Vec apc = accumulated_change(p);
    const Vec fpc = final_change(p);
    CHECK((apc - fpc).minCoeff() >= -1e-12);
    for (const auto& r : detour_ratio(p)) {
      if (r) CHECK(*r >= 1.0 - 1e-12);
    }
    const Mat reversed = p.params.colwise().reverse();
    CHECK((accumulated_change(reversed) - apc).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((final_change(reversed) - fpc).cwiseAbs().maxCoeff() == 0.0);

    std::uniform_int_distribution<std::size_t> per(1, static_cast<std::size_t>(p.size()));
    const auto parts = split_periods(p, per(rng));
    Index total = 0, lo = p.size(), hi = 0;
    for (const auto& part : parts) {
      total += part.size();
      lo = std::min(lo, part.size());
      hi = std::max(hi, part.size());
    }
    CHECK(total == p.size());
    CHECK(hi - lo <= 1);

    std::vector<double> vals(apc.data(), apc.data() + apc.size());
    const auto h = histogram(vals, 7);
    std::size_t count = 0;
    for (auto c : h.counts) count += c;
    CHECK(count == vals.size());
    for (std::size_t b = 1; b < h.cumulative_fractions.size(); ++b)
      CHECK(h.cumulative_fractions[b] >= h.cumulative_fractions[b - 1]);
    CHECK(h.cumulative_fractions.back() == 1.0);
  }
}
