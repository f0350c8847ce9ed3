#include <random>

#include "doctest.h"
#include "ppath/pptb.hpp"
#include "test_support.hpp"

using namespace ppath;
using ppath::testing::random_low_rank;
using ppath::testing::random_path;

namespace {

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

double rel(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

}  // namespace

TEST_CASE("config validation") {
  PptbConfig c;
  c.validate();
  c.t_p = 1010;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
  c = PptbConfig{};
  c.r_b = 40;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
  c = PptbConfig{};
  c.capacity_k = 1;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
  c = PptbConfig{};
  c.p_b = -0.5;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("buffer FIFO") {
  PolicyPathBuffer b(3);
  for (std::uint64_t s : {0, 25, 50, 75}) b.push(s, Vec::Constant(2, double(s)));
  CHECK(b.steps() == std::vector<std::uint64_t>{25, 50, 75});
  CHECK(b.matrix()(0, 0) == 25.0);

  PolicyPathBuffer two(3);
  two.push(0, Vec::Zero(2));
  two.push(5, Vec::Zero(2));
  CHECK(two.size() == 2);

  PolicyPathBuffer dup(3);
  dup.push(50, Vec::Zero(2));
  CHECK(kind_of([&] { dup.push(50, Vec::Zero(2)); }) == ErrorKind::OutOfOrderSnapshot);
  CHECK(kind_of([&] { dup.push(60, Vec::Zero(3)); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("buffer never exceeds capacity") {
  PolicyPathBuffer b(7);
  for (std::uint64_t s = 1; s <= 10000; ++s) {
    b.push(s, Vec::Constant(1, double(s)));
    REQUIRE(b.size() <= 7);
  }
  CHECK(b.steps().front() == 9994);
}

TEST_CASE("ppt examples") {
  std::mt19937_64 rng(21);
  const ParameterPath p = random_path(rng, 6, 20);
  const auto svd = temporal_svd(p.params);
  for (Index i = 0; i < p.size(); ++i) CHECK(rel(ppt(svd, i, svd.rank()), p.params.row(i).transpose()) <= 1e-8);

  const Mat r1 = random_low_rank(rng, 5, 12, 1);
  const auto svd1 = temporal_svd(r1);
  for (Index i = 0; i < 5; ++i) CHECK(rel(ppt(svd1, i, 1), r1.row(i).transpose()) <= 1e-12);

  Mat diag(2, 2);
  diag << 3, 0, 0, 2;
  const Vec second = ppt(temporal_svd(diag), 1, 1);
  CHECK(second.cwiseAbs().maxCoeff() <= 1e-15);

  CHECK(kind_of([&] { ppt(svd, 0, 0); }) == ErrorKind::InvalidRank);
  CHECK(kind_of([&] { ppt(svd, 0, svd.rank() + 1); }) == ErrorKind::InvalidRank);
}

TEST_CASE("ppb_row examples") {
  TemporalSvd<double> svd;
  svd.u.resize(3, 3);
  svd.u << 0.1, 0.3, 0.7,
           0.2, 0.2, 0.2,
           0.5, 0.1, 0.4;
  svd.sigma = Vec::Ones(3);
  svd.vt = Mat::Identity(3, 3);
  const Vec boosted = ppb_row(svd, 2, 2, 1.0);
  CHECK(boosted(0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(boosted(1) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(boosted(2) == 0.4);
  CHECK(ppb_row(svd, 1, 2, 0.0) == svd.u.row(1).transpose());

  svd.u.row(2) = svd.u.row(0);
  CHECK(ppb_row(svd, 1, 3, 5.0) == svd.u.row(1).transpose());
  CHECK(kind_of([&] { ppb_row(svd, 1, 4, 1.0); }) == ErrorKind::InvalidRank);
}

TEST_CASE("pptb identities") {
  std::mt19937_64 rng(22);
  const ParameterPath p = random_path(rng, 8, 30);
  const auto svd = temporal_svd(p.params);
  const Index d = svd.rank();
  PptbConfig c;
  c.p_b = 0.0;
  c.r_t = d;
  c.r_b = 2;
  CHECK(rel(pptb(svd, d - 1, c), p.params.row(d - 1).transpose()) <= 1e-8);
  for (Index r = 2; r <= d; ++r) {
    c.r_t = r;
    CHECK(pptb(svd, 3, c) == ppt(svd, 3, r));
  }

  Mat still(5, 9);
  still.rowwise() = p.params.row(0);
  const auto svd_still = temporal_svd(still);
  c.r_t = svd_still.rank();
  c.r_b = 2;
  c.p_b = 3.0;
  CHECK(rel(pptb(svd_still, 4, c), still.row(4).transpose()) <= 1e-8);

  c.t_p = 33;
  CHECK(kind_of([&] { pptb(svd, 0, c); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("pptb boosts along the leading coordinates only") {
  std::mt19937_64 rng(23);
  const ParameterPath p = random_path(rng, 10, 25);
  const auto svd = temporal_svd(p.params);
  const Vec out = pptb(svd, 9, 5, 2, 0.5);
  Vec coords = svd.u.row(9).head(5).transpose();
  coords.head(2) += 0.5 * (svd.u.row(9).head(2) - svd.u.row(0).head(2)).transpose();
  const Vec expect = svd.vt.topRows(5).transpose() * coords.cwiseProduct(svd.sigma.head(5));
  CHECK(rel(out, expect) <= 1e-14);
}

TEST_CASE("scheduler follows the store/transform intervals") {
  PptbConfig c;
  c.t_s = 25;
  c.t_p = 1000;
  c.r_t = 4;
  c.capacity_k = 100;
  std::mt19937_64 rng(24);
  std::normal_distribution<double> nd;
  PolicyPathBuffer buf(c.capacity_k);
  Vec theta = Vec::Zero(12);
  buf.push(0, theta);
  for (std::uint64_t t = 1; t <= 1000; ++t) {
    for (Index j = 0; j < theta.size(); ++j) theta(j) += 0.01 + 0.01 * nd(rng);
    const auto a = scheduler_step(t, c, buf, theta);
    if (t == 25 || t == 50) {
      CHECK(a.stored);
      CHECK_FALSE(a.transformed);
    } else if (t == 1000) {
      CHECK(a.stored);
      REQUIRE(a.transformed);
      CHECK(buf.newest().params == *a.transformed);
      CHECK(a.effective_r_t == 4);
    } else if (t % 25 != 0) {
      CHECK(a.none());
    }
  }
  CHECK(buf.size() == 41);

  PptbConfig bad = c;
  bad.t_p = 1010;
  CHECK(kind_of([&] { scheduler_step(25, bad, buf, theta); }) == ErrorKind::InvalidConfig);

  PolicyPathBuffer lonely(10);
  PptbConfig tight = c;
  tight.t_s = 10;
  tight.t_p = 10;
  const auto a = scheduler_step(10, tight, lonely, theta);
  CHECK(a.stored);
  CHECK_FALSE(a.transformed);
}

TEST_CASE("scheduler transform equals pptb of the pre-transform buffer") {
  PptbConfig c;
  c.t_s = 1;
  c.t_p = 5;
  c.r_t = 3;
  c.r_b = 2;
  c.p_b = 0.2;
  std::mt19937_64 rng(25);
  const ParameterPath p = random_path(rng, 5, 8);
  PolicyPathBuffer buf(10);
  for (Index i = 0; i < 4; ++i) scheduler_step(static_cast<std::uint64_t>(i + 1), c, buf, p.params.row(i).transpose());
  const auto a = scheduler_step(5, c, buf, p.params.row(4).transpose());
  REQUIRE(a.transformed);
  const auto svd = temporal_svd(p.params);
  CHECK(*a.transformed == pptb(svd, 4, 3, 2, 0.2));
}

TEST_CASE("scheduler clamps r_t to the buffer rank and supports per-layer mode") {
  PptbConfig c;
  c.t_s = 1;
  c.t_p = 3;
  c.r_t = 32;
  c.per_layer = true;
  std::mt19937_64 rng(26);
  const ParameterPath p = random_path(rng, 3, 10);
  const std::vector<LayerSegment> layers{{"Layer1", 0, 6}, {"Layer2", 6, 4}};
  PolicyPathBuffer buf(10);
  scheduler_step(1, c, buf, p.params.row(0).transpose(), layers);
  scheduler_step(2, c, buf, p.params.row(1).transpose(), layers);
  const auto a = scheduler_step(3, c, buf, p.params.row(2).transpose(), layers);
  REQUIRE(a.transformed);
  CHECK(a.effective_r_t == 3);
  const auto s1 = temporal_svd(p.params.leftCols(6));
  CHECK(a.transformed->head(6) == pptb(s1, 2, 3, 2, c.p_b));
}

TEST_CASE("ppt output lies in the span of the leading right directions") {
  std::mt19937_64 rng(27);
  const ParameterPath p = random_path(rng, 12, 40);
  const auto svd = temporal_svd(p.params);
  for (Index r : {1, 3, 7}) {
    const Vec out = ppt(svd, 5, r);
    const Mat basis = svd.vt.topRows(r);
    const Vec resid = out - basis.transpose() * (basis * out);
    CHECK(resid.norm() <= 1e-8 * out.norm());
  }
}
