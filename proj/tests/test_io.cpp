#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ppath/io/archive.hpp"
#include "ppath/io/config.hpp"
#include "ppath/io/csv.hpp"
#include "test_support.hpp"

using namespace ppath;
namespace fs = std::filesystem;

namespace {

ParameterPath layered_path() {
  std::mt19937_64 rng(21);
  ParameterPath p = testing::random_path(rng, 6, 10);
  p.layers = {{"Layer1", 0, 4}, {"Layer2", 4, 5}, {"Layer3", 9, 1}};
  p.params(2, 3) = -0.0;
  p.params(3, 3) = std::numeric_limits<double>::denorm_min();
  p.params(4, 3) = 1e308;
  return p;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ppath_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("archive round trip is bit-exact") {
  const ParameterPath p = layered_path();
  const ParameterPath q = io::decode_archive(io::encode_archive(p));
  CHECK(q.steps == p.steps);
  CHECK(q.layers == p.layers);
  REQUIRE(q.params.rows() == p.params.rows());
  REQUIRE(q.params.cols() == p.params.cols());
  CHECK(std::memcmp(q.params.data(), p.params.data(), sizeof(double) * p.params.size()) == 0);
  CHECK(std::signbit(q.params(2, 3)));

  const fs::path file = scratch("round.ppath");
  io::write_archive(file, p);
  CHECK(io::read_archive(file).params == p.params);
  CHECK(fs::file_size(file) == io::encode_archive(p).size());
}

TEST_CASE("archive byte layout is little-endian") {
  ParameterPath p;
  p.params = Mat::Constant(1, 1, 1.0);
  p.steps = {0x0102030405060708ull};
  p.layers = single_segment("w", 1);
  const std::string b = io::encode_archive(p);
  // magic 6 | version 2 | n 4 | m 4 | count 4 | name len 4 | "w" | offset 4 | length 4 | step 8 | value 8
  REQUIRE(b.size() == 6 + 2 + 4 + 4 + 4 + 4 + 1 + 4 + 4 + 8 + 8);
  CHECK(b.substr(0, 6) == "PPATH1");
  CHECK(b[6] == 1);
  CHECK(b[7] == 0);
  CHECK(b[8] == 1);  // n
  CHECK(b[12] == 1);  // m
  const std::size_t step_at = b.size() - 16;
  CHECK(static_cast<unsigned char>(b[step_at]) == 0x08);
  CHECK(static_cast<unsigned char>(b[step_at + 7]) == 0x01);
  // 1.0 = 0x3FF0000000000000
  CHECK(static_cast<unsigned char>(b[b.size() - 1]) == 0x3F);
  CHECK(static_cast<unsigned char>(b[b.size() - 2]) == 0xF0);
}

TEST_CASE("malformed archives are rejected") {
  const std::string good = io::encode_archive(layered_path());
  auto decode = [](std::string bytes) { return [bytes] { io::decode_archive(bytes); }; };

  CHECK(kind_of(decode("")) == ErrorKind::MalformedArchive);
  CHECK(kind_of(decode("PPATH2" + good.substr(6))) == ErrorKind::MalformedArchive);
  CHECK(kind_of(decode(good.substr(0, good.size() - 1))) == ErrorKind::MalformedArchive);
  CHECK(kind_of(decode(good + '\0')) == ErrorKind::MalformedArchive);

  std::string version = good;
  version[6] = 2;
  CHECK(kind_of(decode(version)) == ErrorKind::MalformedArchive);

  // Layer table that does not cover [0, m): shrink the last layer's length.
  ParameterPath p = layered_path();
  std::string bytes = io::encode_archive(p);
  const std::size_t last_len = 6 + 2 + 12 + (4 + 6 + 8) * 2 + (4 + 6 + 4);
  bytes[last_len] = 0;
  CHECK(kind_of(decode(bytes)) == ErrorKind::MalformedArchive);

  CHECK(kind_of([] { io::read_archive(scratch("does_not_exist.ppath")); }) == ErrorKind::Io);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-2.0) == "-2");
  CHECK(io::format_double(1e-300) == "1e-300");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = ud(rng) / 3.0;
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("csv quoting") {
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_escape("two\nlines") == "\"two\nlines\"");

  const fs::path file = scratch("t.csv");
  {
    io::CsvWriter csv(file, {"name", "value"});
    csv.cell(std::string("x,y")).cell(0.5);
    csv.end_row();
    csv.empty().cell(3LL);
    csv.end_row();
  }
  std::ifstream in(file);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "name,value\n\"x,y\",0.5\n,3\n");
}

TEST_CASE("run config parsing") {
  const rl::RunConfig c = io::parse_run_config(
      "# comment\n"
      "seed = 12\n"
      "\n"
      "max_steps=5000   # trailing comment\n"
      "pptb.enabled = true\n"
      "pptb.t_s = 10\n"
      "pptb.t_p = 200\n"
      "pptb.p_b = 0.25\n"
      "env.goal_x = 0.5\n"
      "agent.hidden = 16\n");
  CHECK(c.seed == 12);
  CHECK(c.max_steps == 5000);
  CHECK(c.pptb_enabled);
  CHECK(c.pptb.t_p == 200);
  CHECK(c.pptb.p_b == 0.25);
  CHECK(c.env.goal(0) == 0.5);
  CHECK(c.agent.hidden == 16);
  CHECK(c.eval_interval == rl::RunConfig{}.eval_interval);
}

TEST_CASE("run config errors") {
  auto parse = [](std::string text) { return [text] { io::parse_run_config(text); }; };
  CHECK(kind_of(parse("nope = 1\n")) == ErrorKind::InvalidConfig);
  CHECK(kind_of(parse("seed\n")) == ErrorKind::InvalidConfig);
  CHECK(kind_of(parse("seed = x\n")) == ErrorKind::InvalidConfig);
  CHECK(kind_of(parse("seed = -1\n")) == ErrorKind::InvalidConfig);
  CHECK(kind_of(parse("seed = 1\nseed = 2\n")) == ErrorKind::InvalidConfig);
  CHECK(kind_of(parse("pptb.enabled = maybe\n")) == ErrorKind::InvalidConfig);
  CHECK(kind_of(parse("pptb.enabled = true\npptb.t_p = 1010\n")) == ErrorKind::InvalidConfig);
  // Schedule rules only bind when PPTB is on.
  CHECK_NOTHROW(io::parse_run_config("pptb.t_p = 1010\n"));
  CHECK(kind_of([] { io::load_run_config(scratch("missing.cfg")); }) == ErrorKind::Io);
}

TEST_CASE("run config format round trip") {
  rl::RunConfig c;
  c.seed = 99;
  c.pptb.p_b = 0.3;
  c.env.goal = {0.1, -0.2};
  c.agent.actor_lr = 3e-4;
  const rl::RunConfig back = io::parse_run_config(io::format_run_config(c));
  CHECK(io::format_run_config(back) == io::format_run_config(c));
  CHECK(back.env.goal == c.env.goal);
}
