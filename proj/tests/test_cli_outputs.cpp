#include <doctest.h>

#include "cavmode/errors.hpp"
#include "commands.hpp"
#include "png_writer.hpp"

#include <filesystem>
#include <fstream>

using namespace cavmode;
using namespace cavmode::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cavmode_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("identical sweep configs produce byte-identical outputs") {
  SweepOptions s;
  s.key = "loss_ratio";
  s.from = 0;
  s.to = 1;
  s.points = 5;
  s.log_spacing = false;
  s.jsf.points = 96;

  CommonOptions a, b;
  a.out_dir = fresh_dir("det_a").string();
  b.out_dir = fresh_dir("det_b").string();
  run_sweep(s, a);
  run_sweep(s, b);

  CHECK(slurp(fs::path(a.out_dir) / "sweep.csv") ==
        slurp(fs::path(b.out_dir) / "sweep.csv"));
  CHECK(slurp(fs::path(a.out_dir) / "metrics.json") ==
        slurp(fs::path(b.out_dir) / "metrics.json"));
}

TEST_CASE("jsf command flags the degenerate eta = 0 case and still succeeds") {
  JsfOptions j;
  j.eta = 0;
  j.points = 64;
  CommonOptions c;
  c.out_dir = fresh_dir("degenerate").string();
  const Json doc = run_jsf(j, c);
  CHECK(doc["metrics"]["degenerate"].get<bool>());
  CHECK(fs::exists(fs::path(c.out_dir) / "jsf.csv"));
}

TEST_CASE("flat-analytic method rejects a structured pump") {
  QpgOptions q;
  q.modes = 32;
  q.method = "flat";
  q.pump = "hg:2:2";
  CommonOptions c;
  c.out_dir = fresh_dir("flat_reject").string();
  CHECK_THROWS_AS(run_qpg(q, c), ParameterError);
}

TEST_CASE("oracle method reports its deviation from the kernel") {
  QpgOptions q;
  q.modes = 24;
  q.gamma_over_dw = 0.05;
  q.method = "oracle";
  q.pump = "hg:2:1.5";
  CommonOptions c;
  c.out_dir = fresh_dir("oracle_dev").string();
  const Json doc = run_qpg(q, c);
  CHECK(doc["metrics"]["kernel_vs_oracle_frobenius"].get<double>() < 1e-6);
}

TEST_CASE("pump mini-language rejects malformed specs") {
  QpgOptions q;
  q.modes = 16;
  CommonOptions c;
  c.out_dir = fresh_dir("badpump").string();
  for (const char* bad : {"hg", "hg:2:1:4", "random", "square:3", "rect:abc"}) {
    q.pump = bad;
    CHECK_THROWS_AS(run_qpg(q, c), ParameterError);
  }
}

TEST_CASE("csv files carry headers and full-precision values") {
  JsfOptions j;
  j.points = 16;
  CommonOptions c;
  c.out_dir = fresh_dir("csv_format").string();
  run_jsf(j, c);
  const std::string csv = slurp(fs::path(c.out_dir) / "jsf.csv");
  CHECK(csv.rfind("omega_s,omega_i,re,im,abs\n", 0) == 0);
  // 16x16 grid plus header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 257);
}

TEST_CASE("png writer emits a valid signature") {
  const fs::path dir = fresh_dir("png");
  Eigen::MatrixXd mags(8, 6);
  for (int r = 0; r < 8; ++r)
    for (int cidx = 0; cidx < 6; ++cidx) mags(r, cidx) = r + cidx;
  write_heatmap_png(dir / "map.png", mags, 4);
  const std::string bytes = slurp(dir / "map.png");
  REQUIRE(bytes.size() > 8);
  CHECK(static_cast<unsigned char>(bytes[0]) == 0x89);
  CHECK(bytes.substr(1, 3) == "PNG");
}

TEST_CASE("unknown repro figure is a parameter error") {
  CommonOptions c;
  c.out_dir = fresh_dir("badfig").string();
  CHECK_THROWS_AS(run_repro("fig9z", c), ParameterError);
}

TEST_CASE("figure reproductions emit their expected files") {
  struct Expectation {
    const char* figure;
    std::vector<const char*> files;
  };
  const std::vector<Expectation> table = {
      {"fig2c", {"jsf.csv", "metrics.json"}},
      {"fig4a", {"transfer_s.csv", "transfer_i.csv", "metrics.json"}},
      {"fig4c", {"unitary.csv", "metrics.json"}},
  };
  for (const auto& expect : table) {
    CommonOptions c;
    c.out_dir = fresh_dir(std::string("repro_") + expect.figure).string();
    c.plot = true;
    run_repro(expect.figure, c);
    for (const char* f : expect.files)
      CHECK(fs::exists(fs::path(c.out_dir) / f));
  }
}
