#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "lrtc/experiment.hpp"
#include "lrtc/fft.hpp"
#include "lrtc/report.hpp"
#include "lrtc/tensor_io.hpp"

using namespace lrtc;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "lrtc_cli_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lrtc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

ExperimentConfig small_config(std::size_t batches, int trials) {
  std::istringstream is(
      "# small experiment\n"
      "phantom.shape=8,6,4\n"
      "phantom.ranks=2,2,2\n"
      "mask.readout_mode=0\n"
      "mask.center_fraction=0.1\n"
      "mask.random_line_fraction=0.2\n"
      "solver.max_sweeps=20\n"
      "experiment.method=Var\n"
      "experiment.batch_size=2\n"
      "experiment.num_batches=" + std::to_string(batches) + "\n"
      "experiment.trials=" + std::to_string(trials) + "\n"
      "experiment.seed=5\n");
  return parse_config(is);
}

std::string strip_wall_ms(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  while (std::getline(is, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST(Config, ParsesAllSections) {
  std::istringstream is(
      "phantom.shape = 10,8,4\n"
      "phantom.ranks=3,2,1\n"
      "phantom.sparse_fraction=0.01\n"
      "phantom.noise_sigma=0.05\n"
      "mask.readout_mode=1\n"
      "mask.center_fraction=0.1\n"
      "mask.random_line_fraction=0.3\n"
      "solver.kind=bcd\n"
      "solver.alpha=0.2,0.3,0.5\n"
      "solver.lambda_i=1,2,3\n"
      "solver.rho=0.5\n"
      "solver.lambda=0.01\n"
      "solver.max_sweeps=50\n"
      "solver.tol=1e-5\n"
      "solver.warm_start=false\n"
      "solver.rank_tol=1e-4\n"
      "experiment.method=Var,Random,Coherence\n"
      "experiment.batch_size=3\n"
      "experiment.num_batches=7\n"
      "experiment.trials=2\n"
      "experiment.seed=99  # trailing comment\n");
  auto cfg = parse_config(is);
  EXPECT_EQ(cfg.phantom.shape, (Shape{10, 8, 4}));
  EXPECT_EQ(cfg.phantom.tucker_ranks, (std::vector<std::size_t>{3, 2, 1}));
  EXPECT_DOUBLE_EQ(cfg.phantom.noise_sigma, 0.05);
  EXPECT_EQ(cfg.mask.readout_mode, 1u);
  EXPECT_EQ(cfg.mask.shape, cfg.phantom.shape);
  EXPECT_EQ(cfg.solver.kind, SolverKind::Bcd);
  EXPECT_EQ(cfg.solver.lambda_i, (std::vector<double>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(cfg.solver.lambda_s, 0.01);
  EXPECT_FALSE(cfg.solver.warm_start);
  EXPECT_EQ(cfg.methods,
            (std::vector<SamplingMethod>{SamplingMethod::Var, SamplingMethod::Random, SamplingMethod::Coherence}));
  EXPECT_EQ(cfg.num_batches, 7u);
  EXPECT_EQ(cfg.seed, 99u);
}

TEST(Config, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream is("phantom.shape=4,4\nphantom.ranks=1,1\n" + text);
    return parse_config(is);
  };
  EXPECT_NO_THROW(parse(""));
  EXPECT_THROW(parse("solver.unknown=1\n"), Error);
  EXPECT_THROW(parse("experiment.method=Best\n"), Error);
  EXPECT_THROW(parse("experiment.batch_size=0\n"), Error);
  EXPECT_THROW(parse("solver.rho=abc\n"), Error);
  EXPECT_THROW(parse("just a line\n"), Error);
  EXPECT_THROW(parse("phantom.ranks=1,1,1\n"), Error);
}

TEST(Experiment, NoBatchesGivesOneRowPerTrial) {
  auto rows = run_experiment(small_config(0, 2));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].round, 0);
  EXPECT_EQ(rows[1].trial, 1);
}

TEST(Experiment, RowCountAndMonotoneSamplingRatio) {
  auto cfg = small_config(5, 3);
  auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 18u);
  const double step = 2.0 * 8.0 / (8.0 * 6.0 * 4.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].trial != rows[i - 1].trial) continue;
    EXPECT_EQ(rows[i].round, rows[i - 1].round + 1);
    EXPECT_NEAR(rows[i].sampling_ratio - rows[i - 1].sampling_ratio, step, 1e-12);
  }
}

TEST(Experiment, RoundZeroIndependentOfMethod) {
  auto cfg = small_config(2, 2);
  cfg.methods = {SamplingMethod::Var, SamplingMethod::Random, SamplingMethod::VarTimesLev};
  auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 18u);
  for (const auto& r : rows) {
    if (r.round != 0) continue;
    const auto& ref = rows[static_cast<std::size_t>(r.trial) * 9];
    EXPECT_EQ(r.k_test, ref.k_test);
    EXPECT_EQ(r.observed_count, ref.observed_count);
  }
}

TEST(Experiment, DeterministicCsv) {
  auto cfg = small_config(3, 2);
  cfg.methods = {SamplingMethod::Lev, SamplingMethod::VarPlusLev, SamplingMethod::Coherence};
  auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  cfg.output_dir = a;
  run_experiment(cfg);
  cfg.output_dir = b;
  run_experiment(cfg);
  const std::string ca = slurp(a / "metrics.csv"), cb = slurp(b / "metrics.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(strip_wall_ms(ca), strip_wall_ms(cb));
}

TEST(Experiment, ColdStartAlsoRuns) {
  auto cfg = small_config(2, 1);
  cfg.solver.warm_start = false;
  cfg.solver.kind = SolverKind::Bcd;
  auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_TRUE(std::isfinite(r.k_test));
}

TEST(Cli, SynthThenMetricsOfFft) {
  auto dir = scratch_dir("synth");
  const std::string prefix = (dir / "ph").string();
  auto r = run_cli({"synth", "--shape", "8,6,4", "--ranks", "2,2,2", "--seed", "3", "--out", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  const DenseTensor image = read_tensor(prefix + "_image.atns");
  write_tensor(dir / "fft.atns", fft_forward(image));
  r = run_cli({"metrics", "--recon", (dir / "fft.atns").string(), "--truth", prefix + "_kspace.atns"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string key;
  double kt = 1.0;
  is >> key >> kt;
  EXPECT_EQ(key, "k_test");
  EXPECT_LT(kt, 1e-24);
}

TEST(Cli, MetricsOfIdenticalFiles) {
  auto dir = scratch_dir("metrics");
  const std::string prefix = (dir / "ph").string();
  ASSERT_EQ(run_cli({"synth", "--shape", "4,4", "--ranks", "1,1", "--out", prefix}).code, 0);
  auto r = run_cli({"metrics", "--recon", prefix + "_image.atns", "--truth", prefix + "_image.atns", "--domain",
                    "image"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "k_test 0\nser_db inf\npsnr_db inf\n");
}

TEST(Cli, RunTwiceGivesIdenticalCsvAndPlots) {
  auto dir = scratch_dir("run");
  std::ofstream(dir / "cfg.txt") << "phantom.shape=8,6,4\nphantom.ranks=2,2,2\nmask.center_fraction=0.1\n"
                                    "mask.random_line_fraction=0.2\nsolver.max_sweeps=15\n"
                                    "experiment.method=VarTimesLev,Random\nexperiment.batch_size=2\n"
                                    "experiment.num_batches=2\nexperiment.seed=1\n";
  for (const char* sub : {"a", "b"}) {
    auto r = run_cli({"run", "--config", (dir / "cfg.txt").string(), "--output-dir", (dir / sub).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(strip_wall_ms(slurp(dir / "a" / "metrics.csv")), strip_wall_ms(slurp(dir / "b" / "metrics.csv")));
  auto r = run_cli({"plot", "--csv", (dir / "a" / "metrics.csv").string(), "--metric", "k_test", "--out",
                    (dir / "plot.svg").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "plot.svg").find("<polyline"), std::string::npos);
}

TEST(Cli, FailuresReportOneLineAndNonzeroExit) {
  auto r = run_cli({"metrics", "--recon", "/nonexistent/a.atns", "--truth", "/nonexistent/b.atns"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  r = run_cli({"synth", "--bogus"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);

  r = run_cli({"launch"});
  EXPECT_NE(r.code, 0);

  r = run_cli({"plot", "--csv", "x.csv", "--metric", "mse", "--out", "x.svg"});
  EXPECT_NE(r.code, 0);
}
