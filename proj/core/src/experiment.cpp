#include "lrtc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <random>
#include <sstream>

#include "lrtc/fft.hpp"
#include "lrtc/report.hpp"
#include "lrtc/sampling.hpp"

namespace lrtc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) throw Error("config " + key + ": bad number '" + v + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  char* end = nullptr;
  if (v.empty() || v[0] == '-') throw Error("config " + key + ": expected a nonnegative integer, got '" + v + "'");
  const auto x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) throw Error("config " + key + ": bad integer '" + v + "'");
  return x;
}

std::vector<std::size_t> to_sizes(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<std::size_t>(to_uint(key, item)));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("config " + key + ": expected true/false, got '" + v + "'");
}

MetricsRow measure(const DenseTensor& recon_kspace, const Phantom& truth, const ObservationSet& omega) {
  MetricsRow row;
  row.observed_count = omega.count();
  row.sampling_ratio = omega.sampling_ratio();
  row.k_test = k_test(recon_kspace, truth.kspace);
  const DenseTensor image = fft_inverse(recon_kspace);
  row.ser_db = ser(image, truth.image);
  row.psnr_db = psnr(image, truth.image);
  return row;
}

std::vector<Pattern> choose_batch(SamplingMethod method, const SolveResult& res, const ProblemSpec& p,
                                  const SolverConfig& sc, std::span<const Pattern> patterns, std::size_t count,
                                  std::uint64_t random_seed) {
  switch (method) {
    case SamplingMethod::Var:
      return select_batch(variance_utility(res.modes), patterns, count);
    case SamplingMethod::Lev:
      return select_batch(leverage_utility(res.state, p, sc.rank_tol), patterns, count);
    case SamplingMethod::VarPlusLev:
    case SamplingMethod::VarTimesLev: {
      const auto mode = method == SamplingMethod::VarPlusLev ? Combine::Sum : Combine::Product;
      const auto u = combine_utilities(variance_utility(res.modes), leverage_utility(res.state, p, sc.rank_tol), mode);
      return select_batch(u, patterns, count);
    }
    case SamplingMethod::Random:
      return random_baseline(patterns, count, random_seed);
    case SamplingMethod::Coherence:
      return coherence_baseline(res.state, patterns, count, sc.rank_tol);
  }
  throw Error("unknown sampling method");
}

std::vector<MetricsRow> run_trial(const ExperimentConfig& cfg, int trial) {
  const TrialSeeds seeds = trial_seeds(cfg.seed, trial);
  PhantomSpec ps = cfg.phantom;
  ps.seed = seeds.phantom;
  const Phantom truth = synth_ground_truth(ps);
  MaskSpec ms = cfg.mask;
  ms.shape = ps.shape;
  ms.seed = seeds.mask;
  const ObservationSet initial = init_cartesian_mask(ms, truth.kspace);

  std::vector<MetricsRow> rows;
  for (const auto method : cfg.methods) {
    using clock = std::chrono::steady_clock;
    const std::string name = to_string(method);
    auto stamp = [&](MetricsRow r, int round, clock::time_point t0) {
      r.trial = trial;
      r.round = round;
      r.method = name;
      r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
      rows.push_back(std::move(r));
    };
    auto diverged = [&](const ObservationSet& omega, int round, clock::time_point t0) {
      MetricsRow r;
      r.observed_count = omega.count();
      r.sampling_ratio = omega.sampling_ratio();
      r.k_test = r.ser_db = r.psnr_db = std::numeric_limits<double>::quiet_NaN();
      stamp(std::move(r), round, t0);
    };

    ObservationSet omega = initial;
    ProblemSpec p = cfg.solver.problem(omega);
    auto t0 = clock::now();
    SolveResult res;
    try {
      res = solve(p);
    } catch (const NonFiniteError&) {
      diverged(omega, 0, t0);
      continue;
    }
    stamp(measure(res.state.m, truth, omega), 0, t0);

    for (std::size_t b = 1; b <= cfg.num_batches; ++b) {
      t0 = clock::now();
      const auto patterns = enumerate_fiber_patterns(ps.shape, ms.readout_mode, omega);
      if (patterns.empty()) break;
      const std::size_t count = std::min(cfg.batch_size, patterns.size());
      const auto batch = choose_batch(method, res, p, cfg.solver, patterns, count, seeds.random + b);
      omega = acquire(truth.kspace, std::move(omega), batch);
      p = cfg.solver.problem(omega);
      try {
        res = cfg.solver.warm_start ? solve(p, warm_state(std::move(res.state), p)) : solve(p);
      } catch (const NonFiniteError&) {
        diverged(omega, static_cast<int>(b), t0);
        break;
      }
      stamp(measure(res.state.m, truth, omega), static_cast<int>(b), t0);
    }
  }
  return rows;
}

}  // namespace

SamplingMethod parse_sampling_method(const std::string& name) {
  if (name == "Var") return SamplingMethod::Var;
  if (name == "Lev") return SamplingMethod::Lev;
  if (name == "VarPlusLev") return SamplingMethod::VarPlusLev;
  if (name == "VarTimesLev") return SamplingMethod::VarTimesLev;
  if (name == "Random") return SamplingMethod::Random;
  if (name == "Coherence") return SamplingMethod::Coherence;
  throw Error("unknown sampling method '" + name + "'");
}

std::string to_string(SamplingMethod m) {
  switch (m) {
    case SamplingMethod::Var: return "Var";
    case SamplingMethod::Lev: return "Lev";
    case SamplingMethod::VarPlusLev: return "VarPlusLev";
    case SamplingMethod::VarTimesLev: return "VarTimesLev";
    case SamplingMethod::Random: return "Random";
    case SamplingMethod::Coherence: return "Coherence";
  }
  return "?";
}

ProblemSpec SolverConfig::problem(ObservationSet omega) const {
  ProblemSpec p = ProblemSpec::with_defaults(std::move(omega), kind);
  if (!alpha.empty()) p.alpha = alpha;
  if (!lambda_i.empty()) p.lambda_i = lambda_i;
  p.rho = rho;
  p.lambda_s = lambda_s;
  p.max_sweeps = max_sweeps;
  p.tol = tol;
  p.validate();
  return p;
}

void ExperimentConfig::validate() const {
  if (phantom.shape.modes() < 2) throw Error("config: phantom.shape is required");
  if (phantom.tucker_ranks.size() != phantom.shape.modes()) throw Error("config: phantom.ranks needs one rank per mode");
  if (mask.readout_mode >= phantom.shape.modes()) throw Error("config: mask.readout_mode out of range");
  if (batch_size < 1) throw Error("config: experiment.batch_size must be at least 1");
  if (trials < 1) throw Error("config: experiment.trials must be at least 1");
  if (methods.empty()) throw Error("config: experiment.method is empty");
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));

    if (key == "phantom.shape") cfg.phantom.shape = Shape(to_sizes(key, v));
    else if (key == "phantom.ranks") cfg.phantom.tucker_ranks = to_sizes(key, v);
    else if (key == "phantom.sparse_fraction") cfg.phantom.sparse_fraction = to_double(key, v);
    else if (key == "phantom.noise_sigma") cfg.phantom.noise_sigma = to_double(key, v);
    else if (key == "mask.readout_mode") cfg.mask.readout_mode = static_cast<std::size_t>(to_uint(key, v));
    else if (key == "mask.center_fraction") cfg.mask.center_fraction = to_double(key, v);
    else if (key == "mask.random_line_fraction") cfg.mask.random_line_fraction = to_double(key, v);
    else if (key == "solver.kind") {
      if (v == "admm" || v == "ADMM") cfg.solver.kind = SolverKind::Admm;
      else if (v == "bcd" || v == "BCD") cfg.solver.kind = SolverKind::Bcd;
      else throw Error("config solver.kind: expected admm or bcd, got '" + v + "'");
    }
    else if (key == "solver.alpha") cfg.solver.alpha = to_doubles(key, v);
    else if (key == "solver.lambda_i") cfg.solver.lambda_i = to_doubles(key, v);
    else if (key == "solver.rho") cfg.solver.rho = to_double(key, v);
    else if (key == "solver.lambda") cfg.solver.lambda_s = to_double(key, v);
    else if (key == "solver.max_sweeps") cfg.solver.max_sweeps = static_cast<int>(to_uint(key, v));
    else if (key == "solver.tol") cfg.solver.tol = to_double(key, v);
    else if (key == "solver.warm_start") cfg.solver.warm_start = to_bool(key, v);
    else if (key == "solver.rank_tol") cfg.solver.rank_tol = to_double(key, v);
    else if (key == "experiment.method") {
      cfg.methods.clear();
      for (const auto& m : split_list(v)) cfg.methods.push_back(parse_sampling_method(m));
    }
    else if (key == "experiment.batch_size") cfg.batch_size = static_cast<std::size_t>(to_uint(key, v));
    else if (key == "experiment.num_batches") cfg.num_batches = static_cast<std::size_t>(to_uint(key, v));
    else if (key == "experiment.trials") cfg.trials = static_cast<int>(to_uint(key, v));
    else if (key == "experiment.seed") cfg.seed = to_uint(key, v);
    else if (key == "experiment.output_dir") cfg.output_dir = v;
    else throw Error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  cfg.mask.shape = cfg.phantom.shape;
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config " + path.string());
  return parse_config(is);
}

TrialSeeds trial_seeds(std::uint64_t seed, int trial) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
  TrialSeeds s{};
  s.phantom = rng();
  s.mask = rng();
  s.random = rng();
  return s;
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::ofstream csv;
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = cfg.output_dir / "metrics.csv";
    csv.open(path, std::ios::trunc);
    if (!csv) throw Error("cannot open " + path.string() + " for writing");
    csv << kCsvHeader << '\n' << std::flush;
  }
  std::vector<MetricsRow> all;
  for (int t = 0; t < cfg.trials; ++t) {
    auto rows = run_trial(cfg, t);
    if (csv.is_open()) {
      append_csv_rows(rows, csv);
      csv.flush();
      if (!csv) throw Error("csv write failed");
    }
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

}  // namespace lrtc
