#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "codec/data.hpp"
#include "codec/errors.hpp"
#include "codec/estimator.hpp"
#include "codec/foci.hpp"
#include "codec/joint_json.hpp"
#include "codec/simgen.hpp"
#include "experiments.hpp"
#include "report.hpp"

namespace codec::cli {

namespace {

using nlohmann::json;

// Thresholds the bench summary reports pass/fail against.
constexpr double kMod1Low = 0.88, kMod1High = 0.94;
constexpr double kMod1UncondLow = -0.07, kMod1UncondHigh = 0.07;
constexpr double kPolarLow = 0.79 - 0.03, kPolarHigh = 0.84 + 0.03;
constexpr double kPolarUncondLow = -0.06 - 0.03, kPolarUncondHigh = 0.05 + 0.03;
constexpr double kEx83Rate = 0.90, kEx83FullRate = 0.85, kEx84Rate = 0.95;
constexpr double kScalingRatio = 2.5;
constexpr double kConsistencyError = 0.05;

struct Options {
  std::string data, y_col, out_path, model = "mod1", experiment, joint_path;
  std::vector<std::string> z_cols, x_cols;
  std::uint64_t seed = 0;
  bool standardize = true;
  std::optional<std::size_t> max_steps;
  std::optional<std::size_t> threads;
  std::size_t n = 0, p = 0;
  std::optional<std::size_t> reps;
  bool full = false;
  double noise_sd = 1.0;
  std::vector<double> coefficients{1.0};
};

std::size_t resolve_threads(const Options& o) {
  if (o.threads) return std::max<std::size_t>(*o.threads, 1);
  if (const char* env = std::getenv("CODEC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

Matrix columns_matrix(const Dataset& d, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& name : names) idx.push_back(d.index_of(name));
  return d.matrix(idx);
}

json cmd_codec(const Options& o, json& inputs) {
  const auto z_names = split_list(o.z_cols);
  const auto x_names = split_list(o.x_cols);
  inputs = {{"data", o.data}, {"y", o.y_col}, {"z", z_names}, {"x", x_names}, {"seed", o.seed}};
  const Dataset d = load_csv(o.data, o.y_col);
  if (z_names.empty()) throw Error(ErrorKind::argument, "--z needs at least one column");
  const Matrix z = columns_matrix(d, z_names);
  const CodecResult r = x_names.empty()
                            ? estimate_unconditional(d.y(), z, o.seed)
                            : estimate_conditional(d.y(), z, columns_matrix(d, x_names), o.seed);
  return to_json(r);
}

json cmd_foci(const Options& o, json& inputs) {
  foci::FociConfig cfg;
  cfg.standardize = o.standardize;
  cfg.max_steps = o.max_steps;
  cfg.seed = o.seed;
  cfg.threads = resolve_threads(o);
  inputs = {{"data", o.data}, {"y", o.y_col}, {"standardize", cfg.standardize}, {"seed", o.seed},
            {"max_steps", o.max_steps ? json(*o.max_steps) : json(nullptr)}};
  const Dataset d = load_csv(o.data, o.y_col);
  return to_json(foci::select(d, cfg), d);
}

json cmd_sim(const Options& o, json& inputs) {
  inputs = {{"model", o.model}, {"n", o.n}, {"p", o.p}, {"seed", o.seed}, {"out", o.out_path},
            {"noise_sd", o.noise_sd}};
  sim::SimModel m{sim::parse_model_kind(o.model), o.n, o.p, o.seed, {o.noise_sd, o.coefficients}};
  const Dataset d = sim::generate(m);
  save_csv(o.out_path, d);
  return {{"path", o.out_path},
          {"model", sim::to_string(m.kind)},
          {"rows", d.n()},
          {"columns", d.num_columns()}};
}

json interval_report(const bench::IntervalRun& run, double lo, double hi, double ulo, double uhi) {
  const auto c = bench::summarize(run.conditional);
  const auto u = bench::summarize(run.unconditional);
  const bool overlap = c.q025 <= hi && c.q975 >= lo;
  const bool median_in = c.median >= lo && c.median <= hi;
  const bool uncond_in = u.median >= ulo && u.median <= uhi;
  return {{"conditional", bench::to_json(c)},
          {"unconditional", bench::to_json(u)},
          {"target_conditional", {lo, hi}},
          {"target_unconditional", {ulo, uhi}},
          {"interval_overlaps_target", overlap},
          {"conditional_median_in_target", median_in},
          {"unconditional_median_in_target", uncond_in},
          {"pass", overlap && median_in && uncond_in}};
}

json recovery_report(const bench::RecoveryRun& run, double threshold) {
  json sel = json::array();
  for (const auto& s : run.selections) sel.push_back(s);
  return {{"reps", run.reps},     {"exact_recoveries", run.exact_hits}, {"rate", run.rate()},
          {"threshold", threshold}, {"pass", run.rate() >= threshold},   {"selections", sel}};
}

json cmd_bench(const Options& o, json& inputs) {
  const std::string& e = o.experiment;
  const std::size_t threads = resolve_threads(o);
  auto reps_or = [&](std::size_t dflt) { return o.reps.value_or(dflt); };
  inputs = {{"experiment", e}, {"seed", o.seed}, {"full", o.full}};

  if (e == "ex81") {
    inputs["reps"] = reps_or(200);
    return interval_report(bench::run_mod1(reps_or(200), o.seed), kMod1Low, kMod1High, kMod1UncondLow,
                           kMod1UncondHigh);
  }
  if (e == "ex82") {
    inputs["reps"] = reps_or(200);
    return interval_report(bench::run_polar(reps_or(200), o.seed), kPolarLow, kPolarHigh,
                           kPolarUncondLow, kPolarUncondHigh);
  }
  if (e == "ex83" || e == "ex84") {
    const std::size_t p = o.full ? 1000 : 100;
    inputs["reps"] = reps_or(50);
    inputs["p"] = p;
    const auto kind = e == "ex83" ? sim::ModelKind::interaction : sim::ModelKind::interaction_noise;
    const double threshold = e == "ex84" ? kEx84Rate : (o.full ? kEx83FullRate : kEx83Rate);
    return recovery_report(bench::run_recovery(kind, reps_or(50), o.seed, 2000, p, threads), threshold);
  }
  if (e == "scaling") {
    inputs["reps"] = reps_or(5);
    const auto rows = bench::run_scaling({50'000, 100'000, 200'000}, reps_or(5), o.seed);
    json table = json::array();
    json ratios = json::array();
    bool pass = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      table.push_back({{"n", rows[k].n}, {"median_ms", rows[k].median_ms}, {"times_ms", rows[k].times_ms}});
      if (k > 0) {
        const double ratio = rows[k].median_ms / rows[k - 1].median_ms;
        ratios.push_back(ratio);
        pass = pass && ratio <= kScalingRatio;
      }
    }
    return {{"runtime_vs_n", table}, {"ratios", ratios}, {"threshold", kScalingRatio}, {"pass", pass}};
  }
  if (e == "consistency") {
    inputs["reps"] = reps_or(20);
    std::vector<bench::NamedJoint> joints;
    if (!o.joint_path.empty()) {
      inputs["joint"] = o.joint_path;
      joints.push_back({o.joint_path, oracle::load_joint(o.joint_path)});
    } else {
      joints = bench::reference_joints();
    }
    json tables = json::array();
    bool pass = true;
    for (const auto& nj : joints) {
      const auto run = bench::run_consistency(nj, {1'000, 10'000, 100'000}, reps_or(20), o.seed);
      json rows = json::array();
      bool monotone = true;
      for (std::size_t k = 0; k < run.rows.size(); ++k) {
        rows.push_back({{"n", run.rows[k].n},
                        {"mean_abs_error", run.rows[k].mean_abs_error},
                        {"median_abs_error", run.rows[k].median_abs_error}});
        if (k > 0 && run.rows[k].median_abs_error > run.rows[k - 1].median_abs_error) monotone = false;
      }
      const bool close = run.rows.back().mean_abs_error <= kConsistencyError;
      pass = pass && monotone && close;
      tables.push_back({{"joint", run.name}, {"exact_t", run.exact_t}, {"rows", rows},
                        {"median_error_nonincreasing", monotone}, {"final_error_within_tolerance", close}});
    }
    return {{"tables", tables}, {"tolerance", kConsistencyError}, {"pass", pass}};
  }
  throw Error(ErrorKind::argument, "unknown experiment '" + e + "'");
}

int exit_code_for(const Error& e) { return e.is_degenerate() ? kDegenerate : kInputError; }

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional dependence coefficient (CODEC) and FOCI variable selection", "codec"};
  app.require_subcommand(1);
  Options o;

  auto* codec_cmd = app.add_subcommand("codec", "Estimate T_n(Y, Z | X), or T_n(Y, Z) without --x");
  codec_cmd->add_option("--data", o.data, "CSV file")->required();
  codec_cmd->add_option("--y", o.y_col, "Response column")->required();
  codec_cmd->add_option("--z", o.z_cols, "Z columns (comma separated)")->required();
  codec_cmd->add_option("--x", o.x_cols, "X columns (comma separated)");
  codec_cmd->add_option("--seed", o.seed, "Tie-break seed");

  auto* foci_cmd = app.add_subcommand("foci", "Run FOCI forward selection");
  foci_cmd->add_option("--data", o.data, "CSV file")->required();
  foci_cmd->add_option("--y", o.y_col, "Response column")->required();
  foci_cmd->add_flag("--standardize,!--no-standardize", o.standardize, "Z-score predictors first");
  foci_cmd->add_option("--max-steps", o.max_steps, "Cap on the selected set size")->check(CLI::PositiveNumber);
  foci_cmd->add_option("--seed", o.seed, "Tie-break seed");
  foci_cmd->add_option("--threads", o.threads, "Worker threads (default: CODEC_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  auto* sim_cmd = app.add_subcommand("sim", "Write a simulated dataset as CSV");
  sim_cmd->add_option("--model", o.model, "mod1, polar, interaction, interaction-noise, linear-gaussian")
      ->required();
  sim_cmd->add_option("--n", o.n, "Sample size")->required();
  sim_cmd->add_option("--p", o.p, "Number of predictors")->required();
  sim_cmd->add_option("--seed", o.seed, "Generator seed");
  sim_cmd->add_option("--out", o.out_path, "Output CSV path")->required();
  sim_cmd->add_option("--noise-sd", o.noise_sd, "Noise sd (interaction-noise, linear-gaussian)");
  sim_cmd->add_option("--coefficients", o.coefficients, "linear-gaussian coefficients")->delimiter(',');

  auto* bench_cmd = app.add_subcommand("bench", "Run a simulation or benchmark experiment");
  bench_cmd->add_option("--experiment", o.experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember({"ex81", "ex82", "ex83", "ex84", "scaling", "consistency"}));
  bench_cmd->add_option("--reps", o.reps, "Replications")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", o.seed, "Base seed");
  bench_cmd->add_flag("--full", o.full, "ex83/ex84 with p = 1000 instead of 100");
  bench_cmd->add_option("--threads", o.threads, "Worker threads for FOCI")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--joint", o.joint_path, "consistency: joint distribution JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();
  json inputs = json::object();
  try {
    const auto start = std::chrono::steady_clock::now();
    json results;
    if (active == codec_cmd) results = cmd_codec(o, inputs);
    else if (active == foci_cmd) results = cmd_foci(o, inputs);
    else if (active == sim_cmd) results = cmd_sim(o, inputs);
    else results = cmd_bench(o, inputs);
    const auto stop = std::chrono::steady_clock::now();
    const json report = {{"command", command},
                         {"inputs", inputs},
                         {"results", results},
                         {"timing_ms", std::chrono::duration<double, std::milli>(stop - start).count()},
                         {"seed", o.seed}};
    out << report.dump(2) << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace codec::cli
