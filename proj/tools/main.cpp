#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "entroflow/config.hpp"
#include "entroflow/errors.hpp"
#include "entroflow/euclidean.hpp"
#include "entroflow/registry.hpp"
#include "entroflow/runner.hpp"
#include "entroflow/svg.hpp"
#include "entroflow/trace_io.hpp"

namespace {

using namespace entroflow;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::uint64_t seed = 42;
  double tol_scale = 1.0;
  CLI::Option* config_opt = nullptr;
  CLI::Option* set_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
  args.config_opt =
      cmd->add_option("--config", args.config_path, "JSON config file");
  args.set_opt = cmd->add_option("--set", args.overrides,
                                 "override key=value; dotted paths reach "
                                 "into geometry (repeatable)")
                     ->type_size(1);
  if (with_out) cmd->add_option("--out", args.out_dir, "output directory");
  args.seed_opt =
      cmd->add_option("--seed", args.seed, "eigensolver start seed");
  args.tol_opt = cmd->add_option("--tol-scale", args.tol_scale,
                                 "multiply every verdict tolerance");
}

std::vector<std::string> flag_overrides(const CommonArgs& args) {
  std::vector<std::string> ov = args.overrides;
  char buf[64];
  if (args.seed_opt->count() > 0) {
    std::snprintf(buf, sizeof(buf), "seed=%llu",
                  static_cast<unsigned long long>(args.seed));
    ov.push_back(buf);
  }
  if (args.tol_opt->count() > 0) {
    std::snprintf(buf, sizeof(buf), "tol_scale=%.17g", args.tol_scale);
    ov.push_back(buf);
  }
  return ov;
}

ScenarioConfig load_config(const CommonArgs& args, const char* forced_kind) {
  std::vector<std::string> ov = flag_overrides(args);
  if (forced_kind) {
    ov.insert(ov.begin(), std::string("kind=") + forced_kind);
  }
  return parse_config(args.config_path, ov);
}

std::string out_base(const CommonArgs& args, const ScenarioConfig& config) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (!config.out.empty()) return config.out;
  if (const char* env = std::getenv("ENTROFLOW_OUT"); env && *env) {
    return env;
  }
  return "entroflow_out";
}

std::string run_block(const ScenarioConfig& config, const RunResult& result) {
  std::string text = "scenario " + config.name + "\n";
  char buf[96];
  std::snprintf(buf, sizeof(buf), "lambda_1 = %.12g  kappa = %.12g\n",
                result.lambda_1, result.kappa);
  text += buf;
  for (const Verdict& v : result.verdicts) {
    text += format_verdict(v);
    text += '\n';
  }
  text += "artifacts: " + result.dir + "\n";
  return text;
}

int cmd_run_all(const CommonArgs& args, unsigned workers) {
  if (args.config_opt->count() > 0 || args.set_opt->count() > 0) {
    fail(ErrorCode::config,
         "--all runs the registry as pinned; drop --config and --set, or "
         "run one scenario by name");
  }
  std::vector<ScenarioConfig> scenarios = registry_scenarios();
  for (ScenarioConfig& c : scenarios) {
    if (args.seed_opt->count() > 0) c.seed = args.seed;
    if (args.tol_opt->count() > 0) c.tol_scale = args.tol_scale;
  }

  struct Slot {
    std::string text;
    int status = 1;
    bool errored = false;
  };
  std::vector<Slot> slots(scenarios.size());
  std::atomic<std::size_t> cursor{0};
  const auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= scenarios.size()) return;
      try {
        const RunResult r = run_scenario(
            scenarios[i], out_base(args, scenarios[i]) + "/" +
                              scenarios[i].name);
        slots[i].text = run_block(scenarios[i], r);
        slots[i].status = r.exit_status;
      } catch (const std::exception& e) {
        slots[i].text =
            "scenario " + scenarios[i].name + "\n" + e.what() + "\n";
        slots[i].status = 1;
        slots[i].errored = true;
      }
    }
  };

  unsigned pool = workers;
  if (pool == 0) pool = std::max(1u, std::thread::hardware_concurrency());
  pool = std::min<unsigned>(pool, scenarios.size());
  if (pool <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < pool; ++i) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }

  int exit_status = 0;
  bool any_error = false;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].errored) {
      std::cerr << slots[i].text;
      any_error = true;
    } else {
      std::cout << slots[i].text;
      if (slots[i].status != 0) exit_status = 2;
    }
    if (i + 1 < slots.size()) std::cout << '\n';
  }
  return any_error ? 1 : exit_status;
}

int cmd_run(const CommonArgs& args, const std::string& name, bool all,
            unsigned workers) {
  if (all) {
    if (!name.empty()) {
      fail(ErrorCode::config,
           "--all and a scenario name do not combine; pick one");
    }
    return cmd_run_all(args, workers);
  }
  ScenarioConfig config;
  if (!name.empty()) {
    if (args.config_opt->count() > 0) {
      fail(ErrorCode::config,
           "give either a registry scenario name or --config, not both");
    }
    const ScenarioConfig base = registry_scenario(name);
    config = parse_config_text(config_to_json_text(base),
                               flag_overrides(args));
  } else {
    config = load_config(args, nullptr);
  }
  const RunResult result =
      run_scenario(config, out_base(args, config) + "/" + config.name);
  std::cout << run_block(config, result);
  return result.exit_status;
}

int cmd_verify(const CommonArgs& args, const std::string& trace_path) {
  const ScenarioConfig config = load_config(args, nullptr);
  const TraceTable trace = read_trace_csv(trace_path);
  const std::vector<Verdict> verdicts = verify_trace(config, trace);
  int exit_status = 0;
  for (const Verdict& v : verdicts) {
    std::cout << format_verdict(v) << '\n';
    if (!v.pass) exit_status = 2;
  }
  return exit_status;
}

int cmd_oracle(const CommonArgs& args) {
  const ScenarioConfig config = load_config(args, "euclidean_oracle");
  if (config.kind != ScenarioKind::euclidean_oracle) {
    fail(ErrorCode::config,
         "the oracle subcommand runs the flat-space closed forms; keep "
         "kind = euclidean_oracle");
  }

  const std::vector<double> times = sample_times(config);
  const std::size_t stride = std::max<std::size_t>(1, times.size() / 8);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); i += stride) {
    const EuclideanEntropy closed =
        euclidean_closed(config.geometry.dimension, times[i]);
    const EuclideanEntropy quad =
        euclidean_quadrature(config.geometry.dimension, times[i], 1e-12);
    worst = std::max({worst, std::abs(closed.entropy - quad.entropy),
                      std::abs(closed.dirichlet - quad.dirichlet),
                      std::abs(closed.y0 - quad.y0), std::abs(quad.w)});
  }
  std::printf(
      "closed forms vs adaptive quadrature: worst |difference| = %.3e "
      "(budget 1e-8)\n",
      worst);
  if (worst > 1e-8) {
    std::cerr << "oracle self-check failed: closed forms disagree with "
                 "quadrature\n";
    return 1;
  }

  const RunResult result =
      run_scenario(config, out_base(args, config) + "/" + config.name);
  std::cout << run_block(config, result);
  return result.exit_status;
}

int cmd_spectrum(const CommonArgs& args) {
  const ScenarioConfig config = load_config(args, nullptr);
  std::cout << spectrum_report(config);
  return 0;
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir) {
  const TraceTable trace = read_trace_csv(trace_path);
  std::string dir = out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("ENTROFLOW_OUT");
    dir = (env && *env) ? env : ".";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    fail(ErrorCode::io,
         "cannot create output directory '" + dir + "': " + ec.message());
  }

  const int tc = trace.column("t");
  std::vector<double> t;
  for (const auto& row : trace.rows) t.push_back(row[tc]);

  bool wrote = false;
  for (const char* col : {"w", "y0", "ya", "ha"}) {
    if (!trace.has_column(col)) continue;
    const int c = trace.column(col);
    std::vector<double> y;
    for (const auto& row : trace.rows) y.push_back(row[c]);
    const std::string path = dir + "/chart_" + col + ".svg";
    write_line_chart(path, t, y, "t", col, std::string(col) + " along the flow");
    std::cout << path << '\n';
    wrote = true;
  }
  if (!wrote) {
    fail(ErrorCode::config,
         "trace has no entropy columns (w, y0, ya, ha) to chart");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "entroflow: heat-flow entropy traces and monotonicity verdicts on "
      "model manifolds"};
  app.require_subcommand(1);

  CommonArgs run_args;
  std::string run_name;
  bool run_all = false;
  unsigned workers = 0;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "execute a scenario and emit trace, verdicts, charts, manifest");
  run_cmd->add_option("scenario", run_name, "registry scenario name");
  run_cmd->add_flag("--all", run_all, "run every registry scenario");
  add_common(run_cmd, run_args, true);
  run_cmd->add_option("--workers", workers,
                      "pool size for --all (default: logical cores)");

  CommonArgs verify_args;
  std::string verify_trace_path;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "apply the verdict set to a stored trace");
  verify_cmd->add_option("--trace", verify_trace_path, "trace CSV path")
      ->required();
  add_common(verify_cmd, verify_args, false);

  CommonArgs oracle_args;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle",
      "flat-space closed-form trace, cross-checked against quadrature");
  add_common(oracle_cmd, oracle_args, true);

  CommonArgs spectrum_args;
  CLI::App* spectrum_cmd = app.add_subcommand(
      "spectrum", "report the low spectrum of a scenario's operator");
  add_common(spectrum_cmd, spectrum_args, false);

  std::string plot_trace_path;
  std::string plot_out;
  CLI::App* plot_cmd =
      app.add_subcommand("plot", "render charts from a stored trace");
  plot_cmd->add_option("--trace", plot_trace_path, "trace CSV path")
      ->required();
  plot_cmd->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_args, run_name, run_all, workers);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_args, verify_trace_path);
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_args);
    if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_args);
    if (plot_cmd->parsed()) return cmd_plot(plot_trace_path, plot_out);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 1;
}
