#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hessdamp/harness.hpp"

using namespace hessdamp;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

std::pair<double, double> parse_window(const std::string& w) {
  const auto c = w.find(':');
  if (c == std::string::npos) throw ConfigError("--window expects a:b");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = w.substr(0, c), b = w.substr(c + 1);
    const double lo = std::stod(a, &p1), hi = std::stod(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
    if (!(lo < hi)) throw ConfigError("--window needs a < b");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("--window expects a:b with numbers, got '" + w + "'");
  }
}

void print_rate(const RateReport& r) {
  std::printf("slope %.6g\nintercept %.6g\nwindow %g:%g\npoints %d\nresidual %.6g\noscillation_count %d\n", r.slope,
              r.intercept, r.window_lo, r.window_hi, r.points, r.residual, r.oscillation_count);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial optimization with Hessian-driven damping"};
  app.require_subcommand(1);

  std::string config_path, target, csv_path, mode = "poly", window;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "experiment JSON")->required();
  auto* repro = app.add_subcommand("reproduce", "Regenerate a pinned figure or benchmark");
  repro->add_option("target", target, "fig1 | fig2-case4 | rls-l1 | rls-group | rls-tv | rls-nuclear")->required();
  auto* val = app.add_subcommand("validate", "Check a config's hypotheses without running");
  val->add_option("config", config_path, "experiment JSON")->required();
  auto* rate = app.add_subcommand("rate", "Fit a decay rate to a trace CSV");
  rate->add_option("trace", csv_path, "trace CSV")->required();
  rate->add_option("--mode", mode, "poly or linear")->check(CLI::IsMember({"poly", "linear"}));
  rate->add_option("--window", window, "a:b in the t column")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    const std::string out = output_dir(".");
    if (*run) {
      const ExperimentConfig cfg = load_config(config_path);
      const RunResult r = run_experiment(cfg, out);
      if (r.rate.points > 0) print_rate(r.rate);
      for (const auto& p : r.written) std::printf("wrote %s\n", p.c_str());
    } else if (*repro) {
      for (const auto& p : reproduce(target, out)) std::printf("wrote %s\n", p.c_str());
    } else if (*val) {
      const ExperimentConfig cfg = load_config(config_path);
      validate_config(cfg);
      std::printf("ok: %s\n", cfg.name.c_str());
    } else if (*rate) {
      const auto [lo, hi] = parse_window(window);
      const auto rows = parse_csv(csv_path);
      std::vector<double> t, v;
      for (const auto& r : rows) {
        t.push_back(r.t);
        v.push_back(r.f_gap);
      }
      print_rate(rate_fit(t, v, mode == "poly" ? RateMode::poly : RateMode::linear, lo, hi));
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
