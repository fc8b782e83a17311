#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "wagetheft/wagetheft.hpp"

namespace wt = wagetheft;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceFlags {
  std::optional<double> price, y_high, y_low, u, k, q, sigma, p, gamma;
};

void add_instance_flags(CLI::App& app, InstanceFlags& f) {
  app.add_option("--price", f.price, "Output price P");
  app.add_option("--yh", f.y_high, "High output yH");
  app.add_option("--yl", f.y_low, "Low output yL");
  app.add_option("--u", f.u, "Reservation utility u");
  app.add_option("--k", f.k, "Cost scale k");
  app.add_option("--q", f.q, "Cost growth q");
  app.add_option("--sigma", f.sigma, "Penalty scale sigma");
  app.add_option("--p", f.p, "Penalty growth p");
  app.add_option("--gamma", f.gamma, "Inspection rate gamma");
}

/// Defaults, then the JSON config, then explicit flags.
wt::Instance build_instance(const InstanceFlags& f, const std::string& config) {
  wt::Instance in{{10, 50, 30, 200, 0.2}, {0.1, 3}, {1, 1.1}};
  if (!config.empty()) in = wt::instance_from_json(wt::load_json_file(config), in);
  if (f.price) in.market.price = *f.price;
  if (f.y_high) in.market.y_high = *f.y_high;
  if (f.y_low) in.market.y_low = *f.y_low;
  if (f.u) in.market.reservation_utility = *f.u;
  if (f.k) in.cost.k = *f.k;
  if (f.q) in.cost.q = *f.q;
  if (f.sigma) in.penalty.sigma = *f.sigma;
  if (f.p) in.penalty.p = *f.p;
  if (f.gamma) in.market.inspection_rate = *f.gamma;
  in.validate();
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw wt::ValidationError("output", "cannot write '" + path + "'");
  return os;
}

void print_report(const wt::Report& rep) {
  std::cout << rep.to_text();
  if (!rep.passed()) throw CheckFailure("one or more checks failed");
}

std::string num(double x) { return wt::format_number(x); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal contracts with wage theft"};
  app.require_subcommand(1);

  InstanceFlags flags;
  std::string config, output;
  bool verbose = false;
  std::optional<std::uint64_t> seed;
  const auto common = [&](CLI::App* sub) {
    add_instance_flags(*sub, flags);
    sub->add_option("--config", config, "JSON file with instance parameters");
    sub->add_option("--output", output, "Machine-readable output file");
    sub->add_flag("--verbose", verbose, "Print extra detail");
    sub->add_option("--seed", seed, "Seed for sampled runs");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Solve the one-shot contract problem");
  common(solve_cmd);
  bool grid_check = false;
  solve_cmd->add_flag("--grid-check", grid_check, "Cross-check on a dense effort grid");

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the solver with brute force");
  common(oracle_cmd);
  std::optional<double> w_max;
  int n_w = 400;
  oracle_cmd->add_option("--w-max", w_max, "Wage grid ceiling");
  oracle_cmd->add_option("--n-w", n_w, "Wage grid points per axis");

  auto* sim_cmd = app.add_subcommand("simulate", "Repeated game against a forecasting worker");
  common(sim_cmd);
  double wh = 0, wl = 0, bh = 0, bl = 0, alpha = 0.5;
  int window = 5, periods = 200;
  std::string rule_name = "last_observation";
  sim_cmd->add_option("--wh", wh, "Promised high wage")->required();
  sim_cmd->add_option("--wl", wl, "Promised low wage")->required();
  sim_cmd->add_option("--bh", bh, "Theft from the high wage");
  sim_cmd->add_option("--bl", bl, "Theft from the low wage");
  sim_cmd->add_option("--rule", rule_name, "Forecast rule")
      ->check(CLI::IsMember({"last_observation", "running_mean", "moving_average",
                             "exponential_smoothing"}));
  sim_cmd->add_option("--window", window, "Moving-average window");
  sim_cmd->add_option("--alpha", alpha, "Smoothing factor");
  sim_cmd->add_option("--periods", periods, "Number of periods");

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep to CSV");
  std::string sweep_config, sweep_output, axis;
  sweep_cmd->add_option("--config", sweep_config, "JSON sweep specification");
  sweep_cmd->add_option("--output", sweep_output, "CSV output file");
  sweep_cmd->add_option("--axis", axis, "Parameter varied within each trend family");
  sweep_cmd->add_flag("--verbose", verbose, "Print extra detail");

  auto* audit_cmd = app.add_subcommand("dominance-audit", "Honest-twin dominance audit");
  common(audit_cmd);
  int samples = 500;
  audit_cmd->add_option("--samples", samples, "Number of random strategies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (solve_cmd->parsed()) {
      const wt::Instance in = build_instance(flags, config);
      const wt::SolveResult r = wt::solve(in, {.grid_check = grid_check});
      const auto& c = r.contract;
      std::cout << "a* " << num(c.effort) << '\n'
                << "wH " << num(c.w_high) << '\n'
                << "wL " << num(c.w_low) << '\n'
                << "bH " << num(c.b_high) << '\n'
                << "bL " << num(c.b_low) << '\n'
                << "beta " << num(r.beta) << '\n'
                << "profit " << num(r.profit) << '\n'
                << "worker_utility " << num(r.worker_utility) << '\n';
      if (verbose) {
        for (const auto& s : r.segments)
          std::cout << "segment [" << num(s.lo) << ", " << num(s.hi) << "] a=" << num(s.effort)
                    << " g=" << num(s.profit) << " local_maxima=" << s.local_maxima << '\n';
      }
      if (!output.empty()) open_output(output) << wt::to_json(in, r).dump(2) << '\n';
      const wt::Report rep = wt::check_solve_result(in, r);
      if (verbose || !rep.passed()) print_report(rep);
    } else if (oracle_cmd->parsed()) {
      const wt::Instance in = build_instance(flags, config);
      wt::GridSpec grid;
      grid.w_max = w_max.value_or(
          2.0 * (in.market.reservation_utility + in.market.revenue_gap()));
      grid.n_w = n_w;
      const wt::Report rep = wt::oracle_report(in, grid);
      if (!output.empty()) {
        wt::json j = wt::json::array();
        for (const auto& c : rep.checks)
          j.push_back({{"name", c.name}, {"passed", c.passed}, {"max_dev", c.deviation}});
        open_output(output) << j.dump(2) << '\n';
      }
      print_report(rep);
    } else if (sim_cmd->parsed()) {
      const wt::Instance in = build_instance(flags, config);
      wt::ForecastRule rule;
      if (rule_name == "running_mean") rule.kind = wt::RunningMean{};
      else if (rule_name == "moving_average") rule.kind = wt::MovingAverage{window};
      else if (rule_name == "exponential_smoothing") rule.kind = wt::ExponentialSmoothing{alpha};
      wt::SimOptions opt;
      opt.seed = seed;
      const wt::FixedStrategy s{wh, wl, bh, bl};
      const wt::SimTrace tr = wt::simulate(in, s, rule, periods, opt);
      std::cout << "rule " << rule.name() << '\n'
                << "converged " << (tr.converged ? "yes" : "no") << '\n';
      if (tr.periods_to_converge) std::cout << "periods_to_converge " << *tr.periods_to_converge << '\n';
      std::cout << "limit_profit " << num(tr.limit_profit) << '\n'
                << "tail_mean_profit " << num(tr.mean_profit_tail(50)) << '\n';
      if (!output.empty()) {
        auto os = open_output(output);
        wt::write_trace_csv(os, tr);
      } else if (verbose) {
        wt::write_trace_csv(std::cout, tr);
      }
    } else if (sweep_cmd->parsed()) {
      wt::SweepSpec spec;
      if (!sweep_config.empty()) spec = wt::sweep_spec_from_json(wt::load_json_file(sweep_config));
      if (!axis.empty()) spec.axis = axis;
      if (!sweep_output.empty()) spec.output = sweep_output;
      spec.validate();
      const auto rows = wt::run_sweep(spec);
      std::size_t errors = 0;
      for (const auto& r : rows) errors += !r.error.empty();
      if (spec.output.empty()) {
        wt::write_sweep_csv(std::cout, rows);
      } else {
        auto os = open_output(spec.output);
        wt::write_sweep_csv(os, rows);
        std::cout << "rows " << rows.size() << '\n' << "error_rows " << errors << '\n';
      }
      if (!spec.axis.empty()) {
        const wt::Report rep = wt::qualitative_checks(rows, spec.axis);
        (spec.output.empty() ? std::cerr : std::cout) << rep.to_text();
        if (!rep.passed()) throw CheckFailure("trend checks failed");
      }
    } else if (audit_cmd->parsed()) {
      const wt::Instance in = build_instance(flags, config);
      print_report(wt::dominance_audit(in, samples, seed.value_or(1)));
    }
  } catch (const wt::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const CheckFailure& e) {
    std::cerr << "check failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
