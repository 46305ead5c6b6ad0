// Command-line front end: scenario-driven feasibility reports, design-space
// sweeps, feed-in-tariff threshold tables, tilt optimization, and the
// embedded oracle validation suite.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "agripv/energy.hpp"
#include "agripv/errors.hpp"
#include "agripv/oracles.hpp"
#include "agripv/scenario.hpp"
#include "agripv/sweep.hpp"

namespace {

using agripv::FeasibilityResult;
using agripv::Scenario;
using agripv::SweepEngine;
using json = nlohmann::ordered_json;

std::string round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json feasibility_json(const Scenario& sc, const FeasibilityResult& f) {
  json j;
  j["scenario"] = sc.name;
  j["scenario_hash"] = sc.hash_hex();
  j["orientation"] = agripv::to_string(sc.av.orientation);
  j["pitch_over_height"] = sc.av.pitch_over_height;
  j["m_l_pv"] = sc.econ.m_l_pv;
  j["kappa"] = f.kappa;
  j["rho"] = f.rho;
  j["p_c_norm"] = f.p_c_norm;
  j["c_l_norm"] = f.c_l_norm;
  j["y_pv"] = f.y_pv;
  j["y_par"] = f.y_par;
  j["beta_usd_kwh"] = f.beta;
  j["delta_fit_applied_usd_kwh"] = f.delta_fit_applied;
  j["delta_fit_th_usd_kwh"] = f.delta_fit_th;
  j["delta_fit_th_percent"] =
      sc.econ.fit_pv > 0.0 ? 100.0 * f.delta_fit_th / sc.econ.fit_pv : 0.0;
  if (std::isnan(f.psi)) j["psi"] = nullptr;
  else j["psi"] = f.psi;
  j["feasible_vs_gmpv"] = f.feasible_vs_gmpv;
  j["feasible_vs_open"] = f.feasible_vs_open;
  return j;
}

void print_feasibility_table(const Scenario& sc, const FeasibilityResult& f) {
  std::cout << "agrivoltaic feasibility report\n";
  std::cout << "  scenario:         " << sc.name << " (hash " << sc.hash_hex() << ")\n";
  std::cout << "  av array:         " << agripv::to_string(sc.av.orientation) << ", p/h "
            << round6(sc.av.pitch_over_height) << ", tilt " << round6(sc.av.tilt_deg)
            << " deg, clearance " << round6(sc.av.clearance_over_height) << "\n";
  std::cout << "  gmpv baseline:    p/h " << round6(sc.gmpv.pitch_over_height) << ", tilt "
            << round6(sc.gmpv.tilt_deg) << " deg\n";
  std::cout << "  economics:        M_L " << round6(sc.econ.m_l_pv) << ", kappa "
            << round6(f.kappa) << ", c_m_pv " << round6(sc.econ.c_m_pv) << " USD/m2, FIT "
            << round6(sc.econ.fit_pv) << " USD/kWh\n";
  std::cout << "  y_pv:             " << round6(f.y_pv) << "\n";
  std::cout << "  y_par:            " << round6(f.y_par) << "\n";
  std::cout << "  p_c_norm:         " << round6(f.p_c_norm) << "\n";
  std::cout << "  c_l_norm:         " << round6(f.c_l_norm) << "\n";
  std::cout << "  rho:              " << round6(f.rho) << "\n";
  std::cout << "  beta:             " << round6(f.beta) << " USD/kWh\n";
  std::cout << "  delta_fit:        " << round6(f.delta_fit_applied) << " USD/kWh applied, "
            << round6(f.delta_fit_th) << " USD/kWh still needed";
  if (sc.econ.fit_pv > 0.0)
    std::cout << " (" << round6(100.0 * f.delta_fit_th / sc.econ.fit_pv) << "% of FIT)";
  std::cout << "\n";
  std::cout << "  psi:              " << (std::isnan(f.psi) ? "n/a (no crops)" : round6(f.psi))
            << "\n";
  std::cout << "  vs GMPV:          " << (f.feasible_vs_gmpv ? "feasible" : "not feasible")
            << "\n";
  std::cout << "  vs open farming:  " << (f.feasible_vs_open ? "feasible" : "not feasible")
            << "\n";
}

int cmd_feasibility(const std::string& scenario_path, const std::string& format, int threads) {
  Scenario sc = agripv::parse_scenario(scenario_path);
  SweepEngine engine(sc, threads);
  FeasibilityResult f = engine.cell(sc.av.pitch_over_height, sc.econ.m_l_pv);
  if (format == "machine") {
    std::cout << feasibility_json(sc, f).dump(2) << "\n";
  } else {
    print_feasibility_table(sc, f);
  }
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_dir,
              const std::string& format, int threads) {
  Scenario sc = agripv::parse_scenario(scenario_path);
  agripv::SweepSettings settings = sc.sweep ? *sc.sweep : agripv::SweepSettings::defaults();
  SweepEngine engine(sc, threads);
  std::vector<agripv::SweepGrid> grids = engine.run(settings);

  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  json index = json::array();
  for (const agripv::SweepGrid& g : grids) {
    std::filesystem::path file = dir / (sc.name + "_" + agripv::to_string(g.metric) + ".csv");
    agripv::write_grid(g, file);
    if (format == "machine") {
      index.push_back({{"metric", agripv::to_string(g.metric)}, {"file", file.string()}});
    } else {
      std::cout << "wrote " << file.string() << "\n";
    }
  }
  if (format == "machine") std::cout << index.dump(2) << "\n";
  return 0;
}

int cmd_fit_threshold(const std::string& scenario_path, std::vector<double> mls,
                      std::vector<double> phs, const std::string& format, int threads) {
  Scenario sc = agripv::parse_scenario(scenario_path);
  if (mls.empty()) mls = {10.0, 15.0, 20.0, 30.0};
  if (phs.empty()) phs = {2.0, 3.0, 4.0};
  SweepEngine engine(sc, threads);
  std::vector<std::vector<double>> table = engine.min_fit_percent(mls, phs);

  if (format == "machine") {
    json j;
    j["scenario"] = sc.name;
    j["scenario_hash"] = sc.hash_hex();
    j["fit_pv_usd_kwh"] = sc.econ.fit_pv;
    j["ml_axis"] = mls;
    j["ph_axis"] = phs;
    j["delta_fit_th_percent"] = table;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "minimum feed-in-tariff premium for equivalence, % of base FIT ("
            << round6(sc.econ.fit_pv) << " USD/kWh)\n";
  std::cout << "  M_L \\ p/h";
  for (double ph : phs) std::printf("%10.2f", ph);
  std::cout << "\n";
  for (size_t i = 0; i < mls.size(); ++i) {
    std::printf("  %9.1f", mls[i]);
    for (double v : table[i]) std::printf("%10.2f", v);
    std::cout << "\n";
  }
  return 0;
}

int cmd_optimal_tilt(const std::string& scenario_path, double ph_override,
                     const std::string& format) {
  Scenario sc = agripv::parse_scenario(scenario_path);
  agripv::WeatherSeries weather = agripv::resolve_weather(sc);
  double ph = ph_override > 0.0 ? ph_override : sc.gmpv.pitch_over_height;
  double tilt = agripv::find_optimal_tilt(sc.site, weather, ph, sc.module,
                                          sc.gmpv.clearance_over_height, sc.gmpv.albedo);
  if (format == "machine") {
    json j;
    j["scenario"] = sc.name;
    j["pitch_over_height"] = ph;
    j["optimal_tilt_deg"] = tilt;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "optimal fixed tilt for p/h " << round6(ph) << ": " << round6(tilt)
              << " deg\n";
  }
  return 0;
}

int cmd_validate(std::uint64_t seed, std::uint64_t rays, int scenarios,
                 double perturb_kappa, const std::string& format) {
  agripv::ValidationOptions options;
  options.seed = seed;
  options.n_rays = rays;
  options.n_econ_scenarios = scenarios;
  options.kappa_perturbation = perturb_kappa;
  agripv::ValidationReport report = agripv::run_validation(options);
  if (format == "machine") {
    json j;
    j["seed"] = seed;
    j["vf_checked"] = report.vf_checked;
    j["vf_failed"] = report.vf_failed;
    j["cashflow_checked"] = report.cashflow_checked;
    j["cashflow_failed"] = report.cashflow_failed;
    j["cashflow_skipped"] = report.cashflow_skipped;
    j["criterion_checked"] = report.criterion_checked;
    j["criterion_failed"] = report.criterion_failed;
    j["criterion_skipped"] = report.criterion_skipped;
    j["ok"] = report.ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << report.summary();
  }
  return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agripv - agrivoltaic vs ground-mounted PV techno-economic simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::string format = "table";
  std::uint64_t seed = 20240101;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    if (needs_scenario)
      cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "machine"}));
    cmd->add_option("--seed", seed, "random seed for Monte-Carlo oracles");
    cmd->add_option("--threads", threads, "worker threads (0 = auto)");
  };

  CLI::App* feas = app.add_subcommand("feasibility", "evaluate the kappa <= rho criterion");
  add_common(feas, true);

  CLI::App* sweep = app.add_subcommand("sweep", "write metric grids over (p/h, M_L)");
  add_common(sweep, true);

  CLI::App* fit = app.add_subcommand("fit-threshold", "feed-in-tariff premium table");
  add_common(fit, true);
  std::vector<double> mls;
  std::vector<double> phs;
  fit->add_option("--ml", mls, "M_L values (default 10,15,20,30)")->delimiter(',');
  fit->add_option("--ph", phs, "p/h values (default 2,3,4)")->delimiter(',');

  CLI::App* tilt = app.add_subcommand("optimal-tilt", "annual-energy optimal fixed tilt");
  add_common(tilt, true);
  double ph_override = 0.0;
  tilt->add_option("--ph", ph_override, "pitch/height (default: the scenario's GMPV value)");

  CLI::App* validate = app.add_subcommand("validate", "run the embedded oracle suites");
  add_common(validate, false);
  std::uint64_t rays = 1000000;
  int n_scenarios = 1000;
  double perturb_kappa = 0.0;
  validate->add_option("--rays", rays, "Monte-Carlo rays per view factor");
  validate->add_option("--scenarios", n_scenarios, "randomized economic scenarios");
  validate->add_option("--perturb-kappa", perturb_kappa, "")->group("");  // test hook

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(feas)) return cmd_feasibility(scenario_path, format, threads);
    if (app.got_subcommand(sweep)) return cmd_sweep(scenario_path, out_dir, format, threads);
    if (app.got_subcommand(fit))
      return cmd_fit_threshold(scenario_path, mls, phs, format, threads);
    if (app.got_subcommand(tilt)) return cmd_optimal_tilt(scenario_path, ph_override, format);
    if (app.got_subcommand(validate))
      return cmd_validate(seed, rays, n_scenarios, perturb_kappa, format);
  } catch (const agripv::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const agripv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
