#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agripv/econ.hpp"
#include "agripv/scenario.hpp"
#include "agripv/simulate.hpp"

namespace agripv {

enum class Metric { rho, delta_fit_th, psi, y_par, y_pv };

const char* to_string(Metric m);
Metric metric_from_string(std::string_view s);

struct SweepGrid {
  Metric metric = Metric::rho;
  std::vector<double> ph_axis;
  std::vector<double> ml_axis;
  std::vector<double> cells;  // row-major [i_ph * n_ml + j_ml]
  std::string scenario_hash;
  double kappa = 0.0;
  Orientation orientation = Orientation::ns_tilted;

  double at(size_t i_ph, size_t j_ml) const { return cells[i_ph * ml_axis.size() + j_ml]; }
};

// Comma-separated grid table: '#'-prefixed metadata, then the M_L axis as
// the first row and p/h values in the first column. Numbers are written in
// shortest round-trip form so read_grid(write_grid(g)) is exact.
void write_grid(const SweepGrid& grid, const std::filesystem::path& path);
SweepGrid read_grid(const std::filesystem::path& path);

// Evaluates feasibility metrics over a (p/h, M_L) design grid. Optical and
// crop results are computed once per p/h value (they do not depend on M_L)
// and cached; economics are evaluated per cell. Cells are pure functions of
// the scenario and coordinates, so any cell can be recomputed in isolation.
class SweepEngine {
 public:
  explicit SweepEngine(const Scenario& scenario, int threads = 0);

  const Scenario& scenario() const { return scenario_; }
  double gmpv_yield() const { return gmpv_yield_kwh_m2_; }

  // AV simulation outputs for one p/h (cached, thread-safe).
  struct PhOptics {
    double yield_kwh_m2 = 0.0;
    std::vector<SeasonalYield> season_yields;
    double crop_profit_usd_ha = 0.0;
  };
  const PhOptics& ph_optics(double ph);

  SystemPair make_pair(double ph);
  FeasibilityResult cell(double ph, double ml);

  std::vector<SweepGrid> run(const SweepSettings& settings);

  // Per p/h column: minimal M_L with rho >= kappa, refined by bisection on
  // the exact model; nullopt when the column never reaches kappa.
  std::vector<std::optional<double>> feasibility_boundary(std::span<const double> ph_axis,
                                                          std::span<const double> ml_axis);

  // 100 * delta_fit_threshold / fit_pv for each (M_L, p/h) pair.
  std::vector<std::vector<double>> min_fit_percent(std::span<const double> ml_list,
                                                   std::span<const double> ph_list);

 private:
  void precompute(std::span<const double> phs);

  Scenario scenario_;
  WeatherSeries weather_;
  std::vector<SunPosition> suns_;
  double gmpv_yield_kwh_m2_ = 0.0;
  int threads_;
  std::mutex mutex_;
  std::map<double, PhOptics> cache_;
};

}  // namespace agripv
