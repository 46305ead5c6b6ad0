#include "agripv/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "agripv/errors.hpp"

namespace agripv {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::rho: return "rho";
    case Metric::delta_fit_th: return "delta_fit_th";
    case Metric::psi: return "psi";
    case Metric::y_par: return "y_par";
    case Metric::y_pv: return "y_pv";
  }
  return "rho";
}

Metric metric_from_string(std::string_view s) {
  if (s == "rho") return Metric::rho;
  if (s == "delta_fit_th") return Metric::delta_fit_th;
  if (s == "psi") return Metric::psi;
  if (s == "y_par") return Metric::y_par;
  if (s == "y_pv") return Metric::y_pv;
  throw ValidationError("unknown metric '" + std::string(s) + "'");
}

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_num(std::string_view field, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ValidationError("grid file: malformed number in " + what);
  return v;
}

}  // namespace

void write_grid(const SweepGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw SimulationError("cannot write grid file " + path.string());
  out << "# scenario_hash: " << grid.scenario_hash << '\n';
  out << "# metric: " << to_string(grid.metric) << '\n';
  out << "# kappa: " << fmt(grid.kappa) << '\n';
  out << "# orientation: " << to_string(grid.orientation) << '\n';
  for (double ml : grid.ml_axis) out << ',' << fmt(ml);
  out << '\n';
  for (size_t i = 0; i < grid.ph_axis.size(); ++i) {
    out << fmt(grid.ph_axis[i]);
    for (size_t j = 0; j < grid.ml_axis.size(); ++j) out << ',' << fmt(grid.at(i, j));
    out << '\n';
  }
  if (!out) throw SimulationError("write failed for grid file " + path.string());
}

SweepGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SimulationError("cannot open grid file " + path.string());
  SweepGrid grid;
  std::string line;
  bool have_axis = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      size_t colon = body.find(':');
      if (colon == std::string::npos) continue;
      auto strip = [](std::string s) {
        size_t b = s.find_first_not_of(' ');
        size_t e = s.find_last_not_of(' ');
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      std::string key = strip(body.substr(0, colon));
      std::string value = strip(body.substr(colon + 1));
      if (key == "scenario_hash") grid.scenario_hash = value;
      else if (key == "metric") grid.metric = metric_from_string(value);
      else if (key == "kappa") grid.kappa = parse_num(value, "kappa");
      else if (key == "orientation") grid.orientation = orientation_from_string(value);
      continue;
    }
    std::vector<std::string> fields;
    std::string item;
    std::istringstream ss(line);
    while (std::getline(ss, item, ',')) fields.push_back(item);
    if (!have_axis) {
      if (fields.size() < 2 || !fields[0].empty())
        throw ValidationError("grid file: first data row must start with an empty cell");
      for (size_t j = 1; j < fields.size(); ++j)
        grid.ml_axis.push_back(parse_num(fields[j], "M_L axis"));
      have_axis = true;
      continue;
    }
    if (fields.size() != grid.ml_axis.size() + 1)
      throw ValidationError("grid file: row width does not match the M_L axis");
    grid.ph_axis.push_back(parse_num(fields[0], "p/h axis"));
    for (size_t j = 1; j < fields.size(); ++j)
      grid.cells.push_back(parse_num(fields[j], "cell"));
  }
  if (!have_axis || grid.ph_axis.empty())
    throw ValidationError("grid file: missing axes or cells");
  return grid;
}

SweepEngine::SweepEngine(const Scenario& scenario, int threads)
    : scenario_(scenario), threads_(threads) {
  scenario_.validate();
  weather_ = resolve_weather(scenario_);
  suns_ = sun_table(scenario_.site, weather_);
  gmpv_yield_kwh_m2_ = simulate_annual(scenario_.site, scenario_.gmpv, weather_,
                                       scenario_.module, nullptr, scenario_.ground_points,
                                       &suns_)
                           .yield_kwh_m2;
}

const SweepEngine::PhOptics& SweepEngine::ph_optics(double ph) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(ph);
    if (it != cache_.end()) return it->second;
  }
  ArrayGeometry geom = scenario_.av;
  geom.pitch_over_height = ph;
  const CropRotation* rotation = scenario_.rotation.seasons.empty() ? nullptr : &scenario_.rotation;
  AnnualSimResult sim = simulate_annual(scenario_.site, geom, weather_, scenario_.module,
                                        rotation, scenario_.ground_points, &suns_);
  PhOptics result;
  result.yield_kwh_m2 = sim.yield_kwh_m2;
  for (double y : sim.season_y_par) result.season_yields.push_back({y});
  result.crop_profit_usd_ha =
      rotation ? rotation_profit(*rotation, result.season_yields) : 0.0;

  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(ph, std::move(result)).first->second;
}

SystemPair SweepEngine::make_pair(double ph) {
  const PhOptics& opt = ph_optics(ph);
  SystemPair pair;
  pair.av_pitch_over_height = ph;
  pair.gmpv_pitch_over_height = scenario_.gmpv.pitch_over_height;
  pair.av_yield_kwh_m2 = opt.yield_kwh_m2;
  pair.gmpv_yield_kwh_m2 = gmpv_yield_kwh_m2_;
  pair.crop_profit_usd_ha = opt.crop_profit_usd_ha;
  double open = 0.0;
  for (const CropSeason& s : scenario_.rotation.seasons) open += s.open_profit_usd_ha;
  pair.open_profit_usd_ha = open;
  return pair;
}

FeasibilityResult SweepEngine::cell(double ph, double ml) {
  EconParams econ = scenario_.econ;
  econ.m_l_pv = ml;
  return feasibility(make_pair(ph), econ, scenario_.delta_fit);
}

void SweepEngine::precompute(std::span<const double> phs) {
  std::vector<double> todo;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (double ph : phs)
      if (!cache_.count(ph)) todo.push_back(ph);
  }
  if (todo.empty()) return;
  int n_threads = threads_ > 0 ? threads_ : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(todo.size())));
  if (n_threads == 1) {
    for (double ph : todo) ph_optics(ph);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (size_t i = next.fetch_add(1); i < todo.size(); i = next.fetch_add(1))
          ph_optics(todo[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<SweepGrid> SweepEngine::run(const SweepSettings& settings) {
  settings.validate();
  precompute(settings.ph_axis);

  std::vector<SweepGrid> grids;
  for (const std::string& name : settings.metrics) {
    Metric metric = metric_from_string(name);
    SweepGrid grid;
    grid.metric = metric;
    grid.ph_axis = settings.ph_axis;
    grid.ml_axis = settings.ml_axis;
    grid.scenario_hash = scenario_.hash_hex();
    grid.kappa = scenario_.econ.kappa;
    grid.orientation = scenario_.av.orientation;
    grid.cells.reserve(settings.ph_axis.size() * settings.ml_axis.size());
    for (double ph : settings.ph_axis) {
      for (double ml : settings.ml_axis) {
        FeasibilityResult f;
        try {
          f = cell(ph, ml);
        } catch (const Error& e) {
          throw SimulationError("sweep cell (p/h=" + fmt(ph) + ", M_L=" + fmt(ml) +
                                "): " + e.what());
        }
        double v = 0.0;
        switch (metric) {
          case Metric::rho: v = f.rho; break;
          case Metric::delta_fit_th: v = f.delta_fit_th; break;
          case Metric::psi: v = f.psi; break;
          case Metric::y_par: v = f.y_par; break;
          case Metric::y_pv: v = f.y_pv; break;
        }
        if (std::isnan(v))
          throw SimulationError("sweep cell (p/h=" + fmt(ph) + ", M_L=" + fmt(ml) +
                                "): metric " + name + " is undefined for this scenario");
        grid.cells.push_back(v);
      }
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

std::vector<std::optional<double>> SweepEngine::feasibility_boundary(
    std::span<const double> ph_axis, std::span<const double> ml_axis) {
  if (ml_axis.size() < 2) throw ValidationError("feasibility_boundary needs an M_L axis");
  precompute(ph_axis);
  double kappa = scenario_.econ.kappa;

  std::vector<std::optional<double>> boundary;
  for (double ph : ph_axis) {
    auto rho_at = [&](double ml) {
      EconParams econ = scenario_.econ;
      econ.m_l_pv = ml;
      return rho(make_pair(ph), econ);
    };
    std::optional<double> found;
    if (rho_at(ml_axis.front()) >= kappa) {
      found = ml_axis.front();
    } else {
      for (size_t j = 1; j < ml_axis.size(); ++j) {
        if (rho_at(ml_axis[j]) < kappa) continue;
        double lo = ml_axis[j - 1];
        double hi = ml_axis[j];
        for (int iter = 0; iter < 60 && hi - lo > 1e-7; ++iter) {
          double mid = 0.5 * (lo + hi);
          (rho_at(mid) >= kappa ? hi : lo) = mid;
        }
        found = hi;
        break;
      }
    }
    boundary.push_back(found);
  }
  return boundary;
}

std::vector<std::vector<double>> SweepEngine::min_fit_percent(std::span<const double> ml_list,
                                                              std::span<const double> ph_list) {
  if (!(scenario_.econ.fit_pv > 0.0))
    throw SimulationError("min_fit_percent requires a positive base feed-in tariff");
  precompute(ph_list);
  std::vector<std::vector<double>> table;
  for (double ml : ml_list) {
    std::vector<double> row;
    for (double ph : ph_list) {
      EconParams econ = scenario_.econ;
      econ.m_l_pv = ml;
      row.push_back(100.0 * delta_fit_threshold(make_pair(ph), econ) / econ.fit_pv);
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace agripv
