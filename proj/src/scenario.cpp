#include "agripv/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "agripv/errors.hpp"

namespace agripv {

namespace {

const std::set<std::string> kMetricNames = {"rho", "delta_fit_th", "psi", "y_par", "y_pv"};

std::vector<double> make_axis(double lo, double hi, double step, const std::string& what) {
  if (!(step > 0.0) || !(hi >= lo))
    throw ValidationError(what + ": axis needs max >= min and step > 0");
  std::vector<double> axis;
  int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) axis.push_back(lo + i * step);
  return axis;
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

struct KeyValue {
  std::string value;
  bool used = false;
};

using SectionMap = std::map<std::string, std::map<std::string, KeyValue>>;

double to_number(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* b = value.data();
  const char* e = b + value.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v))
    throw ValidationError(key + ": expected a number, got '" + value + "'");
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  double v = to_number(key, value);
  int i = static_cast<int>(std::lround(v));
  if (std::fabs(v - i) > 1e-9)
    throw ValidationError(key + ": expected an integer, got '" + value + "'");
  return i;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ValidationError(key + ": expected true or false, got '" + value + "'");
}

// Pulls typed values out of one section, tracking which keys were consumed.
class Section {
 public:
  Section(SectionMap& map, std::string name) : map_(map), name_(std::move(name)) {}

  bool present() const { return map_.count(name_) > 0; }

  bool has(const std::string& key) const {
    auto it = map_.find(name_);
    return it != map_.end() && it->second.count(key) > 0;
  }

  std::optional<std::string> raw(const std::string& key) {
    auto it = map_.find(name_);
    if (it == map_.end()) return std::nullopt;
    auto kit = it->second.find(key);
    if (kit == it->second.end()) return std::nullopt;
    kit->second.used = true;
    return kit->second.value;
  }

  void number(const std::string& key, double& out) {
    if (auto v = raw(key)) out = to_number(locate(key), *v);
  }
  void integer(const std::string& key, int& out) {
    if (auto v = raw(key)) out = to_int(locate(key), *v);
  }
  void boolean(const std::string& key, bool& out) {
    if (auto v = raw(key)) out = to_bool(locate(key), *v);
  }
  void text(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = *v;
  }

  std::string locate(const std::string& key) const { return name_ + "." + key; }

 private:
  SectionMap& map_;
  std::string name_;
};

SectionMap read_sections(std::string_view text, std::vector<std::string>& order) {
  SectionMap sections;
  std::string current;
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view rawline =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string line = trim(rawline);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("line " + std::to_string(line_no) + ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw ValidationError("line " + std::to_string(line_no) + ": empty section name");
      if (!sections.count(current)) order.push_back(current);
      sections[current];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("line " + std::to_string(line_no) + ": expected key = value");
    if (current.empty())
      throw ValidationError("line " + std::to_string(line_no) + ": key outside any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("line " + std::to_string(line_no) + ": empty key or value");
    if (sections[current].count(key))
      throw ValidationError(current + "." + key + ": duplicate key");
    sections[current][key] = {value, false};
  }
  return sections;
}

void parse_geometry(Section& s, ArrayGeometry& g, bool clearance_given_default) {
  if (auto v = s.raw("orientation")) {
    try {
      g.orientation = orientation_from_string(*v);
    } catch (const ValidationError& e) {
      throw ValidationError(s.locate("orientation") + ": " + e.what());
    }
    // orientation-dependent defaults
    if (g.orientation == Orientation::ew_vertical) {
      g.tilt_deg = 90.0;
      if (!clearance_given_default) g.clearance_over_height = 0.5;
    }
  }
  s.number("tilt", g.tilt_deg);
  s.number("pitch_over_height", g.pitch_over_height);
  s.number("clearance_over_height", g.clearance_over_height);
  s.number("albedo", g.albedo);
}

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

void SweepSettings::validate() const {
  auto check_axis = [](const std::vector<double>& axis, const char* what) {
    if (axis.empty()) throw ValidationError(std::string("sweep: empty ") + what + " axis");
    for (size_t i = 1; i < axis.size(); ++i)
      if (!(axis[i] > axis[i - 1]))
        throw ValidationError(std::string("sweep: ") + what + " axis must be strictly increasing");
  };
  check_axis(ph_axis, "p/h");
  check_axis(ml_axis, "M_L");
  for (double ph : ph_axis)
    if (!(ph >= 1.0)) throw ValidationError("sweep: p/h values must be >= 1");
  for (double ml : ml_axis)
    if (!(ml > 0.0)) throw ValidationError("sweep: M_L values must be > 0");
  if (metrics.empty()) throw ValidationError("sweep: no metrics requested");
  for (const std::string& m : metrics)
    if (!kMetricNames.count(m)) throw ValidationError("sweep.metrics: unknown metric '" + m + "'");
}

SweepSettings SweepSettings::defaults() {
  SweepSettings s;
  s.ph_axis = make_axis(2.0, 6.0, 0.25, "sweep.ph");
  s.ml_axis = make_axis(5.0, 50.0, 2.5, "sweep.ml");
  s.metrics = {"rho", "delta_fit_th", "psi", "y_par", "y_pv"};
  return s;
}

void Scenario::validate() const {
  site.validate();
  if (use_clearsky) {
    clearsky.validate();
  } else if (weather_file.empty()) {
    throw ValidationError("weather: needs exactly one source (clearsky = true or file = ...)");
  }
  gmpv.validate();
  av.validate();
  module.validate();
  rotation.validate();
  econ.validate();
  if (!(delta_fit >= 0.0)) throw ValidationError("econ.delta_fit must be >= 0");
  if (ground_points < 16) throw ValidationError("simulation.ground_points must be >= 16");
  if (sweep) sweep->validate();
}

std::string Scenario::canonical_string() const {
  std::ostringstream os;
  os << "site.latitude=" << fmt(site.latitude_deg) << "\nsite.longitude="
     << fmt(site.longitude_deg) << "\nsite.utc_offset=" << fmt(site.utc_offset_hours) << '\n';
  if (use_clearsky) {
    os << "weather.clearsky=true\nweather.e0=" << fmt(clearsky.e0_w_m2)
       << "\nweather.am_exponent=" << fmt(clearsky.am_exponent)
       << "\nweather.dhi_coefficient=" << fmt(clearsky.dhi_over_dni_sin)
       << "\nweather.min_elevation=" << fmt(clearsky.min_elevation_deg)
       << "\nweather.year=" << clearsky.year << '\n';
  } else {
    os << "weather.file=" << weather_file.string() << '\n';
  }
  auto geom = [&](const char* sec, const ArrayGeometry& g) {
    os << sec << ".orientation=" << to_string(g.orientation) << '\n'
       << sec << ".tilt=" << fmt(g.tilt_deg) << '\n'
       << sec << ".pitch_over_height=" << fmt(g.pitch_over_height) << '\n'
       << sec << ".clearance_over_height=" << fmt(g.clearance_over_height) << '\n'
       << sec << ".albedo=" << fmt(g.albedo) << '\n';
  };
  geom("gmpv", gmpv);
  geom("av", av);
  os << "module.efficiency=" << fmt(module.efficiency)
     << "\nmodule.performance_ratio=" << fmt(module.performance_ratio)
     << "\nmodule.bifaciality=" << fmt(module.bifaciality) << '\n';
  os << "econ.c_m_pv=" << fmt(econ.c_m_pv) << "\necon.m_l_pv=" << fmt(econ.m_l_pv)
     << "\necon.kappa=" << fmt(econ.kappa) << "\necon.d=" << fmt(econ.d)
     << "\necon.r=" << fmt(econ.r) << "\necon.lifetime_years=" << econ.lifetime_years
     << "\necon.fit_pv=" << fmt(econ.fit_pv) << "\necon.delta_fit=" << fmt(delta_fit) << '\n';
  os << "simulation.ground_points=" << ground_points << '\n';
  for (const CropSeason& c : rotation.seasons) {
    os << "crop." << c.name << "=" << c.start_month << ',' << c.end_month << ','
       << fmt(c.open_profit_usd_ha) << ',' << fmt(c.par_saturation_umol) << '\n';
  }
  if (sweep) {
    os << "sweep.ph=";
    for (double v : sweep->ph_axis) os << fmt(v) << ';';
    os << "\nsweep.ml=";
    for (double v : sweep->ml_axis) os << fmt(v) << ';';
    os << "\nsweep.metrics=";
    for (const std::string& m : sweep->metrics) os << m << ';';
    os << '\n';
  }
  return os.str();
}

std::string Scenario::hash_hex() const {
  std::string s = canonical_string();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario parse_scenario_text(std::string_view text, const std::string& name,
                             const std::filesystem::path& base_dir) {
  std::vector<std::string> order;
  SectionMap sections = read_sections(text, order);

  Scenario sc;
  sc.name = name;
  sc.base_dir = base_dir;

  {
    Section s(sections, "site");
    s.number("latitude", sc.site.latitude_deg);
    s.number("longitude", sc.site.longitude_deg);
    s.number("utc_offset", sc.site.utc_offset_hours);
  }
  {
    Section s(sections, "weather");
    if (!s.present())
      throw ValidationError("weather: section is required (clearsky = true or file = ...)");
    bool clearsky_flag = false;
    bool has_clearsky_key = s.has("clearsky");
    if (has_clearsky_key) s.boolean("clearsky", clearsky_flag);
    std::string file;
    s.text("file", file);
    if (!file.empty() && clearsky_flag)
      throw ValidationError("weather: exactly one source allowed, got both clearsky and file");
    if (file.empty() && !clearsky_flag)
      throw ValidationError("weather: needs exactly one source (clearsky = true or file = ...)");
    sc.use_clearsky = clearsky_flag;
    sc.weather_file = file;
    if (sc.use_clearsky) {
      s.number("e0", sc.clearsky.e0_w_m2);
      s.number("am_exponent", sc.clearsky.am_exponent);
      s.number("dhi_coefficient", sc.clearsky.dhi_over_dni_sin);
      s.number("min_elevation", sc.clearsky.min_elevation_deg);
      s.integer("year", sc.clearsky.year);
    }
  }
  {
    Section s(sections, "gmpv");
    parse_geometry(s, sc.gmpv, s.has("clearance_over_height"));
  }
  bool kappa_given = false;
  {
    Section s(sections, "av");
    parse_geometry(s, sc.av, s.has("clearance_over_height"));
    if (sc.av.orientation == Orientation::ns_tilted && !s.has("clearance_over_height") &&
        s.present()) {
      sc.av.clearance_over_height = ArrayGeometry::default_av_ns().clearance_over_height;
    }
  }
  {
    Section s(sections, "module");
    s.number("efficiency", sc.module.efficiency);
    s.number("performance_ratio", sc.module.performance_ratio);
    s.number("bifaciality", sc.module.bifaciality);
  }
  {
    Section s(sections, "econ");
    s.number("c_m_pv", sc.econ.c_m_pv);
    s.number("m_l_pv", sc.econ.m_l_pv);
    kappa_given = s.has("kappa");
    s.number("kappa", sc.econ.kappa);
    s.number("d", sc.econ.d);
    s.number("r", sc.econ.r);
    s.integer("lifetime_years", sc.econ.lifetime_years);
    s.number("fit_pv", sc.econ.fit_pv);
    s.number("delta_fit", sc.delta_fit);
  }
  if (!kappa_given) sc.econ.kappa = EconParams::default_kappa(sc.av.orientation);
  {
    Section s(sections, "simulation");
    s.integer("ground_points", sc.ground_points);
  }

  // crop sections, in file order
  for (const std::string& sec : order) {
    if (sec.rfind("crop.", 0) != 0) continue;
    std::string crop_name = sec.substr(5);
    if (crop_name.empty()) throw ValidationError(sec + ": crop sections need a name");
    Section s(sections, sec);
    CropSeason season;
    season.name = crop_name;
    if (!s.has("start_month") || !s.has("end_month") || !s.has("open_profit"))
      throw ValidationError(sec + ": start_month, end_month and open_profit are required");
    s.integer("start_month", season.start_month);
    s.integer("end_month", season.end_month);
    s.number("open_profit", season.open_profit_usd_ha);
    s.number("par_saturation", season.par_saturation_umol);
    sc.rotation.seasons.push_back(season);
  }

  {
    Section s(sections, "sweep");
    if (s.present()) {
      SweepSettings sw = SweepSettings::defaults();
      double ph_min = 2.0, ph_max = 6.0, ph_step = 0.25;
      double ml_min = 5.0, ml_max = 50.0, ml_step = 2.5;
      s.number("ph_min", ph_min);
      s.number("ph_max", ph_max);
      s.number("ph_step", ph_step);
      s.number("ml_min", ml_min);
      s.number("ml_max", ml_max);
      s.number("ml_step", ml_step);
      sw.ph_axis = make_axis(ph_min, ph_max, ph_step, "sweep.ph");
      sw.ml_axis = make_axis(ml_min, ml_max, ml_step, "sweep.ml");
      if (auto v = s.raw("metrics")) {
        sw.metrics.clear();
        std::string item;
        std::istringstream ss(*v);
        while (std::getline(ss, item, ',')) {
          item = trim(item);
          if (!item.empty()) sw.metrics.push_back(item);
        }
      }
      sc.sweep = sw;
    }
  }

  // strictness: every key must have been consumed by a known reader
  static const std::set<std::string> kKnownSections = {"site", "weather", "gmpv", "av",
                                                       "module", "econ", "simulation", "sweep"};
  for (const auto& [sec, keys] : sections) {
    bool crop = sec.rfind("crop.", 0) == 0;
    if (!crop && !kKnownSections.count(sec))
      throw ValidationError(sec + ": unknown section");
    for (const auto& [key, kv] : keys) {
      if (!kv.used) throw ValidationError(sec + "." + key + ": unknown key");
    }
  }

  try {
    sc.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(e.what()) + " (scenario '" + name + "')");
  }
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SimulationError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return parse_scenario_text(buf.str(), path.stem().string(), dir);
}

WeatherSeries resolve_weather(const Scenario& scenario) {
  if (scenario.use_clearsky) return clearsky_weather(scenario.site, scenario.clearsky);
  std::filesystem::path p = scenario.weather_file;
  if (p.is_relative()) p = scenario.base_dir / p;
  return load_weather(p);
}

}  // namespace agripv
