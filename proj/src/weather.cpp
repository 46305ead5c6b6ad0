#include "agripv/weather.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "agripv/errors.hpp"

namespace agripv {

void WeatherSeries::validate() const {
  if (static_cast<int>(samples.size()) != kHoursPerYear) {
    throw ValidationError("weather series must have exactly 8760 samples, got " +
                          std::to_string(samples.size()));
  }
  const Timestamp& first = samples.front().time;
  if (is_leap_year(first.year))
    throw ValidationError("weather year " + std::to_string(first.year) +
                          " is a leap year; a 8760-hour representative year must not be");
  Timestamp expected{first.year, 1, 1, 0, 0};
  for (int i = 0; i < kHoursPerYear; ++i) {
    const WeatherSample& s = samples[i];
    if (!(s.time == expected)) {
      throw ValidationError("weather sample " + std::to_string(i + 1) + " has timestamp " +
                            s.time.to_string() + ", expected " + expected.to_string());
    }
    if (!(s.dni_w_m2 >= 0.0) || !(s.dhi_w_m2 >= 0.0) || !std::isfinite(s.dni_w_m2) ||
        !std::isfinite(s.dhi_w_m2)) {
      throw ValidationError("weather sample " + std::to_string(i + 1) +
                            " has negative or non-finite irradiance");
    }
    expected = expected.next_hour();
  }
}

namespace {

double parse_irradiance(std::string_view field, int row, const char* what) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("weather data row " + std::to_string(row) + ": malformed " +
                          what + " value '" + std::string(field) + "'");
  }
  if (!std::isfinite(v))
    throw ValidationError("weather data row " + std::to_string(row) + ": non-finite " +
                          std::string(what));
  if (v < 0.0)
    throw ValidationError("weather data row " + std::to_string(row) + ": negative " +
                          std::string(what) + " rejected");
  return v;
}

std::string format_shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

WeatherSeries load_weather(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SimulationError("cannot open weather file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("weather file is empty: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,dni_w_m2,dhi_w_m2") {
    throw ValidationError("weather file header must be 'timestamp,dni_w_m2,dhi_w_m2', got '" +
                          line + "'");
  }

  WeatherSeries series;
  series.samples.reserve(kHoursPerYear);
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    size_t c1 = line.find(',');
    size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw ValidationError("weather data row " + std::to_string(row) +
                            ": expected 3 comma-separated fields");
    }
    WeatherSample s;
    std::string_view ts(line.data(), c1);
    if (ts.size() != 16 || ts.substr(14, 2) != "00") {
      throw ValidationError("weather data row " + std::to_string(row) + ": timestamp '" +
                            std::string(ts) + "' must be on the hour (YYYY-MM-DDTHH:00)");
    }
    try {
      s.time = Timestamp::parse(ts);
    } catch (const ValidationError& e) {
      throw ValidationError("weather data row " + std::to_string(row) + ": " + e.what());
    }
    s.dni_w_m2 = parse_irradiance(
        std::string_view(line.data() + c1 + 1, c2 - c1 - 1), row, "dni");
    s.dhi_w_m2 = parse_irradiance(
        std::string_view(line.data() + c2 + 1, line.size() - c2 - 1), row, "dhi");
    series.samples.push_back(s);
    if (row > kHoursPerYear) break;
  }
  if (static_cast<int>(series.samples.size()) != kHoursPerYear) {
    throw ValidationError("weather file has " + std::to_string(series.samples.size()) +
                          " data rows, expected exactly 8760");
  }
  series.validate();
  return series;
}

void save_weather(const WeatherSeries& series, const std::filesystem::path& path) {
  series.validate();
  std::ofstream out(path);
  if (!out) throw SimulationError("cannot write weather file " + path.string());
  out << "timestamp,dni_w_m2,dhi_w_m2\n";
  for (const WeatherSample& s : series.samples) {
    out << s.time.to_string() << ',' << format_shortest(s.dni_w_m2) << ','
        << format_shortest(s.dhi_w_m2) << '\n';
  }
  if (!out) throw SimulationError("write failed for weather file " + path.string());
}

void ClearSkyParams::validate() const {
  if (!(e0_w_m2 > 0.0)) throw ValidationError("clearsky e0 must be positive");
  if (!(am_exponent > 0.0)) throw ValidationError("clearsky am_exponent must be positive");
  if (!(dhi_over_dni_sin >= 0.0)) throw ValidationError("clearsky dhi coefficient must be >= 0");
  if (!(min_elevation_deg > 0.0 && min_elevation_deg < 90.0))
    throw ValidationError("clearsky min_elevation must be in (0, 90)");
  if (is_leap_year(year)) throw ValidationError("clearsky year must be a non-leap year");
}

double clearsky_dni(double elevation_deg, const ClearSkyParams& params) {
  if (elevation_deg <= 0.0) return 0.0;
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  double clamped = std::max(elevation_deg, params.min_elevation_deg);
  double air_mass = 1.0 / std::sin(clamped * kDegToRad);
  return params.e0_w_m2 * std::pow(0.7, std::pow(air_mass, params.am_exponent));
}

WeatherSeries clearsky_weather(const Site& site, const ClearSkyParams& params) {
  site.validate();
  params.validate();
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

  WeatherSeries series;
  series.samples.reserve(kHoursPerYear);
  Timestamp t{params.year, 1, 1, 0, 0};
  for (int i = 0; i < kHoursPerYear; ++i) {
    WeatherSample s;
    s.time = t;
    SunPosition sun = sun_position(site, t);
    if (sun.elevation_deg > 0.0) {
      double sin_elev = std::sin(sun.elevation_deg * kDegToRad);
      s.dni_w_m2 = clearsky_dni(sun.elevation_deg, params);
      s.dhi_w_m2 = params.dhi_over_dni_sin * s.dni_w_m2 * sin_elev;
    }
    series.samples.push_back(s);
    t = t.next_hour();
  }
  return series;
}

}  // namespace agripv
