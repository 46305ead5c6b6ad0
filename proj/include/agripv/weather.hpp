#pragma once

#include <filesystem>
#include <vector>

#include "agripv/solar.hpp"

namespace agripv {

inline constexpr int kHoursPerYear = 8760;

struct WeatherSample {
  Timestamp time;
  double dni_w_m2 = 0.0;  // direct normal irradiance
  double dhi_w_m2 = 0.0;  // diffuse horizontal irradiance
};

// One representative non-leap year of hourly samples.
struct WeatherSeries {
  std::vector<WeatherSample> samples;

  // Enforces: 8760 samples, consecutive hourly timestamps starting
  // Jan 1 00:00 of a non-leap year, non-negative irradiance.
  void validate() const;
};

// Reads the plain-text weather table:
//   header "timestamp,dni_w_m2,dhi_w_m2", then 8760 data rows,
//   timestamps formatted YYYY-MM-DDTHH:00 in local standard time.
// Errors report the offending data row number.
WeatherSeries load_weather(const std::filesystem::path& path);

// Writes the same format; numbers use shortest round-trip formatting so
// load_weather(save_weather(s)) is bit-identical for finite values.
void save_weather(const WeatherSeries& series, const std::filesystem::path& path);

// Synthetic clear-sky model, used when no measured weather is available.
// DNI = e0 * 0.7^(AM^am_exponent) with AM = 1/sin(elevation) clamped at
// low sun; DHI = dhi_over_dni_sin * DNI * sin(elevation).
struct ClearSkyParams {
  double e0_w_m2 = 1361.0;
  double am_exponent = 0.678;
  double dhi_over_dni_sin = 0.1;
  double min_elevation_deg = 2.0;  // air-mass clamp
  int year = 2019;                 // must be non-leap

  void validate() const;
};

// DNI at a given sun elevation under the clear-sky model (0 when the sun
// is at or below the horizon).
double clearsky_dni(double elevation_deg, const ClearSkyParams& params = {});

WeatherSeries clearsky_weather(const Site& site, const ClearSkyParams& params = {});

}  // namespace agripv
