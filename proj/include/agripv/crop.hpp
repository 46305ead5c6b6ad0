#pragma once

#include <span>
#include <string>
#include <vector>

#include "agripv/optics.hpp"
#include "agripv/weather.hpp"

namespace agripv {

struct CropSeason {
  std::string name;
  int start_month = 1;  // 1..12, wrapping allowed (e.g. Oct..Mar)
  int end_month = 12;
  double open_profit_usd_ha = 0.0;      // open-field profit per season
  double par_saturation_umol = 1000.0;  // light saturation point

  void validate() const;
  bool contains_month(int month) const;
  int n_months() const;
};

// Ordered seasons covering disjoint month ranges of the year.
struct CropRotation {
  std::vector<CropSeason> seasons;

  void validate() const;  // rejects overlapping months

  static CropRotation khanewal_high_value();
  static CropRotation khanewal_low_value();
};

// PAR fraction of shortwave (0.45) times energy-to-photon conversion
// (4.57 umol/J): W/m2 -> umol m-2 s-1.
double par_from_irradiance(double ghi_w_m2);

// Daily useful PAR in mol m-2 day-1: hourly PAR clipped at the saturation
// point and integrated, sum(min(PAR, sat)) * 3600 / 1e6.
double daily_useful_par(std::span<const double> hourly_par_umol, double saturation_umol);

struct SeasonalYield {
  double y_par = 1.0;  // in [0, 1]
};

// Y_PAR for one season: ratio of means (over days and ground positions) of
// daily useful PAR under the array to the open-field value. Throws
// SimulationError when the open-field PAR integral is zero.
SeasonalYield seasonal_y_par(const Site& site, const ArrayGeometry& geom,
                             const WeatherSeries& weather, const CropSeason& season,
                             int n_points = 100);

// sum over seasons of y_par * open_profit, USD/ha/yr.
double rotation_profit(const CropRotation& rotation, std::span<const SeasonalYield> yields);

}  // namespace agripv
