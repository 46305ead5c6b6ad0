#include "agripv/simulate.hpp"

#include <cmath>

#include "agripv/errors.hpp"

namespace agripv {

std::vector<SunPosition> sun_table(const Site& site, const WeatherSeries& weather) {
  std::vector<SunPosition> suns;
  suns.reserve(weather.samples.size());
  for (const WeatherSample& s : weather.samples) suns.push_back(sun_position(site, s.time));
  return suns;
}

AnnualSimResult simulate_annual(const Site& site, const ArrayGeometry& geom,
                                const WeatherSeries& weather, const ModuleParams& params,
                                const CropRotation* rotation, int n_ground_points,
                                const std::vector<SunPosition>* suns) {
  weather.validate();
  params.validate();
  if (rotation) rotation->validate();

  OpticalModel model(geom, n_ground_points);
  const int n = model.n_points();

  std::vector<SunPosition> local_suns;
  if (!suns) {
    local_suns = sun_table(site, weather);
    suns = &local_suns;
  }

  // season index per calendar month, -1 when no season is active
  int month_season[13];
  for (int m = 1; m <= 12; ++m) month_season[m] = -1;
  if (rotation) {
    for (size_t si = 0; si < rotation->seasons.size(); ++si) {
      for (int m = 1; m <= 12; ++m)
        if (rotation->seasons[si].contains_month(m)) month_season[m] = static_cast<int>(si);
    }
  }

  size_t n_seasons = rotation ? rotation->seasons.size() : 0;
  std::vector<double> av_par(n_seasons, 0.0);    // sum over hours of point-mean clipped PAR
  std::vector<double> open_par(n_seasons, 0.0);  // sum over hours of clipped open-field PAR

  double poa_sum = 0.0;  // front + bifaciality * back, W h / m2
  double ground_sum = 0.0;
  double open_sum = 0.0;

  ModuleIrradiance mi;
  GroundLightProfile gp;
  for (size_t h = 0; h < weather.samples.size(); ++h) {
    const WeatherSample& ws = weather.samples[h];
    ProjectedSun psun = project_sun((*suns)[h], geom.orientation);

    if (ws.dni_w_m2 <= 0.0 && ws.dhi_w_m2 <= 0.0) continue;

    model.step(psun, ws.dni_w_m2, ws.dhi_w_m2, mi, gp);
    poa_sum += mi.front_w_m2 + params.bifaciality * mi.back_w_m2;

    double open_ghi = ws.dni_w_m2 * std::max(0.0, psun.z) + ws.dhi_w_m2;
    open_sum += open_ghi;
    double ground_mean = 0.0;
    for (int i = 0; i < n; ++i) ground_mean += gp.direct_w_m2[i] + gp.diffuse_w_m2[i];
    ground_mean /= n;
    ground_sum += ground_mean;

    int si = month_season[ws.time.month];
    if (si >= 0) {
      double sat = rotation->seasons[si].par_saturation_umol;
      double open = std::min(par_from_irradiance(open_ghi), sat);
      double av = 0.0;
      for (int i = 0; i < n; ++i) {
        double par = par_from_irradiance(gp.direct_w_m2[i] + gp.diffuse_w_m2[i]);
        av += std::min(par, sat);
      }
      open_par[si] += open;
      av_par[si] += av / n;
    }
  }

  AnnualSimResult out;
  out.yield_kwh_m2 = params.performance_ratio * params.efficiency * poa_sum / 1000.0;
  out.mean_ground_wh_m2 = ground_sum;
  out.open_field_wh_m2 = open_sum;
  out.season_y_par.resize(n_seasons);
  for (size_t si = 0; si < n_seasons; ++si) {
    if (open_par[si] <= 0.0) {
      throw SimulationError("season '" + rotation->seasons[si].name +
                            "' receives no open-field PAR; degenerate weather input");
    }
    out.season_y_par[si] = av_par[si] / open_par[si];
  }
  return out;
}

}  // namespace agripv
