#pragma once

#include "agripv/optics.hpp"

namespace agripv {

// Cost and discounting parameters. m_l_pv is the module-to-land cost ratio
// M_L = c_M/c_L for the GMPV baseline; kappa is the AV module-technology
// cost relative to GMPV (the land preservation cost).
struct EconParams {
  double c_m_pv = 100.0;  // USD per m2 module, lifetime module-technology cost
  double m_l_pv = 20.0;
  double kappa = 1.38;
  double d = 0.01;  // per-year depreciation rate
  double r = 0.05;  // per-year discount rate
  int lifetime_years = 25;
  double fit_pv = 0.07;  // USD/kWh base feed-in tariff

  double c_l() const { return c_m_pv / m_l_pv; }  // USD per m2 land
  void validate() const;

  static double default_kappa(Orientation av_orientation);  // 1.38 N/S, 1.2 E/W
};

// AV system and its equal-annual-energy GMPV counterpart. Yields are per
// m2 of module area; crop profits are per hectare of AV land per year.
struct SystemPair {
  double av_pitch_over_height = 3.0;
  double gmpv_pitch_over_height = 2.0;
  double av_yield_kwh_m2 = 0.0;
  double gmpv_yield_kwh_m2 = 0.0;
  double crop_profit_usd_ha = 0.0;       // under the array, Y_PAR-scaled
  double open_profit_usd_ha = 0.0;       // same rotation in the open field

  double y_pv() const;   // av/gmpv yield ratio; throws on zero baseline
  double y_par() const;  // crop_profit / open_profit, 1 when both are zero
};

// chi = sum_{k=1..Y} (1-d)^k (1+r)^-k.
double chi(double d, double r, int lifetime_years);

// LCOE = (c_m + c_l * p/h) / (yy * chi) in USD/kWh.
double lcoe(double c_m, double c_l, double p_over_h, double yy_kwh_m2, double chi_value);

struct NormalizedTerms {
  double p_c_norm = 0.0;  // P'_c: lifetime crop profit per m2 module / c_m_pv
  double c_l_norm = 0.0;  // c'_L: extra land cost per m2 module / c_m_pv
};

NormalizedTerms normalized_terms(const SystemPair& pair, const EconParams& econ);

// rho = P'_c - c'_L + Y_PV; AV matches GMPV profit iff kappa <= rho.
double rho(const SystemPair& pair, const EconParams& econ);

// beta = c_m_pv / (yy_av * chi), USD/kWh per unit of rho.
double beta(const SystemPair& pair, const EconParams& econ);

// Feed-in-tariff premium achieving economic equivalence from a zero
// premium: max(0, beta * (kappa - rho)).
double delta_fit_threshold(const SystemPair& pair, const EconParams& econ);

// Minimum relative crop yield for equivalence at the given premium:
// psi = (kappa - y_pv + c'_L - delta_fit/beta) / P'_c_open.
// Throws SimulationError when the open-field profit is zero.
double psi(const SystemPair& pair, const EconParams& econ, double delta_fit);

struct FeasibilityResult {
  double rho = 0.0;
  double kappa = 0.0;
  double p_c_norm = 0.0;
  double c_l_norm = 0.0;
  double psi = 0.0;  // NaN when the scenario has no crops
  double y_par = 1.0;
  double y_pv = 1.0;
  double beta = 0.0;               // USD/kWh
  double delta_fit_applied = 0.0;  // premium already granted
  double delta_fit_th = 0.0;       // remaining premium needed beyond it
  bool feasible_vs_gmpv = false;   // kappa <= rho + delta_fit/beta
  bool feasible_vs_open = false;   // AV profit >= open-field farming profit
};

FeasibilityResult feasibility(const SystemPair& pair, const EconParams& econ,
                              double delta_fit);

}  // namespace agripv
