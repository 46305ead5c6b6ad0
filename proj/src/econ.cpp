#include "agripv/econ.hpp"

#include <cmath>
#include <limits>

#include "agripv/errors.hpp"

namespace agripv {

void EconParams::validate() const {
  if (!(c_m_pv > 0.0)) throw ValidationError("econ.c_m_pv must be > 0");
  if (!(m_l_pv > 0.0)) throw ValidationError("econ.m_l_pv must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("econ.kappa must be > 0");
  if (!(d >= 0.0 && d < 1.0)) throw ValidationError("econ.d must be in [0, 1)");
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError("econ.r must be in [0, 1)");
  if (lifetime_years < 1) throw ValidationError("econ.lifetime_years must be >= 1");
  if (!(fit_pv >= 0.0)) throw ValidationError("econ.fit_pv must be >= 0");
}

double EconParams::default_kappa(Orientation av_orientation) {
  return av_orientation == Orientation::ew_vertical ? 1.2 : 1.38;
}

double SystemPair::y_pv() const {
  if (!(gmpv_yield_kwh_m2 > 0.0))
    throw SimulationError("GMPV yield is zero; Y_PV baseline is degenerate");
  return av_yield_kwh_m2 / gmpv_yield_kwh_m2;
}

double SystemPair::y_par() const {
  if (open_profit_usd_ha <= 0.0) return 1.0;
  return crop_profit_usd_ha / open_profit_usd_ha;
}

double chi(double d, double r, int lifetime_years) {
  double q = (1.0 - d) / (1.0 + r);
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k <= lifetime_years; ++k) {
    term *= q;
    sum += term;
  }
  return sum;
}

double lcoe(double c_m, double c_l, double p_over_h, double yy_kwh_m2, double chi_value) {
  double denom = yy_kwh_m2 * chi_value;
  if (!(denom > 0.0)) throw SimulationError("LCOE denominator yy * chi is zero");
  return (c_m + c_l * p_over_h) / denom;
}

namespace {

constexpr double kM2PerHa = 1e4;

// P'_c for an arbitrary per-hectare annual profit on the AV land.
double normalized_profit(double profit_usd_ha, const SystemPair& pair,
                         const EconParams& econ, double chi_value) {
  return profit_usd_ha * pair.av_pitch_over_height * chi_value / (econ.c_m_pv * kM2PerHa);
}

}  // namespace

NormalizedTerms normalized_terms(const SystemPair& pair, const EconParams& econ) {
  econ.validate();
  double chi_value = chi(econ.d, econ.r, econ.lifetime_years);
  NormalizedTerms t;
  t.c_l_norm =
      (pair.av_pitch_over_height - pair.y_pv() * pair.gmpv_pitch_over_height) / econ.m_l_pv;
  t.p_c_norm = normalized_profit(pair.crop_profit_usd_ha, pair, econ, chi_value);
  return t;
}

double rho(const SystemPair& pair, const EconParams& econ) {
  NormalizedTerms t = normalized_terms(pair, econ);
  return t.p_c_norm - t.c_l_norm + pair.y_pv();
}

double beta(const SystemPair& pair, const EconParams& econ) {
  if (!(pair.av_yield_kwh_m2 > 0.0))
    throw SimulationError("AV yield is zero; beta is degenerate");
  return econ.c_m_pv / (pair.av_yield_kwh_m2 * chi(econ.d, econ.r, econ.lifetime_years));
}

double delta_fit_threshold(const SystemPair& pair, const EconParams& econ) {
  return std::max(0.0, beta(pair, econ) * (econ.kappa - rho(pair, econ)));
}

double psi(const SystemPair& pair, const EconParams& econ, double delta_fit) {
  if (!(pair.open_profit_usd_ha > 0.0))
    throw SimulationError("psi requires a positive open-field crop profit");
  double chi_value = chi(econ.d, econ.r, econ.lifetime_years);
  NormalizedTerms t = normalized_terms(pair, econ);
  double p_c_open_norm = normalized_profit(pair.open_profit_usd_ha, pair, econ, chi_value);
  return (econ.kappa - pair.y_pv() + t.c_l_norm - delta_fit / beta(pair, econ)) /
         p_c_open_norm;
}

FeasibilityResult feasibility(const SystemPair& pair, const EconParams& econ,
                              double delta_fit) {
  econ.validate();
  double chi_value = chi(econ.d, econ.r, econ.lifetime_years);
  NormalizedTerms t = normalized_terms(pair, econ);

  FeasibilityResult res;
  res.kappa = econ.kappa;
  res.p_c_norm = t.p_c_norm;
  res.c_l_norm = t.c_l_norm;
  res.y_pv = pair.y_pv();
  res.y_par = pair.y_par();
  res.rho = t.p_c_norm - t.c_l_norm + res.y_pv;
  res.beta = beta(pair, econ);
  res.delta_fit_applied = delta_fit;

  // One inequality, three reported forms: kappa <= rho + dfit/beta, the
  // remaining premium hitting zero, and y_par >= psi.
  double missing = res.beta * (econ.kappa - res.rho) - delta_fit;
  res.feasible_vs_gmpv = missing <= 0.0;
  res.delta_fit_th = std::max(0.0, missing);
  res.psi = pair.open_profit_usd_ha > 0.0 ? psi(pair, econ, delta_fit)
                                          : std::numeric_limits<double>::quiet_NaN();

  // Eq-(2)-style check: lifetime AV profit vs keeping the land in open
  // agriculture, per m2 of module area.
  double fit_av = econ.fit_pv + delta_fit;
  double ph = pair.av_pitch_over_height;
  double av_profit = fit_av * pair.av_yield_kwh_m2 * chi_value +
                     pair.crop_profit_usd_ha * ph * chi_value / kM2PerHa -
                     (econ.kappa * econ.c_m_pv + econ.c_l() * ph);
  double open_profit = pair.open_profit_usd_ha * ph * chi_value / kM2PerHa;
  res.feasible_vs_open = av_profit >= open_profit;
  return res;
}

}  // namespace agripv
