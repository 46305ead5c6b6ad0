#include "agripv/oracles.hpp"

#include <cmath>
#include <sstream>

#include "agripv/errors.hpp"

namespace agripv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

struct Pt {
  double x, y;
};

// Independent ray/segment test (parametric form, distinct from the
// production cross-product implementation).
bool ray_hits(Pt p, double dx, double dy, Pt a, Pt b) {
  double sx = b.x - a.x;
  double sy = b.y - a.y;
  double denom = dx * sy - dy * sx;
  if (denom == 0.0) return false;
  double qx = a.x - p.x;
  double qy = a.y - p.y;
  double t = (qx * sy - qy * sx) / denom;
  double u = (qx * dy - qy * dx) / denom;
  return t > 1e-9 && u >= 0.0 && u <= 1.0;
}

struct World {
  Pt lo[61];
  Pt hi[61];
  int n = 0;
};

World build_world(const ArrayGeometry& geom, int exclude_row) {
  World w;
  double tilt = geom.tilt_deg * kDegToRad;
  for (int k = -30; k <= 30; ++k) {
    if (k == exclude_row) continue;
    double x0 = k * geom.pitch_over_height;
    w.lo[w.n] = {x0, geom.clearance_over_height};
    w.hi[w.n] = {x0 - std::cos(tilt), geom.clearance_over_height + std::sin(tilt)};
    ++w.n;
  }
  return w;
}

bool escapes_to_sky(const World& w, Pt p, double dx, double dy) {
  if (dy <= 0.0) return false;
  for (int i = 0; i < w.n; ++i)
    if (ray_hits(p, dx, dy, w.lo[i], w.hi[i])) return false;
  return true;
}

double uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

double mc_sky_view_factor(const ArrayGeometry& geom, Face face, std::uint64_t n_rays,
                          std::uint64_t seed) {
  geom.validate();
  World w = build_world(geom, 0);
  double tilt = geom.tilt_deg * kDegToRad;
  Pt a{0.0, geom.clearance_over_height};
  Pt b{-std::cos(tilt), geom.clearance_over_height + std::sin(tilt)};
  double nx = std::sin(tilt);
  double ny = std::cos(tilt);
  if (face == Face::back) {
    nx = -nx;
    ny = -ny;
  }
  double norm_angle = std::atan2(ny, nx);

  std::mt19937_64 rng(seed);
  std::uint64_t sky = 0;
  for (std::uint64_t i = 0; i < n_rays; ++i) {
    double u = uniform(rng);
    Pt p{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
    double phi = std::asin(2.0 * uniform(rng) - 1.0);  // cosine-weighted in 2D
    double ang = norm_angle + phi;
    if (escapes_to_sky(w, p, std::cos(ang), std::sin(ang))) ++sky;
  }
  return static_cast<double>(sky) / static_cast<double>(n_rays);
}

double mc_ground_sky_vf(const ArrayGeometry& geom, double x, std::uint64_t n_rays,
                        std::uint64_t seed) {
  geom.validate();
  World w = build_world(geom, 99);
  std::mt19937_64 rng(seed);
  std::uint64_t sky = 0;
  for (std::uint64_t i = 0; i < n_rays; ++i) {
    double phi = std::asin(2.0 * uniform(rng) - 1.0);
    double ang = kPi / 2.0 + phi;
    if (escapes_to_sky(w, Pt{x, 0.0}, std::cos(ang), std::sin(ang))) ++sky;
  }
  return static_cast<double>(sky) / static_cast<double>(n_rays);
}

EconSample sample_econ_scenario(std::mt19937_64& rng) {
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * uniform(rng); };
  EconSample s;
  s.pair.av_pitch_over_height = in(1.0, 8.0);
  s.pair.gmpv_pitch_over_height = in(1.0, 4.0);
  s.pair.gmpv_yield_kwh_m2 = in(100.0, 500.0);
  s.pair.av_yield_kwh_m2 = s.pair.gmpv_yield_kwh_m2 * in(0.5, 1.15);
  s.pair.open_profit_usd_ha = in(50.0, 20000.0);
  s.pair.crop_profit_usd_ha = s.pair.open_profit_usd_ha * in(0.2, 1.0);
  s.econ.c_m_pv = in(40.0, 400.0);
  s.econ.m_l_pv = in(2.0, 60.0);
  s.econ.kappa = in(0.8, 2.0);
  s.econ.d = in(0.0, 0.1);
  s.econ.r = in(0.0, 0.12);
  s.econ.lifetime_years = 5 + static_cast<int>(in(0.0, 35.0));
  s.econ.fit_pv = in(0.02, 0.2);
  s.delta_fit = uniform(rng) < 0.5 ? 0.0 : in(0.0, 0.05);
  return s;
}

double cashflow_profit_difference(const EconSample& sample) {
  const SystemPair& p = sample.pair;
  const EconParams& e = sample.econ;

  double am_av = 1.0;  // m2 of AV module
  // equal annual energy: yy_av * am_av == yy_pv * am_pv
  double am_pv = p.av_yield_kwh_m2 * am_av / p.gmpv_yield_kwh_m2;

  double fit_av = e.fit_pv + sample.delta_fit;
  double land_av_ha = p.av_pitch_over_height * am_av / 1e4;
  double land_pv_m2 = p.gmpv_pitch_over_height * am_pv;

  double rev_av = 0.0;
  double rev_pv = 0.0;
  double crop_av = 0.0;
  double factor = 1.0;
  for (int k = 1; k <= e.lifetime_years; ++k) {
    factor *= (1.0 - e.d) / (1.0 + e.r);
    rev_av += fit_av * p.av_yield_kwh_m2 * am_av * factor;
    rev_pv += e.fit_pv * p.gmpv_yield_kwh_m2 * am_pv * factor;
    crop_av += p.crop_profit_usd_ha * land_av_ha * factor;
  }
  double cost_av = e.kappa * e.c_m_pv * am_av + e.c_l() * p.av_pitch_over_height * am_av;
  double cost_pv = e.c_m_pv * am_pv + e.c_l() * land_pv_m2;

  return (rev_av + crop_av - cost_av) - (rev_pv - cost_pv);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "view factors:          " << (vf_checked - vf_failed) << "/" << vf_checked
     << " within tolerance\n";
  os << "cash-flow signs:       " << (cashflow_checked - cashflow_failed) << "/"
     << cashflow_checked << " match (" << cashflow_skipped << " near boundary skipped)\n";
  os << "criterion equivalence: " << (criterion_checked - criterion_failed) << "/"
     << criterion_checked << " agree (" << criterion_skipped << " near boundary skipped)\n";
  os << (ok() ? "VALIDATION PASSED" : "VALIDATION FAILED") << '\n';
  return os.str();
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  std::mt19937_64 rng(options.seed);

  // Crossed-strings-style analytic view factors vs Monte-Carlo sampling.
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * uniform(rng); };
  for (int g = 0; g < options.n_mc_geometries; ++g) {
    ArrayGeometry geom;
    geom.orientation = Orientation::ns_tilted;
    geom.tilt_deg = in(10.0, 90.0);
    geom.pitch_over_height = in(1.2, 6.0);
    geom.clearance_over_height = in(0.0, 3.0);
    OpticalModel model(geom, 16);
    for (Face face : {Face::front, Face::back}) {
      double analytic = model.sky_view_factor(face);
      double mc = mc_sky_view_factor(geom, face, options.n_rays,
                                     options.seed + 1000 + g * 2 + (face == Face::back));
      ++report.vf_checked;
      if (std::fabs(analytic - mc) > options.mc_tolerance) ++report.vf_failed;
    }
  }

  // Economic identities on randomized synthetic scenarios.
  for (int i = 0; i < options.n_econ_scenarios; ++i) {
    EconSample s = sample_econ_scenario(rng);

    EconParams model_econ = s.econ;
    model_econ.kappa += options.kappa_perturbation;
    FeasibilityResult f = feasibility(s.pair, model_econ, s.delta_fit);
    double margin = f.rho + s.delta_fit / f.beta - model_econ.kappa;

    double oracle = cashflow_profit_difference(s);
    if (std::fabs(margin) <= 1e-9) {
      ++report.cashflow_skipped;
    } else {
      ++report.cashflow_checked;
      if ((margin > 0.0) != (oracle > 0.0)) ++report.cashflow_failed;
    }

    // Three rearrangements of the same inequality must agree.
    if (std::fabs(margin) <= 1e-9) {
      ++report.criterion_skipped;
    } else {
      ++report.criterion_checked;
      bool v1 = f.feasible_vs_gmpv;
      bool v2 = f.delta_fit_th == 0.0;
      bool v3 = f.y_par >= f.psi;
      if (v1 != v2 || v1 != v3) ++report.criterion_failed;
    }
  }

  return report;
}

}  // namespace agripv
