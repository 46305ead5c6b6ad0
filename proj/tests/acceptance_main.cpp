// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria run on the bundled Khanewal scenarios; the
// randomized suites use fixed seeds.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "agripv/crop.hpp"
#include "agripv/econ.hpp"
#include "agripv/oracles.hpp"
#include "agripv/scenario.hpp"
#include "agripv/simulate.hpp"
#include "agripv/sweep.hpp"

using namespace agripv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[1024];
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Scenario load_bundled(const std::string& file) {
  return parse_scenario(std::filesystem::path(AGRIPV_SCENARIO_DIR) / file);
}

Scenario as_ew(Scenario sc) {
  double albedo = sc.av.albedo;
  sc.av = ArrayGeometry::default_av_ew();
  sc.av.albedo = albedo;
  sc.econ.kappa = EconParams::default_kappa(Orientation::ew_vertical);
  return sc;
}

struct Engines {
  std::unique_ptr<SweepEngine> hv_ns, hv_ew, lv_ns, lv_ew;
  std::vector<double> ph_axis, ml_axis;
};

Engines make_engines() {
  Engines e;
  Scenario hv = load_bundled("khanewal_hv.scn");
  Scenario lv = load_bundled("khanewal_lv.scn");
  e.hv_ns = std::make_unique<SweepEngine>(hv, 0);
  e.hv_ew = std::make_unique<SweepEngine>(as_ew(hv), 0);
  e.lv_ns = std::make_unique<SweepEngine>(lv, 0);
  e.lv_ew = std::make_unique<SweepEngine>(as_ew(lv), 0);
  SweepSettings d = SweepSettings::defaults();
  e.ph_axis = d.ph_axis;
  e.ml_axis = d.ml_axis;
  return e;
}

double rho_cell(SweepEngine& engine, double ph, double ml) {
  EconParams econ = engine.scenario().econ;
  econ.m_l_pv = ml;
  return rho(engine.make_pair(ph), econ);
}

// unweighted mean of per-season Y_PAR at one p/h
double season_mean_y_par(SweepEngine& engine, double ph) {
  const auto& yields = engine.ph_optics(ph).season_yields;
  double sum = 0.0;
  for (const SeasonalYield& y : yields) sum += y.y_par;
  return sum / yields.size();
}

}  // namespace

int main() {
  std::printf("agripv acceptance suite\n");
  std::printf("bundled scenarios: %s\n\n", AGRIPV_SCENARIO_DIR);

  Engines eng = make_engines();

  std::vector<Criterion> criteria;

  criteria.push_back({1, "criterion-consistency", [&](std::string& detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(101);
    int checked = 0;
    int agree = 0;
    int skipped = 0;
    for (int i = 0; i < 1000; ++i) {
      EconSample s = sample_econ_scenario(rng);
      FeasibilityResult f = feasibility(s.pair, s.econ, s.delta_fit);
      double margin = f.rho + s.delta_fit / f.beta - s.econ.kappa;
      if (std::fabs(margin) <= 1e-9) {
        ++skipped;
        continue;
      }
      bool v1 = f.feasible_vs_gmpv;
      bool v2 = f.delta_fit_th == 0.0;
      bool v3 = s.pair.y_par() >= psi(s.pair, s.econ, s.delta_fit);
      ++checked;
      if (v1 == v2 && v1 == v3) ++agree;
    }
    double elapsed = seconds_since(start);
    detail = fmt("%d/%d verdicts agree (%d boundary skips), %.2f s", agree, checked,
                 skipped, elapsed);
    return agree == checked && elapsed < 10.0;
  }});

  criteria.push_back({2, "cashflow-oracle", [&](std::string& detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(202);
    int checked = 0;
    int agree = 0;
    for (int i = 0; i < 1000; ++i) {
      EconSample s = sample_econ_scenario(rng);
      FeasibilityResult f = feasibility(s.pair, s.econ, s.delta_fit);
      double margin = f.rho + s.delta_fit / f.beta - s.econ.kappa;
      if (std::fabs(margin) <= 1e-9) continue;
      ++checked;
      if ((margin > 0.0) == (cashflow_profit_difference(s) > 0.0)) ++agree;
    }
    double elapsed = seconds_since(start);
    detail = fmt("%d/%d signs match the year-by-year cash flow, %.2f s", agree, checked,
                 elapsed);
    return agree == checked && elapsed < 30.0;
  }});

  criteria.push_back({3, "view-factor-vs-monte-carlo", [&](std::string& detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int checked = 0;
    int within = 0;
    double worst = 0.0;
    for (int g = 0; g < 20; ++g) {
      ArrayGeometry geom;
      geom.tilt_deg = 10.0 + 80.0 * uni(rng);
      geom.pitch_over_height = 1.2 + 4.8 * uni(rng);
      geom.clearance_over_height = 3.0 * uni(rng);
      OpticalModel model(geom, 16);
      for (Face f : {Face::front, Face::back}) {
        double mc = mc_sky_view_factor(geom, f, 1000000,
                                       909 + 2 * g + (f == Face::back ? 1 : 0));
        double err = std::fabs(model.sky_view_factor(f) - mc);
        worst = std::max(worst, err);
        ++checked;
        if (err < 0.01) ++within;
      }
    }
    // analytic wall case: masked fraction at the midpoint of a dense
    // vertical array equals 1 - sin45 before any far-row correction
    ArrayGeometry walls{Orientation::ew_vertical, 90.0, 2.0, 0.0, 0.9, 0.25};
    double masked = 1.0 - ground_point_sky_vf(walls, 1.0);
    bool wall_ok = std::fabs(masked - (1.0 - std::sin(3.14159265358979 / 4.0))) < 0.01;
    double elapsed = seconds_since(start);
    detail = fmt("%d/%d faces within 1%% of MC (worst %.4f), wall case %s, %.1f s", within,
                 checked, worst, wall_ok ? "exact" : "WRONG", elapsed);
    return within == checked && wall_ok && elapsed < 120.0;
  }});

  criteria.push_back({4, "rho-slope-structure", [&](std::string& detail) {
    bool neg_at_5 = true;
    bool pos_at_50 = true;
    for (size_t i = 1; i < eng.ph_axis.size(); ++i) {
      double prev5 = rho_cell(*eng.hv_ns, eng.ph_axis[i - 1], 5.0);
      double cur5 = rho_cell(*eng.hv_ns, eng.ph_axis[i], 5.0);
      if (cur5 >= prev5) neg_at_5 = false;
      double prev50 = rho_cell(*eng.hv_ns, eng.ph_axis[i - 1], 50.0);
      double cur50 = rho_cell(*eng.hv_ns, eng.ph_axis[i], 50.0);
      if (cur50 <= prev50) pos_at_50 = false;
    }
    size_t argmax = 0;
    for (size_t i = 1; i < eng.ph_axis.size(); ++i)
      if (rho_cell(*eng.hv_ns, eng.ph_axis[i], 10.0) >
          rho_cell(*eng.hv_ns, eng.ph_axis[argmax], 10.0))
        argmax = i;
    double ph_star = eng.ph_axis[argmax];
    bool interior = ph_star >= 2.5 && ph_star <= 4.0;
    detail = fmt("slope(M_L=5) %s, slope(M_L=50) %s, M_L=10 max at p/h=%.2f",
                 neg_at_5 ? "negative" : "NOT negative",
                 pos_at_50 ? "positive" : "NOT positive", ph_star);
    return neg_at_5 && pos_at_50 && interior;
  }});

  criteria.push_back({5, "feasibility-crossover", [&](std::string& detail) {
    std::vector<double> wide_ml;
    for (double ml = 5.0; ml <= 120.0 + 1e-9; ml += 2.5) wide_ml.push_back(ml);
    std::vector<double> ph6{6.0};
    auto bns = eng.hv_ns->feasibility_boundary(ph6, wide_ml);
    auto bew = eng.hv_ew->feasibility_boundary(ph6, wide_ml);
    double ns = bns[0] ? *bns[0] : -1.0;
    double ew = bew[0] ? *bew[0] : -1.0;
    detail = fmt("minimal M_L at p/h=6: NS %.2f (window [20,60]), EW %.2f (window [20,50])",
                 ns, ew);
    return ns >= 20.0 && ns <= 60.0 && ew >= 20.0 && ew <= 50.0;
  }});

  criteria.push_back({6, "low-value-infeasibility", [&](std::string& detail) {
    double worst_margin = -1e9;
    for (double ph : eng.ph_axis) {
      for (double ml : eng.ml_axis) {
        double m_ns = rho_cell(*eng.lv_ns, ph, ml) - eng.lv_ns->scenario().econ.kappa;
        double m_ew = rho_cell(*eng.lv_ew, ph, ml) - eng.lv_ew->scenario().econ.kappa;
        worst_margin = std::max(worst_margin, std::max(m_ns, m_ew));
      }
    }
    detail = fmt("max(rho - kappa) over the default grid = %.4f", worst_margin);
    return worst_margin < 0.0;
  }});

  criteria.push_back({7, "saturation-in-ml", [&](std::string& detail) {
    const double delta = 1.0;
    bool ok = true;
    std::string vals;
    struct Case { const char* name; SweepEngine* engine; };
    for (Case c : {Case{"HV/NS", eng.hv_ns.get()}, Case{"HV/EW", eng.hv_ew.get()},
                   Case{"LV/NS", eng.lv_ns.get()}, Case{"LV/EW", eng.lv_ew.get()}}) {
      double slope40 =
          std::fabs(rho_cell(*c.engine, 3.0, 40.0 + delta) - rho_cell(*c.engine, 3.0, 40.0)) /
          delta;
      double slope5 =
          std::fabs(rho_cell(*c.engine, 3.0, 5.0 + delta) - rho_cell(*c.engine, 3.0, 5.0)) /
          delta;
      double ratio = slope40 / slope5;
      vals += fmt("%s %.3f ", c.name, ratio);
      if (!(ratio < 0.1)) ok = false;
    }
    detail = "slope(40)/slope(5) = " + vals + "(bound 0.1)";
    return ok;
  }});

  criteria.push_back({8, "fit-threshold-orderings", [&](std::string& detail) {
    const std::vector<double> mls = {10.0, 15.0, 20.0, 30.0};
    const std::vector<double> phs = {2.0, 3.0, 4.0};
    auto ns_lv = eng.lv_ns->min_fit_percent(mls, phs);
    auto ew_lv = eng.lv_ew->min_fit_percent(mls, phs);
    auto ns_hv = eng.hv_ns->min_fit_percent(mls, phs);
    auto ew_hv = eng.hv_ew->min_fit_percent(mls, phs);

    // reference threshold percentages, columns NS-LV, EW-LV, NS-HV, EW-HV
    const double reference[4][3][4] = {
        {{15.22, 16.79, 11.60, 10.85}, {19.10, 21.33, 10.13, 11.36}, {23.03, 25.88, 10.53, 11.95}},
        {{15.22, 16.36, 11.60, 10.43}, {17.95, 19.35, 8.98, 9.37}, {20.72, 22.34, 8.22, 8.41}},
        {{15.22, 16.15, 11.60, 10.22}, {17.08, 18.36, 8.11, 8.38}, {18.99, 20.57, 6.49, 6.64}},
        {{15.22, 16.15, 11.60, 10.00}, {16.41, 18.36, 7.44, 7.39}, {17.64, 20.57, 5.14, 4.87}}};

    std::printf("    delta-FIT thresholds, %% of base FIT (computed vs reference):\n");
    std::printf("    %-4s %-4s | %-15s %-15s %-15s %-15s\n", "M_L", "p/h", "NS-LV", "EW-LV",
                "NS-HV", "EW-HV");
    bool lv_above_hv = true;
    bool hv_noninc_ml = true;
    bool lv_nondec_ph = true;
    for (size_t i = 0; i < mls.size(); ++i) {
      for (size_t j = 0; j < phs.size(); ++j) {
        std::printf("    %-4.0f %-4.0f | %6.2f vs %5.2f %6.2f vs %5.2f %6.2f vs %5.2f %6.2f vs %5.2f\n",
                    mls[i], phs[j], ns_lv[i][j], reference[i][j][0], ew_lv[i][j], reference[i][j][1],
                    ns_hv[i][j], reference[i][j][2], ew_hv[i][j], reference[i][j][3]);
        if (!(ns_lv[i][j] > ns_hv[i][j]) || !(ew_lv[i][j] > ew_hv[i][j])) lv_above_hv = false;
        if (j > 0) {
          if (ns_lv[i][j] < ns_lv[i][j - 1] - 1e-9) lv_nondec_ph = false;
          if (ew_lv[i][j] < ew_lv[i][j - 1] - 1e-9) lv_nondec_ph = false;
        }
        if (i > 0 && phs[j] >= 3.0) {
          if (ns_hv[i][j] > ns_hv[i - 1][j] + 1e-9) hv_noninc_ml = false;
          if (ew_hv[i][j] > ew_hv[i - 1][j] + 1e-9) hv_noninc_ml = false;
        }
      }
    }
    detail = fmt("LV > HV %s; HV non-increasing in M_L %s; LV non-decreasing in p/h %s",
                 lv_above_hv ? "ok" : "VIOLATED", hv_noninc_ml ? "ok" : "VIOLATED",
                 lv_nondec_ph ? "ok" : "VIOLATED");
    return lv_above_hv && hv_noninc_ml && lv_nondec_ph;
  }});

  criteria.push_back({9, "y-par-behavior", [&](std::string& detail) {
    double ratio_hv = season_mean_y_par(*eng.hv_ew, 2.0) / season_mean_y_par(*eng.hv_ns, 2.0);
    double ratio_lv = season_mean_y_par(*eng.lv_ew, 2.0) / season_mean_y_par(*eng.lv_ns, 2.0);
    bool contrast = ratio_hv >= 1.15 && ratio_lv >= 1.15;

    double m6[4] = {season_mean_y_par(*eng.hv_ns, 6.0), season_mean_y_par(*eng.hv_ew, 6.0),
                    season_mean_y_par(*eng.lv_ns, 6.0), season_mean_y_par(*eng.lv_ew, 6.0)};
    bool near_open = true;
    for (double v : m6)
      if (!(v >= 0.95 && v <= 1.0)) near_open = false;

    bool monotone = true;
    for (SweepEngine* engine : {eng.hv_ns.get(), eng.hv_ew.get(), eng.lv_ns.get(), eng.lv_ew.get()}) {
      double prev = 0.0;
      for (double ph : eng.ph_axis) {
        double v = season_mean_y_par(*engine, ph);
        if (v < prev - 1e-9) monotone = false;
        prev = v;
      }
    }
    detail = fmt("EW/NS at p/h=2: HV %.3f LV %.3f (>=1.15); at p/h=6: %.3f %.3f %.3f %.3f "
                 "(window [0.95,1]); monotone %s",
                 ratio_hv, ratio_lv, m6[0], m6[1], m6[2], m6[3], monotone ? "ok" : "VIOLATED");
    return contrast && near_open && monotone;
  }});

  criteria.push_back({10, "energy-ratios", [&](std::string& detail) {
    double lo = 10.0;
    double hi = -10.0;
    for (double ph : eng.ph_axis) {
      if (ph < 3.0) continue;
      double y = eng.hv_ns->make_pair(ph).y_pv();
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    double ew2 = eng.hv_ew->make_pair(2.0).y_pv();
    detail = fmt("Y_PV(NS, p/h>=3) in [%.4f, %.4f] (window [0.95,1.02]); Y_PV(EW, p/h=2) = %.4f",
                 lo, hi, ew2);
    return lo >= 0.95 && hi <= 1.02 && ew2 < 1.0;
  }});

  criteria.push_back({11, "numeric-spot-checks", [&](std::string& detail) {
    bool chi_ok = std::fabs(chi(0.0, 0.05, 25) - 14.0939) <= 1e-4;

    CropRotation hv = CropRotation::khanewal_high_value();
    CropRotation lv = CropRotation::khanewal_low_value();
    std::vector<SeasonalYield> hv_ones(hv.seasons.size(), SeasonalYield{1.0});
    std::vector<SeasonalYield> lv_ones(lv.seasons.size(), SeasonalYield{1.0});
    double hv_total = rotation_profit(hv, hv_ones);
    double lv_total = rotation_profit(lv, lv_ones);
    // the published HV total is one cent above its own row sum
    bool profit_ok =
        std::fabs(hv_total - 9192.34) <= 0.0101 && std::fabs(lv_total - 298.31) <= 1e-9;

    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bool lcoe_ok = true;
    for (int i = 0; i < 1000; ++i) {
      double c_l = 0.5 + 30.0 * uni(rng);
      double m_l = 2.0 + 50.0 * uni(rng);
      double ph = 1.0 + 6.0 * uni(rng);
      double yy = 50.0 + 500.0 * uni(rng);
      double x = 2.0 + 20.0 * uni(rng);
      double a = lcoe(m_l * c_l, c_l, ph, yy, x);
      double b = c_l * (m_l + ph) / (yy * x);
      if (std::fabs(a - b) > 1e-12 * std::fabs(a)) lcoe_ok = false;
    }
    detail = fmt("chi %s (%.5f); rotation totals %s (%.2f, %.2f); LCOE identity %s",
                 chi_ok ? "ok" : "WRONG", chi(0.0, 0.05, 25),
                 profit_ok ? "ok" : "WRONG", hv_total, lv_total,
                 lcoe_ok ? "ok" : "WRONG");
    return chi_ok && profit_ok && lcoe_ok;
  }});

  criteria.push_back({12, "performance", [&](std::string& detail) {
    auto start = Clock::now();
    SweepSettings defaults = SweepSettings::defaults();
    Scenario hv = load_bundled("khanewal_hv.scn");
    SweepEngine ns(hv, 0);
    ns.run(defaults);
    SweepEngine ew(as_ew(hv), 0);
    ew.run(defaults);
    double sweep_s = seconds_since(start);

    auto vstart = Clock::now();
    ValidationOptions options;
    ValidationReport report = run_validation(options);
    double validate_s = seconds_since(vstart);
    detail = fmt("default sweep both orientations %.1f s (< 300); validate %.1f s (< 180), %s",
                 sweep_s, validate_s, report.ok() ? "oracles clean" : "ORACLES FAILED");
    return sweep_s < 300.0 && validate_s < 180.0 && report.ok();
  }});

  int failures = 0;
  for (Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %2d  %-26s %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  std::printf("\n%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
