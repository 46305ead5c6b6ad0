#include "agripv/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "agripv/errors.hpp"

namespace agripv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;
constexpr int kMaskRows = 30;  // diffuse masking radius; rows beyond contribute < 1e-3

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Vec2 a;  // lower edge
  Vec2 b;  // upper edge
};

// Row k of the array: lower edge at (k*p, c); the panel leans away from
// the front side, so the upper edge sits at (k*p - cos(tilt), c + sin(tilt)).
Segment row_segment(const ArrayGeometry& g, int k) {
  double tilt = g.tilt_deg * kDegToRad;
  double x0 = k * g.pitch_over_height;
  double c = g.clearance_over_height;
  return {{x0, c}, {x0 - std::cos(tilt), c + std::sin(tilt)}};
}

Vec2 front_normal(const ArrayGeometry& g) {
  double tilt = g.tilt_deg * kDegToRad;
  return {std::sin(tilt), std::cos(tilt)};
}

// Nearest intersection of the ray p + t*d (t > eps) with a segment.
// Returns t or infinity; if hit, *front_hit says whether the ray struck
// the face on the front-normal side.
double ray_segment_hit(const Vec2& p, const Vec2& d, const Segment& seg,
                       const Vec2& seg_front_normal, bool* front_hit) {
  double ex = seg.b.x - seg.a.x;
  double ey = seg.b.y - seg.a.y;
  double det = d.x * ey - d.y * ex;
  if (std::fabs(det) < 1e-14) return std::numeric_limits<double>::infinity();
  double rx = seg.a.x - p.x;
  double ry = seg.a.y - p.y;
  double t = (rx * ey - ry * ex) / det;
  double s = (d.x * ry - d.y * rx) / -det;
  if (t <= 1e-9 || s < -1e-12 || s > 1.0 + 1e-12)
    return std::numeric_limits<double>::infinity();
  if (front_hit) *front_hit = (d.x * seg_front_normal.x + d.y * seg_front_normal.y) < 0.0;
  return t;
}

// Angular radiation partition around a point with unit normal `n`:
// directions phi in (-pi/2, pi/2) measured from the normal carry weight
// d(sin phi)/2 for an infinite differential strip. Occluding segments are
// classified by nearest hit; unobstructed directions split into sky
// (upward) and ground (downward).
struct SweepResult {
  double sky = 0.0;
  double ground = 0.0;
  double mod_front = 0.0;
  double mod_back = 0.0;
};

SweepResult angular_sweep(const Vec2& p, const Vec2& n,
                          const std::vector<Segment>& occluders, const Vec2& occ_front_normal) {
  double base = std::atan2(n.y, n.x);

  // Signed angle of direction `v` relative to the normal, wrapped to (-pi, pi].
  auto rel_angle = [&](double vy, double vx) {
    double a = std::atan2(vy, vx) - base;
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
  };

  std::vector<double> cuts;
  cuts.reserve(4 + occluders.size() * 2);
  cuts.push_back(-kPi / 2.0);
  cuts.push_back(kPi / 2.0);
  for (double hx : {1.0, -1.0}) {
    double a = rel_angle(0.0, hx);
    if (a > -kPi / 2.0 && a < kPi / 2.0) cuts.push_back(a);
  }
  for (const Segment& s : occluders) {
    for (const Vec2& e : {s.a, s.b}) {
      double a = rel_angle(e.y - p.y, e.x - p.x);
      if (a > -kPi / 2.0 && a < kPi / 2.0) cuts.push_back(a);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  SweepResult out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double phi1 = cuts[i];
    double phi2 = cuts[i + 1];
    if (phi2 - phi1 < 1e-13) continue;
    double w = 0.5 * (std::sin(phi2) - std::sin(phi1));
    double mid = 0.5 * (phi1 + phi2);
    Vec2 d{std::cos(base + mid), std::sin(base + mid)};

    double best = std::numeric_limits<double>::infinity();
    bool front_hit = false;
    for (const Segment& s : occluders) {
      bool fh = false;
      double t = ray_segment_hit(p, d, s, occ_front_normal, &fh);
      if (t < best) {
        best = t;
        front_hit = fh;
      }
    }
    if (std::isfinite(best)) {
      (front_hit ? out.mod_front : out.mod_back) += w;
    } else if (d.y > 0.0) {
      out.sky += w;
    } else {
      out.ground += w;
    }
  }
  return out;
}

}  // namespace

const char* to_string(Orientation o) {
  return o == Orientation::ns_tilted ? "ns_tilted" : "ew_vertical";
}

Orientation orientation_from_string(std::string_view s) {
  if (s == "ns_tilted") return Orientation::ns_tilted;
  if (s == "ew_vertical") return Orientation::ew_vertical;
  throw ValidationError("unknown orientation '" + std::string(s) +
                        "', expected ns_tilted or ew_vertical");
}

void ArrayGeometry::validate() const {
  if (!(pitch_over_height >= 1.0))
    throw ValidationError("pitch_over_height must be >= 1");
  if (!(tilt_deg > 0.0 && tilt_deg <= 90.0))
    throw ValidationError("tilt must be in (0, 90] degrees");
  if (orientation == Orientation::ew_vertical && tilt_deg != 90.0)
    throw ValidationError("ew_vertical arrays must have tilt = 90");
  if (!(clearance_over_height >= 0.0))
    throw ValidationError("clearance_over_height must be >= 0");
  if (!(bifaciality >= 0.0 && bifaciality <= 1.0))
    throw ValidationError("bifaciality must be in [0, 1]");
  if (!(albedo >= 0.0 && albedo <= 1.0))
    throw ValidationError("albedo must be in [0, 1]");
}

ArrayGeometry ArrayGeometry::default_gmpv() {
  return {Orientation::ns_tilted, 30.0, 2.0, 0.5, 0.9, 0.25};
}

ArrayGeometry ArrayGeometry::default_av_ns() {
  return {Orientation::ns_tilted, 30.0, 3.0, 2.5, 0.9, 0.25};
}

ArrayGeometry ArrayGeometry::default_av_ew() {
  return {Orientation::ew_vertical, 90.0, 3.0, 0.5, 0.9, 0.25};
}

double ProjectedSun::projected_elevation_deg() const {
  if (below_horizon) return std::asin(std::clamp(z, -1.0, 1.0)) * kRadToDeg;
  return std::atan2(z, std::fabs(t)) * kRadToDeg;
}

ProjectedSun project_sun(const SunPosition& sun, Orientation orientation) {
  ProjectedSun p;
  double elev = sun.elevation_deg * kDegToRad;
  double az = sun.azimuth_deg * kDegToRad;
  double ce = std::cos(elev);
  if (orientation == Orientation::ns_tilted) {
    // transverse axis points South (front faces the equator in the
    // northern hemisphere), row axis East
    p.t = -ce * std::cos(az);
    p.a = ce * std::sin(az);
  } else {
    // transverse axis points East, row axis North
    p.t = ce * std::sin(az);
    p.a = ce * std::cos(az);
  }
  p.z = std::sin(elev);
  p.below_horizon = sun.elevation_deg <= 0.0;
  p.edge_on = !p.below_horizon && std::fabs(p.t) < 1e-12;
  return p;
}

double cos_incidence(const ArrayGeometry& geom, const ProjectedSun& sun, Face face) {
  if (sun.below_horizon) return 0.0;
  Vec2 n = front_normal(geom);
  double c = n.x * sun.t + n.y * sun.z;
  return face == Face::front ? std::max(0.0, c) : std::max(0.0, -c);
}

double beam_unshaded_fraction(const ArrayGeometry& geom, const ProjectedSun& sun) {
  if (sun.below_horizon) return 0.0;
  double norm = std::hypot(sun.t, sun.z);
  if (norm < 1e-15) return 0.0;
  Vec2 d{sun.t / norm, sun.z / norm};

  double tilt = geom.tilt_deg * kDegToRad;
  Vec2 v{-std::cos(tilt), std::sin(tilt)};  // module direction, |v| = 1
  // Beam parallel to the module plane: grazing, nothing collected.
  double det = v.x * d.y - d.x * v.y;
  if (std::fabs(det) < 1e-12) return 0.0;

  if (std::fabs(d.x) < 1e-15) return 1.0;  // vertical beam, rows are disjoint in x

  double p = geom.pitch_over_height;
  // Horizontal reach of a blocking row within the module height band.
  double reach = std::sin(tilt) * std::fabs(d.x / d.y) + 2.0 * std::cos(tilt);
  // A beam grazing over thousands of equal-height rows is fully blocked.
  if (reach / p > 4096.0) return 0.0;
  int k_max = static_cast<int>(reach / p) + 1;
  int side = d.x > 0.0 ? 1 : -1;

  Segment self = row_segment(geom, 0);
  std::vector<std::pair<double, double>> covered;
  for (int i = 1; i <= k_max; ++i) {
    int k = side * i;
    // Project neighbor endpoints along -d onto the module line; a shadow
    // interval exists only when the neighbor lies sunward (t_ray > 0).
    double u[2];
    bool sunward = true;
    Segment nb = row_segment(geom, k);
    for (int e = 0; e < 2; ++e) {
      const Vec2& pt = e == 0 ? nb.a : nb.b;
      double rx = pt.x - self.a.x;
      double ry = pt.y - self.a.y;
      double uu = (rx * d.y - d.x * ry) / det;
      double tt = (v.x * ry - rx * v.y) / det;
      if (tt <= 0.0) {
        sunward = false;
        break;
      }
      u[e] = uu;
    }
    if (!sunward) continue;
    double lo = std::max(0.0, std::min(u[0], u[1]));
    double hi = std::min(1.0, std::max(u[0], u[1]));
    if (hi > lo) covered.emplace_back(lo, hi);
  }
  if (covered.empty()) return 1.0;
  std::sort(covered.begin(), covered.end());
  double shaded = 0.0;
  double cur_lo = covered[0].first;
  double cur_hi = covered[0].second;
  for (size_t i = 1; i < covered.size(); ++i) {
    if (covered[i].first > cur_hi) {
      shaded += cur_hi - cur_lo;
      cur_lo = covered[i].first;
      cur_hi = covered[i].second;
    } else {
      cur_hi = std::max(cur_hi, covered[i].second);
    }
  }
  shaded += cur_hi - cur_lo;
  return std::clamp(1.0 - shaded, 0.0, 1.0);
}

OpticalModel::OpticalModel(const ArrayGeometry& geom, int n_ground_points)
    : geom_(geom), n_points_(n_ground_points), pitch_(geom.pitch_over_height) {
  geom_.validate();
  if (n_points_ < 16) throw ValidationError("n_ground_points must be >= 16");

  Vec2 n_front = front_normal(geom_);
  std::vector<Segment> mask_rows;
  for (int k = -kMaskRows; k <= kMaskRows; ++k) mask_rows.push_back(row_segment(geom_, k));

  // Face-averaged view factors; row 0 is the face itself and is excluded.
  std::vector<Segment> others;
  for (int k = -kMaskRows; k <= kMaskRows; ++k)
    if (k != 0) others.push_back(row_segment(geom_, k));

  Segment self = row_segment(geom_, 0);
  constexpr int kFaceSamples = 192;
  for (int f = 0; f < 2; ++f) {
    Vec2 n = f == 0 ? n_front : Vec2{-n_front.x, -n_front.y};
    double sky = 0.0;
    double gnd = 0.0;
    double mod = 0.0;
    for (int i = 0; i < kFaceSamples; ++i) {
      double u = (i + 0.5) / kFaceSamples;
      Vec2 p{self.a.x + u * (self.b.x - self.a.x), self.a.y + u * (self.b.y - self.a.y)};
      SweepResult r = angular_sweep(p, n, others, n_front);
      sky += r.sky;
      gnd += r.ground;
      mod += r.mod_front + r.mod_back;
    }
    sky_vf_[f] = sky / kFaceSamples;
    ground_vf_[f] = gnd / kFaceSamples;
    module_vf_[f] = mod / kFaceSamples;
  }

  // Ground points: sky and per-side module view factors. By reciprocity the
  // aggregated face->strip view factor over all periods equals
  // strip_width * (strip -> masked module faces of that side).
  ground_sky_vf_.resize(n_points_);
  ground_module_vf_.resize(n_points_);
  strip_vf_[0].resize(n_points_);
  strip_vf_[1].resize(n_points_);
  double dx = pitch_ / n_points_;
  for (int i = 0; i < n_points_; ++i) {
    Vec2 p{(i + 0.5) * dx, 0.0};
    SweepResult r = angular_sweep(p, Vec2{0.0, 1.0}, mask_rows, n_front);
    ground_sky_vf_[i] = r.sky;
    ground_module_vf_[i] = r.mod_front + r.mod_back;
    strip_vf_[0][i] = dx * r.mod_front;
    strip_vf_[1][i] = dx * r.mod_back;
  }
}

double OpticalModel::sky_view_factor(Face face) const { return sky_vf_[face == Face::front ? 0 : 1]; }
double OpticalModel::ground_view_factor(Face face) const { return ground_vf_[face == Face::front ? 0 : 1]; }
double OpticalModel::module_view_factor(Face face) const { return module_vf_[face == Face::front ? 0 : 1]; }

const std::vector<double>& OpticalModel::strip_vf(Face face) const {
  return strip_vf_[face == Face::front ? 0 : 1];
}

bool OpticalModel::ground_point_shadowed(double x, const ProjectedSun& sun) const {
  if (sun.below_horizon) return false;
  double norm = std::hypot(sun.t, sun.z);
  if (norm < 1e-15 || sun.z / norm < 1e-6) return false;  // grazing carries no beam
  Vec2 d{sun.t / norm, sun.z / norm};

  double tilt = geom_.tilt_deg * kDegToRad;
  double c = geom_.clearance_over_height;
  double s = std::sin(tilt);
  double cot = d.x / d.y;
  // The ray can only meet rows while inside the band y in [c, c+s].
  double x_lo = x + c * cot;
  double x_hi = x + (c + s) * cot;
  if (x_lo > x_hi) std::swap(x_lo, x_hi);
  // Grazing rays sweep across thousands of rows and are certainly blocked;
  // they also carry a negligible horizontal beam component.
  if ((x_hi - x_lo) / pitch_ > 8192.0) return true;
  int k_lo = static_cast<int>(std::floor((x_lo - 1.0) / pitch_)) - 1;
  int k_hi = static_cast<int>(std::ceil((x_hi + 1.0) / pitch_)) + 1;
  Vec2 p{x, 0.0};
  Vec2 nf = front_normal(geom_);
  for (int k = k_lo; k <= k_hi; ++k) {
    Segment seg = row_segment(geom_, k);
    if (std::isfinite(ray_segment_hit(p, d, seg, nf, nullptr))) return true;
  }
  return false;
}

GroundLightProfile OpticalModel::ground_profile(const ProjectedSun& sun, double dni,
                                                double dhi) const {
  GroundLightProfile g;
  g.pitch = pitch_;
  g.direct_w_m2.assign(n_points_, 0.0);
  g.diffuse_w_m2.assign(n_points_, 0.0);
  double dx = pitch_ / n_points_;
  double beam_h = (!sun.below_horizon && dni > 0.0) ? dni * std::max(0.0, sun.z) : 0.0;
  for (int i = 0; i < n_points_; ++i) {
    if (beam_h > 0.0 && !ground_point_shadowed((i + 0.5) * dx, sun)) {
      g.direct_w_m2[i] = beam_h;
    }
    g.diffuse_w_m2[i] = dhi * ground_sky_vf_[i];
  }
  return g;
}

ModuleIrradiance OpticalModel::module_irradiance(const ProjectedSun& sun, double dni,
                                                 double dhi) const {
  ModuleIrradiance m;
  GroundLightProfile g;
  step(sun, dni, dhi, m, g);
  return m;
}

void OpticalModel::step(const ProjectedSun& sun, double dni, double dhi,
                        ModuleIrradiance& module_out, GroundLightProfile& ground_out) const {
  ground_out = ground_profile(sun, dni, dhi);

  double front = dhi * sky_vf_[0];
  double back = dhi * sky_vf_[1];
  if (!sun.below_horizon && dni > 0.0) {
    double unshaded = beam_unshaded_fraction(geom_, sun);
    front += dni * cos_incidence(geom_, sun, Face::front) * unshaded;
    back += dni * cos_incidence(geom_, sun, Face::back) * unshaded;
  }
  if (geom_.albedo > 0.0) {
    double refl_front = 0.0;
    double refl_back = 0.0;
    for (int i = 0; i < n_points_; ++i) {
      double gi = ground_out.direct_w_m2[i] + ground_out.diffuse_w_m2[i];
      refl_front += gi * strip_vf_[0][i];
      refl_back += gi * strip_vf_[1][i];
    }
    front += geom_.albedo * refl_front;
    back += geom_.albedo * refl_back;
  }
  module_out.front_w_m2 = front;
  module_out.back_w_m2 = back;
}

double sky_view_factor_segment(const ArrayGeometry& geom, Face face) {
  return OpticalModel(geom, 16).sky_view_factor(face);
}

double ground_point_sky_vf(const ArrayGeometry& geom, double x) {
  geom.validate();
  Vec2 nf = front_normal(geom);
  std::vector<Segment> rows;
  for (int k = -kMaskRows; k <= kMaskRows; ++k) rows.push_back(row_segment(geom, k));
  double px = std::fmod(x, geom.pitch_over_height);
  if (px < 0.0) px += geom.pitch_over_height;
  return angular_sweep(Vec2{px, 0.0}, Vec2{0.0, 1.0}, rows, nf).sky;
}

ModuleIrradiance module_irradiance(const ArrayGeometry& geom, const SunPosition& sun,
                                   double dni, double dhi, int n_points) {
  OpticalModel model(geom, n_points);
  return model.module_irradiance(project_sun(sun, geom.orientation), dni, dhi);
}

GroundLightProfile ground_par_profile(const ArrayGeometry& geom, const SunPosition& sun,
                                      double dni, double dhi, int n_points) {
  OpticalModel model(geom, n_points);
  return model.ground_profile(project_sun(sun, geom.orientation), dni, dhi);
}

}  // namespace agripv
