#pragma once

#include <vector>

#include "agripv/solar.hpp"

namespace agripv {

enum class Orientation {
  ns_tilted,    // faces equator, row axis runs E-W
  ew_vertical,  // vertical bifacial, faces E/W, row axis runs N-S
};

const char* to_string(Orientation o);
Orientation orientation_from_string(std::string_view s);

// Cross-section geometry of an infinite row array. All lengths are in
// units of the module slant height (slant = 1).
struct ArrayGeometry {
  Orientation orientation = Orientation::ns_tilted;
  double tilt_deg = 30.0;              // from horizontal; 90 for ew_vertical
  double pitch_over_height = 2.0;      // p/h >= 1
  double clearance_over_height = 0.5;  // ground clearance of lower edge
  double bifaciality = 0.9;            // rear/front conversion ratio
  double albedo = 0.25;                // ground reflectance

  void validate() const;  // throws ValidationError

  static ArrayGeometry default_gmpv();
  static ArrayGeometry default_av_ns();
  static ArrayGeometry default_av_ew();
};

enum class Face { front, back };

// Sun direction decomposed in the array cross-section frame:
// t = transverse (along the front-face normal azimuth), a = along the row
// axis, z = up. Unit vector when the sun is above the horizon.
struct ProjectedSun {
  double t = 0.0;
  double a = 0.0;
  double z = -1.0;
  bool below_horizon = true;
  bool edge_on = false;  // beam parallel to the row axis, |t| ~ 0

  // Elevation of the direction projected into the cross-section plane.
  double projected_elevation_deg() const;
  bool from_front_side() const { return t > 0.0; }
};

ProjectedSun project_sun(const SunPosition& sun, Orientation orientation);

// Cosine of the 3D beam incidence angle on a module face (clamped at 0).
double cos_incidence(const ArrayGeometry& geom, const ProjectedSun& sun, Face face);

// Fraction of the module face reached by the direct beam given shading by
// neighboring rows, in [0,1]. Returns 0 below the horizon and for beams
// grazing parallel to the module plane.
double beam_unshaded_fraction(const ArrayGeometry& geom, const ProjectedSun& sun);

// Horizontal-plane irradiance sampled at n points across one pitch period
// at crop height (ground level). Periodic with period p.
struct GroundLightProfile {
  std::vector<double> direct_w_m2;
  std::vector<double> diffuse_w_m2;
  double pitch = 0.0;  // in slant-height units

  int n_points() const { return static_cast<int>(direct_w_m2.size()); }
};

// Plane-of-array irradiance averaged over a module face.
struct ModuleIrradiance {
  double front_w_m2 = 0.0;
  double back_w_m2 = 0.0;
};

// View factors and per-hour optical evaluation for one geometry. All view
// factors are precomputed in the constructor: faces and ground points see
// the sky masked by the nearest rows out to a fixed radius chosen so the
// truncated remainder is below 1e-3; beam shadow tests are exact for any
// row distance. Immutable after construction; safe for concurrent use.
class OpticalModel {
 public:
  explicit OpticalModel(const ArrayGeometry& geom, int n_ground_points = 100);

  const ArrayGeometry& geometry() const { return geom_; }
  int n_points() const { return n_points_; }

  double sky_view_factor(Face face) const;
  double ground_view_factor(Face face) const;   // face -> all ground
  double module_view_factor(Face face) const;   // face -> other module faces
  // View factor from ground point i to the visible sky.
  const std::vector<double>& ground_sky_vf() const { return ground_sky_vf_; }
  // View factor from ground point i to all masking module faces.
  const std::vector<double>& ground_module_vf() const { return ground_module_vf_; }
  // Aggregated view factor from a module face to ground strip i over all
  // periods (used for the ground-reflected contribution).
  const std::vector<double>& strip_vf(Face face) const;

  bool ground_point_shadowed(double x, const ProjectedSun& sun) const;

  GroundLightProfile ground_profile(const ProjectedSun& sun, double dni, double dhi) const;
  ModuleIrradiance module_irradiance(const ProjectedSun& sun, double dni, double dhi) const;
  // Evaluates both from the same sun sample, sharing the ground profile.
  void step(const ProjectedSun& sun, double dni, double dhi,
            ModuleIrradiance& module_out, GroundLightProfile& ground_out) const;

 private:
  ArrayGeometry geom_;
  int n_points_;
  double pitch_;
  double sky_vf_[2];
  double ground_vf_[2];
  double module_vf_[2];
  std::vector<double> ground_sky_vf_;
  std::vector<double> ground_module_vf_;
  std::vector<double> strip_vf_[2];
};

// One-shot conveniences mirroring the operations above. Prefer holding an
// OpticalModel when evaluating many hours of one geometry.
double sky_view_factor_segment(const ArrayGeometry& geom, Face face);
double ground_point_sky_vf(const ArrayGeometry& geom, double x);
ModuleIrradiance module_irradiance(const ArrayGeometry& geom, const SunPosition& sun,
                                   double dni, double dhi, int n_points = 100);
GroundLightProfile ground_par_profile(const ArrayGeometry& geom, const SunPosition& sun,
                                      double dni, double dhi, int n_points);

}  // namespace agripv
