#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "tad/geometry.hpp"

namespace tad {

enum class ZoneLabel { Escape, Capture, Boundary };

// Circle of points P with distance(P, first) / distance(P, second) equal to
// a fixed ratio.
struct ApolloniusCircle {
  Vec2 center;
  double radius = 0.0;
  double ratio = 0.0;
};

// Throws DegenerateRatio when |ratio - 1| < 1e-12 (the locus is a line).
ApolloniusCircle apollonius_circle(Vec2 first, Vec2 second, double ratio);

// How the safe distance e is derived for variable-velocity classification.
struct SafeDistancePolicy {
  enum class Kind { FractionOfInitialRange, Absolute };
  Kind kind = Kind::FractionOfInitialRange;
  double value = 0.5;
};

// Zone-map parameters in the canonical engagement frame: the attacker sits
// at (x_A, 0), the defender at (-x_A, 0), and speeds enter through the
// ratios gamma_AT = v_T / v_A and gamma_AD = v_D / v_A.
struct ZoneParams {
  double x_A = 1.0;
  double gamma_AT = 0.5;
  double gamma_AD = 1.0;
  SafeDistancePolicy e_policy{};
  double sigma_pos = 0.0;        // attacker position sigma (stochastic maps)
  double capture_radius = -1.0;  // defender's radius; < 0 selects x_A / 50
};

// Signed escape margin of a constant-speed engagement: positive when some
// point reachable by the target ahead of the attacker is also covered by
// the defender, negative when the attacker dominates the target's whole
// reachable disc. Zero on the zone boundary.
double cs_margin(Vec2 target, const ZoneParams& p);

// Label from cs_margin with a 1e-9 boundary band.
ZoneLabel classify_constant_speed(Vec2 target, const ZoneParams& p);

// Escape-zone boundary for equal attacker/defender speeds: the positive-y
// branch of y(x) = x_A sqrt(1-g^2) sqrt(x^2/(g^2 x_A^2) - 1) with
// g = gamma_AT, defined for x >= g * x_A (nullopt outside the domain).
std::optional<double> boundary_equal_speed(const ZoneParams& p, double x);

// Coefficients {c0, c1, c2, c3, c4} of the unequal-speed boundary quartic
//   c3^2 y^4 + [2 c3 (c2 x^2 + c4 x + c0) - c1^2] y^2
//     + (c2 x^2 + c4 x + c0)^2 - c1^2 (x - x_A)^2 = 0
// in y^2, with
//   c0 = x_A^2 (1-g^2)(1-h^2)(1-4g^2-h^2)
//   c1 = -4 g h x_A (1-g^2)(1-h^2)
//   c2 = c3 = (1-g^2)(1-h^2)^2
//   c4 = 2 x_A (1-g^2)(1+h^2)(1-h^2)
// for g = gamma_AT, h = gamma_AD.
std::array<double, 5> quartic_coefficients(const ZoneParams& p);

struct QuarticRoots {
  // Valid (real, nonnegative) y^2 roots at the queried x, descending.
  std::vector<double> y_squared;
  // Index of the branch classically associated with the zone boundary:
  // the larger root when gamma_AD < 1, the smaller when gamma_AD > 1.
  // -1 when that branch is not among the valid roots.
  int designated = -1;
};

// Solves the boundary quartic at abscissa x (gamma_AD != 1).
QuarticRoots quartic_boundary(const ZoneParams& p, double x);

// Zone label for a target that cannot move.
ZoneLabel classify_stationary(Vec2 target, const ZoneParams& p);
double stationary_margin(Vec2 target, const ZoneParams& p);

// Rigid transform into a frame at (x0, y0) rotated by phi:
// x' = (x-x0) cos phi + (y-y0) sin phi, y' = (y-y0) cos phi - (x-x0) sin phi.
std::vector<Vec2> frame_transform(std::span<const Vec2> pts, double x0,
                                  double y0, double phi);

// Detail of a variable-velocity classification: the target holds position
// while the attacker closes (straight-line pursuit) and the defender flies a
// collision-course intercept. If the defender reaches the attacker within
// the capture radius first, the target escapes without moving. If instead
// the attacker range falls to the safe distance e, the engagement is frozen,
// re-expressed in the instantaneous attacker/defender frame, and classified
// by the constant-speed criterion with the target now moving at full speed.
struct VvOutcome {
  ZoneLabel label = ZoneLabel::Escape;
  bool e_violated = false;
  double pre_phase_time = 0.0;  // in units of length / v_A
  double margin = 0.0;          // +/-inf when decided before any e-violation
};

VvOutcome classify_variable_velocity_detail(Vec2 target, const ZoneParams& p);
ZoneLabel classify_variable_velocity(Vec2 target, const ZoneParams& p);

// Worst-case constant-speed margin when the attacker's position is only
// known to lie in a closed 3-sigma disc: the engagement frame is rebuilt
// for each perturbed attacker position (defender fixed) and the minimum
// margin over the disc centre and boundary is taken.
double stochastic_margin(Vec2 target, const ZoneParams& p);
ZoneLabel stochastic_classify(Vec2 target, const ZoneParams& p);

enum class ZoneKind { ConstantSpeed, Stationary, VariableVelocity, Stochastic };

// Inclusive node grid: nx * ny samples spanning [x_min, x_max] x [y_min, y_max].
struct GridSpec {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  int nx = 2, ny = 2;

  double x_at(int ix) const {
    return nx > 1 ? x_min + ix * (x_max - x_min) / (nx - 1) : x_min;
  }
  double y_at(int iy) const {
    return ny > 1 ? y_min + iy * (y_max - y_min) / (ny - 1) : y_min;
  }
};

struct ZoneMap {
  GridSpec grid;
  ZoneKind kind = ZoneKind::ConstantSpeed;
  std::vector<ZoneLabel> labels;  // row-major: labels[iy * nx + ix]
  // Polylines tracing label changes (midpoints of opposite-label edges).
  std::vector<std::vector<Vec2>> boundary;

  ZoneLabel at(int ix, int iy) const { return labels[iy * grid.nx + ix]; }
};

ZoneMap build_zone_map(const ZoneParams& p, const GridSpec& grid,
                       ZoneKind kind);

}  // namespace tad
