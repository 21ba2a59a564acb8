#include "tad/zones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tad/errors.hpp"

namespace tad {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

ZoneLabel label_from_margin(double m) {
  if (std::abs(m) < kBoundaryTol) return ZoneLabel::Boundary;
  return m > 0.0 ? ZoneLabel::Escape : ZoneLabel::Capture;
}

double resolved_capture_radius(const ZoneParams& p) {
  return p.capture_radius > 0.0 ? p.capture_radius : p.x_A / 50.0;
}

}  // namespace

ApolloniusCircle apollonius_circle(Vec2 first, Vec2 second, double ratio) {
  if (std::abs(ratio - 1.0) < 1e-12) {
    throw DegenerateRatio("Apollonius locus degenerates to a line at ratio " +
                          std::to_string(ratio));
  }
  const double g2 = ratio * ratio;
  ApolloniusCircle c;
  c.center = (first - g2 * second) / (1.0 - g2);
  c.radius = ratio * distance(first, second) / std::abs(1.0 - g2);
  c.ratio = ratio;
  return c;
}

double cs_margin(Vec2 target, const ZoneParams& p) {
  const Vec2 A{p.x_A, 0.0};
  const Vec2 D{-p.x_A, 0.0};
  const double g = p.gamma_AT;
  const double h = p.gamma_AD;

  if (std::abs(h - 1.0) < 1e-12) {
    // Equal attacker/defender speeds: the defender covers the half-plane
    // x <= 0, so escape requires the target's reachable circle to cross it.
    return g * distance(target, A) - (target.x - g * g * p.x_A);
  }

  const ApolloniusCircle at = apollonius_circle(target, A, g);
  const ApolloniusCircle ad = apollonius_circle(D, A, h);
  const double d_c = distance(at.center, ad.center);
  if (h < 1.0) {
    // Slower defender: it covers the inside of its circle; escape needs the
    // two discs to overlap.
    return (ad.radius + at.radius) - d_c;
  }
  // Faster defender: the attacker only dominates inside the circle around
  // itself; capture needs the target's disc wholly inside it.
  return d_c - (ad.radius - at.radius);
}

ZoneLabel classify_constant_speed(Vec2 target, const ZoneParams& p) {
  return label_from_margin(cs_margin(target, p));
}

std::optional<double> boundary_equal_speed(const ZoneParams& p, double x) {
  const double g = p.gamma_AT;
  if (x < g * p.x_A) return std::nullopt;
  const double t = x * x / (g * g * p.x_A * p.x_A) - 1.0;
  return p.x_A * std::sqrt(1.0 - g * g) * std::sqrt(std::max(0.0, t));
}

std::array<double, 5> quartic_coefficients(const ZoneParams& p) {
  const double g2 = p.gamma_AT * p.gamma_AT;
  const double h2 = p.gamma_AD * p.gamma_AD;
  const double xA = p.x_A;
  const double c0 = xA * xA * (1 - g2) * (1 - h2) * (1 - 4 * g2 - h2);
  const double c1 = -4 * p.gamma_AT * p.gamma_AD * xA * (1 - g2) * (1 - h2);
  const double c2 = (1 - g2) * (1 - h2) * (1 - h2);
  const double c4 = 2 * xA * (1 - g2) * (1 + h2) * (1 - h2);
  return {c0, c1, c2, c2, c4};
}

QuarticRoots quartic_boundary(const ZoneParams& p, double x) {
  const auto [c0, c1, c2, c3, c4] = quartic_coefficients(p);
  // Quadratic in y^2: a (y^2)^2 + b y^2 + c = 0.
  const double P = c2 * x * x + c4 * x + c0;
  const double a = c3 * c3;
  const double b = 2.0 * c3 * P - c1 * c1;
  const double c = P * P - c1 * c1 * (x - p.x_A) * (x - p.x_A);

  QuarticRoots out;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0 || a <= 0.0) return out;

  // Numerically stable quadratic roots.
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q / a;
  double r2 = (q != 0.0) ? c / q : 0.0;
  if (r1 < r2) std::swap(r1, r2);

  const double clamp_tol = 1e-12 * std::max(1.0, p.x_A * p.x_A);
  for (double root : {r1, r2}) {
    if (root >= -clamp_tol) out.y_squared.push_back(std::max(0.0, root));
  }
  if (!out.y_squared.empty()) {
    if (p.gamma_AD < 1.0) {
      out.designated = 0;  // larger root
    } else {
      out.designated = static_cast<int>(out.y_squared.size()) - 1;  // smaller
    }
  }
  return out;
}

double stationary_margin(Vec2 target, const ZoneParams& p) {
  const Vec2 A{p.x_A, 0.0};
  const Vec2 D{-p.x_A, 0.0};
  const double h = p.gamma_AD;
  if (std::abs(h - 1.0) < 1e-12) {
    return -target.x;  // defender covers x <= 0
  }
  const ApolloniusCircle ad = apollonius_circle(D, A, h);
  const double d = distance(target, ad.center);
  return h < 1.0 ? ad.radius - d : d - ad.radius;
}

ZoneLabel classify_stationary(Vec2 target, const ZoneParams& p) {
  return label_from_margin(stationary_margin(target, p));
}

std::vector<Vec2> frame_transform(std::span<const Vec2> pts, double x0,
                                  double y0, double phi) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (const Vec2& v : pts) {
    const double dx = v.x - x0;
    const double dy = v.y - y0;
    out.push_back({dx * c + dy * s, dy * c - dx * s});
  }
  return out;
}

VvOutcome classify_variable_velocity_detail(Vec2 target, const ZoneParams& p) {
  // Work in units of x_A with unit attacker speed: A at (1, 0), D at (-1, 0).
  const double scale = p.x_A;
  Vec2 A{1.0, 0.0};
  Vec2 D{-1.0, 0.0};
  const Vec2 T{target.x / scale, target.y / scale};
  const double h = p.gamma_AD;

  const double R0 = distance(T, A);
  double e = (p.e_policy.kind == SafeDistancePolicy::Kind::Absolute)
                 ? p.e_policy.value / scale
                 : p.e_policy.value * R0;
  const double rc = resolved_capture_radius(p) / scale;

  const double dt = 2e-3;
  double t = 0.0;
  VvOutcome out;

  for (long step = 0; step < 1000000; ++step) {
    const double r = distance(A, D);
    if (r <= rc) {  // defender reached the attacker first
      out.label = ZoneLabel::Escape;
      out.margin = kInf;
      out.pre_phase_time = t * scale;
      return out;
    }
    const double R = distance(T, A);
    if (R <= rc) {  // attacker reached the motionless target
      out.label = ZoneLabel::Capture;
      out.margin = -kInf;
      out.pre_phase_time = t * scale;
      return out;
    }
    if (R <= e) {
      // Safe distance violated: freeze the geometry, move to the frame
      // aligned with the instantaneous defender->attacker axis, and decide
      // by the constant-speed criterion with the target at full speed.
      const double phi = std::atan2(A.y - D.y, A.x - D.x);
      const Vec2 mid = 0.5 * (A + D);
      const std::vector<Vec2> tp =
          frame_transform(std::span<const Vec2>(&T, 1), mid.x, mid.y, phi);
      ZoneParams q = p;
      q.x_A = 0.5 * distance(A, D);
      out.e_violated = true;
      out.pre_phase_time = t * scale;
      out.margin = cs_margin(tp[0], q) * scale;
      out.label = label_from_margin(out.margin);
      return out;
    }

    // Attacker: straight-line pursuit of the motionless target.
    const Vec2 u = (T - A) / R;
    // Defender: collision-course intercept of the attacker's ray.
    const Vec2 W = A - D;
    const double qa = 1.0 - h * h;
    const double qb = 2.0 * u.dot(W);
    const double qc = W.squared_norm();
    double s = -1.0;
    if (std::abs(qa) < 1e-12) {
      if (qb < -1e-12) s = -qc / qb;
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double s1 = (-qb - sq) / (2.0 * qa);
        const double s2 = (-qb + sq) / (2.0 * qa);
        const double lo = std::min(s1, s2);
        const double hi = std::max(s1, s2);
        if (lo > 0.0) {
          s = lo;
        } else if (hi > 0.0) {
          s = hi;
        }
      }
    }
    Vec2 aim = (s > 0.0) ? (A + s * u) : A;  // fall back to direct pursuit
    const double ad = distance(aim, D);
    const Vec2 dir = (ad > 1e-15) ? (aim - D) / ad : u;

    A += u * dt;
    D += dir * (h * dt);
    t += dt;
  }

  // Unreachable in practice: the attacker always closes on a fixed target.
  out.label = classify_constant_speed({T.x * scale, T.y * scale}, p);
  out.pre_phase_time = t * scale;
  return out;
}

ZoneLabel classify_variable_velocity(Vec2 target, const ZoneParams& p) {
  return classify_variable_velocity_detail(target, p).label;
}

double stochastic_margin(Vec2 target, const ZoneParams& p) {
  const Vec2 D{-p.x_A, 0.0};
  const double radius = 3.0 * p.sigma_pos;
  constexpr int kBoundarySamples = 64;

  double worst = kInf;
  const auto margin_for = [&](const Vec2& A_pert) {
    const double phi = std::atan2(A_pert.y - D.y, A_pert.x - D.x);
    const Vec2 mid = 0.5 * (A_pert + D);
    const std::vector<Vec2> tp =
        frame_transform(std::span<const Vec2>(&target, 1), mid.x, mid.y, phi);
    ZoneParams q = p;
    q.x_A = 0.5 * distance(A_pert, D);
    return cs_margin(tp[0], q);
  };

  worst = std::min(worst, margin_for({p.x_A, 0.0}));
  if (radius > 0.0) {
    for (int i = 0; i < kBoundarySamples; ++i) {
      const double ang = 2.0 * kPi * i / kBoundarySamples;
      worst = std::min(worst, margin_for({p.x_A + radius * std::cos(ang),
                                          radius * std::sin(ang)}));
    }
  }
  return worst;
}

ZoneLabel stochastic_classify(Vec2 target, const ZoneParams& p) {
  return label_from_margin(stochastic_margin(target, p));
}

namespace {

std::vector<std::vector<Vec2>> trace_boundary(const GridSpec& g,
                                              const std::vector<ZoneLabel>& labels) {
  // Midpoints of grid edges whose endpoints carry opposite labels.
  std::vector<Vec2> points;
  const auto at = [&](int ix, int iy) { return labels[iy * g.nx + ix]; };
  const auto opposite = [](ZoneLabel a, ZoneLabel b) {
    return (a == ZoneLabel::Escape && b == ZoneLabel::Capture) ||
           (a == ZoneLabel::Capture && b == ZoneLabel::Escape);
  };
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix + 1 < g.nx; ++ix) {
      if (opposite(at(ix, iy), at(ix + 1, iy))) {
        points.push_back({0.5 * (g.x_at(ix) + g.x_at(ix + 1)), g.y_at(iy)});
      }
    }
  }
  for (int iy = 0; iy + 1 < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (opposite(at(ix, iy), at(ix, iy + 1))) {
        points.push_back({g.x_at(ix), 0.5 * (g.y_at(iy) + g.y_at(iy + 1))});
      }
    }
  }

  // Greedy nearest-neighbour chaining into polylines.
  const double dx = g.nx > 1 ? (g.x_max - g.x_min) / (g.nx - 1) : 1.0;
  const double dy = g.ny > 1 ? (g.y_max - g.y_min) / (g.ny - 1) : 1.0;
  const double link2 = 1.01 * (dx * dx + dy * dy);

  std::vector<std::vector<Vec2>> polylines;
  std::vector<bool> used(points.size(), false);
  for (std::size_t seed = 0; seed < points.size(); ++seed) {
    if (used[seed]) continue;
    std::vector<Vec2> line{points[seed]};
    used[seed] = true;
    for (bool extended = true; extended;) {
      extended = false;
      const Vec2 tail = line.back();
      std::size_t best = points.size();
      double best_d2 = link2;
      for (std::size_t j = 0; j < points.size(); ++j) {
        if (used[j]) continue;
        const double d2 = (points[j] - tail).squared_norm();
        if (d2 <= best_d2) {
          best_d2 = d2;
          best = j;
        }
      }
      if (best < points.size()) {
        line.push_back(points[best]);
        used[best] = true;
        extended = true;
      }
    }
    polylines.push_back(std::move(line));
  }
  return polylines;
}

}  // namespace

ZoneMap build_zone_map(const ZoneParams& p, const GridSpec& grid,
                       ZoneKind kind) {
  ZoneMap m;
  m.grid = grid;
  m.kind = kind;
  m.labels.resize(static_cast<std::size_t>(grid.nx) * grid.ny);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Vec2 t{grid.x_at(ix), grid.y_at(iy)};
      ZoneLabel label;
      switch (kind) {
        case ZoneKind::ConstantSpeed:
          label = classify_constant_speed(t, p);
          break;
        case ZoneKind::Stationary:
          label = classify_stationary(t, p);
          break;
        case ZoneKind::VariableVelocity:
          label = classify_variable_velocity(t, p);
          break;
        case ZoneKind::Stochastic:
          label = stochastic_classify(t, p);
          break;
      }
      m.labels[static_cast<std::size_t>(iy) * grid.nx + ix] = label;
    }
  }
  m.boundary = trace_boundary(grid, m.labels);
  return m;
}

}  // namespace tad
