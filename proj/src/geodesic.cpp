#include "pants/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "pants/ode.hpp"

namespace pants {

namespace {
using Vec6 = Eigen::Matrix<double, 6, 1>;

Eigen::Vector3d pos(const Vec6& y) { return y.head<3>(); }
Eigen::Vector3d vel(const Vec6& y) { return y.tail<3>(); }

// Geodesic equation of F * ds1^2 on the unit-sphere embedding:
//   X'' = (1/2)|X'|^2 grad(log F) - (grad(log F).X') X' - |X'|^2 X
// with grad tangent-projected. Unit JM speed corresponds to |X'| = 2/sqrt(F).
Vec6 embedding_rhs(const Vec6& y, const MassTriple& m, double min_side) {
  const Eigen::Vector3d x = pos(y);
  const Eigen::Vector3d v = vel(y);
  const Eigen::Vector3d g = grad_log_conformal(x, m, min_side);
  const double v2 = v.squaredNorm();
  Vec6 dy;
  dy.head<3>() = v;
  dy.tail<3>() = 0.5 * v2 * g - g.dot(v) * v - v2 * x;
  return dy;
}

// Renormalize: put X back on the sphere, V back in the tangent plane and
// rescale to unit JM speed. Returns |speed - 1| before the fix.
double renormalize(Vec6& y, const MassTriple& m, double min_side) {
  Eigen::Vector3d x = pos(y);
  Eigen::Vector3d v = vel(y);
  x.normalize();
  v -= v.dot(x) * x;
  const SideTriple s = squared_sides(x);
  const double F = conformal_factor(s, m, min_side);
  const double speed = 0.5 * std::sqrt(F) * v.norm();
  v *= 1.0 / speed;
  y.head<3>() = x;
  y.tail<3>() = v;
  return std::abs(speed - 1.0);
}

}  // namespace

Vec6 embed_state(const GeodesicState& st) {
  const double c = std::cos(st.point.phi), sn = std::sin(st.point.phi);
  const double ct = std::cos(st.point.theta), snt = std::sin(st.point.theta);
  const Eigen::Vector3d x(c * ct, c * snt, sn);
  const Eigen::Vector3d e_phi(-sn * ct, -sn * snt, c);
  const Eigen::Vector3d e_theta(-c * snt, c * ct, 0.0);  // = c * unit east
  Vec6 y;
  y.head<3>() = x;
  y.tail<3>() = st.v_phi * e_phi + st.v_theta * e_theta;
  return y;
}

GeodesicState chart_state(const Vec6& y, double s) {
  const Eigen::Vector3d x = pos(y);
  const Eigen::Vector3d v = vel(y);
  GeodesicState st;
  st.point = shape_point_from_unit(x);
  const double c = std::cos(st.point.phi), sn = std::sin(st.point.phi);
  const double ct = std::cos(st.point.theta), snt = std::sin(st.point.theta);
  const Eigen::Vector3d e_phi(-sn * ct, -sn * snt, c);
  const Eigen::Vector3d east(-snt, ct, 0.0);
  st.v_phi = v.dot(e_phi);
  st.v_theta = c > 1e-300 ? v.dot(east) / c : 0.0;
  st.s = s;
  return st;
}

double jm_speed(const GeodesicState& st, const MassTriple& m) {
  const double c = std::cos(st.point.phi);
  const double F = conformal_factor(st.point, m);
  return std::sqrt(F * 0.25 * (st.v_phi * st.v_phi + c * c * st.v_theta * st.v_theta));
}

GeodesicState unit_speed_state(const ShapePoint& p, double d_phi, double d_theta,
                               const MassTriple& m) {
  GeodesicState st;
  st.point = p;
  st.v_phi = d_phi;
  st.v_theta = d_theta;
  const double q = jm_speed(st, m);
  if (!(q > 0.0)) throw std::invalid_argument("unit_speed_state: zero direction");
  st.v_phi /= q;
  st.v_theta /= q;
  return st;
}

StateDerivative geodesic_rhs(const GeodesicState& state, const MassTriple& m) {
  const double c = std::cos(state.point.phi);
  if (std::abs(c) < 1e-8)
    throw PoleSingularity("geodesic_rhs: chart degenerates at the poles");
  const double sn = std::sin(state.point.phi);
  const ChartPartials cp = conformal_partials(state.point, m);
  const double Lphi = cp.F_phi / cp.F;
  const double Ltheta = cp.F_theta / cp.F;
  const double vp = state.v_phi, vt = state.v_theta;
  StateDerivative d;
  d.d_phi = vp;
  d.d_theta = vt;
  d.d_v_phi = 0.5 * Lphi * (c * c * vt * vt - vp * vp) - Ltheta * vp * vt - c * sn * vt * vt;
  d.d_v_theta = 0.5 * Ltheta * (vp * vp / (c * c) - vt * vt) - Lphi * vp * vt +
                2.0 * (sn / c) * vp * vt;
  return d;
}

int classify_crossing(double theta, double exclusion_rho) {
  const ShapePoint p{0.0, theta};
  const SideTriple s = squared_sides(p);
  if (collision_distance(s, s.argmin()) < exclusion_rho)
    throw AtCollision("classify_crossing: angle within collision exclusion");
  return s.argmax();
}

Trajectory integrate(const GeodesicState& start, const MassTriple& m, double s_max,
                     const IntegrateOptions& opt) {
  Trajectory traj;
  const double min_side = std::min(opt.stop_side, kDefaultSideExclusion);

  DormandPrince<6> dp(
      [&m, min_side](double, const Vec6& y) { return embedding_rhs(y, m, min_side); },
      opt.tol, opt.tol * 1e-2);

  Vec6 y = embed_state(start);
  renormalize(y, m, min_side);
  double s = 0.0;
  double drift_sum = 0.0;
  double last_sample_s = -1e300;
  int last_sign = 0;  // sign of phi on the side we came from

  auto push_sample = [&](const Vec6& yy, double ss) {
    GeodesicState st = chart_state(yy, ss);
    const double F = conformal_factor(st.point, m, min_side * 0.5);
    traj.samples.push_back(st);
    double t_prev = traj.newton_time.empty() ? 0.0 : traj.newton_time.back();
    if (traj.samples.size() >= 2) {
      const double ds = ss - traj.samples[traj.samples.size() - 2].s;
      const double F_prev =
          conformal_factor(traj.samples[traj.samples.size() - 2].point, m, min_side * 0.5);
      t_prev += ds * 0.5 * (1.0 / (std::sqrt(2.0) * F) + 1.0 / (std::sqrt(2.0) * F_prev));
    }
    traj.newton_time.push_back(t_prev);
  };

  push_sample(y, 0.0);

  double h = std::min(opt.max_step, 1e-3);
  Vec6 k1 = dp.eval(s, y);
  std::size_t steps = 0;

  auto stop_check = [&](const Vec6& yy) -> int {
    const SideTriple sd = squared_sides(pos(yy).normalized());
    const int k = sd.argmin();
    return sd[k] < opt.stop_side ? k : 0;
  };

  // Locate a syzygy inside an accepted step by bisection on a single RK
  // sub-step from the step's start state.
  auto locate_event = [&](const Vec6& y0, double s0, double h_acc) {
    auto z_at = [&](double tau) -> Vec6 {
      if (tau <= 0.0) return y0;
      auto r = dp.step(s0, y0, dp.eval(s0, y0), tau);
      return r.y;
    };
    double lo = 0.0, hi = h_acc;
    double zlo = pos(y0).z();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Vec6 ym = z_at(mid);
      const double zm = pos(ym).normalized().z();
      if ((zm > 0.0) == (zlo > 0.0)) {
        lo = mid;
        zlo = zm;
      } else {
        hi = mid;
      }
      if (std::abs(zm) < 1e-12 || (hi - lo) < 1e-15 * std::max(1.0, h_acc)) break;
    }
    const double tau = 0.5 * (lo + hi);
    Vec6 ye = z_at(tau);
    renormalize(ye, m, min_side * 0.5);
    GeodesicState est = chart_state(ye, s0 + tau);
    // fold phi to exactly zero for the event record
    SyzygyEvent ev;
    ev.s_at = s0 + tau;
    ev.theta_at = est.point.theta;
    ev.sign = est.v_phi < 0.0 ? +1 : -1;
    ev.letter = classify_crossing(est.point.theta);
    traj.events.push_back(ev);
    traj.event_states.push_back(est);
  };

  while (s < s_max) {
    if (++steps > opt.max_steps) throw StepFailure("integrate: step budget exhausted");
    h = std::min(h, s_max - s);
    h = std::min(h, opt.max_step);

    auto res = dp.step(s, y, k1, h);
    if (res.error > 1.0) {
      h = dp.next_h(h, res.error);
      if (h < opt.min_step) throw StepFailure("integrate: step size collapsed");
      continue;
    }

    const double z_before = pos(y).z();
    const double z_after = pos(res.y).normalized().z();
    const Vec6 y_start = y;
    const double s_start = s;

    s += h;
    y = res.y;
    const double drift = renormalize(y, m, min_side * 0.5);
    traj.max_speed_drift = std::max(traj.max_speed_drift, drift);
    drift_sum += drift;
    k1 = dp.eval(s, y);

    if ((z_before > 0.0) != (z_after > 0.0) && std::abs(z_before) > 0.0)
      locate_event(y_start, s_start, h);
    (void)last_sign;

    if (opt.sample_ds <= 0.0 || s - last_sample_s >= opt.sample_ds || s >= s_max) {
      push_sample(y, s);
      last_sample_s = s;
    }

    const int k_end = stop_check(y);
    if (k_end != 0) {
      traj.fate = Fate::EnteredEnd;
      traj.end_k = k_end;
      if (traj.samples.back().s < s) push_sample(y, s);
      break;
    }

    h = dp.next_h(h, res.error);
    if (h < opt.min_step) throw StepFailure("integrate: step size collapsed");
  }

  traj.total_arclength = s;
  traj.drift_per_unit = s > 0.0 ? drift_sum / s : 0.0;
  if (traj.samples.back().s < s) push_sample(y, s);
  return traj;
}

std::optional<int> detect_end_approach(const Trajectory& traj, const MassTriple& m,
                                       double window, double ell_threshold) {
  if (traj.fate == Fate::EnteredEnd) return traj.end_k;
  if (traj.samples.size() < 4) return std::nullopt;
  const double s_end = traj.samples.back().s;
  if (s_end < window) return std::nullopt;

  for (int k = 1; k <= 3; ++k) {
    bool monotone = true;
    double prev = -1e300;
    double last = 0.0;
    bool any = false;
    for (const auto& st : traj.samples) {
      if (st.s < s_end - window) continue;
      if (!in_end_chart(st.point, k)) {
        monotone = false;
        break;
      }
      double rho, chi;
      end_polar_coords(st.point, k, &rho, &chi);
      const double ell = end_ell(k, rho, chi, m, 1e-8);
      if (ell <= prev) {
        monotone = false;
        break;
      }
      prev = ell;
      last = ell;
      any = true;
    }
    if (monotone && any && last > ell_threshold) return k;
  }
  return std::nullopt;
}

}  // namespace pants
