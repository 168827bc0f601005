#include "pants/collision.hpp"

#include <algorithm>
#include <cmath>

#include "pants/ode.hpp"

namespace pants {

namespace {

using Eigen::Vector2d;

double cross2(const Vector2d& a, const Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Split {
  Vector2d u;  // x1 - x3 = a1 zeta1 - zeta2
  Vector2d v;  // x2 - x3 = -a2 zeta1 - zeta2
  double s2;   // |u|^2 = r13^2
  double s1;   // |v|^2 = r23^2
  double a1, a2;
};

Split split(const FullState& s, const MassTriple& m) {
  Split sp;
  sp.a1 = m.m2 / (m.m1 + m.m2);
  sp.a2 = m.m1 / (m.m1 + m.m2);
  sp.u = sp.a1 * s.zeta1 - s.zeta2;
  sp.v = -sp.a2 * s.zeta1 - s.zeta2;
  sp.s2 = sp.u.squaredNorm();
  sp.s1 = sp.v.squaredNorm();
  return sp;
}

Vector2d dW_dzeta1(const Split& sp, const MassTriple& m) {
  // W = m1 m3 / s2 + m2 m3 / s1
  return -2.0 * sp.a1 * m.m1 * m.m3 / (sp.s2 * sp.s2) * sp.u +
         2.0 * sp.a2 * m.m2 * m.m3 / (sp.s1 * sp.s1) * sp.v;
}

Vector2d dW_dzeta2(const Split& sp, const MassTriple& m) {
  return 2.0 * m.m1 * m.m3 / (sp.s2 * sp.s2) * sp.u +
         2.0 * m.m2 * m.m3 / (sp.s1 * sp.s1) * sp.v;
}

void check_separations(const FullState& s, const Split& sp) {
  if (s.zeta1.squaredNorm() <= 0.0 || sp.s1 <= 0.0 || sp.s2 <= 0.0)
    throw Singularity("full_rhs: vanishing separation");
}

using Vec8 = Eigen::Matrix<double, 8, 1>;

Vec8 pack(const FullState& s) {
  Vec8 y;
  y << s.zeta1, s.zeta2, s.zdot1, s.zdot2;
  return y;
}

FullState unpack(const Vec8& y) {
  FullState s;
  s.zeta1 = y.segment<2>(0);
  s.zeta2 = y.segment<2>(2);
  s.zdot1 = y.segment<2>(4);
  s.zdot2 = y.segment<2>(6);
  return s;
}

}  // namespace

double mu1(const MassTriple& m) { return m.m1 * m.m2 / (m.m1 + m.m2); }
double mu2(const MassTriple& m) { return m.m3 * (m.m1 + m.m2) / m.total(); }

double j1(const FullState& s) { return cross2(s.zeta1, s.zdot1); }

double j1_rate(const FullState& s, const MassTriple& m) {
  const Split sp = split(s, m);
  return cross2(s.zeta1, dW_dzeta1(sp, m) / mu1(m));
}

double interaction_W(const FullState& s, const MassTriple& m) {
  const Split sp = split(s, m);
  return m.m1 * m.m3 / sp.s2 + m.m2 * m.m3 / sp.s1;
}

double energy(const FullState& s, const MassTriple& m) {
  const double r2 = s.zeta1.squaredNorm();
  return 0.5 * (mu1(m) * s.zdot1.squaredNorm() + mu2(m) * s.zdot2.squaredNorm()) -
         m.m1 * m.m2 / r2 - interaction_W(s, m);
}

double moment_of_inertia(const FullState& s, const MassTriple& m) {
  return mu1(m) * s.zeta1.squaredNorm() + mu2(m) * s.zeta2.squaredNorm();
}

double moment_rate(const FullState& s, const MassTriple& m) {
  return 2.0 * (mu1(m) * s.zeta1.dot(s.zdot1) + mu2(m) * s.zeta2.dot(s.zdot2));
}

double total_angular_momentum(const FullState& s, const MassTriple& m) {
  return mu1(m) * cross2(s.zeta1, s.zdot1) + mu2(m) * cross2(s.zeta2, s.zdot2);
}

double moment_second_rate(const FullState& s, const MassTriple& m) {
  // Iddot = 2K - 4U by the homogeneity of the potential
  const double K =
      mu1(m) * s.zdot1.squaredNorm() + mu2(m) * s.zdot2.squaredNorm();
  const double U = m.m1 * m.m2 / s.zeta1.squaredNorm() + interaction_W(s, m);
  return 2.0 * K - 4.0 * U;
}

FullDerivative full_rhs(const FullState& s, const MassTriple& m) {
  const Split sp = split(s, m);
  check_separations(s, sp);
  const double r2 = s.zeta1.squaredNorm();
  FullDerivative d;
  d.dzeta1 = s.zdot1;
  d.dzeta2 = s.zdot2;
  d.dzdot1 = -2.0 * (m.m1 + m.m2) / (r2 * r2) * s.zeta1 + dW_dzeta1(sp, m) / mu1(m);
  d.dzdot2 = dW_dzeta2(sp, m) / mu2(m);
  return d;
}

void cartesian_positions(const FullState& s, const MassTriple& m, Vector2d x[3]) {
  const Vector2d g12 = -(m.m3 / m.total()) * s.zeta2;  // center of mass at 0
  const double a1 = m.m2 / (m.m1 + m.m2);
  const double a2 = m.m1 / (m.m1 + m.m2);
  x[0] = g12 + a1 * s.zeta1;
  x[1] = g12 - a2 * s.zeta1;
  x[2] = ((m.m1 + m.m2) / m.total()) * s.zeta2;
}

FullState jacobi_from_cartesian(const Vector2d x[3], const Vector2d v[3],
                                const MassTriple& m) {
  FullState s;
  const double msum = m.m1 + m.m2;
  s.zeta1 = x[0] - x[1];
  s.zeta2 = x[2] - (m.m1 * x[0] + m.m2 * x[1]) / msum;
  s.zdot1 = v[0] - v[1];
  s.zdot2 = v[2] - (m.m1 * v[0] + m.m2 * v[1]) / msum;
  return s;
}

FullTimeline integrate_full(const FullState& start, const MassTriple& m, double t_max,
                            const FullIntegrateOptions& opt) {
  FullTimeline tl;

  DormandPrince<8> dp(
      [&m](double, const Vec8& y) {
        const FullState s = unpack(y);
        const FullDerivative d = full_rhs(s, m);
        Vec8 dy;
        dy << d.dzeta1, d.dzeta2, d.dzdot1, d.dzdot2;
        return dy;
      },
      opt.tol, opt.tol);

  auto record = [&](double t, const FullState& s) {
    FullSample smp;
    smp.t = t;
    smp.state = s;
    smp.r = s.r();
    smp.J1 = j1(s);
    smp.H = energy(s, m);
    smp.I = moment_of_inertia(s, m);
    smp.Iddot = moment_second_rate(s, m);
    tl.samples.push_back(smp);
  };

  Vec8 y = pack(start);
  double t = 0.0;
  record(t, start);
  double last_record = 0.0;

  double h = std::min(opt.max_step, 1e-4);
  Vec8 k1 = dp.eval(t, y);
  std::size_t steps = 0;

  while (t < t_max) {
    if (++steps > opt.max_steps) {
      tl.stop = StopReason::StepFail;
      break;
    }
    h = std::min(h, t_max - t);
    typename DormandPrince<8>::StepResult res;
    try {
      res = dp.step(t, y, k1, h);
    } catch (const Singularity&) {
      h *= 0.25;
      if (h < 1e-18) throw StepFailure("integrate_full: stepped into a singularity");
      continue;
    }
    if (res.error > 1.0) {
      h = dp.next_h(h, res.error);
      if (h < 1e-18) throw StepFailure("integrate_full: step size collapsed");
      continue;
    }
    t += h;
    y = res.y;
    k1 = res.k_last;

    const FullState s = unpack(y);
    if (opt.sample_dt <= 0.0 || t - last_record >= opt.sample_dt || t >= t_max) {
      record(t, s);
      last_record = t;
    }
    if (s.r() < opt.epsilon_stop) {
      if (tl.samples.back().t < t) record(t, s);
      tl.stop = StopReason::Collision;
      break;
    }
    if (moment_of_inertia(s, m) > opt.escape_inertia) {
      if (tl.samples.back().t < t) record(t, s);
      tl.stop = StopReason::Escape;
      break;
    }
    h = dp.next_h(h, res.error);
  }
  tl.t_end = t;
  if (tl.stop == StopReason::TimeUp && tl.samples.back().t < t)
    record(t, unpack(y));
  return tl;
}

DriftReport j1_drift_bound(const FullTimeline& tl, const MassTriple& m) {
  DriftReport rep;
  for (const auto& smp : tl.samples) {
    const double rate = std::abs(j1_rate(smp.state, m));
    rep.max_abs_rate = std::max(rep.max_abs_rate, rate);
    if (smp.r > 0.0) rep.C = std::max(rep.C, rate / smp.r);
  }
  return rep;
}

bool open_condition(const CollisionPredicate& pred, const MassTriple& m) {
  return 2.0 * (m.m1 + m.m2) - pred.J1_0 * pred.J1_0 - pred.Kstar * pred.r0 >
         pred.delta * pred.delta;
}

double calibrate_Kstar(const MassTriple& m, double epsilon, int samples,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const double target = 2.0 * (m.m1 + m.m2);
  for (int i = 0; i < samples; ++i) {
    const FullState s0 = random_infall_state(m, epsilon, rng);
    const double r0 = s0.r();
    const double J10 = j1(s0);
    FullIntegrateOptions opt;
    opt.tol = 1e-12;
    const FullTimeline tl = integrate_full(s0, m, 1.0, opt);
    for (const auto& smp : tl.samples) {
      const double rdot = smp.state.zeta1.dot(smp.state.zdot1) / smp.r;
      if (rdot >= 0.0) break;  // the bound is claimed while rdot < 0
      const double lhs = std::abs(smp.r * smp.r * rdot * rdot + J10 * J10 - target);
      worst = std::max(worst, lhs / r0);
    }
  }
  return 2.0 * worst;
}

BoundExperimentReport collision_bound_experiment(const FullState& start,
                                                 const MassTriple& m, double delta,
                                                 const FullIntegrateOptions& opt) {
  BoundExperimentReport rep;
  const double r0 = start.r();
  rep.t_bound = r0 * r0 / (2.0 * delta);
  rep.min_neg_r_rdot = 1e300;
  FullIntegrateOptions o = opt;
  o.sample_dt = 0.0;
  const FullTimeline tl = integrate_full(start, m, 2.0 * rep.t_bound, o);
  rep.collided = tl.stop == StopReason::Collision;
  rep.t_collision = tl.t_end;
  rep.within_bound = rep.collided && tl.t_end <= rep.t_bound;
  bool held = true;
  for (const auto& smp : tl.samples) {
    if (smp.r < o.epsilon_stop) break;
    const double rdot = smp.state.zeta1.dot(smp.state.zdot1) / smp.r;
    const double neg = -smp.r * rdot;
    rep.min_neg_r_rdot = std::min(rep.min_neg_r_rdot, neg);
    if (neg < delta) held = false;
  }
  rep.rdot_inequality_held = held;
  return rep;
}

FullState collinear_infall_state(const MassTriple& m, double r0) {
  // All positions and velocities on the x-axis; I = 1, H = 0, Idot = 0.
  FullState s;
  const double u1 = mu1(m), u2 = mu2(m);
  if (u1 * r0 * r0 >= 1.0)
    throw std::invalid_argument("collinear_infall_state: r0 too large for I = 1");
  const double z = std::sqrt((1.0 - u1 * r0 * r0) / u2);
  s.zeta1 = Vector2d(r0, 0.0);
  s.zeta2 = Vector2d(z, 0.0);
  const double rhs = m.m1 * m.m2 / (r0 * r0) + interaction_W(s, m);
  // velocities along the axis; Idot = 0 fixes w = -u1 r0 a / (u2 z), then
  // H = 0 fixes |a|
  const double a2 = 2.0 * rhs / (u1 * (1.0 + u1 * r0 * r0 / (u2 * z * z)));
  const double a = -std::sqrt(a2);
  const double w = -u1 * r0 * a / (u2 * z);
  s.zdot1 = Vector2d(a, 0.0);
  s.zdot2 = Vector2d(w, 0.0);
  return s;
}

FullState random_infall_state(const MassTriple& m, double epsilon,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u1 = mu1(m), u2 = mu2(m);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    FullState s;
    const double r0 = epsilon * (0.2 + 0.8 * unif(rng));
    const double ang1 = 2.0 * M_PI * unif(rng);
    s.zeta1 = r0 * Vector2d(std::cos(ang1), std::sin(ang1));
    const double z = std::sqrt((1.0 - u1 * r0 * r0) / u2);
    const double ang2 = 2.0 * M_PI * unif(rng);
    s.zeta2 = z * Vector2d(std::cos(ang2), std::sin(ang2));
    // random zdot2 of moderate size
    const double ang3 = 2.0 * M_PI * unif(rng);
    const double w = unif(rng);
    s.zdot2 = w * Vector2d(std::cos(ang3), std::sin(ang3));
    // choose zdot1 to satisfy J = 0 and H = 0 with rdot < 0
    const double kinetic_budget =
        2.0 * (m.m1 * m.m2 / (r0 * r0) + interaction_W(s, m)) -
        u2 * s.zdot2.squaredNorm();
    if (kinetic_budget <= 0.0) continue;
    const double j2 = u2 * cross2(s.zeta2, s.zdot2);
    const Vector2d rhat = s.zeta1 / r0;
    const Vector2d rperp(-rhat.y(), rhat.x());
    const double b = -j2 / (u1 * r0);  // transverse speed from J = 0
    const double a2 = kinetic_budget / u1 - b * b;
    if (a2 <= 0.0) continue;
    const double a = -std::sqrt(a2);  // infalling
    s.zdot1 = a * rhat + b * rperp;
    return s;
  }
  throw Error("random_infall_state: failed to sample a valid state");
}

FullState full_state_from_shape(const ShapePoint& p, const MassTriple& m,
                                std::mt19937_64& rng) {
  const SideTriple sd = squared_sides(p);
  // Build the triangle from the side lengths. For the I = 1 normalization
  // the physical s_k are (I1/I-scaled) multiples of the normalized ones; the
  // scale is fixed by I = sum p_k s_k / M = 1.
  const double scale = m.total() / (m.p(1) * sd.s1 + m.p(2) * sd.s2 + m.p(3) * sd.s3);
  const double r12 = std::sqrt(sd.s3 * scale);
  const double r13 = std::sqrt(sd.s2 * scale);
  const double r23 = std::sqrt(sd.s1 * scale);

  Eigen::Vector2d x[3];
  x[0] = Vector2d(0.0, 0.0);
  x[1] = Vector2d(r12, 0.0);
  const double ax = (r12 * r12 + r13 * r13 - r23 * r23) / (2.0 * r12);
  const double ay2 = r13 * r13 - ax * ax;
  const double ay = std::sqrt(std::max(0.0, ay2));
  x[2] = Vector2d(ax, ay);

  // center of mass to the origin
  const Vector2d cm = (m.m1 * x[0] + m.m2 * x[1] + m.m3 * x[2]) / m.total();
  for (auto& xi : x) xi -= cm;

  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::Vector2d v[3];
  for (auto& vi : v) vi = Vector2d(unif(rng), unif(rng));
  // remove center-of-mass drift
  const Vector2d vcm = (m.m1 * v[0] + m.m2 * v[1] + m.m3 * v[2]) / m.total();
  for (auto& vi : v) vi -= vcm;
  // remove angular momentum: subtract omega * x_perp
  double J = 0.0, I = 0.0;
  for (int i = 0; i < 3; ++i) {
    J += m.mass(i + 1) * cross2(x[i], v[i]);
    I += m.mass(i + 1) * x[i].squaredNorm();
  }
  const double omega = J / I;
  for (int i = 0; i < 3; ++i) v[i] -= omega * Vector2d(-x[i].y(), x[i].x());
  // remove the radial (scaling) component so Idot = 0
  double xdotv = 0.0;
  for (int i = 0; i < 3; ++i) xdotv += m.mass(i + 1) * x[i].dot(v[i]);
  for (int i = 0; i < 3; ++i) v[i] -= (xdotv / I) * x[i];
  // scale kinetic energy to H = 0
  FullState probe = jacobi_from_cartesian(x, v, m);
  const double U = m.m1 * m.m2 / probe.zeta1.squaredNorm() + interaction_W(probe, m);
  double K = 0.0;
  for (int i = 0; i < 3; ++i) K += m.mass(i + 1) * v[i].squaredNorm();
  const double lam = std::sqrt(2.0 * U / K);
  for (auto& vi : v) vi *= lam;

  FullState s = jacobi_from_cartesian(x, v, m);
  // flip orientation if the hemisphere disagrees with the requested sign
  const ShapePoint back = project_to_shape(s, m);
  if (back.phi * p.phi < 0.0) {
    for (auto& xi : x) xi.y() = -xi.y();
    for (auto& vi : v) vi.y() = -vi.y();
    s = jacobi_from_cartesian(x, v, m);
  }
  return s;
}

ShapePoint project_to_shape(const FullState& s, const MassTriple& m) {
  const Split sp = split(s, m);
  const double q3 = s.zeta1.squaredNorm();  // r12^2
  const double q2 = sp.s2;                  // r13^2
  const double q1 = sp.s1;                  // r23^2
  const double I1 = (q1 + q2 + q3) / 3.0;
  const double s1 = q1 / I1, s2 = q2 / I1;
  // invert s_k = 1 - cos(phi) gamma_k(theta)
  const double cx = 1.0 - s1;                       // cos(phi) cos(theta)
  const double cy = -(cx + 2.0 * (1.0 - s2)) / std::sqrt(3.0);
  const double c = std::hypot(cx, cy);
  double theta = std::atan2(cy, cx);
  if (theta < 0.0) theta += 2.0 * M_PI;
  double phi = std::acos(std::clamp(c, 0.0, 1.0));
  // hemisphere from the triangle's orientation
  Eigen::Vector2d x[3];
  cartesian_positions(s, m, x);
  const double area2 = cross2(x[1] - x[0], x[2] - x[0]);
  if (area2 < 0.0) phi = -phi;
  return {phi, theta};
}

}  // namespace pants
