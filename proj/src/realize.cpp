#include "pants/realize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "pants/ode.hpp"

namespace pants {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

using Eigen::Vector3d;

double wrap_pi(double a) {
  while (a > kPi) a -= kTwoPi;
  while (a <= -kPi) a += kTwoPi;
  return a;
}

double angle_between(const Vector3d& a, const Vector3d& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vector3d slerp(const Vector3d& a, const Vector3d& b, double t) {
  const double ang = angle_between(a, b);
  if (ang < 1e-14) return a;
  const double sa = std::sin(ang);
  return (std::sin((1.0 - t) * ang) * a + std::sin(t * ang) * b) / sa;
}

// distance (round shape metric, radius 1/2) from x to the arc [p, q]
double point_arc_distance(const Vector3d& x, const Vector3d& p, const Vector3d& q) {
  const Vector3d n = p.cross(q);
  const double nn = n.norm();
  if (nn < 1e-14) return 0.5 * angle_between(x, p);
  const Vector3d nu = n / nn;
  Vector3d proj = x - x.dot(nu) * nu;
  const double pn = proj.norm();
  if (pn < 1e-14) return 0.25 * kPi;  // x is a pole of the arc's circle
  proj /= pn;
  const double arc = angle_between(p, q);
  if (angle_between(p, proj) <= arc + 1e-12 && angle_between(proj, q) <= arc + 1e-12)
    return 0.5 * angle_between(x, proj);
  return 0.5 * std::min(angle_between(x, p), angle_between(x, q));
}

// ---- edge crossings ------------------------------------------------------

struct Crossing {
  double t = 0.0;       // slerp parameter along the edge
  double theta = 0.0;
  int letter = 0;
  int sign = 0;
  Vector3d point;
  Vector3d direction;   // unit tangent of the edge at the crossing
};

void edge_crossings(const Vector3d& a, const Vector3d& b, std::vector<Crossing>* out,
                    int subdivisions = 8) {
  auto zat = [&](double t) { return slerp(a, b, t).z(); };
  auto positive = [](double z) { return z >= 0.0; };
  for (int j = 0; j < subdivisions; ++j) {
    double lo = static_cast<double>(j) / subdivisions;
    double hi = static_cast<double>(j + 1) / subdivisions;
    const bool from_upper = positive(zat(lo));
    if (from_upper == positive(zat(hi))) continue;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (positive(zat(mid)) == from_upper)
        lo = mid;
      else
        hi = mid;
    }
    Crossing c;
    c.t = 0.5 * (lo + hi);
    c.point = slerp(a, b, c.t);
    c.point.z() = 0.0;
    c.point.normalize();
    c.theta = std::atan2(c.point.y(), c.point.x());
    if (c.theta < 0.0) c.theta += kTwoPi;
    c.sign = from_upper ? +1 : -1;  // entering the lower hemisphere is '+'
    c.letter = equator_arc_letter(c.theta);
    // tangent of the edge at the crossing
    const double dt = 1e-6;
    const Vector3d p0 = slerp(a, b, std::max(0.0, c.t - dt));
    const Vector3d p1 = slerp(a, b, std::min(1.0, c.t + dt));
    Vector3d dir = p1 - p0;
    dir -= dir.dot(c.point) * c.point;
    const double dn = dir.norm();
    c.direction = dn > 0.0 ? Vector3d(dir / dn) : Vector3d(0, 0, 1);
    out->push_back(c);
  }
}

std::vector<Crossing> loop_crossings(const std::vector<Vector3d>& vs) {
  std::vector<Crossing> cr;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) edge_crossings(vs[i], vs[(i + 1) % n], &cr);
  return cr;
}

SignedWord word_from_crossings(const std::vector<Crossing>& cr) {
  SignedWord w;
  w.periodic = true;
  for (const auto& c : cr) w.letters.push_back(c.letter);
  if (!cr.empty()) w.first_sign = cr.front().sign > 0 ? Sign::Plus : Sign::Minus;
  for (std::size_t i = 0; i < cr.size(); ++i)
    if ((cr[i].sign > 0 ? Sign::Plus : Sign::Minus) != w.sign_at(i))
      throw HomotopyEscape("loop word: crossing signs fail to alternate");
  return reduce_stutters(w);
}

// ---- edge lengths --------------------------------------------------------

double edge_length_fixed(const Vector3d& a, const Vector3d& b, const MassTriple& m,
                         int qpts) {
  const double round_len = 0.5 * angle_between(a, b);
  if (round_len == 0.0) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < qpts; ++j) {
    const double t = (j + 0.5) / qpts;
    acc += std::sqrt(conformal_factor(squared_sides(slerp(a, b, t)), m));
  }
  return acc / qpts * round_len;
}

double edge_length_refined(const Vector3d& a, const Vector3d& b, const MassTriple& m,
                           double rel_tol) {
  double prev = edge_length_fixed(a, b, m, 4);
  for (int q = 8; q <= 4096; q *= 2) {
    const double cur = edge_length_fixed(a, b, m, q);
    if (std::abs(cur - prev) <= rel_tol * std::max(1e-300, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

std::vector<Vector3d> to_embedding(const std::vector<ShapePoint>& pts) {
  std::vector<Vector3d> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(unit_vector(p));
  return out;
}

std::vector<ShapePoint> from_embedding(const std::vector<Vector3d>& vs) {
  std::vector<ShapePoint> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(shape_point_from_unit(v));
  return out;
}

double arc_mid_angle(int letter) {
  // theta maximizing s_letter on the equator (gamma_letter = -1)
  double t = kPi - (letter - 1) * (kTwoPi / 3.0);
  while (t < 0.0) t += kTwoPi;
  return std::fmod(t, kTwoPi);
}

}  // namespace

double jm_length(const DiscreteLoop& loop, const MassTriple& m, double rel_tol) {
  const auto vs = to_embedding(loop.vertices);
  const std::size_t n = vs.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    total += edge_length_refined(vs[i], vs[(i + 1) % n], m, rel_tol);
  return total;
}

SignedWord loop_word(const DiscreteLoop& loop) {
  return word_from_crossings(loop_crossings(to_embedding(loop.vertices)));
}

DiscreteLoop seed_loop(const SignedWord& word, const MassTriple& m, int n_per_letter,
                       unsigned seed) {
  (void)m;
  if (!word.periodic || word.letters.empty())
    throw std::invalid_argument("seed_loop: word must be periodic and nonempty");
  if (word.letters.size() % 2 != 0)
    throw std::invalid_argument("seed_loop: periodic word must have even length");
  if (has_stutter(word)) throw std::invalid_argument("seed_loop: word must be stutter-free");
  if (!classify(word).tied) throw UntiedWord("seed_loop: word is untied (two-letter class)");
  if (n_per_letter < 4) throw std::invalid_argument("seed_loop: n_per_letter must be >= 4");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jit(-1.0, 1.0);
  const double amp_jitter = seed != 0 ? 0.15 : 0.0;
  const double theta_jitter = seed != 0 ? 0.08 : 0.0;

  const std::size_t n_letters = word.letters.size();
  std::vector<double> cross_theta(n_letters);
  for (std::size_t i = 0; i < n_letters; ++i) {
    cross_theta[i] = arc_mid_angle(word.letters[i]);
    if (seed != 0) cross_theta[i] += 0.25 * theta_jitter * jit(rng);
  }

  DiscreteLoop loop;
  loop.target_word = reduce_stutters(word);
  for (std::size_t i = 0; i < n_letters; ++i) {
    const double t0 = cross_theta[i];
    const double t1 = cross_theta[(i + 1) % n_letters];
    const double dtheta = wrap_pi(t1 - t0);
    // after a '-' crossing the path runs through the upper hemisphere
    const double hemi = (word.sign_at(i) == Sign::Minus) ? +1.0 : -1.0;
    const double amp = 0.55 * (1.0 + amp_jitter * jit(rng));
    for (int j = 0; j < n_per_letter; ++j) {
      const double u = (j + 0.5) / n_per_letter;
      ShapePoint p;
      p.theta = t0 + u * dtheta + theta_jitter * jit(rng) * std::sin(kPi * u) * 0.2;
      p.phi = hemi * amp * std::sin(kPi * u);
      loop.vertices.push_back(p);
    }
  }

  if (!same_free_class(loop_word(loop), loop.target_word))
    throw HomotopyEscape("seed_loop: constructed loop is not in the target class");
  return loop;
}

// ---------------------------------------------------------------------------
// curve shortening
// ---------------------------------------------------------------------------

namespace {

struct DescentState {
  std::vector<Vector3d> vs;
  double length = 0.0;
};

double total_length_fixed(const std::vector<Vector3d>& vs, const MassTriple& m,
                          int qpts) {
  double acc = 0.0;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i)
    acc += edge_length_fixed(vs[i], vs[(i + 1) % n], m, qpts);
  return acc;
}

bool vertices_clear(const std::vector<Vector3d>& vs, double exclusion_rho) {
  for (const auto& v : vs) {
    const SideTriple s = squared_sides(v);
    if (collision_distance(s, s.argmin()) < exclusion_rho) return false;
  }
  return true;
}

void tangent_basis(const Vector3d& v, Vector3d* t1, Vector3d* t2) {
  const Vector3d ref = std::abs(v.z()) < 0.9 ? Vector3d(0, 0, 1) : Vector3d(1, 0, 0);
  *t1 = (ref - ref.dot(v) * v).normalized();
  *t2 = v.cross(*t1);
}

// gradient of the two adjacent edge lengths with respect to moving vertex i
Eigen::Vector2d vertex_gradient(const std::vector<Vector3d>& vs, std::size_t i,
                                const MassTriple& m, int qpts) {
  const std::size_t n = vs.size();
  const Vector3d& prev = vs[(i + n - 1) % n];
  const Vector3d& next = vs[(i + 1) % n];
  Vector3d t1, t2;
  tangent_basis(vs[i], &t1, &t2);
  const double delta = 1e-6;
  auto local = [&](const Vector3d& v) {
    return edge_length_fixed(prev, v, m, qpts) + edge_length_fixed(v, next, m, qpts);
  };
  Eigen::Vector2d g;
  g[0] = (local((vs[i] + delta * t1).normalized()) -
          local((vs[i] - delta * t1).normalized())) /
         (2.0 * delta);
  g[1] = (local((vs[i] + delta * t2).normalized()) -
          local((vs[i] - delta * t2).normalized())) /
         (2.0 * delta);
  return g;
}

struct ShootOutcome {
  bool ok = false;
  double residual = 1e300;
  double loop_length = 0.0;
  std::vector<ShapePoint> samples;
  int iterations = 0;
};

// Single-shooting closure: adjust the equator crossing (theta0, psi) until
// the geodesic returns to its start after one full word period.
ShootOutcome shoot_closed(const std::vector<Crossing>& crossings, const MassTriple& m,
                          double poly_length, double tol) {
  ShootOutcome out;
  if (crossings.empty()) return out;
  const std::size_t nw = crossings.size();

  const Crossing& c0 = crossings.front();
  double theta0 = c0.theta;
  // direction angle at the crossing: east component vs north component
  const Vector3d east(-std::sin(c0.theta), std::cos(c0.theta), 0.0);
  double psi = std::atan2(c0.direction.z(), c0.direction.dot(east));

  const double s_cap = 2.5 * poly_length + 5.0;
  IntegrateOptions iopt;
  iopt.tol = 1e-11;
  iopt.sample_ds = 0.25;
  iopt.max_step = 0.05;

  auto run = [&](double th, double ps, Trajectory* traj_out) -> std::optional<Eigen::Vector2d> {
    GeodesicState start = unit_speed_state(ShapePoint{0.0, th},
                                           std::sin(ps), std::cos(ps), m);
    Trajectory traj;
    try {
      traj = integrate(start, m, s_cap, iopt);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (traj.events.size() < nw) return std::nullopt;
    // the event sequence must repeat the polygon's crossing sequence
    for (std::size_t i = 0; i < nw; ++i) {
      const auto& ev = traj.events[i];
      const auto& expect = crossings[(i + 1) % nw];
      if (ev.letter != expect.letter || ev.sign != expect.sign) return std::nullopt;
    }
    const GeodesicState& est = traj.event_states[nw - 1];
    const double psi_end = std::atan2(est.v_phi, est.v_theta * std::cos(est.point.phi));
    Eigen::Vector2d r(wrap_pi(est.point.theta - th), wrap_pi(psi_end - ps));
    if (traj_out) *traj_out = std::move(traj);
    return r;
  };

  Eigen::Vector2d r;
  if (auto r0 = run(theta0, psi, nullptr))
    r = *r0;
  else
    return out;

  for (int it = 0; it < 60; ++it) {
    if (r.cwiseAbs().maxCoeff() < tol) break;
    const double d = 1e-7;
    const auto r_th = run(theta0 + d, psi, nullptr);
    const auto r_ps = run(theta0, psi + d, nullptr);
    if (!r_th || !r_ps) return out;
    Eigen::Matrix2d J;
    J.col(0) = (*r_th - r) / d;
    J.col(1) = (*r_ps - r) / d;
    Eigen::Vector2d step = J.fullPivLu().solve(-r);
    const double cap = 0.25;
    const double mag = step.cwiseAbs().maxCoeff();
    if (mag > cap) step *= cap / mag;
    // damped update: halve until the residual is valid and decreases
    double lambda = 1.0;
    bool moved = false;
    for (int half = 0; half < 12; ++half) {
      const double th_new = theta0 + lambda * step[0];
      const double ps_new = psi + lambda * step[1];
      if (auto r_new = run(th_new, ps_new, nullptr)) {
        if (r_new->norm() < r.norm() || r.norm() < 1e-14) {
          theta0 = th_new;
          psi = ps_new;
          r = *r_new;
          moved = true;
          ++out.iterations;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!moved) return out;
  }
  if (r.cwiseAbs().maxCoeff() >= tol) return out;

  // final dense pass
  Trajectory traj;
  iopt.sample_ds = std::max(1e-3, poly_length / 800.0);
  const auto r_fin = run(theta0, psi, &traj);
  if (!r_fin) return out;
  const double s_loop = traj.events[nw - 1].s_at;
  out.ok = true;
  out.residual = r_fin->cwiseAbs().maxCoeff();
  out.loop_length = s_loop;
  for (const auto& st : traj.samples) {
    if (st.s >= s_loop - 1e-9) break;
    out.samples.push_back(st.point);
  }
  return out;
}

}  // namespace

RealizationResult shorten(const DiscreteLoop& loop, const MassTriple& m, double tol,
                          int max_iter, const ShortenOptions& opt) {
  if (loop.vertices.size() < 3)
    throw std::invalid_argument("shorten: loop needs at least 3 vertices");
  const SignedWord target = reduce_stutters(loop.target_word);

  DescentState cur;
  cur.vs = to_embedding(loop.vertices);
  const int qpts = opt.quad_points;
  cur.length = total_length_fixed(cur.vs, m, qpts);
  if (!same_free_class(word_from_crossings(loop_crossings(cur.vs)), target))
    throw HomotopyEscape("shorten: input loop is not in the target class");
  if (!vertices_clear(cur.vs, opt.exclusion_rho))
    throw CollisionSingularity("shorten: seed vertex inside a collision ball");

  // with a polish phase the descent only needs to warm-start the shooting
  const double descent_tol = opt.polish ? std::max(tol, opt.descent_tol) : tol;

  const std::size_t n = cur.vs.size();
  double eta = opt.initial_step;
  double grad_norm = 1e300;
  int it = 0;
  bool discrete_converged = false;

  std::vector<Eigen::Vector2d> grads(n);
  std::vector<Vector3d> bases1(n), bases2(n);

  if (opt.length_trace) opt.length_trace->push_back(cur.length);

  for (it = 0; it < max_iter; ++it) {
    grad_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      tangent_basis(cur.vs[i], &bases1[i], &bases2[i]);
      grads[i] = vertex_gradient(cur.vs, i, m, qpts);
      grad_norm = std::max(grad_norm, grads[i].norm());
    }
    if (grad_norm < descent_tol) {
      discrete_converged = true;
      break;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      std::vector<Vector3d> trial(n);
      for (std::size_t i = 0; i < n; ++i)
        trial[i] =
            (cur.vs[i] - eta * (grads[i][0] * bases1[i] + grads[i][1] * bases2[i]))
                .normalized();
      const double trial_len = total_length_fixed(trial, m, qpts);
      bool ok = trial_len < cur.length;
      if (ok) ok = vertices_clear(trial, opt.exclusion_rho);
      if (ok) {
        try {
          ok = same_free_class(word_from_crossings(loop_crossings(trial)), target);
        } catch (const Error&) {
          ok = false;  // ambiguous crossing: treat as a homotopy escape
        }
      }
      if (ok) {
        cur.vs = std::move(trial);
        cur.length = trial_len;
        eta = std::min(eta * 1.3, 0.5);
        accepted = true;
        if (opt.length_trace) opt.length_trace->push_back(cur.length);
      } else {
        eta *= 0.5;
        if (eta < 1e-13) break;
      }
    }
    if (!accepted) break;  // stalled: either converged in length or stuck at a guard
  }

  RealizationResult res;
  res.iterations = it;

  if (opt.polish) {
    const auto crossings = loop_crossings(cur.vs);
    ShootOutcome sh = shoot_closed(crossings, m, cur.length, tol);
    if (sh.ok) {
      res.loop.vertices = sh.samples;
      res.loop.target_word = target;
      if (!same_free_class(loop_word(res.loop), target))
        throw HomotopyEscape("shorten: polished loop left the target class");
      res.jm_length = sh.loop_length;
      res.converged = true;
      res.gradient_norm = sh.residual;
      res.iterations += sh.iterations;
      return res;
    }
  }

  if (!discrete_converged && it >= max_iter)
    throw NoConvergence("shorten: no convergence after max_iter iterations");

  res.loop.vertices = from_embedding(cur.vs);
  res.loop.target_word = target;
  res.jm_length = jm_length(res.loop, m);
  res.converged = discrete_converged;
  res.gradient_norm = grad_norm;
  return res;
}

// ---------------------------------------------------------------------------
// untied comparison curves
// ---------------------------------------------------------------------------

std::vector<AnkletRow> untied_demo(const SignedWord& word, const MassTriple& m,
                                   const std::vector<double>& ell_values) {
  if (word.letters.empty() || word.letters.size() % 2 != 0)
    throw std::invalid_argument("untied_demo: word must be nonempty of even length");
  if (has_stutter(word)) throw std::invalid_argument("untied_demo: word must be stutter-free");
  if (classify(word).tied) throw TiedWord("untied_demo: word is tied; use shorten instead");

  // the two letters determine the encircled end: the missing letter
  int seen[4] = {0, 0, 0, 0};
  for (int l : word.letters) seen[l] = 1;
  int k = 0;
  for (int l = 1; l <= 3; ++l)
    if (!seen[l]) k = l;
  if (k == 0) throw TiedWord("untied_demo: word uses all three letters");
  const int N = static_cast<int>(word.letters.size() / 2);

  const double chi_ref = 0.5 * kPi;
  std::vector<AnkletRow> rows;
  for (double ell : ell_values) {
    AnkletRow row;
    row.ell = ell;
    row.rho = rho_for_ell(k, ell, chi_ref, m);
    // JM length of one circuit at fixed rho
    const int q = 512;
    double circ = 0.0;
    for (int j = 0; j < q; ++j) {
      const double chi = (j + 0.5) * kTwoPi / q;
      circ += end_f(k, row.rho, chi, m);
    }
    circ *= kTwoPi / q;
    row.circuit_length = N * circ;
    row.total_length = row.circuit_length + 2.0 * std::max(0.0, ell);
    row.lower_bound = kTwoPi * N * m.cyl_radius(k);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// distance convexity probe
// ---------------------------------------------------------------------------

namespace {

GeodesicState state_from_embedding(const Vector3d& x, const Vector3d& dir,
                                   const MassTriple& m) {
  const double F = conformal_factor(squared_sides(x), m);
  Eigen::Matrix<double, 6, 1> y;
  Vector3d d = dir - dir.dot(x) * x;
  d.normalize();
  y.head<3>() = x;
  y.tail<3>() = d * (2.0 / std::sqrt(F));
  return chart_state(y, 0.0);
}

// state at arclength u along a stored dense trajectory
GeodesicState state_at(const Trajectory& traj, double u, const MassTriple& m) {
  const auto& ss = traj.samples;
  if (u <= ss.front().s) return flow_by(ss.front(), m, u - ss.front().s);
  std::size_t lo = 0, hi = ss.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (ss[mid].s <= u)
      lo = mid;
    else
      hi = mid;
  }
  return flow_by(ss[lo], m, u - ss[lo].s);
}

}  // namespace

GeodesicState flow_by(const GeodesicState& start, const MassTriple& m, double ds,
                      double tol) {
  if (ds == 0.0) return start;
  GeodesicState st = start;
  bool reversed = false;
  if (ds < 0.0) {
    st.v_phi = -st.v_phi;
    st.v_theta = -st.v_theta;
    ds = -ds;
    reversed = true;
  }
  IntegrateOptions opt;
  opt.tol = tol;
  opt.sample_ds = 1e300;  // endpoints only
  Trajectory t = integrate(st, m, ds, opt);
  GeodesicState out = t.samples.back();
  if (reversed) {
    out.v_phi = -out.v_phi;
    out.v_theta = -out.v_theta;
  }
  out.s = start.s + (reversed ? -t.total_arclength : t.total_arclength);
  return out;
}

std::vector<ConvexityRow> convexity_probe(const GeodesicState& g1,
                                          const GeodesicState& g2,
                                          const MassTriple& m, double window,
                                          int n_samples) {
  if (n_samples < 5) throw std::invalid_argument("convexity_probe: need >= 5 samples");

  IntegrateOptions dense;
  dense.tol = 1e-12;
  dense.sample_ds = 0.0;  // keep every accepted step

  const double pad = 0.25 * window + 0.2;
  GeodesicState g1_back = flow_by(g1, m, -pad);
  g1_back.s = 0.0;
  Trajectory gamma = integrate(g1_back, m, window + 2.0 * pad, dense);
  Trajectory c = integrate(g2, m, window, dense);

  // identical curves: h == 0 identically
  const Vector3d x1 = unit_vector(g1.point), x2 = unit_vector(g2.point);
  const bool same = (x1 - x2).norm() < 1e-12 &&
                    std::abs(g1.v_phi - g2.v_phi) + std::abs(g1.v_theta - g2.v_theta) < 1e-12;

  std::vector<ConvexityRow> rows(n_samples);
  const double dt = window / (n_samples - 1);

  double u_guess = pad;
  for (int i = 0; i < n_samples; ++i) {
    const double t = i * dt;
    ConvexityRow& row = rows[i];
    row.t = t;
    if (same) continue;

    const GeodesicState cs = state_at(c, t, m);
    const Vector3d xc = unit_vector(cs.point);
    const Eigen::Matrix<double, 6, 1> yc = embed_state(cs);
    const Vector3d vc = yc.tail<3>().normalized();

    // initial guess: nearest dense sample of gamma
    double best = 1e300;
    double u0 = u_guess;
    for (const auto& st : gamma.samples) {
      const double d2 = (unit_vector(st.point) - xc).squaredNorm();
      if (d2 < best) {
        best = d2;
        u0 = st.s;
      }
    }

    auto endpoint = [&](double u, double T, int side, Vector3d* vel_out) {
      const GeodesicState gs = state_at(gamma, u, m);
      const Eigen::Matrix<double, 6, 1> yg = embed_state(gs);
      const Vector3d xg = yg.head<3>();
      const Vector3d tg = yg.tail<3>().normalized();
      const Vector3d nrm = side * xg.cross(tg);
      GeodesicState perp = state_from_embedding(xg, nrm, m);
      const GeodesicState hit = flow_by(perp, m, T, 1e-12);
      if (vel_out) {
        const Eigen::Matrix<double, 6, 1> yh = embed_state(hit);
        *vel_out = yh.tail<3>();
      }
      return unit_vector(hit.point);
    };

    // pick the side pointing toward c
    const GeodesicState gs0 = state_at(gamma, u0, m);
    const Eigen::Matrix<double, 6, 1> yg0 = embed_state(gs0);
    const Vector3d n0 = yg0.head<3>().cross(yg0.tail<3>().normalized());
    const int side = n0.dot(xc - yg0.head<3>()) >= 0.0 ? +1 : -1;

    const double F_mid = conformal_factor(
        squared_sides(Vector3d((yg0.head<3>() + xc).normalized())), m);
    double T = std::sqrt(F_mid) * 0.5 * angle_between(yg0.head<3>(), xc);
    double u = u0;

    Vector3d b1, b2;
    tangent_basis(xc, &b1, &b2);
    auto resid = [&](double uu, double TT) {
      const Vector3d e = endpoint(uu, TT, side, nullptr);
      return Eigen::Vector2d((e - xc).dot(b1), (e - xc).dot(b2));
    };

    Eigen::Vector2d r = resid(u, T);
    bool ok = false;
    for (int itn = 0; itn < 40; ++itn) {
      if (r.norm() < 1e-11) {
        ok = true;
        break;
      }
      const double d = 1e-7;
      const Eigen::Vector2d ru = (resid(u + d, T) - r) / d;
      const Eigen::Vector2d rT = (resid(u, T + d) - r) / d;
      Eigen::Matrix2d J;
      J.col(0) = ru;
      J.col(1) = rT;
      Eigen::Vector2d step = J.fullPivLu().solve(-r);
      double lambda = 1.0;
      bool moved = false;
      for (int half = 0; half < 10; ++half) {
        const Eigen::Vector2d rn = resid(u + lambda * step[0], T + lambda * step[1]);
        if (rn.norm() < r.norm()) {
          u += lambda * step[0];
          T += lambda * step[1];
          r = rn;
          moved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!moved) break;
    }
    if (!ok) throw PatchViolation("convexity_probe: foot-point shooting failed");
    u_guess = u;

    Vector3d arrival_vel;
    endpoint(u, T, side, &arrival_vel);
    row.h = T;
    const double ca = std::clamp(vc.dot(arrival_vel.normalized()), -1.0, 1.0);
    row.cos_angle = ca;
    row.angle = std::acos(ca);
  }

  // finite differences along the uniform grid
  for (int i = 0; i < n_samples; ++i) {
    auto& row = rows[i];
    if (i >= 1 && i + 1 < n_samples) {
      row.dh_dt = (rows[i + 1].h - rows[i - 1].h) / (2.0 * dt);
      row.d2h_dt2 = (rows[i + 1].h - 2.0 * rows[i].h + rows[i - 1].h) / (dt * dt);
    } else if (i == 0 && n_samples >= 3) {
      row.dh_dt = (-3.0 * rows[0].h + 4.0 * rows[1].h - rows[2].h) / (2.0 * dt);
      row.d2h_dt2 = (rows[0].h - 2.0 * rows[1].h + rows[2].h) / (dt * dt);
    } else if (i + 1 == n_samples && n_samples >= 3) {
      row.dh_dt =
          (3.0 * rows[i].h - 4.0 * rows[i - 1].h + rows[i - 2].h) / (2.0 * dt);
      row.d2h_dt2 = (rows[i].h - 2.0 * rows[i - 1].h + rows[i - 2].h) / (dt * dt);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Hausdorff distances
// ---------------------------------------------------------------------------

namespace {

double directed_hausdorff(const std::vector<Vector3d>& a,
                          const std::vector<Vector3d>& b) {
  double worst = 0.0;
  const std::size_t nb = b.size();
  for (const auto& x : a) {
    double best = 1e300;
    for (std::size_t j = 0; j < nb; ++j) {
      best = std::min(best, point_arc_distance(x, b[j], b[(j + 1) % nb]));
      if (best == 0.0) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double loop_hausdorff(const std::vector<ShapePoint>& a,
                      const std::vector<ShapePoint>& b) {
  const auto va = to_embedding(a);
  const auto vb = to_embedding(b);
  return std::max(directed_hausdorff(va, vb), directed_hausdorff(vb, va));
}

double symmetry_reduced_hausdorff(const std::vector<ShapePoint>& a,
                                  const std::vector<ShapePoint>& b) {
  const auto va = to_embedding(a);
  const auto vb = to_embedding(b);
  const double c = std::cos(kTwoPi / 3.0), s = std::sin(kTwoPi / 3.0);
  Eigen::Matrix3d rot;
  rot << c, -s, 0, s, c, 0, 0, 0, 1;
  const Eigen::Matrix3d my = Eigen::Vector3d(1, -1, 1).asDiagonal();
  const Eigen::Matrix3d mz = Eigen::Vector3d(1, 1, -1).asDiagonal();

  double best = 1e300;
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  for (int i = 0; i < 3; ++i, R = rot * R)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Eigen::Matrix3d G = R;
        if (j) G = G * my;
        if (k) G = G * mz;
        std::vector<Vector3d> gb;
        gb.reserve(vb.size());
        for (const auto& x : vb) gb.push_back(G * x);
        best = std::min(best, std::max(directed_hausdorff(va, gb),
                                       directed_hausdorff(gb, va)));
      }
  return best;
}

}  // namespace pants
