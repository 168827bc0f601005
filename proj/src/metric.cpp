#include "pants/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace pants {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

// Ingredients shared by the closed-form expressions. Sides are renormalized
// to sum exactly 3 so every formula is scale-invariant.
struct Terms {
  double p[4];   // p[1..3]
  double s[4];   // normalized sides
  double U;      // sum p_i / s_i
  double T;      // sum p_i s_i
  double A;      // sum' p_i p_j / s_i^2 s_j^2
  double B;      // sum' p_i p_j
  double M;
  double dm2;    // d(m)^2
};

Terms make_terms(const SideTriple& in, const MassTriple& m, double min_side) {
  Terms t{};
  const double scale = 3.0 / in.sum();
  for (int k = 1; k <= 3; ++k) {
    t.p[k] = m.p(k);
    t.s[k] = in[k] * scale;
    if (t.s[k] < min_side)
      throw CollisionSingularity("metric: side " + std::to_string(k) +
                                 " below exclusion radius");
  }
  t.U = t.p[1] / t.s[1] + t.p[2] / t.s[2] + t.p[3] / t.s[3];
  t.T = t.p[1] * t.s[1] + t.p[2] * t.s[2] + t.p[3] * t.s[3];
  auto sq = [](double x) { return x * x; };
  t.A = 2.0 * (t.p[1] * t.p[2] / (sq(t.s[1]) * sq(t.s[2])) +
               t.p[1] * t.p[3] / (sq(t.s[1]) * sq(t.s[3])) +
               t.p[2] * t.p[3] / (sq(t.s[2]) * sq(t.s[3])));
  t.B = 2.0 * (t.p[1] * t.p[2] + t.p[1] * t.p[3] + t.p[2] * t.p[3]);
  t.M = m.total();
  const double dm = m.d_m();
  t.dm2 = dm * dm;
  return t;
}

double conformal_from_terms(const Terms& t) {
  // F = Utilde lambda^2 = d(m)^2 M Uhat / T.
  return t.dm2 * t.M * t.U / t.T;
}

}  // namespace

double mass_conformal(const SideTriple& s, const MassTriple& m) {
  const double T = m.p(1) * s[1] + m.p(2) * s[2] + m.p(3) * s[3];
  return m.d_m() * (s.sum() / 3.0) * m.total() / T;
}

double conformal_factor(const SideTriple& s, const MassTriple& m, double min_side) {
  return conformal_from_terms(make_terms(s, m, min_side));
}

double conformal_factor(const ShapePoint& p, const MassTriple& m, double min_side) {
  return conformal_factor(squared_sides(p), m, min_side);
}

double curvature_closed_form(const SideTriple& s, const MassTriple& m, double min_side) {
  const Terms t = make_terms(s, m, min_side);
  const double F = conformal_from_terms(t);
  const double rhs = 3.0 * (t.A - t.B * (t.U * t.U) / (t.T * t.T));
  return -rhs / (t.U * t.U * F);
}

double curvature_closed_form(const ShapePoint& p, const MassTriple& m, double min_side) {
  return curvature_closed_form(squared_sides(p), m, min_side);
}

double kappa(const SideTriple& s, const MassTriple& m, double min_side) {
  const Terms t = make_terms(s, m, min_side);
  return std::sqrt(t.A) * t.T / t.U - std::sqrt(t.B);
}

double kappa(const ShapePoint& p, const MassTriple& m, double min_side) {
  return kappa(squared_sides(p), m, min_side);
}

MetricSample metric_sample(const ShapePoint& p, const MassTriple& m, double min_side) {
  const SideTriple s = squared_sides(p);
  const Terms t = make_terms(s, m, min_side);
  const double F = conformal_from_terms(t);
  const double rhs = 3.0 * (t.A - t.B * (t.U * t.U) / (t.T * t.T));
  MetricSample out;
  out.point = p;
  out.conformal_factor = F;
  out.curvature = -rhs / (t.U * t.U * F);
  out.kappa = std::sqrt(t.A) * t.T / t.U - std::sqrt(t.B);
  return out;
}

Eigen::Vector3d grad_log_conformal(const Eigen::Vector3d& x, const MassTriple& m,
                                   double min_side) {
  const SideTriple s = squared_sides(x);
  double U = 0.0, T = 0.0;
  Eigen::Vector3d gU = Eigen::Vector3d::Zero();
  Eigen::Vector3d gT = Eigen::Vector3d::Zero();
  for (int k = 1; k <= 3; ++k) {
    if (s[k] < min_side)
      throw CollisionSingularity("grad_log_conformal: side below exclusion radius");
    const double pk = m.p(k);
    const Eigen::Vector3d c = collision_axis(k);
    U += pk / s[k];
    T += pk * s[k];
    gU += pk / (s[k] * s[k]) * c;  // grad s_k = -c (projected), grad U = sum p c / s^2
    gT -= pk * c;
  }
  // log F = log U - log T + const
  Eigen::Vector3d g = gU / U - gT / T;
  g -= g.dot(x) * x;  // tangent projection
  return g;
}

ChartPartials conformal_partials(const ShapePoint& p, const MassTriple& m,
                                 double min_side) {
  const double c = std::cos(p.phi), sn = std::sin(p.phi);
  double U = 0.0, T = 0.0;
  double U_phi = 0.0, U_theta = 0.0, T_phi = 0.0, T_theta = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const Gamma g = gamma(k, p.theta);
    const double sk = 1.0 - c * g.value;
    if (sk < min_side)
      throw CollisionSingularity("conformal_partials: side below exclusion radius");
    const double pk = m.p(k);
    U += pk / sk;
    T += pk * sk;
    // ds_k/dphi = sin(phi) gamma_k ; ds_k/dtheta = -cos(phi) gamma_k'
    U_phi += -pk / (sk * sk) * sn * g.value;
    U_theta += pk / (sk * sk) * c * g.deriv;
    T_phi += pk * sn * g.value;
    T_theta += -pk * c * g.deriv;
  }
  const double dm = m.d_m();
  const double F = dm * dm * m.total() * U / T;
  ChartPartials out;
  out.F = F;
  out.F_phi = F * (U_phi / U - T_phi / T);
  out.F_theta = F * (U_theta / U - T_theta / T);
  return out;
}

DkappaReport dkappa_lagrange_products(double p1, double p2, double p3) {
  DkappaReport r;
  r.v = {p1 * (p2 * p2 + p3 * p3), p2 * (p1 * p1 + p3 * p3), p3 * (p1 * p1 + p2 * p2)};
  const double scale = std::max({std::abs(r.v[0]), std::abs(r.v[1]), std::abs(r.v[2])});
  r.degenerate = std::abs(r.v[0] - r.v[1]) <= 1e-14 * scale &&
                 std::abs(r.v[1] - r.v[2]) <= 1e-14 * scale;
  return r;
}

DkappaReport dkappa_lagrange(const MassTriple& m) {
  return dkappa_lagrange_products(m.p(1), m.p(2), m.p(3));
}

// ---------------------------------------------------------------------------
// finite-difference oracles
// ---------------------------------------------------------------------------

namespace {

void check_fd_preconditions(const ShapePoint& p, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd oracle: h must be positive");
  if (h > 1e-2) throw StepTooLarge("fd oracle: h must be <= 1e-2");
  if (min_collision_distance(p) <= 4.0 * h)
    throw CollisionSingularity("fd oracle: point closer than 4h to a collision");
}

// Round-metric Laplacian (4/c) d_phi(c d_phi f) + (4/c^2) d_theta^2 f with
// centered second-order stencils.
double fd_laplacian(const std::function<double(double, double)>& f, double phi,
                    double theta, double h) {
  const double c = std::cos(phi);
  const double cp = std::cos(phi + 0.5 * h);
  const double cm = std::cos(phi - 0.5 * h);
  const double f0 = f(phi, theta);
  const double fp = f(phi + h, theta);
  const double fm = f(phi - h, theta);
  const double ft_p = f(phi, theta + h);
  const double ft_m = f(phi, theta - h);
  const double term_phi = (cp * (fp - f0) - cm * (f0 - fm)) / (h * h);
  const double term_theta = (ft_p - 2.0 * f0 + ft_m) / (h * h);
  return 4.0 / c * term_phi + 4.0 / (c * c) * term_theta;
}

}  // namespace

double curvature_fd_oracle(const ShapePoint& p, const MassTriple& m, double h) {
  check_fd_preconditions(p, h);
  auto logF = [&](double phi, double theta) {
    return std::log(conformal_factor(ShapePoint{phi, theta}, m));
  };
  const double lap = fd_laplacian(logF, p.phi, p.theta, h);
  const double F = conformal_factor(p, m);
  return (4.0 - 0.5 * lap) / F;
}

double laplacian_U_oracle(const ShapePoint& p, const MassTriple& m, double h) {
  check_fd_preconditions(p, h);
  auto Uhat = [&](double phi, double theta) {
    return potential(ShapePoint{phi, theta}, m);
  };
  return fd_laplacian(Uhat, p.phi, p.theta, h);
}

double gradsq_U_oracle(const ShapePoint& p, const MassTriple& m, double h) {
  check_fd_preconditions(p, h);
  auto Uhat = [&](double phi, double theta) {
    return potential(ShapePoint{phi, theta}, m);
  };
  const double a = (Uhat(p.phi + h, p.theta) - Uhat(p.phi - h, p.theta)) / (2.0 * h);
  const double b = (Uhat(p.phi, p.theta + h) - Uhat(p.phi, p.theta - h)) / (2.0 * h);
  const double c = std::cos(p.phi);
  return 4.0 * (a * a + b * b / (c * c));
}

double grad_sq_closed(const SideTriple& sides, const MassTriple& m, double min_side) {
  const Terms t = make_terms(sides, m, min_side);
  const double* s = t.s;
  const double* p = t.p;
  auto cube = [](double x) { return x * x * x; };
  double sum_p2_s3 = 0.0, sum_p2_s2 = 0.0;
  for (int k = 1; k <= 3; ++k) {
    sum_p2_s3 += p[k] * p[k] / cube(s[k]);
    sum_p2_s2 += p[k] * p[k] / (s[k] * s[k]);
  }
  double sum_pp_ss2 = 0.0;  // sum' p_i p_j / (s_i s_j^2), ordered pairs
  double sum_pp_ss = 0.0;   // sum' p_i p_j / (s_i s_j)
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      sum_pp_ss2 += p[i] * p[j] / (s[i] * s[j] * s[j]);
      sum_pp_ss += p[i] * p[j] / (s[i] * s[j]);
    }
  const double S = 2.0 * sum_p2_s3 - sum_p2_s2 - 1.5 * t.A + 2.0 * sum_pp_ss2 - sum_pp_ss;
  return 4.0 * S;
}

// ---------------------------------------------------------------------------
// cylindrical end coordinates
// ---------------------------------------------------------------------------

namespace {

struct EndFrame {
  Eigen::Vector3d c;   // collision axis
  Eigen::Vector3d e1;  // eastward along the equator
  Eigen::Vector3d e2;  // toward the north pole
};

EndFrame end_frame(int k) {
  const double t = collision_angle(k);
  return {Eigen::Vector3d(std::cos(t), std::sin(t), 0.0),
          Eigen::Vector3d(-std::sin(t), std::cos(t), 0.0),
          Eigen::Vector3d(0.0, 0.0, 1.0)};
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double eps,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = tol * std::max(1.0, std::abs(whole));
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 52);
}

}  // namespace

void end_polar_coords(const ShapePoint& p, int k, double* rho, double* chi) {
  const EndFrame fr = end_frame(k);
  const Eigen::Vector3d x = unit_vector(p);
  const double ca = std::clamp(x.dot(fr.c), -1.0, 1.0);
  const double alpha = std::acos(ca);
  *rho = 0.5 * alpha;
  const Eigen::Vector3d perp = x - ca * fr.c;
  double ang = std::atan2(perp.dot(fr.e2), perp.dot(fr.e1));
  if (ang < 0.0) ang += kTwoPi;
  *chi = ang;
}

ShapePoint end_polar_point(int k, double rho, double chi) {
  const EndFrame fr = end_frame(k);
  const double alpha = 2.0 * rho;
  const Eigen::Vector3d x = std::cos(alpha) * fr.c +
                            std::sin(alpha) * (std::cos(chi) * fr.e1 + std::sin(chi) * fr.e2);
  return shape_point_from_unit(x);
}

bool in_end_chart(const ShapePoint& p, int k) {
  double rho, chi;
  end_polar_coords(p, k, &rho, &chi);
  if (rho >= 0.5 * kPi - 1e-9) return false;  // at or past the antipode
  if (rho <= rho_exclusion()) return false;   // at the base collision
  // the opposite equatorial arc lies along the equator directions past the
  // two adjacent collision points (rho = pi/3)
  const double s = std::abs(std::sin(chi));
  if (s < 1e-9 && rho > kPi / 3.0 - rho_exclusion()) return false;
  return true;
}

double end_f(int k, double rho, double chi, const MassTriple& m) {
  const ShapePoint p = end_polar_point(k, rho, chi);
  return std::sqrt(conformal_factor(p, m)) * 0.5 * std::sin(2.0 * rho);
}

double end_ell(int k, double rho, double chi, const MassTriple& m, double quad_tol) {
  auto integrand = [&](double r) {
    const ShapePoint p = end_polar_point(k, r, chi);
    const SideTriple s = squared_sides(p);
    if (s.min() < kDefaultSideExclusion)
      throw OutOfChart("end_ell: radial line passes through a collision ball");
    return std::sqrt(conformal_factor(s, m));
  };
  if (rho <= 0.0) throw OutOfChart("end_ell: rho must be positive");
  if (rho <= kEndReferenceRadius)
    return integrate_adaptive(integrand, rho, kEndReferenceRadius, quad_tol);
  return -integrate_adaptive(integrand, kEndReferenceRadius, rho, quad_tol);
}

double rho_for_ell(int k, double ell, double chi, const MassTriple& m) {
  // keep the quadrature endpoint outside the side-exclusion radius
  double lo = 2.0 * rho_exclusion(), hi = 0.5 * kPi - 1e-6;
  // ell is decreasing in rho
  auto g = [&](double r) { return end_ell(k, r, chi, m) - ell; };
  if (g(lo) < 0.0 || g(hi) > 0.0)
    throw OutOfChart("rho_for_ell: requested ell outside attainable range");
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);  // bisect in log
    if (g(mid) >= 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

EndChart end_chart(const ShapePoint& p, const MassTriple& m, int k) {
  if (!in_end_chart(p, k))
    throw OutOfChart("end_chart: point outside the chart domain of end " +
                     std::to_string(k));
  EndChart out;
  out.k = k;
  end_polar_coords(p, k, &out.ell, &out.chi);  // ell temporarily holds rho
  const double rho = out.ell;
  out.ell = end_ell(k, rho, out.chi, m);
  out.f_value = end_f(k, rho, out.chi, m);
  return out;
}

// ---------------------------------------------------------------------------
// curvature scan
// ---------------------------------------------------------------------------

ScanReport curvature_scan(const MassTriple& m, const ScanOptions& opt,
                          std::vector<ScanRow>* rows, int row_stride) {
  if (opt.n_phi < 2 || opt.n_theta < 2)
    throw std::invalid_argument("curvature_scan: grid resolution must be >= 2");
  ScanReport rep;
  rep.min_curvature = std::numeric_limits<double>::infinity();
  rep.max_curvature = -std::numeric_limits<double>::infinity();

  const double dphi = (opt.phi_max - opt.phi_min) / opt.n_phi;
  const double dtheta = (opt.theta_max - opt.theta_min) / opt.n_theta;

  // -1 invalid, 0 negative/zero band, 1 positive
  std::vector<signed char> sign_prev(opt.n_theta, -1), sign_cur(opt.n_theta, -1);

  std::size_t emitted = 0;
  auto consider = [&](double phi, double theta) -> signed char {
    const ShapePoint p{phi, theta};
    const SideTriple s = squared_sides(p);
    if (collision_distance(s, s.argmin()) < opt.exclusion) {
      ++rep.excluded;
      return -1;
    }
    const Terms t = make_terms(s, m, kDefaultSideExclusion);
    const double F = conformal_from_terms(t);
    const double rhs = 3.0 * (t.A - t.B * (t.U * t.U) / (t.T * t.T));
    const double K = -rhs / (t.U * t.U * F);
    const double kap = std::sqrt(t.A) * t.T / t.U - std::sqrt(t.B);
    ++rep.samples;
    if (K < rep.min_curvature) {
      rep.min_curvature = K;
      rep.min_at = p;
    }
    if (K > rep.max_curvature) {
      rep.max_curvature = K;
      rep.max_at = p;
    }
    if (rows && (emitted++ % static_cast<std::size_t>(std::max(1, row_stride))) == 0)
      rows->push_back({phi, theta, s.s1, s.s2, s.s3, F, K, kap});
    if (K > opt.positive_eps) return 1;
    if (K < -opt.positive_eps) return 0;
    return 0;  // the zero band counts with the nonpositive side
  };

  for (int i = 0; i < opt.n_phi; ++i) {
    const double phi = opt.phi_min + (i + 0.5) * dphi;
    for (int j = 0; j < opt.n_theta; ++j) {
      const double theta = opt.theta_min + (j + 0.5) * dtheta;
      const signed char sg = consider(phi, theta);
      sign_cur[j] = sg;
      if (sg >= 0) {
        const signed char left = (j > 0) ? sign_cur[j - 1] : static_cast<signed char>(-1);
        const signed char down = sign_prev[j];
        if (((left >= 0 && left != sg) || (down >= 0 && down != sg)) &&
            rep.sign_changes.size() < opt.max_sign_changes)
          rep.sign_changes.push_back({phi, theta});
      }
    }
    std::swap(sign_prev, sign_cur);
  }

  // Poles enter as single points (the chart degenerates there); evaluate by
  // a short radial limit.
  const double half_pi = 0.5 * kPi;
  if (opt.include_poles && opt.phi_min <= -half_pi + 1e-12 &&
      opt.phi_max >= half_pi - 1e-12) {
    for (const double sgn : {-1.0, 1.0}) {
      const ShapePoint pole{sgn * (half_pi - 1e-4), 0.0};
      const double K = curvature_closed_form(pole, m);
      ++rep.samples;
      if (K < rep.min_curvature) {
        rep.min_curvature = K;
        rep.min_at = pole;
      }
      if (K > rep.max_curvature) {
        rep.max_curvature = K;
        rep.max_at = pole;
      }
    }
  }

  rep.verdict = (rep.max_curvature > opt.positive_eps && rep.min_curvature < -opt.positive_eps)
                    ? ScanVerdict::MixedSign
                    : (rep.max_curvature > opt.positive_eps ? ScanVerdict::MixedSign
                                                            : ScanVerdict::AllNonpositive);
  return rep;
}

}  // namespace pants
