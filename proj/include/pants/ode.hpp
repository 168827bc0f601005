#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Core>

#include "pants/errors.hpp"

namespace pants {

// Dormand-Prince 5(4) embedded Runge-Kutta pair (RK5(4)7M) with FSAL.
// The right-hand side is f(t, y) -> dy/dt; error control uses a mixed
// absolute/relative norm.
template <int N>
class DormandPrince {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;
  using Rhs = std::function<Vec(double, const Vec&)>;

  explicit DormandPrince(Rhs rhs, double rtol = 1e-10, double atol = 1e-12)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  // One trial step from (t, y) with size h. Returns the 5th-order solution,
  // the scaled error estimate and the derivative at the end point (FSAL).
  struct StepResult {
    Vec y;
    double error;  // scaled; <= 1 means acceptable
    Vec k_last;
  };

  StepResult step(double t, const Vec& y, const Vec& k1, double h) const {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Vec k2 = rhs_(t + h * a21, y + h * (a21 * k1));
    const Vec k3 = rhs_(t + h * 0.3, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs_(t + h * 0.8, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 =
        rhs_(t + h * (8.0 / 9.0), y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 =
        rhs_(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = rhs_(t + h, y5);
    const Vec err_vec =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double scale = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double r = err_vec[i] / scale;
      err += r * r;
    }
    return {y5, std::sqrt(err / N), k7};
  }

  Vec eval(double t, const Vec& y) const { return rhs_(t, y); }

  double next_h(double h, double error) const {
    const double fac = error > 0.0 ? 0.9 * std::pow(error, -0.2) : 5.0;
    return h * std::clamp(fac, 0.2, 5.0);
  }

  double rtol() const { return rtol_; }

 private:
  Rhs rhs_;
  double rtol_;
  double atol_;
};

}  // namespace pants
