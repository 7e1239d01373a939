#pragma once

// Exact solution of the Riemann problem for the 1D Euler equations with an
// ideal gas (two-shock/two-rarefaction Newton iteration on the star pressure).

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

struct Primitive {
  double rho, u, p;
};

class ExactRiemann {
 public:
  ExactRiemann(Primitive left, Primitive right, double gamma) : L_(left), R_(right), g_(gamma) {
    cL_ = std::sqrt(g_ * L_.p / L_.rho);
    cR_ = std::sqrt(g_ * R_.p / R_.rho);
    solve_star();
  }

  double star_pressure() const { return ps_; }
  double star_velocity() const { return us_; }

  /// State at similarity coordinate s = (x - x0) / t.
  Primitive sample(double s) const {
    const double g = g_;
    if (s <= us_) {
      if (ps_ > L_.p) {  // left shock
        const double sl = L_.u - cL_ * std::sqrt((g + 1) / (2 * g) * ps_ / L_.p + (g - 1) / (2 * g));
        if (s <= sl) return L_;
        const double r = ps_ / L_.p, k = (g - 1) / (g + 1);
        return {L_.rho * (r + k) / (k * r + 1), us_, ps_};
      }
      const double head = L_.u - cL_;
      const double cs = cL_ * std::pow(ps_ / L_.p, (g - 1) / (2 * g));
      const double tail = us_ - cs;
      if (s <= head) return L_;
      if (s >= tail) return {L_.rho * std::pow(ps_ / L_.p, 1 / g), us_, ps_};
      const double c = 2 / (g + 1) * (cL_ + (g - 1) / 2 * (L_.u - s));
      const double u = 2 / (g + 1) * (cL_ + (g - 1) / 2 * L_.u + s);
      const double rho = L_.rho * std::pow(c / cL_, 2 / (g - 1));
      return {rho, u, L_.p * std::pow(c / cL_, 2 * g / (g - 1))};
    }
    if (ps_ > R_.p) {  // right shock
      const double sr = R_.u + cR_ * std::sqrt((g + 1) / (2 * g) * ps_ / R_.p + (g - 1) / (2 * g));
      if (s >= sr) return R_;
      const double r = ps_ / R_.p, k = (g - 1) / (g + 1);
      return {R_.rho * (r + k) / (k * r + 1), us_, ps_};
    }
    const double head = R_.u + cR_;
    const double cs = cR_ * std::pow(ps_ / R_.p, (g - 1) / (2 * g));
    const double tail = us_ + cs;
    if (s >= head) return R_;
    if (s <= tail) return {R_.rho * std::pow(ps_ / R_.p, 1 / g), us_, ps_};
    const double c = 2 / (g + 1) * (cR_ - (g - 1) / 2 * (R_.u - s));
    const double u = 2 / (g + 1) * (-cR_ + (g - 1) / 2 * R_.u + s);
    const double rho = R_.rho * std::pow(c / cR_, 2 / (g - 1));
    return {rho, u, R_.p * std::pow(c / cR_, 2 * g / (g - 1))};
  }

 private:
  // Pressure function of one side and its derivative.
  void side(double p, const Primitive& k, double c, double& f, double& df) const {
    const double g = g_;
    if (p > k.p) {
      const double a = 2 / ((g + 1) * k.rho), b = (g - 1) / (g + 1) * k.p;
      const double s = std::sqrt(a / (p + b));
      f = (p - k.p) * s;
      df = s * (1 - 0.5 * (p - k.p) / (b + p));
    } else {
      f = 2 * c / (g - 1) * (std::pow(p / k.p, (g - 1) / (2 * g)) - 1);
      df = 1 / (k.rho * c) * std::pow(p / k.p, -(g + 1) / (2 * g));
    }
  }

  void solve_star() {
    if (2 * (cL_ + cR_) / (g_ - 1) <= R_.u - L_.u) throw std::domain_error("vacuum is generated");
    double p = std::max(1e-12, 0.5 * (L_.p + R_.p));
    for (int it = 0; it < 100; ++it) {
      double fl, dfl, fr, dfr;
      side(p, L_, cL_, fl, dfl);
      side(p, R_, cR_, fr, dfr);
      const double next = std::max(1e-14, p - (fl + fr + R_.u - L_.u) / (dfl + dfr));
      const double change = 2 * std::abs(next - p) / (next + p);
      p = next;
      if (change < 1e-15) break;
    }
    double fl, dfl, fr, dfr;
    side(p, L_, cL_, fl, dfl);
    side(p, R_, cR_, fr, dfr);
    ps_ = p;
    us_ = 0.5 * (L_.u + R_.u) + 0.5 * (fr - fl);
  }

  Primitive L_, R_;
  double g_, cL_, cR_;
  double ps_ = 0.0, us_ = 0.0;
};

}  // namespace oracle
