#include "covlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace covlab {
namespace {

struct PanelBudget {
  long remaining;
  double worst_error = 0.0;
};

double simpson(double fa, double fm, double fb, double h) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double refine(const std::function<double(double)>& f, double a, double m, double b,
              double fa, double fm, double fb, double whole, double tol, int depth,
              PanelBudget& budget) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    throw DomainError("adaptive_quadrature: integrand not finite on [a, b]");
  }
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol) {
    return left + right + err;
  }
  if (depth >= 60 || --budget.remaining <= 0) {
    budget.worst_error = std::max(budget.worst_error, std::abs(err));
    throw NumericError("adaptive_quadrature: subdivision cap reached", depth,
                       budget.worst_error);
  }
  return refine(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, budget) +
         refine(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, budget);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double tol) {
  if (!(tol > 0.0)) throw DomainError("adaptive_quadrature: tol must be positive");
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
    throw DomainError("adaptive_quadrature: integrand not finite on [a, b]");
  }
  PanelBudget budget{1L << 22};
  const double whole = simpson(fa, fm, fb, b - a);
  return sign * refine(f, a, m, b, fa, fm, fb, whole, tol, 0, budget);
}

}  // namespace covlab
