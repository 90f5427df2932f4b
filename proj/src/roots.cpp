#include "hopf_flow/roots.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "hopf_flow/error.hpp"

namespace hopf_flow {

BracketRoot brent_root(const std::function<double(double)>& f, double a, double b, double x_tol,
                       int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  if ((fa > 0.0) == (fb > 0.0)) throw NoRootError("brent_root: no sign change on the bracket");

  double c = a, fc = fa;
  double d = b - a, e = d;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return {b, fb, it};
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // secant or inverse quadratic interpolation
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return {b, fb, max_iter};
}

std::vector<std::pair<double, double>> scan_sign_changes(const std::function<double(double)>& f,
                                                         double a, double b, int cells) {
  auto sign = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  std::vector<std::pair<double, double>> out;
  double x0 = a;
  int s0 = sign(f(a));
  for (int i = 1; i <= cells; ++i) {
    const double x1 = i == cells ? b : a + (b - a) * static_cast<double>(i) / cells;
    const int s1 = sign(f(x1));
    // a zero on a shared edge is reported once, by the cell that ends there
    const bool zero_at_start_seen = s0 == 0 && !out.empty() && out.back().second == x0;
    if ((s0 != s1 || s0 == 0) && !zero_at_start_seen && !(s0 == 0 && s1 == 0 && i > 1)) {
      out.emplace_back(x0, x1);
    }
    x0 = x1;
    s0 = s1;
  }
  return out;
}

}  // namespace hopf_flow
