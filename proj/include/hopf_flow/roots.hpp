#pragma once

#include <functional>
#include <vector>

namespace hopf_flow {

struct BracketRoot {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Brent's method on [a, b]; f(a) and f(b) must differ in sign (NoRootError
/// otherwise). Stops when the bracket is narrower than x_tol.
BracketRoot brent_root(const std::function<double(double)>& f, double a, double b,
                       double x_tol = 1e-15, int max_iter = 200);

/// Splits [a, b] into `cells` equal pieces and returns the sub-brackets where
/// f changes sign (including exact zeros at cell edges).
std::vector<std::pair<double, double>> scan_sign_changes(const std::function<double(double)>& f,
                                                         double a, double b, int cells);

}  // namespace hopf_flow
