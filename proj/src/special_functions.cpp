#include "hopf_flow/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hopf_flow/error.hpp"

namespace hopf_flow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 500;

// Below this the ascending series for K is used; above kAsymptoticFrom the
// Hankel expansion; in between Steed's continued fraction.
constexpr double kSeriesLimitK = 2.0;
constexpr double kAsymptoticFrom = 20.0;

void check_argument(double z, const char* fn) {
  if (!(z > 0.0) || !(z <= kBesselMaxArgument)) {
    throw DomainError(std::string(fn) + ": argument must lie in (0, 60], got " + std::to_string(z));
  }
}

// sum_m (z^2/4)^m / (m!)^2; all terms positive so no cancellation.
double i0_series(double z) {
  const double t = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < kMaxTerms; ++m) {
    term *= t / (static_cast<double>(m) * m);
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

double i1_series(double z) {
  const double t = 0.25 * z * z;
  double term = 0.5 * z;
  double sum = term;
  for (int m = 1; m < kMaxTerms; ++m) {
    term *= t / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

struct KPair {
  double k0;
  double k1;
};

// Ascending series with the log and Euler-Mascheroni terms.
KPair k_series(double z, double i0, double i1) {
  constexpr double gamma = std::numbers::egamma;
  const double t = 0.25 * z * z;
  const double lg = std::log(0.5 * z);

  double term0 = 1.0;  // t^k / (k!)^2
  double harmonic = 0.0;
  double sum0 = 0.0;
  double term1 = 1.0;  // t^k / (k! (k+1)!)
  double sum1 = (-gamma) + (1.0 - gamma);
  for (int k = 1; k < kMaxTerms; ++k) {
    harmonic += 1.0 / k;
    term0 *= t / (static_cast<double>(k) * k);
    term1 *= t / (static_cast<double>(k) * (k + 1));
    const double add0 = term0 * harmonic;
    const double add1 = term1 * ((-gamma + harmonic) + (-gamma + harmonic + 1.0 / (k + 1)));
    sum0 += add0;
    sum1 += add1;
    if (std::abs(add0) < kEps * std::abs(sum0) && std::abs(add1) < kEps * std::abs(sum1)) break;
  }
  return {-(lg + gamma) * i0 + sum0, 1.0 / z + lg * i1 - 0.25 * z * sum1};
}

// Steed's method (CF2) for K0 and K1 together, order zero.
KPair k_continued_fraction(double z) {
  constexpr double a1 = 0.25;
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10 * kMaxTerms; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z) / s;
  return {k0, k0 * (z + 0.5 - h) / z};
}

double k_asymptotic(double z, int nu) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    if (std::abs(next) > std::abs(term)) break;  // series starts diverging
    term = next;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z) * sum;
}

KPair k_pair(double z, double i0, double i1) {
  if (z <= kSeriesLimitK) return k_series(z, i0, i1);
  if (z < kAsymptoticFrom) return k_continued_fraction(z);
  return {k_asymptotic(z, 0), k_asymptotic(z, 1)};
}

}  // namespace

double bessel_i0(double z) {
  check_argument(z, "bessel_i0");
  return i0_series(z);
}

double bessel_i1(double z) {
  check_argument(z, "bessel_i1");
  return i1_series(z);
}

double bessel_k0(double z) { return bessel_quad(z).k0; }

double bessel_k1(double z) { return bessel_quad(z).k1; }

BesselQuad bessel_quad(double z) {
  check_argument(z, "bessel_quad");
  BesselQuad q;
  q.z = z;
  q.i0 = i0_series(z);
  q.i1 = i1_series(z);
  const KPair k = k_pair(z, q.i0, q.i1);
  q.k0 = k.k0;
  q.k1 = k.k1;
  q.continued_k0 = {q.k0, -std::numbers::pi * q.i0};
  q.continued_k1 = {-q.k1, -std::numbers::pi * q.i1};
  return q;
}

std::complex<double> bessel_k_continued(double z, int nu) {
  if (nu != 0 && nu != 1) throw DomainError("bessel_k_continued: order must be 0 or 1");
  const BesselQuad q = bessel_quad(z);
  return nu == 0 ? q.continued_k0 : q.continued_k1;
}

}  // namespace hopf_flow
