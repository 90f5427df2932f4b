#pragma once

#include <cmath>
#include <complex>

namespace hopf_flow {

/// Second-order forward-mode number a + b e1 + c e2 + d e1 e2 with
/// e1^2 = e2^2 = 0. Seeding e1 and e2 along variables u and w gives f, f_u,
/// f_w and f_uw exactly (up to round-off); seeding both along u gives f_uu.
/// T is double or std::complex<double>.
template <class T>
struct HyperDual {
  T a{};  // value
  T b{};  // d/d(e1)
  T c{};  // d/d(e2)
  T d{};  // d^2/d(e1)d(e2)

  HyperDual() = default;
  HyperDual(T value) : a(value) {}  // NOLINT: implicit promotion of constants
  HyperDual(T value, T e1, T e2, T e12) : a(value), b(e1), c(e2), d(e12) {}

  static HyperDual variable(T value, bool along_e1, bool along_e2) {
    return {value, along_e1 ? T(1) : T(0), along_e2 ? T(1) : T(0), T(0)};
  }

  HyperDual& operator+=(const HyperDual& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

  friend HyperDual operator+(HyperDual x, const HyperDual& y) { return x += y; }
  friend HyperDual operator-(HyperDual x, const HyperDual& y) { return x -= y; }
  friend HyperDual operator-(const HyperDual& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend HyperDual operator*(const HyperDual& x, const HyperDual& y) {
    return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a,
            x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
  }
  friend HyperDual operator/(const HyperDual& x, const HyperDual& y) {
    const T inv = T(1) / y.a;
    return x * chain(y, inv, -inv * inv, T(2) * inv * inv * inv);
  }

  /// f(x) given f(a), f'(a), f''(a).
  friend HyperDual chain(const HyperDual& x, T f0, T f1, T f2) {
    return {f0, f1 * x.b, f1 * x.c, f1 * x.d + f2 * x.b * x.c};
  }
};

template <class T>
HyperDual<T> operator*(double s, const HyperDual<T>& x) {
  return {T(s) * x.a, T(s) * x.b, T(s) * x.c, T(s) * x.d};
}

template <class T>
HyperDual<T> pow_int(const HyperDual<T>& x, int n) {
  HyperDual<T> out(T(1));
  for (int i = 0; i < n; ++i) out = out * x;
  return out;
}

template <class T>
HyperDual<T> log(const HyperDual<T>& x) {
  using std::log;
  const T inv = T(1) / x.a;
  return chain(x, log(x.a), inv, -inv * inv);
}

/// log|x| for real x; same derivatives as log.
inline HyperDual<double> log_abs(const HyperDual<double>& x) {
  const double inv = 1.0 / x.a;
  return chain(x, std::log(std::abs(x.a)), inv, -inv * inv);
}

template <class T>
HyperDual<T> sqrt(const HyperDual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.a);
  return chain(x, s, T(0.5) / s, T(-0.25) / (s * x.a));
}

template <class T>
HyperDual<T> atan(const HyperDual<T>& x) {
  using std::atan;
  const T q = T(1) / (T(1) + x.a * x.a);
  return chain(x, atan(x.a), q, T(-2) * x.a * q * q);
}

template <class T>
HyperDual<T> sin(const HyperDual<T>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.a);
  return chain(x, s, cos(x.a), -s);
}

template <class T>
HyperDual<T> cos(const HyperDual<T>& x) {
  using std::cos;
  using std::sin;
  const T c = cos(x.a);
  return chain(x, c, -sin(x.a), -c);
}

template <class T>
HyperDual<T> tan(const HyperDual<T>& x) {
  using std::tan;
  const T t = tan(x.a);
  const T sec2 = T(1) + t * t;
  return chain(x, t, sec2, T(2) * t * sec2);
}

template <class T>
HyperDual<std::complex<double>> to_complex(const HyperDual<T>& x) {
  using C = std::complex<double>;
  return {C(x.a), C(x.b), C(x.c), C(x.d)};
}

}  // namespace hopf_flow
