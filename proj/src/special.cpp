#include "hessdamp/special.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hessdamp/errors.hpp"

namespace hessdamp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// double-double arithmetic, enough for the series below

struct dd {
  double hi = 0.0, lo = 0.0;
  dd() = default;
  dd(double h) : hi(h) {}  // NOLINT
  dd(double h, double l) : hi(h), lo(l) {}
};

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
  const double q1 = a.hi / b.hi;
  dd r = a - b * dd(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  const double q3 = r.hi / b.hi;
  return dd(q1) + dd(q2) + dd(q3);
}

struct cdd {
  dd re, im;
  cdd() = default;
  cdd(dd r, dd i) : re(r), im(i) {}
  explicit cdd(cplx z) : re(z.real()), im(z.imag()) {}
  cplx value() const { return {re.hi + re.lo, im.hi + im.lo}; }
  double mag() const { return std::abs(value()); }
};

inline cdd operator+(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator*(const cdd& a, const cdd& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cdd operator/(const cdd& a, const cdd& b) {
  const dd n = b.re * b.re + b.im * b.im;
  const dd r = a.re * b.re + a.im * b.im;
  const dd i = a.im * b.re - a.re * b.im;
  return {r / n, i / n};
}
inline cdd add_int(cplx a, int n) { return {dd(a.real()) + dd(static_cast<double>(n)), dd(a.imag())}; }

bool is_nonpos_int(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

bool is_int(cplx z) { return z.imag() == 0.0 && std::floor(z.real()) == z.real(); }

// sin(pi z), cos(pi z) with the integer part of Re z removed first, so the
// result keeps its relative accuracy next to the zeros.
cplx sinpi(cplx z) {
  const double n = std::round(z.real());
  const cplx r(z.real() - n, z.imag());
  const double sgn = std::fmod(std::abs(n), 2.0) == 0.0 ? 1.0 : -1.0;
  return sgn * std::sin(kPi * r);
}

cplx cospi(cplx z) {
  const double n = std::round(z.real());
  const cplx r(z.real() - n, z.imag());
  const double sgn = std::fmod(std::abs(n), 2.0) == 0.0 ? 1.0 : -1.0;
  return sgn * std::cos(kPi * r);
}

// ---------------------------------------------------------------------------
// Kummer M by its power series; sum_n (a)_n/(b)_n z^n/n!

cplx m_series(cplx a, cplx b, cplx z) {
  const cdd zz(z);
  cdd term(dd(1.0), dd(0.0));
  cdd sum = term;
  int small_run = 0;
  for (int n = 1; n <= 10000; ++n) {
    term = term * add_int(a, n - 1) * zz / (add_int(b, n - 1) * cdd(dd(static_cast<double>(n)), dd(0.0)));
    sum = sum + term;
    const double tm = term.mag();
    if (tm <= 1e-17 * sum.mag() || tm == 0.0) {
      if (++small_run >= 5) return sum.value();
    } else {
      small_run = 0;
    }
  }
  std::ostringstream os;
  os << "kummer_m: series did not converge in 1e4 terms at z = " << z;
  throw DomainError(os.str());
}

// U(a,b,w) ~ w^{-a} sum (a)_n (a-b+1)_n / n! (-w)^{-n}, with w = exp(logw).
// ok is set when the smallest term reached relative size 1e-15.
cplx u_asymptotic(cplx a, cplx b, cplx logw, bool& ok) {
  const cplx w = std::exp(logw);
  const cplx r = -1.0 / w;
  cplx sum = 1.0, term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  ok = false;
  for (int n = 0; n < 5000; ++n) {
    term *= (a + double(n)) * (a - b + double(n + 1)) / double(n + 1) * r;
    const double tm = std::abs(term);
    if (tm == 0.0) {
      ok = true;
      break;
    }
    if (tm > prev) {
      ok = prev <= 1e-15 * std::abs(sum);
      break;
    }
    sum += term;
    prev = tm;
    if (tm <= 1e-17 * std::abs(sum)) {
      ok = true;
      break;
    }
  }
  return std::exp(-a * logw) * sum;
}

constexpr double kSeriesRadius = 40.0;

// e^{-z} M(a,b,z) for large |z| via
//   M/Gamma(b) = e^{s pi i a} U(a,b,z)/Gamma(b-a) + e^{-s pi i (b-a)} e^z U(b-a,b,e^{-s pi i} z)/Gamma(a)
// with s = +1 for Im z >= 0 and s = -1 below the real axis.
cplx m_scaled_large(cplx a, cplx b, cplx z, bool& ok) {
  const double s = z.imag() >= 0.0 ? 1.0 : -1.0;
  const cplx I(0.0, 1.0);
  const cplx logz = std::log(z);
  bool ok1 = true, ok2 = true;
  cplx first = 0.0;
  const cplx rg_ba = rgamma_c(b - a);
  // e^{-z} U(a,b,z): only matters when Re z is not large
  if (rg_ba != 0.0 && z.real() < 700.0) {
    first = std::exp(s * kPi * I * a) * std::exp(-z) * u_asymptotic(a, b, logz, ok1) * rg_ba;
  }
  cplx second = 0.0;
  const cplx rg_a = rgamma_c(a);
  if (rg_a != 0.0) {
    second = std::exp(-s * kPi * I * (b - a)) * u_asymptotic(b - a, b, logz - s * kPi * I, ok2) * rg_a;
  }
  ok = ok1 && ok2;
  return gamma_c(b) * (first + second);
}

// Laplace integral U = z^{-a}/Gamma(a) int_0^inf e^{-u} u^{a-1} (1 + u/z)^{b-a-1} du, Re a > 0,
// with u = exp(s - e^{-s}).
cplx u_quadrature(cplx a, cplx b, cplx z) {
  const double h = 1.0 / 64.0;
  cplx sum = 0.0;
  const cplx e = b - a - 1.0;
  for (int k = -640; k <= 384; ++k) {
    const double s = k * h;
    const double ln_u = s - std::exp(-s);
    const double u = std::exp(ln_u);
    if (u > 745.0) break;
    // u^{a-1} du = u^a (1 + e^{-s}) ds
    const cplx f = std::exp(-u + a * ln_u + std::log1p(std::exp(-s)) + e * std::log(1.0 + u / z));
    sum += f;
  }
  return std::exp(-a * std::log(z)) * rgamma_c(a) * sum * h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gamma

cplx lgamma_c(cplx z) {
  static const double p[] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,      -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (is_nonpos_int(z)) throw DomainError("lgamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    return std::log(kPi) - std::log(sinpi(z)) - lgamma_c(1.0 - z);
  }
  z -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + double(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_c(cplx z) {
  if (is_nonpos_int(z)) throw DomainError("gamma: pole at non-positive integer");
  if (z.real() < 0.5) return kPi / (sinpi(z) * gamma_c(1.0 - z));
  return std::exp(lgamma_c(z));
}

cplx rgamma_c(cplx z) {
  if (is_nonpos_int(z)) return 0.0;
  if (z.real() < 0.5) return sinpi(z) * gamma_c(1.0 - z) / kPi;
  return std::exp(-lgamma_c(z));
}

// ---------------------------------------------------------------------------
// Kummer

cplx kummer_m(cplx a, cplx b, cplx z) {
  if (is_nonpos_int(b)) throw DomainError("kummer_m: b is a non-positive integer (pole)");
  if (z == 0.0) return 1.0;
  if (std::abs(z) <= kSeriesRadius) {
    if (z.real() < 0.0) return std::exp(z) * m_series(b - a, b, -z);
    return m_series(a, b, z);
  }
  return std::exp(z) * kummer_m_scaled(a, b, z);
}

cplx kummer_m_scaled(cplx a, cplx b, cplx z) {
  if (is_nonpos_int(b)) throw DomainError("kummer_m: b is a non-positive integer (pole)");
  if (z == 0.0) return 1.0;
  if (std::abs(z) > kSeriesRadius) {
    bool ok = false;
    const cplx v = m_scaled_large(a, b, z, ok);
    if (ok) return v;
    if (std::abs(z) > 1.5 * kSeriesRadius) {
      std::ostringstream os;
      os << "kummer_m: no accurate method for a = " << a << ", b = " << b << ", z = " << z;
      throw DomainError(os.str());
    }
  }
  if (z.real() < 0.0) return m_series(b - a, b, -z);
  return std::exp(-z) * m_series(a, b, z);
}

cplx kummer_u(cplx a, cplx b, cplx z) {
  if (z == 0.0) throw DomainError("kummer_u: z = 0");
  if (a == 0.0) return 1.0;
  if (std::abs(z) > kSeriesRadius) {
    bool ok = false;
    const cplx v = u_asymptotic(a, b, std::log(z), ok);
    if (ok) return v;
  }
  if (z.real() > 8.0 && a.real() > 0.0) return u_quadrature(a, b, z);
  if (is_int(b)) throw DomainError("kummer_u: integer b is not supported near the origin; use kummer_u_averaged");
  const cplx t1 = gamma_c(1.0 - b) * rgamma_c(a - b + 1.0) * kummer_m(a, b, z);
  const cplx t2 = gamma_c(b - 1.0) * rgamma_c(a) * std::exp((1.0 - b) * std::log(z)) * kummer_m(a - b + 1.0, 2.0 - b, z);
  return t1 + t2;
}

cplx kummer_u_averaged(cplx a, double b, cplx z, double eps) {
  if (std::floor(b) != b) return kummer_u(a, b, z);
  return 0.5 * (kummer_u(a, b + eps, z) + kummer_u(a, b - eps, z));
}

// ---------------------------------------------------------------------------
// Bessel

namespace {

// sum_k (-z^2/4)^k / (k! (nu+1)_k), nu + 1 not a non-positive integer
cplx j_series_sum(double nu, cplx z) {
  const cdd zz(z);
  const cdd q = zz * zz * cdd(dd(-0.25), dd(0.0));
  cdd term(dd(1.0), dd(0.0));
  cdd sum = term;
  int small_run = 0;
  for (int k = 1; k <= 10000; ++k) {
    const dd den = dd(static_cast<double>(k)) * (dd(nu) + dd(static_cast<double>(k)));
    term = term * q / cdd(den, dd(0.0));
    sum = sum + term;
    const double tm = term.mag();
    if (tm <= 1e-17 * sum.mag() || tm == 0.0) {
      if (++small_run >= 3) return sum.value();
    } else {
      small_run = 0;
    }
  }
  throw DomainError("bessel: series did not converge");
}

bool use_hankel(double nu, cplx z) { return std::abs(z) > 25.0 + 0.5 * nu * nu; }

// Hankel expansion: returns {P, Q}
void hankel_pq(double nu, cplx z, cplx& P, cplx& Q) {
  const double mu = 4.0 * nu * nu;
  P = 1.0;
  Q = 0.0;
  cplx c = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 500; ++k) {
    c *= (mu - double((2 * k - 1) * (2 * k - 1))) / (8.0 * k) / z;
    const double cm = std::abs(c);
    if (cm == 0.0) break;
    if (cm > prev) break;
    prev = cm;
    // P collects even k with sign (-1)^{k/2}, Q odd k with sign (-1)^{(k-1)/2}
    const int m = k / 2;
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      P += sgn * c;
    } else {
      Q += sgn * c;
    }
    if (cm < 1e-17 * std::abs(P)) break;
  }
}

cplx j_hankel(double nu, cplx z) {
  cplx P, Q;
  hankel_pq(nu, z, P, Q);
  const cplx w = z - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * z)) * (P * std::cos(w) - Q * std::sin(w));
}

cplx y_hankel(double nu, cplx z) {
  cplx P, Q;
  hankel_pq(nu, z, P, Q);
  const cplx w = z - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * z)) * (P * std::sin(w) + Q * std::cos(w));
}

cplx y_noninteger(double nu, cplx z) {
  const double c = cospi(nu).real(), s = sinpi(nu).real();
  return (bessel_j(nu, z) * c - bessel_j(-nu, z)) / s;
}

}  // namespace

cplx bessel_j(double nu, cplx z) {
  if (nu < 0.0 && std::floor(nu) == nu) {
    const double sgn = std::fmod(-nu, 2.0) == 0.0 ? 1.0 : -1.0;
    return sgn * bessel_j(-nu, z);
  }
  if (z == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  if (use_hankel(nu, z)) return j_hankel(nu, z);
  const cplx pref = std::exp(nu * std::log(0.5 * z)) * rgamma_c(nu + 1.0);
  return pref * j_series_sum(nu, z);
}

cplx bessel_y(double nu, cplx z) {
  if (z == 0.0) throw DomainError("bessel_y: z = 0");
  if (use_hankel(std::abs(nu), z)) return y_hankel(nu, z);
  if (std::floor(nu) == nu) return 0.5 * (y_noninteger(nu + 1e-6, z) + y_noninteger(nu - 1e-6, z));
  return y_noninteger(nu, z);
}

double bessel_j(double nu, double x) {
  if (x < 0.0 && std::floor(nu) != nu) throw DomainError("bessel_j: negative argument with non-integer order");
  return bessel_j(nu, cplx(x, 0.0)).real();
}

double bessel_y(double nu, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y: x must be > 0");
  return bessel_y(nu, cplx(x, 0.0)).real();
}

}  // namespace hessdamp
