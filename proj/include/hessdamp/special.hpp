#pragma once

#include <complex>

namespace hessdamp {

using cplx = std::complex<double>;

// Gamma function over the complex plane (Lanczos, g = 7, with reflection).
cplx lgamma_c(cplx z);
cplx gamma_c(cplx z);
/// 1/Gamma(z); exactly zero at the poles.
cplx rgamma_c(cplx z);

/// Kummer's M(a, b, z) = sum (a)_n / (b)_n z^n / n!.
///
/// |z| <= 40: power series in double-double arithmetic (Kummer's transformation
/// for Re z < 0). Beyond that, the connection to U with the large-argument
/// expansion. Throws DomainError when b is a non-positive integer.
cplx kummer_m(cplx a, cplx b, cplx z);

/// e^{-z} M(a, b, z), which stays bounded where M overflows.
cplx kummer_m_scaled(cplx a, cplx b, cplx z);

/// Tricomi's U(a, b, z), principal branch.
///
/// Large |z|: asymptotic series with optimal truncation. Re z > 8 with Re a > 0:
/// Laplace integral by double-exponential quadrature. Otherwise the connection
/// formula through M, which needs non-integer b (DomainError otherwise).
cplx kummer_u(cplx a, cplx b, cplx z);

/// U for integer b: average of U at b +- eps.
cplx kummer_u_averaged(cplx a, double b, cplx z, double eps = 1e-6);

/// Bessel functions of real order over complex arguments, principal branch.
cplx bessel_j(double nu, cplx z);
/// Non-integer order by the reflection formula; integer order by averaging nu +- 1e-6.
cplx bessel_y(double nu, cplx z);

double bessel_j(double nu, double x);
/// x must be > 0.
double bessel_y(double nu, double x);

}  // namespace hessdamp
