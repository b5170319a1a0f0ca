#pragma once

#include <complex>

namespace sdlab {

struct InitialDatum;

// Radius where the characteristic roots collide: cbrt(2).
inline constexpr double kBranchRadius = 1.2599210498948731647672106;

// Radial frequency |xi| together with the spatial dimension n.
struct Frequency {
    double r = 0.0;
    int n = 1;
};

// Roots of lambda^2 + r^4 lambda + r^2 = 0, ordered by real part
// (lambda1 is the slow root).  Complex conjugate pair for r < cbrt(2),
// real pair for r > cbrt(2).
struct CharRoots {
    std::complex<double> lambda1;
    std::complex<double> lambda2;
};

struct KernelValue {
    double e0 = 1.0;
    double e1 = 0.0;
    double t = 0.0;
};

CharRoots char_roots(const Frequency& freq);

// Evolution multipliers.  E0(0,r) = 1, E1(0,r) = 0; E1(t,0) = t by the
// sinc limit.  Both are evaluated without cancellation across the root
// collision at r = cbrt(2) and without overflow at large t*r^4.
double eval_E0(double t, const Frequency& freq);
double eval_E1(double t, const Frequency& freq);
KernelValue eval_kernels(double t, const Frequency& freq);

// r^8 - 4 r^2, factored to keep the sign exact near the branch radius.
double discriminant(double r);

// Entire functions C(w) = cosh(sqrt(w)) and S(w) = sinh(sqrt(w))/sqrt(w)
// continued through w <= 0 (cos / sinc); used by the confluent branch
// neighborhood and exposed for tests.
double cosh_entire(double w);
double sinhc_entire(double w);

// Fourier-side solution at a frequency vector:
//   E0(t,xi) u0^(xi) + E1(t,xi) ( (|xi|^4/2) u0^(xi) + u1^(xi) ).
std::complex<double> eval_solution(double t, const double* xi, int n,
                                   const InitialDatum& datum);

// Central finite-difference residual of u_tt + r^4 u_t + r^2 u = 0 at
// (t, r e_1), normalized by max(|u|, 1).  Fourth-order stencils; needs
// t >= 2h > 0.
double ode_residual(double t, const Frequency& freq, const InitialDatum& datum,
                    double h);

} // namespace sdlab
