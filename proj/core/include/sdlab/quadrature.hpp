#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "sdlab/expression.hpp"

namespace sdlab {

// LowBall = {r <= 1}, HighShell = {r >= sqrt(2)}, MidAnnulus the rest.
enum class Region { LowBall, HighShell, MidAnnulus, Full };

struct QuadConfig {
    double rel_tol = 1e-7;
    double panel_phase_cap = 0.7853981633974483;  // pi/4
    int gl_order = 16;
    double tail_tol = 1e-12;
    long max_panels = 4000000;
};

// Radial norm weight w(r) = c0 + c_pow * r^exponent  (Sobolev weights).
struct RadialWeight {
    double c0 = 1.0;
    double c_pow = 0.0;
    double exponent = 0.0;

    double operator()(double r) const {
        return c0 + (c_pow != 0.0 ? c_pow * std::pow(r, exponent) : 0.0);
    }
};

// Integral of the monomial eta^alpha over the unit sphere S^{n-1}:
//   2 * prod Gamma((a_j+1)/2) / Gamma((n+|a|)/2)  when every a_j is even,
// zero otherwise.  For n = 1 the sphere is the two-point set {-1, +1}.
double sphere_moment(const AngularMonomial& alpha, int n);

// Surface area of S^{n-1}.
double sphere_area(int n);

struct NormBreakdown {
    double value = 0.0;
    long panels = 0;
    int pairs_used = 0;
    int pairs_skipped_odd = 0;
    double tail_correction = 0.0;
};

// L2-type norm squared of the expression over a region in R^n:
// |sum terms|^2 expanded into radial x angular pair products, angular parts
// by sphere_moment (odd classes never evaluated), radial parts by
// phase-bounded composite Gauss-Legendre panels.
NormBreakdown norm_sq_detail(const SpectralExpr& expr, Region region, int n,
                             const QuadConfig& cfg, const RadialWeight& weight = {});
double norm_sq(const SpectralExpr& expr, Region region, int n,
               const QuadConfig& cfg, const RadialWeight& weight = {});

// Composite Gauss-Legendre on [a,b] with panel widths bounded by
// panel_phase_cap / phase_rate.
double radial_integrate(const std::function<double(double)>& f, double a,
                        double b, double phase_rate, const QuadConfig& cfg);

// int_{|xi|<=1} e^{-t|xi|^4} sin^2(t|xi|)/|xi|^2 dxi, directly and via the
// half-angle split sin^2 = 1/2 - cos(2tr)/2 (cross-check path).
double lemma7_integral(int n, double t, const QuadConfig& cfg);
double lemma7_integral_split(int n, double t, const QuadConfig& cfg);

struct Thm45Constants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

// The three explicit profile constants: radial quadrature times analytic
// sphere moments.  c2 is defined as zero for n = 1.
Thm45Constants thm45_constants(int n, const QuadConfig& cfg = {});
// Independent oracle for n <= 3: explicit angular quadrature instead of the
// Gamma-function sphere moments.
Thm45Constants thm45_constants_direct(int n, const QuadConfig& cfg = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Plain Monte-Carlo estimate of the same squared-norm integral; independent
// of the radial/angular factorization.  full_radius bounds the sampling
// ball for HighShell/Full regions.
McEstimate mc_crosscheck(const SpectralExpr& expr, Region region, int n,
                         std::uint64_t samples, std::uint64_t seed = 0x5d1ab5eedULL,
                         double full_radius = 8.0, const RadialWeight& weight = {});

} // namespace sdlab
