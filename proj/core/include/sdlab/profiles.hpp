#pragma once

#include <functional>
#include <vector>

#include "sdlab/datum.hpp"
#include "sdlab/expression.hpp"
#include "sdlab/jet.hpp"

namespace sdlab {

// Taylor series of the phase correction phi(a) = a / (4 + 2 sqrt(4 - a^2)).
Jet phi_taylor(std::size_t order);

// Taylor series of h(b) = 2 / (1 + sqrt(1 - 4b)); the coefficients are the
// Catalan numbers.
Jet catalan_h_coeffs(std::size_t order);

// Low-frequency family: e^{-t r^4/2} (1/k!) d^k L_j/da^k (t,xi,0) r^{3k},
// where L_0 = cos(theta), L_1 = sin(theta) / ((r/2) sqrt(4-a^2)) and
// theta = t r - t r^4 phi(a).  lowfreq_family returns orders 0..kmax at once.
double lowfreq_term(int j, int k, double t, double r);
std::vector<double> lowfreq_family(int j, int kmax, double t, double r);

// High-frequency family: (1/k!) d^k H_j/db^k (t,xi,0) r^{-6k}, where
// H_0 = e^{-(t/r^2) h(b)}/2 and H_1 = e^{-(t/r^2) h(b)} / (r^4 sqrt(1-4b)).
double highfreq_term(int j, int k, double t, double r);
std::vector<double> highfreq_family(int j, int kmax, double t, double r);

// Stable Taylor remainders.
//
// E_j - sum_{p<=k} script-L_j^p on the low ball (r <= 1), evaluated in the
// shared-envelope factored form so no precision is lost to the common
// e^{-t r^4/2} cos/sin(t r) bulk.
double lowfreq_residual(int j, int k, double t, double r);
// H_j(t, xi, r^{-6}) - sum_{p<=k} script-H_j^p on the high shell
// (r >= sqrt(2)), summed as the convergent coefficient tail; k = -1 gives
// the full closed form.
double highfreq_remainder(int j, int k, double t, double r);

// One profile summand: (coefficient polynomial in xi) x (multiplier in (t,r)).
struct ProfileTerm {
    AngularMonomial alpha;
    std::function<double(double t, double r)> radial;
    TailHint tail;
};

enum class ProfileRegion { Low, High, Full };

struct ProfileStack {
    std::vector<ProfileTerm> terms;
    ProfileRegion region = ProfileRegion::Full;

    double eval(double t, const double* xi, double r) const {
        double v = 0.0;
        for (const auto& term : terms) v += term.radial(t, r) * term.alpha.eval(xi);
        return v;
    }
};

// B_j^k = sum_{p<=k/3} script-L_j^p m[u_j]^{k-3p}; A_j^k = sum_{q<=k} B_j^q.
ProfileStack build_B(int j, int k, const InitialDatum& datum);
ProfileStack build_A(int j, int k, const InitialDatum& datum);

// C^k: even increments (script-H_0^{k/2} + (r^4/2) script-H_1^{k/2}) u0^,
// odd increments script-H_1^{(k-1)/2} u1^.
ProfileStack build_C(int k, const InitialDatum& datum);

} // namespace sdlab
