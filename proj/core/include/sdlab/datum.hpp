#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sdlab/expression.hpp"
#include "sdlab/quadrature.hpp"

namespace sdlab {

// Radial envelopes g(|xi|) of the Fourier-side catalog.  All are smooth,
// monotone nonincreasing, and equal 1 at the origin.
struct Gaussian {
    double sigma = 1.0;  // e^{-sigma r^2}
};
struct PowerTail {
    double s = 4.0;  // (1 + r^2)^{-s/2}
};
// (1 + sigma r^2) e^{-sigma r^2}: flat to second order at the origin, so
// it carries mass but no degree-2 moment.
struct GaussBump {
    double sigma = 1.0;
};

using RadialEnvelope = std::variant<Gaussian, PowerTail, GaussBump>;

double envelope_eval(const RadialEnvelope& env, double r);
// g(r) = taylor0 + taylor2 * r^2 + O(r^4) at the origin.
double envelope_taylor0(const RadialEnvelope& env);
double envelope_taylor2(const RadialEnvelope& env);
TailHint envelope_tail(const RadialEnvelope& env);
std::string envelope_describe(const RadialEnvelope& env);

struct DatumComponent {
    RadialEnvelope envelope;
    AngularMonomial beta;  // |beta| <= 2
    double amplitude = 1.0;
};

double fourier_eval(const DatumComponent& comp, const double* xi, int n);
double fourier_eval(const std::vector<DatumComponent>& comps, const double* xi, int n);

enum class Side { U0, U1 };

// Homogeneous Taylor parts of the transform at xi = 0 up to degree 2.
// Each entry is coeff * xi^alpha * |xi|^{2 r2_power} with
// |alpha| + 2 r2_power equal to the degree.
struct MomentEntry {
    AngularMonomial alpha;
    int r2_power = 0;
    double coeff = 0.0;
};

struct MomentTable {
    std::vector<MomentEntry> degree[3];

    bool is_zero(int k) const;
    double eval(int k, const double* xi, double r) const;
};

MomentTable taylor_terms(const std::vector<DatumComponent>& comps, int max_degree);

struct InitialDatum {
    std::vector<DatumComponent> u0;
    std::vector<DatumComponent> u1;
    double sobolev_l = 0.0;
    double weight_gamma = 0.0;

    const std::vector<DatumComponent>& side(Side s) const {
        return s == Side::U0 ? u0 : u1;
    }
    MomentTable taylor(Side s, int max_degree) const {
        return taylor_terms(side(s), max_degree);
    }
    std::string digest() const;
};

// Validated constructor: checks |beta| <= 2, positive envelope parameters,
// and that the declared H^l (u1) / H^{l+1} (u0) membership is consistent
// with every power tail in dimension n.
InitialDatum make_datum(std::vector<DatumComponent> u0, std::vector<DatumComponent> u1,
                        double sobolev_l, double weight_gamma, int n);

// Squared H^p norm of one side: radial quadrature of
// (1 + r^{2p}) |sum comps|^2 with analytic angular moments.  Throws
// DivergenceError when a power tail is too fat for H^p in dimension n.
double sobolev_norm_sq(const std::vector<DatumComponent>& comps, double p, int n,
                       const QuadConfig& cfg);

// Datum saturating the H^l hypothesis: u1 a power tail with
// s = l + n/2 + eps (in H^l but in no H^{l+eps'} for eps' >= eps),
// u0 the matching s+1 tail; unit mass on both sides.
InitialDatum make_threshold_datum(int n, double l, double eps);

} // namespace sdlab
