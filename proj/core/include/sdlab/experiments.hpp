#pragma once

#include <string>
#include <vector>

#include "sdlab/datum.hpp"
#include "sdlab/profiles.hpp"
#include "sdlab/quadrature.hpp"

namespace sdlab {

struct TimeLadder {
    double t0 = 256.0;
    double ratio = 2.0;
    int steps = 8;  // points t0 * ratio^j for j = 0..steps

    std::vector<double> points() const;
};

struct DecayCurve {
    std::vector<std::pair<double, double>> points;  // (t, value), t increasing
    std::string experiment;
    std::string region;
    std::string datum_digest;
};

enum class FitModel { Power, Log };

struct SlopeFit {
    double slope = 0.0;      // d log(v) / d log(t)  (Power) or d v / d log(t) (Log)
    double intercept = 0.0;
    double max_rel_residual = 0.0;
    double r_squared = 0.0;
    FitModel model = FitModel::Power;
};

// Least squares on (log t, log v) or (log t, v); only points with
// t >= t_min enter the fit.
SlopeFit fit_decay(const DecayCurve& curve, FitModel model, double t_min = 0.0);

// Which part of the solution the residual starts from.
enum class SolutionPart { Full, E0U0, E1U1 };

struct ResidualSpec {
    SolutionPart part = SolutionPart::Full;
    int subtract_A1 = -1;  // subtract A_1^k (k >= 0)
    int subtract_A0 = -1;  // subtract A_0^k
    int subtract_C = -1;   // subtract C^k
};

// Fourier-side expressions bound at time t.  The direct form is valid on
// the low ball and mid annulus (and on the high shell when no C^k is
// subtracted); the high form rewrites u^ - C^k through the Taylor-remainder
// tail of H_j so the subtraction costs no precision on the shell.
SpectralExpr residual_expr_direct(const InitialDatum& datum, int n, double t,
                                  const ResidualSpec& spec);
SpectralExpr residual_expr_high(const InitialDatum& datum, int n, double t,
                                const ResidualSpec& spec);

// Norm of the residual over a region at one time.
double residual_norm(const InitialDatum& datum, int n, double t,
                     const ResidualSpec& spec, Region region, const QuadConfig& cfg);

DecayCurve run_profile_residual(int n, const InitialDatum& datum, const ResidualSpec& spec,
                                Region region, const TimeLadder& ladder,
                                const QuadConfig& cfg, int jobs = 1);

// ||u^(t, .)|| over a region (Theorem harnesses for the plain norm).
DecayCurve run_solution_norm(int n, const InitialDatum& datum, const TimeLadder& ladder,
                             const QuadConfig& cfg, Region region = Region::LowBall,
                             int jobs = 1);

// ||E_j - sum_{p<=k} script-L_j^p|| over the low ball.
DecayCurve lemma51_curve(int n, int j, int k, const TimeLadder& ladder,
                         const QuadConfig& cfg, int jobs = 1);

DecayCurve lemma7_curve(int n, const TimeLadder& ladder, const QuadConfig& cfg,
                        int jobs = 1);

struct LowerBoundCheck {
    bool passed = false;
    bool degenerate = false;
    double margin = 0.0;  // min over the window of value / (coeff * t^exponent)
    double coefficient = 0.0;
    double exponent = 0.0;
};

// Asserts curve(t) >= slack * coefficient * t^exponent on t >= t_min.
LowerBoundCheck check_lower_bound(const DecayCurve& curve, double coefficient,
                                  double exponent, double t_min = 4096.0,
                                  double slack = 0.95);

// t^{weight} * curve monotone nonincreasing over the last `window` points
// (the limit-refinement trend diagnostic).
bool scaled_trend_nonincreasing(const DecayCurve& curve, double weight, int window = 4);

// int_{|eta|<=1} e^{-|eta|^4} |eta|^{-2m} d eta.
double lowball_exp4_mass(int n, int inverse_r2_power, const QuadConfig& cfg);

// Lower-bound coefficients assembled from the explicit proof constants and
// the datum moments.  A zero coefficient marks a degenerate (vacuous) bound.
double thm43_lower_coefficient(int n, const InitialDatum& datum, const QuadConfig& cfg);
double thm44_lower_coefficient(int n, const InitialDatum& datum, const QuadConfig& cfg);
double thm45_lower_coefficient(int n, const InitialDatum& datum, const QuadConfig& cfg);

// The (n, l) classification of the full-space residual estimates.
struct CaseEntry {
    std::string label;       // "i", "ii", "iii"
    bool subtract_A10 = false;
    bool subtract_C0 = false;
    double exponent = 0.0;   // expected residual decay exponent
};
CaseEntry classify_case(int n, double l);

struct NormLaw {
    enum Kind { SqrtT, SqrtLogT, Power } kind = Power;
    double exponent = 0.0;  // for Power
};
NormLaw corollary41_law(int n, double l);

struct SweepRow {
    double param = 0.0;            // l or k
    double measured_slope = 0.0;   // solution-norm or residual slope
    double expected_slope = 0.0;
    std::string regime;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double threshold = 0.0;        // l* = n/4 - 3/2 or k* = (n-18)/12
    bool switch_detected = false;
    std::string report;
};

SweepResult threshold_sweep_l(int n, const std::vector<double>& l_values,
                              const TimeLadder& ladder, const QuadConfig& cfg,
                              double eps = 0.04, int jobs = 1);
SweepResult threshold_sweep_k(int n, const std::vector<int>& k_values,
                              const TimeLadder& ladder, const QuadConfig& cfg,
                              double eps = 0.04, int jobs = 1);

} // namespace sdlab
