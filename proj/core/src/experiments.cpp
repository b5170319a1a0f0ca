#include "sdlab/experiments.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "sdlab/errors.hpp"
#include "sdlab/kernels.hpp"

namespace sdlab {

std::vector<double> TimeLadder::points() const {
    if (!(t0 > 0.0) || !(ratio > 1.0) || steps < 0)
        throw InconsistentSpecError("TimeLadder: need t0 > 0, ratio > 1, steps >= 0");
    std::vector<double> out;
    double t = t0;
    for (int j = 0; j <= steps; ++j) {
        out.push_back(t);
        t *= ratio;
    }
    return out;
}

SlopeFit fit_decay(const DecayCurve& curve, FitModel model, double t_min) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& [t, v] : curve.points) {
        if (t < t_min) continue;
        if (model == FitModel::Power) {
            if (!(v > 0.0))
                throw DegenerateFitError("fit_decay: nonpositive value in power fit");
            xy.emplace_back(std::log(t), std::log(v));
        } else {
            xy.emplace_back(std::log(t), v);
        }
    }
    if (xy.size() < 4)
        throw DegenerateFitError("fit_decay: need at least 4 points in the window");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (auto& [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(xy.size());
    const double denom = m * sxx - sx * sx;
    SlopeFit fit;
    fit.model = model;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / m;
    for (auto& [x, y] : xy) {
        const double yhat = fit.intercept + fit.slope * x;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ybar) * (y - ybar);
        const double rel = (model == FitModel::Power)
                               ? std::abs(std::expm1(y - yhat))
                               : std::abs(y - yhat) / std::max(std::abs(yhat), 1e-300);
        fit.max_rel_residual = std::max(fit.max_rel_residual, rel);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

// Last seven ladder points; on the default ladder that is t >= 2^10.
double fit_t_min(const TimeLadder& ladder) {
    return ladder.t0 * std::pow(ladder.ratio, std::max(0, ladder.steps - 6));
}

using RadialFn = std::function<double(double)>;

// Terms grouped by angular class so subtractions cancel pointwise inside
// one radial closure instead of across quadrature pair products.
struct ClassBuilder {
    std::map<AngularMonomial, std::pair<std::vector<RadialFn>, TailHint>> classes;

    void add(const AngularMonomial& alpha, RadialFn fn, const TailHint& tail) {
        auto it = classes.find(alpha);
        if (it == classes.end()) {
            classes.emplace(alpha, std::make_pair(std::vector<RadialFn>{std::move(fn)}, tail));
            return;
        }
        it->second.first.push_back(std::move(fn));
        auto& acc = it->second.second;
        acc.mag += tail.mag;
        // Envelope of the sum: the asymptotically slowest component wins
        // (any positive Gaussian rate beats every pure power).
        if (tail.gauss < acc.gauss ||
            (tail.gauss == acc.gauss && tail.power < acc.power)) {
            acc.power = tail.power;
            acc.gauss = tail.gauss;
        }
    }

    std::vector<SpectralTerm> build() const {
        std::vector<SpectralTerm> out;
        for (const auto& [alpha, entry] : classes) {
            SpectralTerm term;
            term.alpha = alpha;
            const auto fns = entry.first;
            term.radial = [fns](double r) {
                double s = 0.0;
                for (const auto& f : fns) s += f(r);
                return s;
            };
            term.tail = entry.second;
            out.push_back(std::move(term));
        }
        return out;
    }
};

TailHint scaled_tail(const RadialEnvelope& env, double amp, double extra_power,
                     double mag_factor) {
    TailHint tail = envelope_tail(env);
    tail.mag = std::abs(amp) * mag_factor;
    tail.power += extra_power;
    return tail;
}

// u^ multiplier closures for one side of the data.
RadialFn solution_multiplier(Side side, SolutionPart part, int n, double t) {
    if (part == SolutionPart::E0U0) {
        return [t, n](double r) { return eval_E0(t, Frequency{r, n}); };
    }
    if (part == SolutionPart::E1U1) {
        return [t, n](double r) { return eval_E1(t, Frequency{r, n}); };
    }
    if (side == Side::U0) {
        return [t, n](double r) {
            const KernelValue kv = eval_kernels(t, Frequency{r, n});
            const double r4 = r * r * r * r;
            return kv.e0 + 0.5 * r4 * kv.e1;
        };
    }
    return [t, n](double r) { return eval_E1(t, Frequency{r, n}); };
}

void append_solution_terms(ClassBuilder& cls, const InitialDatum& datum, int n, double t,
                           SolutionPart part) {
    const bool use_u0 = part != SolutionPart::E1U1;
    const bool use_u1 = part != SolutionPart::E0U0;
    if (use_u0) {
        for (const auto& comp : datum.u0) {
            RadialFn mult = solution_multiplier(Side::U0, part, n, t);
            const RadialEnvelope env = comp.envelope;
            const double amp = comp.amplitude;
            cls.add(comp.beta,
                    [mult, env, amp](double r) { return mult(r) * amp * envelope_eval(env, r); },
                    scaled_tail(env, amp, 0.0, 2.0));
        }
    }
    if (use_u1) {
        for (const auto& comp : datum.u1) {
            RadialFn mult = solution_multiplier(Side::U1, part, n, t);
            const RadialEnvelope env = comp.envelope;
            const double amp = comp.amplitude;
            cls.add(comp.beta,
                    [mult, env, amp](double r) { return mult(r) * amp * envelope_eval(env, r); },
                    scaled_tail(env, amp, 4.0, 2.0));
        }
    }
}

void append_profile_terms(ClassBuilder& cls, const ProfileStack& stack, double t,
                          double sign) {
    for (const auto& term : stack.terms) {
        auto radial = term.radial;
        cls.add(term.alpha, [radial, t, sign](double r) { return sign * radial(t, r); },
                term.tail);
    }
}

void append_subtractions(ClassBuilder& cls, const InitialDatum& datum, double t,
                         const ResidualSpec& spec) {
    if (spec.subtract_A1 >= 0)
        append_profile_terms(cls, build_A(1, spec.subtract_A1, datum), t, -1.0);
    if (spec.subtract_A0 >= 0)
        append_profile_terms(cls, build_A(0, spec.subtract_A0, datum), t, -1.0);
    if (spec.subtract_C >= 0)
        append_profile_terms(cls, build_C(spec.subtract_C, datum), t, -1.0);
}

double datum_amp_sum(const InitialDatum& datum) {
    double s = 0.0;
    for (const auto& c : datum.u0) s += std::abs(c.amplitude);
    for (const auto& c : datum.u1) s += std::abs(c.amplitude);
    return s;
}

void set_hints(SpectralExpr& expr, const InitialDatum& datum, double t) {
    expr.phase_rate = t;
    expr.exp4_rate = 0.25 * t;
    expr.low_mag = 64.0 * (1.0 + datum_amp_sum(datum));
    expr.exp2t_rate = 0.5 * t;
    // Everything on the annulus is crushed by e^{-t/4} at worst; the
    // polynomial prefactors are absorbed by a generous power of (1+t).
    expr.mid_bound = 64.0 * (1.0 + datum_amp_sum(datum)) * std::pow(1.0 + t, 6.0) *
                     std::exp(-0.25 * t);
}

} // namespace

SpectralExpr residual_expr_direct(const InitialDatum& datum, int n, double t,
                                  const ResidualSpec& spec) {
    ClassBuilder cls;
    append_solution_terms(cls, datum, n, t, spec.part);
    append_subtractions(cls, datum, t, spec);
    SpectralExpr expr;
    expr.terms = cls.build();
    set_hints(expr, datum, t);
    return expr;
}

SpectralExpr residual_expr_high(const InitialDatum& datum, int n, double t,
                                const ResidualSpec& spec) {
    if (spec.subtract_C < 0) return residual_expr_direct(datum, n, t, spec);
    if (spec.part != SolutionPart::Full)
        throw InconsistentSpecError("residual_expr_high: C^k subtraction needs the full solution");
    const int k = spec.subtract_C;
    const int k0 = k / 2;                      // script-H_0 orders included
    const int k1 = k >= 1 ? (k - 1) / 2 : -1;  // script-H_1 orders against u1
    ClassBuilder cls;
    for (const auto& comp : datum.u0) {
        const RadialEnvelope env = comp.envelope;
        const double amp = comp.amplitude;
        auto fn = [t, k0, env, amp](double r) {
            const double rem0 = highfreq_remainder(0, k0, t, r);
            const double rem1 = highfreq_remainder(1, k0, t, r);
            const double r4 = r * r * r * r;
            const double s = std::sqrt(discriminant(r));
            // E_0 + (r^4/2) E_1 minus the partial sums; the e^{lambda2 t}
            // coefficient (1/2 - r^4/(2s)) is written cancellation-free.
            const double lam2 = -0.5 * (r4 + s);
            const double e2 = lam2 * t < -745.0 ? 0.0 : std::exp(lam2 * t);
            const double c2 = -2.0 * r * r / (s * (s + r4));
            return (rem0 + 0.5 * r4 * rem1 + e2 * c2) * amp * envelope_eval(env, r);
        };
        cls.add(comp.beta, fn, scaled_tail(env, amp, 6.0 * (k0 + 1), 16.0));
    }
    for (const auto& comp : datum.u1) {
        const RadialEnvelope env = comp.envelope;
        const double amp = comp.amplitude;
        auto fn = [t, k1, env, amp](double r) {
            const double rem1 = highfreq_remainder(1, k1, t, r);
            const double r4 = r * r * r * r;
            const double s = std::sqrt(discriminant(r));
            const double lam2 = -0.5 * (r4 + s);
            const double e2 = lam2 * t < -745.0 ? 0.0 : std::exp(lam2 * t);
            return (rem1 - e2 / s) * amp * envelope_eval(env, r);
        };
        cls.add(comp.beta, fn, scaled_tail(env, amp, 4.0 + 6.0 * (k1 + 1), 16.0));
    }
    // Low-frequency profiles are exponentially small on the shell but are
    // still part of the residual there.
    ResidualSpec low_only = spec;
    low_only.subtract_C = -1;
    ClassBuilder lows;
    append_subtractions(lows, datum, t, low_only);
    for (auto& term : lows.build()) {
        auto radial = term.radial;
        cls.add(term.alpha, radial, term.tail);
    }
    SpectralExpr expr;
    expr.terms = cls.build();
    set_hints(expr, datum, t);
    return expr;
}

double residual_norm(const InitialDatum& datum, int n, double t, const ResidualSpec& spec,
                     Region region, const QuadConfig& cfg) {
    const bool stable_high = spec.subtract_C >= 0;
    switch (region) {
    case Region::LowBall:
        return std::sqrt(norm_sq(residual_expr_direct(datum, n, t, spec), region, n, cfg));
    case Region::MidAnnulus:
        return std::sqrt(norm_sq(residual_expr_direct(datum, n, t, spec), region, n, cfg));
    case Region::HighShell: {
        const SpectralExpr expr = stable_high ? residual_expr_high(datum, n, t, spec)
                                              : residual_expr_direct(datum, n, t, spec);
        return std::sqrt(norm_sq(expr, region, n, cfg));
    }
    case Region::Full: {
        const SpectralExpr direct = residual_expr_direct(datum, n, t, spec);
        double v = norm_sq(direct, Region::LowBall, n, cfg);
        v += norm_sq(direct, Region::MidAnnulus, n, cfg);
        const SpectralExpr high = stable_high ? residual_expr_high(datum, n, t, spec) : direct;
        v += norm_sq(high, Region::HighShell, n, cfg);
        return std::sqrt(v);
    }
    }
    return 0.0;
}

namespace {

const char* region_name(Region region) {
    switch (region) {
    case Region::LowBall: return "low";
    case Region::HighShell: return "high";
    case Region::MidAnnulus: return "mid";
    case Region::Full: return "full";
    }
    return "?";
}

DecayCurve map_ladder(const TimeLadder& ladder, int jobs,
                      const std::function<double(double)>& value_at) {
    DecayCurve curve;
    const std::vector<double> ts = ladder.points();
    std::vector<double> values(ts.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < ts.size(); ++i) values[i] = value_at(ts[i]);
    } else {
        std::vector<std::future<double>> futures;
        futures.reserve(ts.size());
        for (double t : ts)
            futures.push_back(std::async(std::launch::async, value_at, t));
        for (std::size_t i = 0; i < ts.size(); ++i) values[i] = futures[i].get();
    }
    for (std::size_t i = 0; i < ts.size(); ++i) curve.points.emplace_back(ts[i], values[i]);
    return curve;
}

} // namespace

DecayCurve run_profile_residual(int n, const InitialDatum& datum, const ResidualSpec& spec,
                                Region region, const TimeLadder& ladder,
                                const QuadConfig& cfg, int jobs) {
    DecayCurve curve = map_ladder(ladder, jobs, [&](double t) {
        return residual_norm(datum, n, t, spec, region, cfg);
    });
    curve.region = region_name(region);
    curve.datum_digest = datum.digest();
    return curve;
}

DecayCurve run_solution_norm(int n, const InitialDatum& datum, const TimeLadder& ladder,
                             const QuadConfig& cfg, Region region, int jobs) {
    return run_profile_residual(n, datum, ResidualSpec{}, region, ladder, cfg, jobs);
}

DecayCurve lemma51_curve(int n, int j, int k, const TimeLadder& ladder,
                         const QuadConfig& cfg, int jobs) {
    DecayCurve curve = map_ladder(ladder, jobs, [&](double t) {
        SpectralExpr expr;
        SpectralTerm term;
        term.alpha = AngularMonomial::one();
        term.radial = [j, k, t](double r) { return lowfreq_residual(j, k, t, r); };
        expr.terms.push_back(std::move(term));
        expr.phase_rate = t;
        expr.exp4_rate = 0.25 * t;
        expr.low_mag = 4.0 * (1.0 + t);
        return std::sqrt(norm_sq(expr, Region::LowBall, n, cfg));
    });
    curve.region = "low";
    std::ostringstream os;
    os << "E_" << j << " - sum_{p<=" << k << "} L_" << j << "^p";
    curve.datum_digest = os.str();
    return curve;
}

DecayCurve lemma7_curve(int n, const TimeLadder& ladder, const QuadConfig& cfg, int jobs) {
    DecayCurve curve = map_ladder(ladder, jobs,
                                  [&](double t) { return lemma7_integral(n, t, cfg); });
    curve.region = "low";
    curve.datum_digest = "e^{-t r^4} sin^2(tr)/r^2";
    return curve;
}

LowerBoundCheck check_lower_bound(const DecayCurve& curve, double coefficient,
                                  double exponent, double t_min, double slack) {
    LowerBoundCheck check;
    check.coefficient = coefficient;
    check.exponent = exponent;
    if (coefficient == 0.0) {
        check.degenerate = true;
        return check;
    }
    double margin = std::numeric_limits<double>::infinity();
    int used = 0;
    for (const auto& [t, v] : curve.points) {
        if (t < t_min) continue;
        margin = std::min(margin, v / (coefficient * std::pow(t, exponent)));
        ++used;
    }
    if (used == 0)
        throw InconsistentSpecError("check_lower_bound: window has no ladder points");
    check.margin = margin;
    check.passed = margin >= slack;
    return check;
}

bool scaled_trend_nonincreasing(const DecayCurve& curve, double weight, int window) {
    const int m = static_cast<int>(curve.points.size());
    if (m < window) return false;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = m - window; i < m; ++i) {
        const auto& [t, v] = curve.points[static_cast<std::size_t>(i)];
        const double scaled = std::pow(t, weight) * v;
        if (scaled > prev * (1.0 + 1e-9)) return false;
        prev = scaled;
    }
    return true;
}

double lowball_exp4_mass(int n, int inverse_r2_power, const QuadConfig& cfg) {
    if (n - 2 * inverse_r2_power < 1)
        throw DivergenceError("lowball_exp4_mass: integral diverges at the origin");
    const int power = n - 1 - 2 * inverse_r2_power;
    auto f = [power](double x) { return std::exp(-std::pow(x, 4)) * std::pow(x, power); };
    return sphere_area(n) * radial_integrate(f, 0.0, 1.0, 0.0, cfg);
}

namespace {

double side_mass(const InitialDatum& datum, Side side) {
    const MomentTable table = datum.taylor(side, 0);
    double mass = 0.0;
    for (const auto& e : table.degree[0]) mass += e.coeff;
    return mass;
}

std::map<int, double> first_moment_coeffs(const InitialDatum& datum, Side side) {
    const MomentTable table = datum.taylor(side, 1);
    std::map<int, double> out;
    for (const auto& e : table.degree[1]) {
        if (e.alpha.exps.size() == 1 && e.alpha.exps[0].second == 1)
            out[e.alpha.exps[0].first] += e.coeff;
    }
    return out;
}

} // namespace

double thm43_lower_coefficient(int n, const InitialDatum& datum, const QuadConfig& cfg) {
    const double p1 = std::abs(side_mass(datum, Side::U1));
    if (p1 == 0.0) return 0.0;
    if (n == 1) {
        // Explicit constants of the n = 1 two-sided estimate:
        // (1/(4e)) (2 - 2/pi) t for the squared norm.
        return p1 * std::sqrt((2.0 - 2.0 / M_PI) / (4.0 * M_E));
    }
    if (n == 2) return 0.0;  // log law; handled by model comparison, not margins
    return p1 * std::sqrt(0.25 * lowball_exp4_mass(n, 1, cfg));
}

double thm44_lower_coefficient(int n, const InitialDatum& datum, const QuadConfig& cfg) {
    const double p0 = side_mass(datum, Side::U0);
    double moment_sq = p0 * p0;
    for (const auto& [axis, c] : first_moment_coeffs(datum, Side::U1)) moment_sq += c * c;
    if (moment_sq == 0.0) return 0.0;
    return std::sqrt(moment_sq * lowball_exp4_mass(n, 0, cfg) / (4.0 * n));
}

double thm45_lower_coefficient(int n, const InitialDatum& datum, const QuadConfig& cfg) {
    const Thm45Constants c = thm45_constants(n, cfg);
    const MomentTable table = datum.taylor(Side::U1, 2);
    // Degree-2 coefficients: iso part adds to every xi_j^2.
    double iso = 0.0;
    std::map<int, double> diag;
    std::map<std::pair<int, int>, double> cross;
    for (const auto& e : table.degree[2]) {
        if (e.r2_power == 1) {
            iso += e.coeff;
        } else if (e.alpha.exps.size() == 1 && e.alpha.exps[0].second == 2) {
            diag[e.alpha.exps[0].first] += e.coeff;
        } else if (e.alpha.exps.size() == 2) {
            cross[{e.alpha.exps[0].first, e.alpha.exps[1].first}] += e.coeff;
        }
    }
    // m[u1]^2 = -(1/2) sum Q_j xi_j^2 - sum_{j<k} R_jk xi_j xi_k identifies
    // Q_j = -2 (iso + diag_j), R_jk = -cross_jk.
    std::vector<double> q(static_cast<std::size_t>(n), -2.0 * iso);
    for (const auto& [axis, v] : diag) q[static_cast<std::size_t>(axis)] += -2.0 * v;
    double sum_q_sq = 0.0;
    for (double v : q) sum_q_sq += v * v;
    double sum_q_pairs = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            sum_q_pairs += q[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(k)];
    double sum_r_sq = 0.0;
    for (const auto& [jk, v] : cross) sum_r_sq += v * v;
    double sum_s_sq = 0.0;
    for (const auto& [axis, v] : first_moment_coeffs(datum, Side::U0)) sum_s_sq += v * v;

    const double inside = c.c1 * sum_q_sq + c.c2 * sum_q_pairs + 2.0 * c.c2 * sum_r_sq +
                          c.c3 * sum_s_sq;
    return inside > 0.0 ? std::sqrt(inside) : 0.0;
}

CaseEntry classify_case(int n, double l) {
    if (n < 1 || l < 0.0) throw InconsistentSpecError("classify_case: need n >= 1, l >= 0");
    // Exact boundary comparisons on 4l against integers.
    const double fl = 4.0 * l;
    CaseEntry entry;
    if (n >= 6 && fl == static_cast<double>(n - 6)) {
        entry.label = "ii";
        entry.subtract_A10 = true;
        entry.subtract_C0 = true;
        entry.exponent = -n / 8.0;
        return entry;
    }
    if (fl < static_cast<double>(n - 6)) {
        entry.label = "i";
        entry.subtract_C0 = true;
        entry.exponent = (n >= 18 && fl <= static_cast<double>(n - 18))
                             ? -(l + 4.0) / 2.0
                             : -n / 8.0 + 0.25;
        return entry;
    }
    entry.label = "iii";
    entry.subtract_A10 = true;
    if (n >= 4 && fl <= static_cast<double>(n - 4))
        entry.exponent = -(l + 1.0) / 2.0;
    else
        entry.exponent = -n / 8.0;
    return entry;
}

NormLaw corollary41_law(int n, double l) {
    NormLaw law;
    if (n >= 6 && 4.0 * l <= static_cast<double>(n - 6)) {
        law.kind = NormLaw::Power;
        law.exponent = -(l + 1.0) / 2.0;
        return law;
    }
    if (n == 1) {
        law.kind = NormLaw::SqrtT;
        law.exponent = 0.5;
    } else if (n == 2) {
        law.kind = NormLaw::SqrtLogT;
    } else {
        law.kind = NormLaw::Power;
        law.exponent = -n / 8.0 + 0.25;
    }
    return law;
}

SweepResult threshold_sweep_l(int n, const std::vector<double>& l_values,
                              const TimeLadder& ladder, const QuadConfig& cfg, double eps,
                              int jobs) {
    SweepResult result;
    result.threshold = n / 4.0 - 1.5;
    std::ostringstream report;
    report << "l-sweep at n = " << n << ", threshold l* = " << result.threshold << "\n";
    std::string prev_regime;
    for (double l : l_values) {
        const InitialDatum datum = make_threshold_datum(n, l, eps);
        const DecayCurve curve =
            run_solution_norm(n, datum, ladder, cfg, Region::Full, jobs);
        const NormLaw law = corollary41_law(n, l);
        SweepRow row;
        row.param = l;
        if (law.kind == NormLaw::SqrtLogT) {
            const SlopeFit fit = fit_decay(curve, FitModel::Log, fit_t_min(ladder));
            row.measured_slope = fit.slope;
            row.expected_slope = 0.0;
            row.regime = "log-law";
        } else {
            const SlopeFit fit = fit_decay(curve, FitModel::Power, fit_t_min(ladder));
            row.measured_slope = fit.slope;
            row.expected_slope = law.exponent;
            row.regime = (n >= 6 && 4.0 * l < static_cast<double>(n - 6))
                             ? "regularity-limited"
                             : "diffusion-wave";
        }
        report << "  l = " << l << ": slope " << row.measured_slope << " (expected "
               << row.expected_slope << ", " << row.regime << ")\n";
        if (!prev_regime.empty() && prev_regime != row.regime) {
            result.switch_detected = true;
            report << "  regime switch across l* = " << result.threshold << "\n";
        }
        prev_regime = row.regime;
        result.rows.push_back(row);
    }
    result.report = report.str();
    return result;
}

SweepResult threshold_sweep_k(int n, const std::vector<int>& k_values,
                              const TimeLadder& ladder, const QuadConfig& cfg, double eps,
                              int jobs) {
    SweepResult result;
    result.threshold = (n - 18) / 12.0;
    std::ostringstream report;
    report << "k-sweep at n = " << n << ", threshold k* = (n-18)/12 = " << result.threshold
           << "\n";
    const InitialDatum datum = make_threshold_datum(n, 0.0, eps);
    const double diffusive = -n / 8.0 + 0.25;
    std::string prev_regime;
    for (int k : k_values) {
        ResidualSpec spec;
        spec.subtract_C = k;
        const DecayCurve curve =
            run_profile_residual(n, datum, spec, Region::Full, ladder, cfg, jobs);
        const SlopeFit fit = fit_decay(curve, FitModel::Power, fit_t_min(ladder));
        SweepRow row;
        row.param = k;
        row.measured_slope = fit.slope;
        const double high_limited = -(3.0 * k + 4.0) / 2.0;
        row.expected_slope = std::max(high_limited, diffusive);
        row.regime = high_limited > diffusive ? "non-diffusive-limited" : "diffusive";
        report << "  k = " << k << ": slope " << row.measured_slope << " (expected "
               << row.expected_slope << ", " << row.regime << ")\n";
        if (!prev_regime.empty() && prev_regime != row.regime) {
            result.switch_detected = true;
            report << "  saturation at k >= k*\n";
        }
        prev_regime = row.regime;
        result.rows.push_back(row);
    }
    result.report = report.str();
    return result;
}

} // namespace sdlab
