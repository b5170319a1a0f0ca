#include "sdlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <vector>

#include "sdlab/errors.hpp"
#include "sdlab/kernels.hpp"

namespace sdlab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct GlRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Nodes by Newton iteration on Legendre polynomials.
GlRule make_gl_rule(int m) {
    GlRule rule;
    rule.x.resize(m);
    rule.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.w[i] = w;
        rule.w[m - 1 - i] = w;
    }
    return rule;
}

const GlRule& gl_rule(int m) {
    static std::mutex mu;
    static std::map<int, GlRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, make_gl_rule(m)).first;
    return it->second;
}

double gamma_half(int k) {
    // Gamma(k/2) for k >= 1.
    double g = (k % 2 == 0) ? 1.0 : std::sqrt(M_PI);
    for (double z = (k % 2 == 0) ? 1.0 : 0.5; z < 0.5 * k - 0.25; z += 1.0) g *= z;
    return g;
}

struct PairEntry {
    int i, j;
    double weight;   // (2 - delta_ij) * sphere moment
    int degree;      // |alpha_i| + |alpha_j|
};

struct Integrand {
    const SpectralExpr* expr;
    const RadialWeight* weight;
    std::vector<PairEntry> pairs;
    int n;
    int max_degree = 0;

    double operator()(double r) const {
        thread_local std::vector<double> vals;
        vals.resize(expr->terms.size());
        for (std::size_t i = 0; i < expr->terms.size(); ++i)
            vals[i] = expr->terms[i].radial(r);
        double f = 0.0;
        for (const auto& p : pairs) {
            double term = p.weight * vals[p.i] * vals[p.j];
            for (int d = 0; d < p.degree; ++d) term *= r;
            f += term;
        }
        f *= (*weight)(r);
        // r^{n-1} measure
        double rn = 1.0;
        for (int d = 0; d < n - 1; ++d) rn *= r;
        return f * rn;
    }
};

double integrate_edges(const Integrand& F, const std::vector<double>& edges,
                       const QuadConfig& cfg, long* panel_count) {
    const GlRule& rule = gl_rule(cfg.gl_order);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int q = 0; q < cfg.gl_order; ++q) s += rule.w[q] * F(mid + half * rule.x[q]);
        sum += s * half;
    }
    if (panel_count) *panel_count += static_cast<long>(edges.size()) - 1;
    return sum;
}

std::vector<double> uniform_edges(double a, double b, double width, long max_panels) {
    const long count = std::max<long>(1, static_cast<long>(std::ceil((b - a) / width)));
    if (count > max_panels)
        throw BudgetExceededError("quadrature: panel budget exceeded on [" +
                                  std::to_string(a) + ", " + std::to_string(b) + "]");
    std::vector<double> e(static_cast<std::size_t>(count) + 1);
    for (long k = 0; k <= count; ++k)
        e[static_cast<std::size_t>(k)] = a + (b - a) * static_cast<double>(k) / count;
    return e;
}

// Oscillation phase of the trig regime, t-free part: q(r)/2 with
// q = sqrt(4r^2 - r^8); monotone up on [0,1], down on [1, cbrt2].
double half_q(double r) {
    const double d = 4.0 * r * r - std::pow(r, 8);
    return d > 0.0 ? 0.5 * std::sqrt(d) : 0.0;
}

double half_s(double r) {
    const double d = discriminant(r);
    return d > 0.0 ? 0.5 * std::sqrt(d) : 0.0;
}

// Solve f(r) = target by bisection on [lo, hi]; f monotone.
template <class F>
double bisect(F f, double lo, double hi, double target, bool increasing) {
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool below = f(mid) < target;
        if (below == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void append_phase_edges(std::vector<double>& edges, double rate, double cap,
                        double lo, double hi, bool increasing,
                        const std::function<double(double)>& phase) {
    const double plo = rate * phase(lo), phi = rate * phase(hi);
    const double pmin = std::min(plo, phi), pmax = std::max(plo, phi);
    for (double p = std::ceil(pmin / cap) * cap; p < pmax; p += cap) {
        edges.push_back(bisect([&](double r) { return rate * phase(r); }, lo, hi, p,
                               increasing));
    }
}

std::vector<double> merge_edges(std::vector<double> e, double lo, double hi) {
    e.push_back(lo);
    e.push_back(hi);
    std::sort(e.begin(), e.end());
    std::vector<double> out;
    for (double x : e) {
        if (x < lo - 1e-15 || x > hi + 1e-15) continue;
        if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
    }
    if (out.size() < 2) out = {lo, hi};
    return out;
}

double low_ball_piece(const Integrand& F, const SpectralExpr& expr,
                      const QuadConfig& cfg, long* panels) {
    double r_hi = 1.0;
    if (expr.exp4_rate > 0.0) {
        const double margin =
            -std::log(cfg.tail_tol) + 2.0 * std::max(0.0, std::log(expr.low_mag)) + 46.0;
        r_hi = std::min(1.0, std::pow(0.5 * margin / expr.exp4_rate, 0.25));
    }
    const double width =
        expr.phase_rate > 0.0 ? std::min(1.0 / 16.0, cfg.panel_phase_cap / expr.phase_rate)
                              : 1.0 / 16.0;
    return integrate_edges(F, uniform_edges(0.0, r_hi, width, cfg.max_panels), cfg,
                           panels);
}

double mid_piece(const Integrand& F, const SpectralExpr& expr, int n,
                 const QuadConfig& cfg, double scale_hint, long* panels) {
    const double lo = 1.0, hi = kSqrt2;
    // Annulus measure, used for the negligibility test.
    const double measure = sphere_area(n) / n * (std::pow(kSqrt2, n) - 1.0);
    if (expr.mid_bound >= 0.0) {
        const double bound = expr.mid_bound * expr.mid_bound * measure;
        if (bound <= std::max(cfg.tail_tol * scale_hint, 1e-60))
            return integrate_edges(F, uniform_edges(lo, hi, (hi - lo) / 24.0, cfg.max_panels),
                                   cfg, panels);
    }
    std::vector<double> edges;
    if (expr.phase_rate > 0.0) {
        const double cap = cfg.panel_phase_cap;
        const double w = cap / expr.phase_rate;
        for (double r = lo; r < hi; r += w) edges.push_back(r);
        // The phase t*q(r)/2 steepens without bound at the root collision;
        // grade panels in phase there, on both sides.
        append_phase_edges(edges, expr.phase_rate, cap, lo, kBranchRadius, false, half_q);
        append_phase_edges(edges, expr.phase_rate, cap, kBranchRadius, hi, true, half_s);
        if (static_cast<long>(edges.size()) > cfg.max_panels)
            throw BudgetExceededError("quadrature: mid annulus panel budget exceeded");
    }
    for (int k = 0; k <= 24; ++k) edges.push_back(lo + (hi - lo) * k / 24.0);
    return integrate_edges(F, merge_edges(std::move(edges), lo, hi), cfg, panels);
}

struct TailPlan {
    double r_trunc = 0.0;
    double lead_exponent = 0.0;  // most slowly decaying pair exponent (incl. weight)
    bool closure = false;        // analytic power-law tail closure applies
};

TailPlan plan_high_tail(const SpectralExpr& expr, const std::vector<PairEntry>& pairs,
                        int n, const RadialWeight& weight) {
    TailPlan plan;
    const double wexp = weight.c_pow != 0.0 ? weight.exponent : 0.0;
    double lead = -std::numeric_limits<double>::infinity();
    double sigma_min = std::numeric_limits<double>::infinity();
    bool any_power = false;
    for (const auto& p : pairs) {
        const auto& ti = expr.terms[static_cast<std::size_t>(p.i)].tail;
        const auto& tj = expr.terms[static_cast<std::size_t>(p.j)].tail;
        if (ti.mag == 0.0 || tj.mag == 0.0) continue;
        const double sigma = ti.gauss + tj.gauss;
        const double a = n - 1 + p.degree + wexp - ti.power - tj.power;
        if (sigma > 0.0) {
            sigma_min = std::min(sigma_min, sigma);
            continue;
        }
        any_power = true;
        if (a >= -1.0 - 1e-9)
            throw DivergenceError(
                "norm_sq: high-shell tail exponent " + std::to_string(a) +
                " is not integrable (regularity hypothesis violated)");
        lead = std::max(lead, a);
    }
    double r = 100.0;
    if (expr.exp2t_rate > 0.0) r = std::max(r, std::sqrt(1000.0 * expr.exp2t_rate));
    if (std::isfinite(sigma_min)) r = std::max(r, std::sqrt(130.0 / sigma_min));
    plan.r_trunc = r;
    plan.closure = any_power;
    plan.lead_exponent = any_power ? lead : -4.0;
    return plan;
}

double high_piece(const Integrand& F, const SpectralExpr& expr, int n,
                  const QuadConfig& cfg, const RadialWeight& weight,
                  const std::vector<PairEntry>& pairs, long* panels,
                  double* tail_correction) {
    const double lo = kSqrt2;
    const TailPlan plan = plan_high_tail(expr, pairs, n, weight);
    const double R = plan.r_trunc;

    std::vector<double> edges;
    edges.push_back(lo);
    // Dead zone: every term carries e^{-c t/r^2}, identically negligible
    // until r ~ sqrt(t/110); coarse geometric panels there.
    double r_live = lo;
    if (expr.exp2t_rate > 0.0)
        r_live = std::min(std::max(lo, std::sqrt(expr.exp2t_rate / 110.0)), R);
    for (double r = lo; r < r_live; r *= 2.0) edges.push_back(r);
    // Live zone: bound both the geometric scale and the e^{-t/r^2} rate.
    double r = r_live;
    while (r < R) {
        double w = r / 5.0;
        if (expr.exp2t_rate > 0.0) w = std::min(w, 4.0 * r * r * r / expr.exp2t_rate);
        r += w;
        edges.push_back(std::min(r, R));
        if (static_cast<long>(edges.size()) > cfg.max_panels)
            throw BudgetExceededError("quadrature: high shell panel budget exceeded");
    }
    double value = integrate_edges(F, merge_edges(std::move(edges), lo, R), cfg, panels);

    if (plan.closure) {
        // Fit F ~ c1 r^a + c2 r^{a-2} + c3 r^{a-4} at the cut and integrate
        // the fitted tail analytically.
        const double a = plan.lead_exponent;
        const double rho[3] = {1.0, 1.35, 1.8225};
        double rhs[3];
        for (int m = 0; m < 3; ++m) rhs[m] = F(R * rho[m]);
        double A[3][3];
        for (int m = 0; m < 3; ++m)
            for (int k = 0; k < 3; ++k) A[m][k] = std::pow(rho[m], a - 2.0 * k);
        // Gaussian elimination, 3x3.
        for (int c = 0; c < 3; ++c) {
            int piv = c;
            for (int m = c + 1; m < 3; ++m)
                if (std::abs(A[m][c]) > std::abs(A[piv][c])) piv = m;
            std::swap(A[c], A[piv]);
            std::swap(rhs[c], rhs[piv]);
            if (A[c][c] == 0.0) return value;
            for (int m = c + 1; m < 3; ++m) {
                const double f = A[m][c] / A[c][c];
                for (int k = c; k < 3; ++k) A[m][k] -= f * A[c][k];
                rhs[m] -= f * rhs[c];
            }
        }
        double y[3];
        for (int m = 2; m >= 0; --m) {
            double s = rhs[m];
            for (int k = m + 1; k < 3; ++k) s -= A[m][k] * y[k];
            y[m] = s / A[m][m];
        }
        double tail = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double ak = a - 2.0 * k;
            tail += y[k] * R / (-ak - 1.0);
        }
        if (std::isfinite(tail)) {
            value += tail;
            if (tail_correction) *tail_correction += tail;
        }
    }
    return value;
}

} // namespace

double sphere_moment(const AngularMonomial& alpha, int n) {
    int total = 0;
    int listed = 0;
    double num = 1.0;
    for (auto& [axis, p] : alpha.exps) {
        if (axis < 0 || axis >= n)
            throw InconsistentSpecError("sphere_moment: axis out of range");
        if (p == 0) continue;
        if (p % 2 != 0) return 0.0;
        total += p;
        ++listed;
        num *= gamma_half(p + 1);
    }
    // Axes with exponent zero contribute Gamma(1/2) each.
    num *= std::pow(gamma_half(1), n - listed);
    return 2.0 * num / gamma_half(n + total);
}

double sphere_area(int n) { return sphere_moment(AngularMonomial::one(), n); }

NormBreakdown norm_sq_detail(const SpectralExpr& expr, Region region, int n,
                             const QuadConfig& cfg, const RadialWeight& weight) {
    if (n < 1) throw InconsistentSpecError("norm_sq: dimension must be >= 1");
    NormBreakdown out;
    Integrand F;
    F.expr = &expr;
    F.weight = &weight;
    F.n = n;
    const int m = static_cast<int>(expr.terms.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const AngularMonomial prod = expr.terms[static_cast<std::size_t>(i)].alpha *
                                         expr.terms[static_cast<std::size_t>(j)].alpha;
            const double s = sphere_moment(prod, n);
            if (s == 0.0) {
                ++out.pairs_skipped_odd;
                continue;
            }
            PairEntry p;
            p.i = i;
            p.j = j;
            p.degree = prod.degree();
            p.weight = (i == j ? 1.0 : 2.0) * s;
            F.pairs.push_back(p);
            ++out.pairs_used;
        }
    }
    if (F.pairs.empty()) return out;

    switch (region) {
    case Region::LowBall:
        out.value = low_ball_piece(F, expr, cfg, &out.panels);
        break;
    case Region::MidAnnulus:
        out.value = mid_piece(F, expr, n, cfg, 0.0, &out.panels);
        break;
    case Region::HighShell:
        out.value = high_piece(F, expr, n, cfg, weight, F.pairs, &out.panels,
                               &out.tail_correction);
        break;
    case Region::Full: {
        const double low = low_ball_piece(F, expr, cfg, &out.panels);
        const double high = high_piece(F, expr, n, cfg, weight, F.pairs, &out.panels,
                                       &out.tail_correction);
        const double mid = mid_piece(F, expr, n, cfg, low + high, &out.panels);
        out.value = low + high + mid;
        break;
    }
    }
    return out;
}

double norm_sq(const SpectralExpr& expr, Region region, int n, const QuadConfig& cfg,
               const RadialWeight& weight) {
    return norm_sq_detail(expr, region, n, cfg, weight).value;
}

double radial_integrate(const std::function<double(double)>& f, double a, double b,
                        double phase_rate, const QuadConfig& cfg) {
    if (!(b > a)) return 0.0;
    const double width =
        phase_rate > 0.0 ? std::min((b - a) / 8.0, cfg.panel_phase_cap / phase_rate)
                         : (b - a) / 8.0;
    const GlRule& rule = gl_rule(cfg.gl_order);
    const auto edges = uniform_edges(a, b, width, cfg.max_panels);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        double s = 0.0;
        for (int q = 0; q < cfg.gl_order; ++q) s += rule.w[q] * f(mid + half * rule.x[q]);
        sum += s * half;
    }
    return sum;
}

double lemma7_integral(int n, double t, const QuadConfig& cfg) {
    SpectralExpr expr;
    SpectralTerm term;
    term.alpha = AngularMonomial::one();
    term.radial = [t](double r) {
        return std::exp(-0.5 * t * std::pow(r, 4)) * (r > 1e-12 ? std::sin(t * r) / r : t);
    };
    expr.terms.push_back(std::move(term));
    expr.phase_rate = t;
    expr.exp4_rate = 0.5 * t;
    expr.low_mag = std::max(1.0, t);
    return norm_sq(expr, Region::LowBall, n, cfg);
}

double lemma7_integral_split(int n, double t, const QuadConfig& cfg) {
    const double area = sphere_area(n);
    const double r0 = std::min(1.0, 1.0 / std::max(t, 1.0));
    auto direct = [n, t](double r) {
        const double s = std::sin(t * r) / r;
        return std::exp(-t * std::pow(r, 4)) * s * s * std::pow(r, n - 1);
    };
    double value = radial_integrate(direct, 0.0, r0, t, cfg);
    if (r0 < 1.0) {
        auto smooth = [n, t](double r) {
            return 0.5 * std::exp(-t * std::pow(r, 4)) * std::pow(r, n - 3);
        };
        auto oscillatory = [n, t](double r) {
            return -0.5 * std::exp(-t * std::pow(r, 4)) * std::cos(2.0 * t * r) *
                   std::pow(r, n - 3);
        };
        // The smooth piece still varies on the e^{-t r^4} scale, so keep
        // the same panel density as the oscillatory one.
        value += radial_integrate(smooth, r0, 1.0, 2.0 * t, cfg);
        value += radial_integrate(oscillatory, r0, 1.0, 2.0 * t, cfg);
    }
    return area * value;
}

Thm45Constants thm45_constants(int n, const QuadConfig& cfg) {
    if (n < 1) throw InconsistentSpecError("thm45_constants: n must be >= 1");
    auto radial = [n](double r) { return std::exp(-std::pow(r, 4)) * std::pow(r, n + 1); };
    const double I = radial_integrate(radial, 0.0, 1.0, 0.0, cfg);
    Thm45Constants c;
    c.c1 = I * sphere_moment(AngularMonomial::axis(0, 4), n) / 32.0;
    c.c2 = n >= 2 ? I * sphere_moment(AngularMonomial::axis(0, 2) * AngularMonomial::axis(1, 2), n) / 16.0
                  : 0.0;
    c.c3 = I * sphere_area(n) / (8.0 * n);
    return c;
}

Thm45Constants thm45_constants_direct(int n, const QuadConfig& cfg) {
    if (n < 1 || n > 3)
        throw InconsistentSpecError("thm45_constants_direct: oracle limited to n <= 3");
    auto radial = [n](double r) { return std::exp(-std::pow(r, 4)) * std::pow(r, n + 1); };
    const double I = radial_integrate(radial, 0.0, 1.0, 0.0, cfg);

    double s40 = 0.0, s22 = 0.0, s00 = 0.0;
    if (n == 1) {
        s40 = 2.0;
        s22 = 0.0;
        s00 = 2.0;
    } else if (n == 2) {
        const int M = 256;
        for (int k = 0; k < M; ++k) {
            const double th = 2.0 * M_PI * (k + 0.5) / M;
            const double c = std::cos(th), s = std::sin(th);
            s40 += std::pow(c, 4);
            s22 += c * c * s * s;
            s00 += 1.0;
        }
        const double h = 2.0 * M_PI / M;
        s40 *= h;
        s22 *= h;
        s00 *= h;
    } else {
        // Product rule: Gauss-Legendre in cos(phi), trapezoid in theta.
        const GlRule& rule = gl_rule(32);
        const int M = 128;
        for (int a = 0; a < 32; ++a) {
            const double mu = rule.x[a];  // cos(phi)
            const double smu = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int k = 0; k < M; ++k) {
                const double th = 2.0 * M_PI * (k + 0.5) / M;
                const double x = smu * std::cos(th), y = smu * std::sin(th);
                const double w = rule.w[a] * (2.0 * M_PI / M);
                s40 += w * std::pow(x, 4);
                s22 += w * x * x * y * y;
                s00 += w;
            }
        }
    }
    Thm45Constants c;
    c.c1 = I * s40 / 32.0;
    c.c2 = n >= 2 ? I * s22 / 16.0 : 0.0;
    c.c3 = I * s00 / (8.0 * n);
    (void)cfg;
    return c;
}

McEstimate mc_crosscheck(const SpectralExpr& expr, Region region, int n,
                         std::uint64_t samples, std::uint64_t seed, double full_radius,
                         const RadialWeight& weight) {
    if (samples < 2) throw InconsistentSpecError("mc_crosscheck: need samples >= 2");
    double r_lo = 0.0, r_hi = 1.0;
    switch (region) {
    case Region::LowBall: r_lo = 0.0; r_hi = 1.0; break;
    case Region::MidAnnulus: r_lo = 1.0; r_hi = kSqrt2; break;
    case Region::HighShell: r_lo = kSqrt2; r_hi = full_radius; break;
    case Region::Full: r_lo = 0.0; r_hi = full_radius; break;
    }
    const double vol =
        sphere_area(n) / n * (std::pow(r_hi, n) - std::pow(r_lo, n));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> xi(static_cast<std::size_t>(n));
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t s = 1; s <= samples; ++s) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            xi[static_cast<std::size_t>(i)] = gauss(rng);
            norm2 += xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(i)];
        }
        const double scale = 1.0 / std::sqrt(std::max(norm2, 1e-300));
        const double u = unif(rng);
        const double r = std::pow(std::pow(r_lo, n) + u * (std::pow(r_hi, n) - std::pow(r_lo, n)),
                                  1.0 / n);
        for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] *= scale * r;
        const double v = expr.eval(xi.data(), r);
        const double f = v * v * weight(r);
        const double delta = f - mean;
        mean += delta / static_cast<double>(s);
        m2 += delta * (f - mean);
    }
    const double var = m2 / static_cast<double>(samples - 1);
    McEstimate est;
    est.value = mean * vol;
    est.std_error = std::sqrt(var / static_cast<double>(samples)) * vol;
    est.samples = samples;
    return est;
}

} // namespace sdlab
