#include "sdlab/profiles.hpp"

#include <cmath>

#include "sdlab/errors.hpp"
#include "sdlab/kernels.hpp"

namespace sdlab {

namespace {

constexpr double kExpFloor = 745.0;  // exp(-x) underflows past this

// Jet of L_j(t, xi, a) at a = 0.
Jet lowfreq_L_jet(int j, std::size_t order, double t, double r) {
    const Jet a = Jet::variable(order);
    const Jet root = sqrt(Jet(order, 4.0) - a * a);
    const Jet phi = a * recip(root * 2.0 + 4.0);
    const double r4 = r * r * r * r;
    Jet theta = phi * (-t * r4);
    theta += t * r;
    if (j == 0) return cos(theta);
    return sin(theta) * recip(root * (0.5 * r));
}

// Jet of H_j(t, xi, b) at b = 0.
Jet highfreq_H_jet(int j, std::size_t order, double t, double r) {
    const double tau = t / (r * r);
    const Jet b = Jet::variable(order);
    const Jet root = sqrt(Jet(order, 1.0) - b * 4.0);
    const Jet h = recip(root + 1.0) * 2.0;
    const Jet e = exp(h * (-tau));
    if (j == 0) return e * 0.5;
    const double r4 = r * r * r * r;
    return e * recip(root) * (1.0 / r4);
}

} // namespace

Jet phi_taylor(std::size_t order) {
    if (order > 8) throw InconsistentSpecError("phi_taylor: order capped at 8");
    const Jet a = Jet::variable(order);
    const Jet root = sqrt(Jet(order, 4.0) - a * a);
    return a * recip(root * 2.0 + 4.0);
}

Jet catalan_h_coeffs(std::size_t order) {
    if (order > 12) throw InconsistentSpecError("catalan_h_coeffs: order capped at 12");
    const Jet b = Jet::variable(order);
    const Jet root = sqrt(Jet(order, 1.0) - b * 4.0);
    return recip(root + 1.0) * 2.0;
}

std::vector<double> lowfreq_family(int j, int kmax, double t, double r) {
    if (j != 0 && j != 1) throw InconsistentSpecError("lowfreq: j must be 0 or 1");
    if (kmax < 0 || kmax > 4) throw InconsistentSpecError("lowfreq: order capped at 4");
    if (t < 0.0 || r < 0.0) throw InconsistentSpecError("lowfreq: t, r must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (r < 1e-12) {
        out[0] = (j == 0) ? 1.0 : t;  // sinc limit at the origin
        return out;
    }
    const double r4 = r * r * r * r;
    if (0.5 * t * r4 > kExpFloor) return out;
    const double env = std::exp(-0.5 * t * r4);
    const Jet L = lowfreq_L_jet(j, static_cast<std::size_t>(kmax), t, r);
    double r3k = 1.0;
    const double r3 = r * r * r;
    for (int k = 0; k <= kmax; ++k) {
        out[static_cast<std::size_t>(k)] = env * L.coeff(static_cast<std::size_t>(k)) * r3k;
        r3k *= r3;
    }
    return out;
}

double lowfreq_term(int j, int k, double t, double r) {
    return lowfreq_family(j, k, t, r)[static_cast<std::size_t>(k)];
}

std::vector<double> highfreq_family(int j, int kmax, double t, double r) {
    if (j != 0 && j != 1) throw InconsistentSpecError("highfreq: j must be 0 or 1");
    if (kmax < 0 || kmax > 4) throw InconsistentSpecError("highfreq: order capped at 4");
    if (!(r > 0.0)) throw InconsistentSpecError("highfreq: r must be > 0");
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
    const double tau = t / (r * r);
    if (tau > kExpFloor) return out;
    const Jet H = highfreq_H_jet(j, static_cast<std::size_t>(kmax), t, r);
    const double r6 = std::pow(r, 6);
    double scale = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        out[static_cast<std::size_t>(k)] = H.coeff(static_cast<std::size_t>(k)) * scale;
        scale /= r6;
    }
    return out;
}

double highfreq_term(int j, int k, double t, double r) {
    return highfreq_family(j, k, t, r)[static_cast<std::size_t>(k)];
}

double lowfreq_residual(int j, int k, double t, double r) {
    if (r > 1.0 + 1e-12)
        throw InconsistentSpecError("lowfreq_residual: defined on the low ball only");
    if (r < 1e-12) return 0.0;  // both sides hit the same limit
    const double r4 = r * r * r * r;
    if (0.5 * t * r4 > kExpFloor) return 0.0;
    const double env = std::exp(-0.5 * t * r4);

    // Exact L_j at a* = r^3 through the trig form of the kernels.
    const double q = std::sqrt(4.0 * r * r - std::pow(r, 8));
    const double x = 0.5 * t * q;
    double exact;
    if (j == 0) {
        exact = std::cos(x);
    } else {
        exact = (std::abs(x) < 1e-8) ? t * (1.0 - x * x / 6.0) : std::sin(x) / (0.5 * q);
    }

    const Jet L = lowfreq_L_jet(j, static_cast<std::size_t>(k), t, r);
    double partial = 0.0;
    double a_pow = 1.0;
    const double a_star = r * r * r;
    for (int p = 0; p <= k; ++p) {
        partial += L.coeff(static_cast<std::size_t>(p)) * a_pow;
        a_pow *= a_star;
    }
    return env * (exact - partial);
}

double highfreq_remainder(int j, int k, double t, double r) {
    constexpr double kSqrt2 = 1.4142135623730951;
    if (r < kSqrt2 - 1e-12)
        throw InconsistentSpecError("highfreq_remainder: defined on the high shell only");
    const double tau = t / (r * r);
    const double b_star = std::pow(r, -6);
    if (k < 0) {
        // Full H_j(t, xi, b*): closed form.
        const double root = std::sqrt(1.0 - 4.0 * b_star);
        const double h = 2.0 / (1.0 + root);
        if (tau * h > kExpFloor) return 0.0;
        const double e = std::exp(-tau * h);
        return (j == 0) ? 0.5 * e : e / (std::pow(r, 4) * root);
    }
    if (tau > kExpFloor) return 0.0;
    // Convergent coefficient tail: ratio 4 b* <= 1/2 on the shell.
    const double ratio = 4.0 * b_star;
    const int extra =
        static_cast<int>(std::ceil(42.0 / std::max(0.05, -std::log(ratio)))) + 8;
    const std::size_t order = static_cast<std::size_t>(k + std::min(extra, 120));
    const Jet H = highfreq_H_jet(j, order, t, r);
    double sum = 0.0;
    double b_pow = std::pow(b_star, k + 1);
    for (std::size_t p = static_cast<std::size_t>(k) + 1; p <= order; ++p) {
        sum += H.coeff(p) * b_pow;
        b_pow *= b_star;
    }
    return sum;
}

namespace {

// Bound sup_y y^p e^{-y/2}, used for high-shell tail magnitudes of the
// script-H multipliers.
double poly_env_bound(int p) {
    return p == 0 ? 1.0 : std::pow(2.0 * p / M_E, p);
}

ProfileTerm moment_profile_term(int j, int p, const MomentEntry& entry) {
    ProfileTerm term;
    term.alpha = entry.alpha;
    const double coeff = entry.coeff;
    const int r2p = entry.r2_power;
    term.radial = [j, p, coeff, r2p](double t, double r) {
        double v = lowfreq_term(j, p, t, r) * coeff;
        for (int m = 0; m < r2p; ++m) v *= r * r;
        return v;
    };
    // e^{-t r^4/2} kills the profile on the shell; keep a generous power.
    term.tail.mag = std::abs(coeff) * (1.0 + poly_env_bound(p));
    term.tail.power = 0.0;
    term.tail.gauss = 0.25;  // e^{-t r^4/2} <= e^{-r^2/4} on r >= sqrt2, t >= 1
    return term;
}

} // namespace

ProfileStack build_B(int j, int k, const InitialDatum& datum) {
    if (k > 2) throw InconsistentSpecError("build_B: moment table caps k at 2");
    const MomentTable moments = datum.taylor(j == 0 ? Side::U0 : Side::U1, k);
    ProfileStack stack;
    stack.region = ProfileRegion::Low;
    for (int p = 0; 3 * p <= k; ++p) {
        for (const auto& entry : moments.degree[k - 3 * p]) {
            if (entry.coeff == 0.0) continue;
            stack.terms.push_back(moment_profile_term(j, p, entry));
        }
    }
    return stack;
}

ProfileStack build_A(int j, int k, const InitialDatum& datum) {
    if (k > 2) throw InconsistentSpecError("build_A: moment table caps k at 2");
    ProfileStack stack;
    stack.region = ProfileRegion::Low;
    for (int q = 0; q <= k; ++q) {
        ProfileStack b = build_B(j, q, datum);
        for (auto& term : b.terms) stack.terms.push_back(std::move(term));
    }
    return stack;
}

ProfileStack build_C(int k, const InitialDatum& datum) {
    if (k > 8) throw InconsistentSpecError("build_C: order capped at 8");
    ProfileStack stack;
    stack.region = ProfileRegion::Full;
    for (int p = 0; 2 * p <= k; ++p) {
        for (const auto& comp : datum.u0) {
            ProfileTerm term;
            term.alpha = comp.beta;
            const RadialEnvelope env = comp.envelope;
            const double amp = comp.amplitude;
            const int order = p;
            term.radial = [order, env, amp](double t, double r) {
                if (r < 1e-8) return 0.0;
                const double h0 = highfreq_term(0, order, t, r);
                const double h1 = highfreq_term(1, order, t, r);
                const double r4 = r * r * r * r;
                return (h0 + 0.5 * r4 * h1) * amp * envelope_eval(env, r);
            };
            term.tail = envelope_tail(env);
            term.tail.mag = std::abs(amp) * 2.0 * (1.0 + poly_env_bound(p));
            term.tail.power += 6.0 * p;
            stack.terms.push_back(std::move(term));
        }
    }
    for (int p = 0; 2 * p + 1 <= k; ++p) {
        for (const auto& comp : datum.u1) {
            ProfileTerm term;
            term.alpha = comp.beta;
            const RadialEnvelope env = comp.envelope;
            const double amp = comp.amplitude;
            const int order = p;
            term.radial = [order, env, amp](double t, double r) {
                if (r < 1e-8) return 0.0;
                return highfreq_term(1, order, t, r) * amp * envelope_eval(env, r);
            };
            term.tail = envelope_tail(env);
            term.tail.mag = std::abs(amp) * 2.0 * (1.0 + poly_env_bound(p));
            term.tail.power += 4.0 + 6.0 * p;
            stack.terms.push_back(std::move(term));
        }
    }
    return stack;
}

} // namespace sdlab
