#pragma once

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

namespace sdlab {

// Monomial xi^alpha as sorted sparse (axis, exponent) pairs.
struct AngularMonomial {
    std::vector<std::pair<int, int>> exps;

    int degree() const {
        int d = 0;
        for (auto& [ax, p] : exps) d += p;
        return d;
    }
    bool all_even() const {
        for (auto& [ax, p] : exps)
            if (p % 2 != 0) return false;
        return true;
    }
    double eval(const double* xi) const {
        double v = 1.0;
        for (auto& [ax, p] : exps)
            for (int i = 0; i < p; ++i) v *= xi[ax];
        return v;
    }

    static AngularMonomial one() { return {}; }
    static AngularMonomial axis(int j, int p = 1) { return {{{j, p}}}; }

    bool operator==(const AngularMonomial&) const = default;
    auto operator<=>(const AngularMonomial&) const = default;

    friend AngularMonomial operator*(const AngularMonomial& a, const AngularMonomial& b) {
        AngularMonomial out;
        std::size_t i = 0, j = 0;
        while (i < a.exps.size() || j < b.exps.size()) {
            if (j == b.exps.size() || (i < a.exps.size() && a.exps[i].first < b.exps[j].first)) {
                out.exps.push_back(a.exps[i++]);
            } else if (i == a.exps.size() || b.exps[j].first < a.exps[i].first) {
                out.exps.push_back(b.exps[j++]);
            } else {
                out.exps.emplace_back(a.exps[i].first, a.exps[i].second + b.exps[j].second);
                ++i;
                ++j;
            }
        }
        std::erase_if(out.exps, [](const auto& e) { return e.second == 0; });
        return out;
    }
};

// Decay bound for a radial factor on the high shell:
//   |f(r)| <= mag * r^{-power} * exp(-gauss * r^2)   for r >= sqrt(2).
// exp2t marks an additional e^{-c t / r^2} factor (dead for small r on the
// shell); it tends to 1 as r grows so it never helps truncation.
struct TailHint {
    double mag = 1.0;
    double power = 0.0;
    double gauss = 0.0;
};

// One summand of a Fourier-side expression: radial(r) * xi^alpha, with the
// radial profile already bound at a fixed time t.
struct SpectralTerm {
    AngularMonomial alpha;
    std::function<double(double)> radial;
    TailHint tail;
};

// A finite sum of spectral terms plus the panelization hints the radial
// quadrature needs: the fastest oscillation rate on [0, sqrt(2)], an
// e^{-c t/r^2} high-shell envelope rate, and a crude sup bound on the
// middle annulus used to skip phase-resolved panels there when the whole
// annulus is exponentially negligible.
struct SpectralExpr {
    std::vector<SpectralTerm> terms;
    double phase_rate = 0.0;
    double exp2t_rate = 0.0;
    double mid_bound = -1.0;
    // Low-ball envelope: |sum terms| <= low_mag * exp(-exp4_rate * r^4) on
    // r <= 1 (0 = no such bound); lets the integrator cut the dead zone.
    double exp4_rate = 0.0;
    double low_mag = 1.0;

    double eval(const double* xi, double r) const {
        double s = 0.0;
        for (const auto& term : terms) s += term.radial(r) * term.alpha.eval(xi);
        return s;
    }
};

} // namespace sdlab
