#include "sdlab/datum.hpp"

#include <cmath>
#include <sstream>

#include "sdlab/errors.hpp"

namespace sdlab {

double envelope_eval(const RadialEnvelope& env, double r) {
    const double u = r * r;
    return std::visit(
        [u](const auto& e) -> double {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return std::exp(-e.sigma * u);
            } else if constexpr (std::is_same_v<T, PowerTail>) {
                return std::pow(1.0 + u, -0.5 * e.s);
            } else {
                return (1.0 + e.sigma * u) * std::exp(-e.sigma * u);
            }
        },
        env);
}

double envelope_taylor0(const RadialEnvelope&) { return 1.0; }

double envelope_taylor2(const RadialEnvelope& env) {
    return std::visit(
        [](const auto& e) -> double {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return -e.sigma;
            } else if constexpr (std::is_same_v<T, PowerTail>) {
                return -0.5 * e.s;
            } else {
                (void)e;
                return 0.0;  // (1+su)e^{-su} = 1 - s^2 u^2/2 + ...
            }
        },
        env);
}

TailHint envelope_tail(const RadialEnvelope& env) {
    return std::visit(
        [](const auto& e) -> TailHint {
            using T = std::decay_t<decltype(e)>;
            TailHint hint;
            if constexpr (std::is_same_v<T, PowerTail>) {
                hint.power = e.s;
            } else {
                hint.gauss = e.sigma;
            }
            return hint;
        },
        env);
}

std::string envelope_describe(const RadialEnvelope& env) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Gaussian>)
                os << "gaussian(" << e.sigma << ")";
            else if constexpr (std::is_same_v<T, PowerTail>)
                os << "power-tail(" << e.s << ")";
            else
                os << "gauss-bump(" << e.sigma << ")";
        },
        env);
    return os.str();
}

double fourier_eval(const DatumComponent& comp, const double* xi, int n) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += xi[i] * xi[i];
    return comp.amplitude * comp.beta.eval(xi) * envelope_eval(comp.envelope, std::sqrt(r2));
}

double fourier_eval(const std::vector<DatumComponent>& comps, const double* xi, int n) {
    double v = 0.0;
    for (const auto& c : comps) v += fourier_eval(c, xi, n);
    return v;
}

bool MomentTable::is_zero(int k) const {
    for (const auto& e : degree[k])
        if (e.coeff != 0.0) return false;
    return true;
}

double MomentTable::eval(int k, const double* xi, double r) const {
    double v = 0.0;
    for (const auto& e : degree[k]) {
        double m = e.coeff * e.alpha.eval(xi);
        for (int p = 0; p < e.r2_power; ++p) m *= r * r;
        v += m;
    }
    return v;
}

MomentTable taylor_terms(const std::vector<DatumComponent>& comps, int max_degree) {
    if (max_degree > 2)
        throw InconsistentSpecError("taylor_terms: moments beyond degree 2 not supported");
    MomentTable table;
    for (const auto& c : comps) {
        const int b = c.beta.degree();
        const double g0 = c.amplitude * envelope_taylor0(c.envelope);
        if (b <= max_degree && g0 != 0.0)
            table.degree[b].push_back({c.beta, 0, g0});
        const double g2 = c.amplitude * envelope_taylor2(c.envelope);
        if (b + 2 <= max_degree && g2 != 0.0)
            table.degree[b + 2].push_back({c.beta, 1, g2});
    }
    return table;
}

namespace {

void validate_component(const DatumComponent& c) {
    if (c.beta.degree() > 2)
        throw InconsistentSpecError("datum: angular monomial degree must be <= 2");
    std::visit(
        [](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, PowerTail>) {
                if (!(e.s > 0.0))
                    throw InconsistentSpecError("datum: power tail needs s > 0");
            } else {
                if (!(e.sigma > 0.0))
                    throw InconsistentSpecError("datum: envelope needs sigma > 0");
            }
        },
        c.envelope);
}

// H^p membership of a component in dimension n: power tails need
// s > p + |beta| + n/2; the Gaussian kinds always qualify.
void check_membership(const DatumComponent& c, double p, int n, const char* what) {
    if (const auto* tail = std::get_if<PowerTail>(&c.envelope)) {
        const double needed = p + c.beta.degree() + 0.5 * n;
        if (!(tail->s > needed))
            throw InconsistentSpecError(
                std::string("datum: ") + what + " power tail s = " + std::to_string(tail->s) +
                " is not in the declared Sobolev class (needs s > " +
                std::to_string(needed) + ")");
    }
}

} // namespace

InitialDatum make_datum(std::vector<DatumComponent> u0, std::vector<DatumComponent> u1,
                        double sobolev_l, double weight_gamma, int n) {
    if (n < 1) throw InconsistentSpecError("datum: dimension must be >= 1");
    if (sobolev_l < 0.0 || weight_gamma < 0.0)
        throw InconsistentSpecError("datum: l and gamma must be nonnegative");
    for (const auto& c : u0) {
        validate_component(c);
        check_membership(c, sobolev_l + 1.0, n, "u0");
    }
    for (const auto& c : u1) {
        validate_component(c);
        check_membership(c, sobolev_l, n, "u1");
    }
    InitialDatum d;
    d.u0 = std::move(u0);
    d.u1 = std::move(u1);
    d.sobolev_l = sobolev_l;
    d.weight_gamma = weight_gamma;
    return d;
}

std::string InitialDatum::digest() const {
    std::ostringstream os;
    os.precision(12);
    auto emit = [&os](const char* name, const std::vector<DatumComponent>& comps) {
        os << name << "[";
        for (const auto& c : comps) {
            os << c.amplitude << "*" << envelope_describe(c.envelope);
            for (auto& [ax, p] : c.beta.exps) os << "*xi" << ax << "^" << p;
            os << ";";
        }
        os << "]";
    };
    emit("u0", u0);
    os << " ";
    emit("u1", u1);
    os << " l=" << sobolev_l << " gamma=" << weight_gamma;
    return os.str();
}

double sobolev_norm_sq(const std::vector<DatumComponent>& comps, double p, int n,
                       const QuadConfig& cfg) {
    SpectralExpr expr;
    for (const auto& c : comps) {
        SpectralTerm term;
        term.alpha = c.beta;
        const RadialEnvelope env = c.envelope;
        const double amp = c.amplitude;
        term.radial = [env, amp](double r) { return amp * envelope_eval(env, r); };
        term.tail = envelope_tail(env);
        term.tail.mag = std::abs(amp);
        expr.terms.push_back(std::move(term));
    }
    // H^0 is plain L^2; for p > 0 the weight is 1 + r^{2p}.
    RadialWeight weight;
    weight.c0 = 1.0;
    weight.c_pow = p > 0.0 ? 1.0 : 0.0;
    weight.exponent = 2.0 * p;
    try {
        return norm_sq(expr, Region::Full, n, cfg, weight);
    } catch (const DivergenceError&) {
        throw DivergenceError("sobolev_norm_sq: H^" + std::to_string(p) +
                              " integral diverges in dimension " + std::to_string(n));
    }
}

InitialDatum make_threshold_datum(int n, double l, double eps) {
    if (!(eps > 0.0)) throw InconsistentSpecError("make_threshold_datum: eps must be > 0");
    const double s = l + 0.5 * n + eps;
    std::vector<DatumComponent> u0{{PowerTail{s + 1.0}, AngularMonomial::one(), 1.0}};
    std::vector<DatumComponent> u1{{PowerTail{s}, AngularMonomial::one(), 1.0}};
    return make_datum(std::move(u0), std::move(u1), l, 0.0, n);
}

} // namespace sdlab
