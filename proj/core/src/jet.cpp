#include "sdlab/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace sdlab {

Jet Jet::variable(std::size_t order, double constant) {
    Jet j(order);
    j.c_[0] = constant;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

Jet Jet::nilpotent() const {
    Jet j = *this;
    if (!j.c_.empty()) j.c_[0] = 0.0;
    return j;
}

Jet Jet::operator-() const {
    Jet j = *this;
    for (double& x : j.c_) x = -x;
    return j;
}

Jet& Jet::operator+=(const Jet& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}

Jet Jet::mul(const Jet& a, const Jet& b) {
    const std::size_t n = std::max(a.order(), b.order());
    Jet r(n);
    for (std::size_t i = 0; i <= n && i <= a.order(); ++i) {
        const double ai = a.coeff(i);
        if (ai == 0.0) continue;
        const std::size_t jmax = std::min(n - i, b.order());
        for (std::size_t j = 0; j <= jmax; ++j) r.coeff_ref(i + j) += ai * b.coeff(j);
    }
    return r;
}

Jet recip(const Jet& f) {
    const double c0 = f.constant();
    if (c0 == 0.0) throw std::domain_error("jet recip: zero constant term");
    const std::size_t n = f.order();
    Jet r(n);
    r.coeff_ref(0) = 1.0 / c0;
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i <= k; ++i) s += f.coeff(i) * r.coeff(k - i);
        r.coeff_ref(k) = -s / c0;
    }
    return r;
}

Jet sqrt(const Jet& f) {
    const double c0 = f.constant();
    if (!(c0 > 0.0)) throw std::domain_error("jet sqrt: constant term must be positive");
    const std::size_t n = f.order();
    Jet r(n);
    r.coeff_ref(0) = std::sqrt(c0);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i + 1 <= k; ++i) s += r.coeff(i) * r.coeff(k - i);
        r.coeff_ref(k) = (f.coeff(k) - s) / (2.0 * r.coeff(0));
    }
    return r;
}

namespace {

// y = exp(u) from y' = u' y; seeds the recurrence with y0.
Jet exp_recurrence(const Jet& u, double y0) {
    const std::size_t n = u.order();
    Jet y(n);
    y.coeff_ref(0) = y0;
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t m = 1; m <= k; ++m)
            s += static_cast<double>(m) * u.coeff(m) * y.coeff(k - m);
        y.coeff_ref(k) = s / static_cast<double>(k);
    }
    return y;
}

// s' = u' c, c' = -u' s; seeded at (sin u0, cos u0).  The large constant
// phase enters only through the seed values, never a series argument.
void sincos_recurrence(const Jet& u, Jet& s, Jet& c) {
    const std::size_t n = u.order();
    s = Jet(n);
    c = Jet(n);
    s.coeff_ref(0) = std::sin(u.constant());
    c.coeff_ref(0) = std::cos(u.constant());
    for (std::size_t k = 1; k <= n; ++k) {
        double as = 0.0, ac = 0.0;
        for (std::size_t m = 1; m <= k; ++m) {
            const double mu = static_cast<double>(m) * u.coeff(m);
            as += mu * c.coeff(k - m);
            ac += mu * s.coeff(k - m);
        }
        s.coeff_ref(k) = as / static_cast<double>(k);
        c.coeff_ref(k) = -ac / static_cast<double>(k);
    }
}

} // namespace

Jet exp(const Jet& f) { return exp_recurrence(f, std::exp(f.constant())); }
Jet exp_nilpotent(const Jet& f) { return exp_recurrence(f, 1.0); }

Jet sin(const Jet& f) {
    Jet s, c;
    sincos_recurrence(f, s, c);
    return s;
}

Jet cos(const Jet& f) {
    Jet s, c;
    sincos_recurrence(f, s, c);
    return c;
}

Jet sin_nilpotent(const Jet& f) { return sin(f.nilpotent()); }
Jet cos_nilpotent(const Jet& f) { return cos(f.nilpotent()); }

} // namespace sdlab
