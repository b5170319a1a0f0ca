#pragma once

#include <cstddef>
#include <vector>

namespace sdlab {

// Truncated Taylor series in one formal variable.  coeff(k) is the k-th
// Taylor coefficient, i.e. f^(k)(0)/k!.  All arithmetic is exact at the
// truncation order in exact arithmetic; products and compositions discard
// coefficients beyond order().
class Jet {
public:
    Jet() = default;
    explicit Jet(std::size_t order) : c_(order + 1, 0.0) {}
    Jet(std::size_t order, double constant) : c_(order + 1, 0.0) { c_[0] = constant; }

    static Jet variable(std::size_t order, double constant = 0.0);

    std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double& coeff_ref(std::size_t k) { return c_[k]; }
    const std::vector<double>& coeffs() const { return c_; }

    double constant() const { return c_.empty() ? 0.0 : c_[0]; }
    // Nilpotent part: same jet with the constant term removed.
    Jet nilpotent() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double s) { c_[0] += s; return *this; }
    Jet& operator-=(double s) { c_[0] -= s; return *this; }
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
    friend Jet operator+(Jet a, double s) { a += s; return a; }
    friend Jet operator-(Jet a, double s) { a -= s; return a; }
    friend Jet operator*(Jet a, double s) { a *= s; return a; }
    friend Jet operator*(double s, Jet a) { a *= s; return a; }
    friend Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }

    static Jet mul(const Jet& a, const Jet& b);

private:
    std::vector<double> c_;
};

// Series inversion 1/f; requires f(0) != 0.
Jet recip(const Jet& f);
// Square root with sqrt(f(0)) > 0 branch; requires f(0) > 0.
Jet sqrt(const Jet& f);
// exp(f).  Evaluated as exp(f(0)) * exp(nilpotent), so only the constant
// term may be large.
Jet exp(const Jet& f);
// sin/cos(f) via the angle addition with the nilpotent part, so the series
// argument stays bounded even when f(0) is a large phase.
Jet sin(const Jet& f);
Jet cos(const Jet& f);

// sin/cos/exp of a jet with zero constant term (series straight up).
Jet sin_nilpotent(const Jet& f);
Jet cos_nilpotent(const Jet& f);
Jet exp_nilpotent(const Jet& f);

} // namespace sdlab
