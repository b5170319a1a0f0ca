#include <doctest.h>

#include <cmath>
#include <functional>

#include "sdlab/jet.hpp"
#include "sdlab/profiles.hpp"

using namespace sdlab;

namespace {

// k-th derivative at 0 by central differences, Richardson-extrapolated once.
double fd_derivative(const std::function<double(double)>& f, int k, double h) {
    auto stencil = [&](double step) {
        switch (k) {
        case 0: return f(0.0);
        case 1: return (f(step) - f(-step)) / (2.0 * step);
        case 2: return (f(step) - 2.0 * f(0.0) + f(-step)) / (step * step);
        case 3:
            return (f(2.0 * step) - 2.0 * f(step) + 2.0 * f(-step) - f(-2.0 * step)) /
                   (2.0 * step * step * step);
        default: return 0.0;
        }
    };
    const double coarse = stencil(h);
    const double fine = stencil(h / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

} // namespace

TEST_CASE("jet multiplication and inversion are mutually consistent") {
    Jet f(6);
    f.coeff_ref(0) = 2.0;
    f.coeff_ref(1) = -1.0;
    f.coeff_ref(2) = 0.5;
    f.coeff_ref(3) = 0.125;
    const Jet prod = f * recip(f);
    CHECK(prod.coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t k = 1; k <= 6; ++k) CHECK(std::abs(prod.coeff(k)) < 1e-15);
}

TEST_CASE("jet sqrt squares back") {
    Jet f(8, 4.0);
    f.coeff_ref(1) = 1.0;
    f.coeff_ref(2) = -0.25;
    const Jet s = sqrt(f);
    const Jet sq = s * s;
    for (std::size_t k = 0; k <= 8; ++k)
        CHECK(sq.coeff(k) == doctest::Approx(f.coeff(k)).epsilon(1e-14));
}

TEST_CASE("jet trig identity sin^2 + cos^2 = 1 with a large phase") {
    Jet u(7, 12345.678);
    u.coeff_ref(1) = 0.7;
    u.coeff_ref(3) = -0.2;
    const Jet s = sin(u), c = cos(u);
    const Jet one = s * s + c * c;
    CHECK(one.coeff(0) == doctest::Approx(1.0).epsilon(1e-13));
    for (std::size_t k = 1; k <= 7; ++k) CHECK(std::abs(one.coeff(k)) < 1e-12);
}

TEST_CASE("jet exp matches finite differences") {
    Jet u(4);
    u.coeff_ref(1) = 0.3;
    u.coeff_ref(2) = -0.1;
    const Jet e = exp(u);
    auto scalar = [](double x) { return std::exp(0.3 * x - 0.1 * x * x); };
    double fact = 1.0;
    for (int k = 0; k <= 3; ++k) {
        if (k > 0) fact *= k;
        const double want = fd_derivative(scalar, k, 1e-2) / fact;
        CHECK(e.coeff(static_cast<std::size_t>(k)) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("phase-correction series phi(a) = a/(4 + 2 sqrt(4 - a^2))") {
    const Jet phi = phi_taylor(8);
    CHECK(phi.coeff(0) == 0.0);
    CHECK(phi.coeff(1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(phi.coeff(2) == 0.0);
    CHECK(phi.coeff(3) == doctest::Approx(1.0 / 128.0).epsilon(1e-14));

    auto scalar = [](double a) { return a / (4.0 + 2.0 * std::sqrt(4.0 - a * a)); };
    double fact = 1.0;
    for (int k = 1; k <= 3; ++k) {
        fact *= k;
        const double want = fd_derivative(scalar, k, 1e-2) / fact;
        CHECK(phi.coeff(static_cast<std::size_t>(k)) ==
              doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("h(b) = 2/(1 + sqrt(1-4b)) expands into the Catalan numbers") {
    const Jet h = catalan_h_coeffs(12);
    const double want[7] = {1, 1, 2, 5, 14, 42, 132};
    for (std::size_t k = 0; k <= 6; ++k) CHECK(h.coeff(k) == want[k]);

    // Catalan recurrence C_{k+1} = sum_i C_i C_{k-i}, exactly in doubles.
    for (std::size_t k = 0; k + 1 <= 12; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i <= k; ++i) s += h.coeff(i) * h.coeff(k - i);
        CHECK(h.coeff(k + 1) == s);
    }
}
