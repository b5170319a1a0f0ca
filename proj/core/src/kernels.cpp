#include "sdlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "sdlab/datum.hpp"

namespace sdlab {

namespace {

// |w| below this is evaluated by the entire series of cosh(sqrt(w)),
// sinh(sqrt(w))/sqrt(w); above it the exponential forms are stable.
constexpr double kSeriesWindow = 0.25;

} // namespace

double discriminant(double r) {
    const double r3 = r * r * r;
    return r * r * (r3 * r3 - 4.0);
}

double cosh_entire(double w) {
    // sum w^m / (2m)!
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 12; ++m) {
        term *= w / (static_cast<double>(2 * m - 1) * static_cast<double>(2 * m));
        sum += term;
    }
    return sum;
}

double sinhc_entire(double w) {
    // sum w^m / (2m+1)!
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 12; ++m) {
        term *= w / (static_cast<double>(2 * m) * static_cast<double>(2 * m + 1));
        sum += term;
    }
    return sum;
}

CharRoots char_roots(const Frequency& freq) {
    const double r = freq.r;
    if (!(r >= 0.0)) throw std::invalid_argument("char_roots: r must be nonnegative");
    const double r2 = r * r;
    const double r4 = r2 * r2;
    const double disc = discriminant(r);
    CharRoots out;
    if (disc < 0.0) {
        const double im = std::sqrt(-disc) / 2.0;
        out.lambda1 = {-r4 / 2.0, im};
        out.lambda2 = {-r4 / 2.0, -im};
    } else if (disc == 0.0) {
        out.lambda1 = out.lambda2 = {-r4 / 2.0, 0.0};
    } else {
        // lambda2 has no cancellation; recover lambda1 from the product
        // identity lambda1*lambda2 = r^2 (the direct formula loses all
        // digits once r^6 >> 4).
        const double l2 = -(r4 + std::sqrt(disc)) / 2.0;
        out.lambda1 = {r2 / l2, 0.0};
        out.lambda2 = {l2, 0.0};
    }
    return out;
}

KernelValue eval_kernels(double t, const Frequency& freq) {
    const double r = freq.r;
    if (!(t >= 0.0)) throw std::invalid_argument("eval_kernels: t must be nonnegative");
    if (!(r >= 0.0)) throw std::invalid_argument("eval_kernels: r must be nonnegative");
    const double r4 = r * r * r * r;
    const double disc = discriminant(r);
    const double w = 0.25 * t * t * disc;

    KernelValue kv;
    kv.t = t;
    if (std::abs(w) <= kSeriesWindow) {
        const double env = std::exp(-0.5 * t * r4);
        kv.e0 = env * cosh_entire(w);
        kv.e1 = env * t * sinhc_entire(w);
        return kv;
    }

    const CharRoots roots = char_roots(freq);
    const std::complex<double> ea = std::exp(roots.lambda1 * t);
    const std::complex<double> eb = std::exp(roots.lambda2 * t);
    const std::complex<double> e0 = 0.5 * (ea + eb);
    const std::complex<double> e1 = (ea - eb) / (roots.lambda1 - roots.lambda2);
    // Conjugate symmetry forces real values; the imaginary residue is
    // rounding noise only.
    if (std::abs(e0.imag()) > 1e-12 * std::max(1.0, std::abs(e0.real())) ||
        std::abs(e1.imag()) > 1e-12 * std::max(1.0, std::abs(e1.real()))) {
        throw std::runtime_error("eval_kernels: non-real multiplier");
    }
    kv.e0 = e0.real();
    kv.e1 = e1.real();
    return kv;
}

double eval_E0(double t, const Frequency& freq) { return eval_kernels(t, freq).e0; }
double eval_E1(double t, const Frequency& freq) { return eval_kernels(t, freq).e1; }

std::complex<double> eval_solution(double t, const double* xi, int n,
                                   const InitialDatum& datum) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += xi[i] * xi[i];
    const double r = std::sqrt(r2);
    const KernelValue kv = eval_kernels(t, Frequency{r, n});
    const double u0 = fourier_eval(datum.u0, xi, n);
    const double u1 = fourier_eval(datum.u1, xi, n);
    const double r4 = r2 * r2;
    return {kv.e0 * u0 + kv.e1 * (0.5 * r4 * u0 + u1), 0.0};
}

double ode_residual(double t, const Frequency& freq, const InitialDatum& datum,
                    double h) {
    if (!(h > 0.0) || !(t >= 2.0 * h))
        throw std::invalid_argument("ode_residual: need t >= 2h > 0");
    const int n = freq.n;
    std::vector<double> xi(static_cast<std::size_t>(n), 0.0);
    xi[0] = freq.r;
    auto u = [&](double s) { return eval_solution(s, xi.data(), n, datum).real(); };

    const double um2 = u(t - 2.0 * h), um1 = u(t - h), u0 = u(t);
    const double up1 = u(t + h), up2 = u(t + 2.0 * h);
    const double ut = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / (12.0 * h);
    const double utt = (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * h * h);
    const double r2 = freq.r * freq.r;
    const double r4 = r2 * r2;
    return (utt + r4 * ut + r2 * u0) / std::max(std::abs(u0), 1.0);
}

} // namespace sdlab
