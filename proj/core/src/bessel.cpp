#include "qfc/bessel.hpp"

#include <cmath>

#include "qfc/errors.hpp"

namespace qfc {

namespace {

long double series_j(long double nu, long double x) {
    // J_nu(x) = sum_k (-1)^k (x/2)^(nu+2k) / (k! Gamma(nu+k+1))
    const long double q = 0.25L * x * x;
    long double term = std::exp(nu * std::log(0.5L * x) - std::lgamma(nu + 1.0L));
    if (x == 0.0L) return nu == 0.0L ? 1.0L : 0.0L;
    long double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<long double>(k) * (nu + k));
        sum += term;
        if (std::fabs(term) < 1e-24L * (std::fabs(sum) + 1e-30L)) break;
    }
    return sum;
}

// Hankel asymptotic expansion; used only for the J_0 / J_1 seeds where it
// converges to ~1e-17 for x >= 12.
long double hankel_j(long double nu, long double x) {
    const long double mu = 4.0L * nu * nu;
    // t_k = a_k(nu) / x^k with a_0 = 1, a_{k+1} = a_k (mu - (2k+1)^2) / (8(k+1))
    long double p = 1.0L, q = 0.0L;
    long double t = 1.0L, prev = 1e30L;
    for (int k = 0; k < 40; ++k) {
        const long double odd = 2.0L * k + 1.0L;
        t *= (mu - odd * odd) / (8.0L * (k + 1.0L) * x);
        if (std::fabs(t) > prev) break;  // asymptotic tail started growing
        prev = std::fabs(t);
        const int kk = k + 1;  // index of the term just formed
        const int sign = ((kk / 2) % 2 == 0) ? 1 : -1;
        if (kk % 2 == 1)
            q += sign * t;
        else
            p += sign * t;
        if (std::fabs(t) < 1e-24L) break;
    }
    const long double chi = x - (0.5L * nu + 0.25L) * 3.14159265358979323846264338328L;
    return std::sqrt(2.0L / (3.14159265358979323846264338328L * x)) *
           (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(double nu, double x) {
    if (nu < 0.0 || nu > 60.0 || x < 0.0 || x > 1e6)
        throw DomainError("bessel_j: arguments outside nu in [0,60], x in [0,1e6]");

    if (x <= std::max(12.0, 2.0 * nu)) return static_cast<double>(series_j(nu, x));

    const double two_nu = 2.0 * nu;
    if (std::abs(two_nu - std::round(two_nu)) > 1e-12)
        throw DomainError("bessel_j: large-argument branch needs integer or half-integer order");
    const long double lx = x;
    const bool half = std::abs(two_nu - 2.0 * std::floor(nu) - 1.0) < 0.5;

    long double jm, j0;  // J_{base-1}, J_{base}
    long double base;
    if (half) {
        // spherical seeds: J_{1/2}, J_{3/2} in closed form
        const long double f = std::sqrt(2.0L / (3.14159265358979323846264338328L * lx));
        jm = f * std::sin(lx);                              // J_{1/2}
        j0 = f * (std::sin(lx) / lx - std::cos(lx));       // J_{3/2}
        base = 1.5L;
        if (nu == 0.5) return static_cast<double>(jm);
    } else {
        jm = hankel_j(0.0L, lx);  // J_0
        j0 = hankel_j(1.0L, lx);  // J_1
        base = 1.0L;
        if (nu == 0.0) return static_cast<double>(jm);
    }
    long double order = base;
    while (order < static_cast<long double>(nu) - 0.25L) {
        const long double jn = (2.0L * order / lx) * j0 - jm;
        jm = j0;
        j0 = jn;
        order += 1.0L;
    }
    return static_cast<double>(j0);
}

}  // namespace qfc
