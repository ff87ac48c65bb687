#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>

#include "qfc/errors.hpp"
#include "qfc/rng.hpp"
#include "qfc/theta.hpp"

using namespace qfc;

namespace {

Matrix diag(std::initializer_list<double> entries) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()),
                            static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) m(i, i) = e, ++i;
    return m;
}

QuadraticForm test_form() { return QuadraticForm::construct(diag({2, 2, 2, -2, -2 * std::sqrt(2.0)})); }

// adaptive Simpson for the 1-D quadrature oracle
template <typename F>
double adaptive_simpson(F f, double a, double b, double tol, int depth = 24) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fhi, double fmid, double eps,
            int dep) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double s1 = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        const double s2 = (hi - lo) / 12.0 * (flo + 4.0 * flm + 2.0 * fmid + 4.0 * frm + fhi);
        if (dep <= 0 || std::abs(s2 - s1) < 15.0 * eps) return s2 + (s2 - s1) / 15.0;
        return rec(lo, mid, flo, fmid, flm, eps / 2, dep - 1) +
               rec(mid, hi, fmid, fhi, frm, eps / 2, dep - 1);
    };
    return rec(a, b, fa, fb, fm, tol, depth);
}

}  // namespace

TEST_CASE("g profile formulas") {
    CHECK(g_damping(10.0, 0.0) == doctest::Approx(10.0));
    CHECK(g_damping(10.0, 0.01) == doctest::Approx(10.0 / std::sqrt(2.0)).epsilon(1e-14));
    auto p = g_profile(7.0, {0.0, 0.0}, 3);
    CHECK(p.g_product == doctest::Approx(343.0));
    CHECK(p.g_star == doctest::Approx(49.0));
}

TEST_CASE("vartheta at omega = 0, y = 0 is the real Gaussian product") {
    auto q = test_form();
    const double T = 2.0;
    ThetaContext ctx(q, 3, T, Vector::Zero(15), {0.0, 0.0});
    const Complex v = theta_smooth(ctx);
    // each block integral = pi^{d/2} T^d / |det Q|
    const double det = std::abs(q.eigenvalues().prod());
    const double block = std::pow(M_PI, 2.5) * std::pow(T, 5) / det;
    CHECK(v.real() == doctest::Approx(block * block * block).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("1-D eigen factor matches adaptive quadrature") {
    // d = 1 block: integral of exp(i x q t^2 + i t u / T - q^2 t^2 / T^2)
    const double lam = 1.7, x = 0.3, T = 2.0, u = 1.0;
    auto q1 = QuadraticForm::construct(Matrix::Constant(1, 1, lam));
    Vector y(1);
    y << u;
    const Complex closed = theta_block_smooth(q1, T, x, y);
    auto epart = [&](int which) {
        auto f = [&](double t) {
            const double re = -lam * lam * t * t / (T * T);
            const double im = x * lam * t * t + t * u / T;
            return which == 0 ? std::exp(re) * std::cos(im) : std::exp(re) * std::sin(im);
        };
        double total = 0.0;
        for (double a = -12.0; a < 12.0; a += 1.5) total += adaptive_simpson(f, a, a + 1.5, 1e-14);
        return total;
    };
    CHECK(closed.real() == doctest::Approx(epart(0)).epsilon(1e-8));
    CHECK(closed.imag() == doctest::Approx(epart(1)).epsilon(1e-8));
}

TEST_CASE("theta sum: zero-vector term dominates as T -> 0+, and v=0 contributes 1") {
    auto q = test_form();
    ThetaContext ctx(q, 3, 2.0, Vector::Zero(15), {0.0, 0.0});
    const Complex t = theta_sum(ctx, 1e-8);
    CHECK(t.real() >= 1.0);  // v = 0 contributes exp(0) = 1 per block
}

TEST_CASE("theta block product equals the direct double sum at d=2, n=2") {
    auto q2 = QuadraticForm::construct(diag({1.0, -std::sqrt(2.0)}));
    const double T = 1.5;
    Rng rng(21);
    Vector y(4);
    for (int i = 0; i < 4; ++i) y(i) = rng.uniform(-1.0, 1.0);
    const double w = 0.37;
    ThetaContext ctx(q2, 2, T, y, {w});
    const Complex prod = theta_sum(ctx, 1e-8);

    // direct double loop over Z^2 x Z^2 with x_1 = w, x_2 = -w
    Complex direct(0.0, 0.0);
    const int R = 14;
    const Matrix& A = q2.matrix();
    for (int a = -R; a <= R; ++a)
        for (int b = -R; b <= R; ++b)
            for (int c = -R; c <= R; ++c)
                for (int d = -R; d <= R; ++d) {
                    Vector v1(2), v2(2);
                    v1 << a, b;
                    v2 << c, d;
                    const double q1 = v1.dot(A * v1), q2v = v2.dot(A * v2);
                    const double qp1 = (A * v1).squaredNorm(), qp2 = (A * v2).squaredNorm();
                    const double re = -(qp1 + qp2) / (T * T);
                    const double im = w * q1 - w * q2v + (v1.dot(y.head(2)) + v2.dot(y.tail(2))) / T;
                    direct += std::exp(Complex(re, im));
                }
    CHECK(std::abs(prod - direct) <= 1e-6 * std::abs(direct));
}

TEST_CASE("conjugate symmetry at y = 0") {
    auto q = test_form();
    std::vector<double> omega = {0.13, -0.29};
    std::vector<double> momega = {-0.13, 0.29};
    ThetaContext a(q, 3, 2.0, Vector::Zero(15), omega);
    ThetaContext b(q, 3, 2.0, Vector::Zero(15), momega);
    const Complex ta = theta_sum(a, 1e-8), tb = theta_sum(b, 1e-8);
    CHECK(std::abs(ta - std::conj(tb)) <= 1e-12 * std::abs(ta));
}

TEST_CASE("poisson identity") {
    auto q = test_form();
    Rng rng(77);

    SUBCASE("y = 0, omega = 0: per-block classical relation") {
        ThetaContext ctx(q, 3, 2.0, Vector::Zero(15), {0.0, 0.0});
        CHECK(poisson_residual(ctx, 3, 1e-8) <= 1e-8);
    }
    SUBCASE("random omega, y = 0") {
        ThetaContext ctx(q, 3, 2.0, Vector::Zero(15), {0.1, -0.2});
        CHECK(poisson_residual(ctx, 3, 1e-8) <= 1e-6);
    }
    SUBCASE("random omega and y; tail insensitivity in m_radius") {
        Vector y(15);
        for (int i = 0; i < 15; ++i) y(i) = rng.uniform(-2.0, 2.0);
        ThetaContext ctx(q, 3, 2.0, y, {rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)});
        const double r3 = poisson_residual(ctx, 3, 1e-8);
        const double r4 = poisson_residual(ctx, 4, 1e-8);
        CHECK(r3 <= 1e-6);
        CHECK(std::abs(r4 - r3) <= 1e-9);
    }
}

TEST_CASE("modulus bound per block (damping form of the closed integral)") {
    // |block| <= (g_T(x) T)^{d/2} prod_j sqrt(pi/lambda_j) exp(-g^2/4 Q_+^{-1}(y/T))
    auto q = test_form();
    Rng rng(31);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double x = std::copysign(std::pow(10.0, rng.uniform(-3.0, 0.0)), rng.uniform() - 0.5);
        const double T = rng.uniform(1.0, 8.0);
        Vector y(5);
        for (int i = 0; i < 5; ++i) y(i) = rng.uniform(0.0, 2.0) * T;
        const Complex block = theta_block_smooth(q, T, x, y);
        const double g = g_damping(T, x);
        double qp_inv = 0.0;  // Q_+^{-1}(y/T) in eigencoordinates
        const Vector u = q.eigenbasis().transpose() * y;
        for (int j = 0; j < 5; ++j) {
            const double lam = q.eigenvalues()(j);
            qp_inv += u(j) * u(j) / (lam * lam * T * T);
        }
        double cstar = 1.0;
        for (int j = 0; j < 5; ++j) cstar *= std::sqrt(M_PI / std::abs(q.eigenvalues()(j)));
        const double bound = cstar * std::pow(g * T, 2.5) * std::exp(-0.25 * g * g * qp_inv);
        worst_ratio = std::max(worst_ratio, std::abs(block) / bound);
    }
    CHECK(worst_ratio <= 1.0 + 1e-9);
}
