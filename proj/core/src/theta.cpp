#include "qfc/theta.hpp"

#include <cmath>

#include "qfc/errors.hpp"

namespace qfc {

ThetaContext::ThetaContext(QuadraticForm f, int n_, double T_, Vector y_,
                           std::vector<double> omega_)
    : form(std::move(f)), n(n_), T(T_), y(std::move(y_)), omega(std::move(omega_)) {
    if (T <= 0.0) throw DomainError("theta: T > 0 required");
    if (n < 2) throw DomainError("theta: n >= 2 required");
    if (y.size() != static_cast<Eigen::Index>(n) * form.dim())
        throw DimensionMismatch("theta: y must have length n*d");
    if (static_cast<int>(omega.size()) != n - 1)
        throw DimensionMismatch("theta: omega must have length n-1");
}

std::vector<double> ThetaContext::block_freqs() const {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        const double wi = i == n - 1 ? 0.0 : omega[i];
        const double wim1 = i == 0 ? 0.0 : omega[i - 1];
        x[i] = wi - wim1;
    }
    return x;
}

Vector ThetaContext::block_y(int i) const { return y.segment(i * form.dim(), form.dim()); }

double g_damping(double T, double x) {
    const double z = x * T * T;
    return T / std::sqrt(1.0 + z * z);
}

DampingProfile g_profile(double T, const std::vector<double>& omega, int n) {
    if (T <= 0.0) throw DomainError("g_profile: T > 0");
    if (static_cast<int>(omega.size()) != n - 1)
        throw DimensionMismatch("g_profile: omega must have length n-1");
    DampingProfile p;
    p.T = T;
    p.g_product = 1.0;
    p.g_star = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double wi = i == n - 1 ? 0.0 : omega[i];
        const double wim1 = i == 0 ? 0.0 : omega[i - 1];
        const double g = g_damping(T, wi - wim1);
        p.g.push_back(g);
        p.g_product *= g;
        p.g_star = std::min(p.g_star, g * g);
    }
    return p;
}

Complex theta_block_smooth(const QuadraticForm& q, double T, double x, const Vector& y_block) {
    const Vector u = q.eigenbasis().transpose() * y_block;
    Complex result(1.0, 0.0);
    for (int j = 0; j < q.dim(); ++j) {
        const double lam = q.eigenvalues()(j);
        const Complex beta(lam * lam / (T * T), -x * lam);
        // Re beta > 0 always, so the principal square root is the right branch.
        result *= std::sqrt(M_PI / beta) * std::exp(-u(j) * u(j) / (4.0 * T * T * beta));
    }
    return result;
}

namespace {

Complex block_sum_radius(const QuadraticForm& q, double T, double x, const Vector& y_block,
                         long long R) {
    const int d = q.dim();
    const Matrix& A = q.matrix();
    if (std::pow(2.0 * R + 1.0, d) > 5e8)
        throw TruncationBudgetExceeded("theta_block_sum: truncation radius exceeds budget");

    // Kahan-compensated complex accumulation for worker-count-independent
    // reproducibility of the chunked variant.
    Complex sum(0.0, 0.0), comp(0.0, 0.0);
    std::vector<long long> v(d, -R);
    Vector vv(d);
    const double invT2 = 1.0 / (T * T);
    for (;;) {
        for (int j = 0; j < d; ++j) vv(j) = static_cast<double>(v[j]);
        const Vector av = A * vv;
        const double qv = vv.dot(av);
        const double qplus = av.squaredNorm();
        const double phase = x * qv + vv.dot(y_block) / T;
        const Complex term = std::exp(Complex(-qplus * invT2, phase));
        const Complex t = sum + (term - comp);
        comp = (t - sum) - (term - comp);
        sum = t;
        int lev = d - 1;
        while (lev >= 0 && ++v[lev] > R) v[lev--] = -R;
        if (lev < 0) break;
    }
    return sum;
}

}  // namespace

Complex theta_block_sum(const QuadraticForm& q, double T, double x, const Vector& y_block,
                        double tol) {
    if (!(tol > 0.0 && tol <= 1e-3)) throw DomainError("theta_block_sum: tol in (0, 1e-3]");
    // initial radius from the Gaussian tail exp(-lambda_min^2 R^2 / T^2)
    const double lmin = q.lambda_min();
    long long R = static_cast<long long>(std::ceil(T * std::sqrt(std::log(1.0 / tol) + 4.0) / lmin)) + 1;
    Complex value = block_sum_radius(q, T, x, y_block, R);
    for (int iter = 0; iter < 8; ++iter) {
        const Complex refined = block_sum_radius(q, T, x, y_block, 2 * R);
        if (std::abs(refined - value) <= tol * std::abs(refined)) return refined;
        value = refined;
        R *= 2;
    }
    throw TruncationBudgetExceeded("theta_block_sum: no convergence within the doubling budget");
}

Complex theta_smooth(const ThetaContext& ctx) {
    const auto x = ctx.block_freqs();
    Complex p(1.0, 0.0);
    for (int i = 0; i < ctx.n; ++i) p *= theta_block_smooth(ctx.form, ctx.T, x[i], ctx.block_y(i));
    return p;
}

Complex theta_sum(const ThetaContext& ctx, double tol) {
    const auto x = ctx.block_freqs();
    Complex p(1.0, 0.0);
    for (int i = 0; i < ctx.n; ++i)
        p *= theta_block_sum(ctx.form, ctx.T, x[i], ctx.block_y(i), tol);
    return p;
}

double poisson_residual(const ThetaContext& ctx, int m_radius, double tol) {
    if (ctx.T < 1.0) throw DomainError("poisson_residual: T >= 1");
    const int d = ctx.form.dim();
    const auto x = ctx.block_freqs();

    const Complex theta = theta_sum(ctx, std::min(tol, 1e-6) * 1e-2);
    const Complex vartheta = theta_smooth(ctx);

    // sum over m != 0 of vartheta_{T, y - 2 pi T m} = prod_i S_i - prod_i B_i(0),
    // where S_i sums the shifted block integrals over the full m_i box.
    Complex prod_s(1.0, 0.0), prod_b0(1.0, 0.0);
    const double shift = 2.0 * M_PI * ctx.T;
    for (int i = 0; i < ctx.n; ++i) {
        const Vector yb = ctx.block_y(i);
        Complex s(0.0, 0.0);
        std::vector<long long> m(d, -m_radius);
        Vector z(d);
        for (;;) {
            for (int j = 0; j < d; ++j) z(j) = yb(j) - shift * static_cast<double>(m[j]);
            s += theta_block_smooth(ctx.form, ctx.T, x[i], z);
            int lev = d - 1;
            while (lev >= 0 && ++m[lev] > m_radius) m[lev--] = -m_radius;
            if (lev < 0) break;
        }
        prod_s *= s;
        prod_b0 *= theta_block_smooth(ctx.form, ctx.T, x[i], yb);
    }
    const Complex rhs = prod_s - prod_b0;
    return std::abs(theta - vartheta - rhs) / (std::abs(theta) + std::abs(vartheta));
}

}  // namespace qfc
