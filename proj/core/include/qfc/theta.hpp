#ifndef QFC_THETA_HPP
#define QFC_THETA_HPP

#include <complex>
#include <vector>

#include "qfc/qform.hpp"

namespace qfc {

using Complex = std::complex<double>;

/// Inputs for one theta evaluation: the lattice sum theta and its continuous
/// companion vartheta, both products over n blocks with frequency differences
/// x_i = omega_i - omega_{i-1} (omega_0 = omega_n = 0 by convention).
struct ThetaContext {
    QuadraticForm form;
    int n;
    double T;
    Vector y;                   // length n*d
    std::vector<double> omega;  // length n-1

    ThetaContext(QuadraticForm f, int n_, double T_, Vector y_, std::vector<double> omega_);
    /// x_i for blocks i = 1..n, with the boundary convention.
    std::vector<double> block_freqs() const;
    Vector block_y(int i) const;  // y_i, 0-based block index
};

/// g_T(x) = T / sqrt(1 + (x T^2)^2) and its products/minima over the blocks.
struct DampingProfile {
    double T;
    std::vector<double> g;  // g_T at each block frequency difference
    double g_product;       // G_T
    double g_star;          // min_i g^2
};

double g_damping(double T, double x);
DampingProfile g_profile(double T, const std::vector<double>& omega, int n);

/// One block of the continuous transform, in closed form through the
/// eigendecomposition: prod_j sqrt(pi/beta_j) exp(-u_j^2 / (4 T^2 beta_j)),
/// beta_j = lambda_j^2/T^2 - i x lambda_j (principal square root; Re beta > 0).
Complex theta_block_smooth(const QuadraticForm& q, double T, double x, const Vector& y_block);

/// Same block as a lattice sum over Z^d, truncated at a radius where the
/// Gaussian tail is below tol relative; the radius is doubled until the last
/// doubling moves the value by less than tol.
Complex theta_block_sum(const QuadraticForm& q, double T, double x, const Vector& y_block,
                        double tol);

Complex theta_smooth(const ThetaContext& ctx);
Complex theta_sum(const ThetaContext& ctx, double tol);

/// | theta - vartheta - sum_{0<|m|_inf<=m_radius} vartheta_{T, y - 2 pi T m} |
/// normalized by |theta| + |vartheta|. The shifted sum factorizes per block,
/// so the cost is n (2 m_radius + 1)^d closed-form evaluations.
double poisson_residual(const ThetaContext& ctx, int m_radius, double tol);

}  // namespace qfc

#endif
