#ifndef QFC_SMOOTHING_HPP
#define QFC_SMOOTHING_HPP

#include <memory>
#include <vector>

#include "qfc/interval.hpp"

namespace qfc {

/// Shared table of the 1-D base factor: the convolution of 40 centred
/// interval indicators with half-widths c0/j^2, normalized so the support is
/// exactly [-1, 1]. Its Fourier transform is the matching sinc product, which
/// decays like exp(-c sqrt|xi|).
class KernelTable {
public:
    static const KernelTable& instance();

    double density(double x) const;  // piecewise-linear table lookup
    double cdf(double x) const;      // exact integral of the PL density
    double khat1(double xi) const;   // prod_j sinc(a_j xi)

    const std::vector<double>& half_widths() const { return a_; }

private:
    KernelTable();
    std::vector<double> a_;       // the 40 half-widths
    std::vector<double> values_;  // density at uniform nodes on [-1, 1]
    std::vector<double> cum_;     // exact PL antiderivative at nodes
    double h_ = 0.0;
};

/// Smoothing kernel on R^dim at scale tau: product of per-axis base factors,
/// each axis scaled by tau/sqrt(dim) so the support is the Euclidean tau-ball.
struct Kernel {
    int dim;
    double tau;
    double decay_c;  // certified on the test grid: |khat(v)| <= exp(-c sqrt(tau |v|))
    double ls_slope; // least-squares slope of -log|khat1 envelope| vs sqrt(xi)
    double r_squared;

    double axis_scale() const;
    /// Per-axis density/CDF of the scaled factor.
    double density1(double x) const;
    double cdf1(double x) const;
    /// Fourier transform of the dim-dimensional kernel.
    double khat(const std::vector<double>& v) const;
    /// Radial majorant along the worst (axis) direction.
    double khat_radial_bound(double r) const { return std::exp(-decay_c * std::sqrt(tau * r)); }
};

/// Builds the kernel and fits/certifies the decay constant on a logarithmic
/// grid ||v|| in [1, 1e4]. The stored decay_c is the largest constant for
/// which the bound holds on that grid (the LS slope is kept as a diagnostic).
Kernel build_ingham_kernel(int dim, double tau);

/// Region for sandwich_check: the unit ball in R^dim (checked in dimensions
/// where direct quadrature is exact enough, dim <= 3) or an interval box.
struct SandwichRegion {
    enum class Kind { Ball, Box } kind;
    int dim;
    std::vector<Interval> intervals;  // used when kind == Box

    static SandwichRegion ball(int dim);
    static SandwichRegion box(std::vector<Interval> intervals);
};

struct SandwichReport {
    double max_violation;
    std::vector<double> witness;
    int grid_points;
    bool passed;  // max_violation <= 1e-9
};

/// Verifies f_{-2t} <= f_{-t}*k_t <= f <= f_{+t}*k_t <= f_{+2t} pointwise on a
/// deterministic grid concentrated near the boundary shell. Throws
/// ViolationFound (with the witness in the message) when the worst violation
/// exceeds 1e-9.
SandwichReport sandwich_check(const SandwichRegion& region, double tau, int grid_points = 100000);

struct FourierBoundReport {
    double c_constant;   // smallest C with |S_eps| <= C prod min(1,1/|w_i|) exp(-c sqrt(eps |w_i|))
    double fitted_decay; // the kernel decay constant used
    double s_at_zero;    // prod |I_i^eps|
};

/// Checks |S_eps| against the product bound on a logarithmic grid of axis and
/// diagonal rays; returns the smallest admissible constant.
FourierBoundReport s_eps_fourier_bound(double eps, const std::vector<Interval>& intervals,
                                       int grid_points = 64);

/// L1 norm of the Fourier transform of the smoothed ball indicator
/// 1_{B(1+tau)} * k_tau in R^nd, with the kernel transform replaced by its
/// radial majorant exp(-c sqrt(tau r)); 1-D radial quadrature to a relative
/// 1e-4. Scales like tau^{(1-nd)/2}.
double w_hat_l1_norm(double tau, int nd, double decay_c);

}  // namespace qfc

#endif
