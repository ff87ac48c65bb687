#ifndef QFC_ALPHA_HPP
#define QFC_ALPHA_HPP

#include <cstdint>
#include <vector>

#include "qfc/lattice.hpp"

namespace qfc {

/// Certified lower bound for alpha_d: the reciprocal covolume of the best
/// rank-d witness sublattice found by greedy selection plus local swaps over
/// enumerated short vectors. Any d independent lattice vectors span a
/// Delta-rational subspace U with d_Delta(U) <= sqrt(det Gram), so the bound
/// is rigorous whatever the search misses.
struct AlphaEstimate {
    double alpha_d_lower = 0.0;
    std::vector<Vector> witness;             // d lattice vectors
    std::vector<Vector> witness_coords;      // integer coordinates in the basis
    std::vector<std::uint64_t> mu_counts;    // |{v : ||v|| <= mu}| at mu = 1, 2, 4
    double enumeration_radius = 0.0;
};

/// with_mu_counts controls the (possibly expensive) mu in {1,2,4} census used
/// by the count-alpha diagnostic; the witness search itself never needs it.
AlphaEstimate alpha_d_lower(const Lattice& lat, bool with_mu_counts = true,
                            const ShortVectorLimits& limits = {});

/// gamma_{I,beta}(T) = sup over a uniform x-grid (refined once around the
/// maximizer) of (T^{-d} alpha_d(Lambda_{T,x}))^{1/2 - beta}.
struct GammaResult {
    double gamma = 0.0;
    double argmax_x = 0.0;
    std::vector<std::pair<double, double>> samples;  // (x, alpha_lower)
};

GammaResult gamma_sup(const QuadraticForm& q, const Interval& interval, double beta, double T,
                      int grid_points);

/// Quadrature of alpha_d(g k_theta Delta)^beta over K = SO(2); reports the
/// implied constant against alpha_d(Delta)^beta ||g||^{beta d - 2}.
struct KAverageReport {
    double integral = 0.0;
    double alpha_ref = 0.0;
    double norm_g = 0.0;
    double c_value = 0.0;  // integral / (alpha_ref^beta * norm_g^{beta d - 2})
};

KAverageReport k_average_check(const Lattice& lat, const PlaneAction& g, double beta,
                               int quad_points);

}  // namespace qfc

#endif
