#include "qfc/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qfc/errors.hpp"

namespace qfc {

namespace {

/// Gram determinant, or -1 when the set is numerically dependent (Hadamard
/// ratio below 1e-10); a float-zero determinant must never be mistaken for a
/// genuinely thin sublattice, that would fake an enormous alpha.
double gram_det(const std::vector<Vector>& vecs, const std::vector<int>& pick) {
    const int k = static_cast<int>(pick.size());
    Matrix g(k, k);
    double hadamard = 1.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) g(i, j) = vecs[pick[i]].dot(vecs[pick[j]]);
        hadamard *= g(i, i);
    }
    const double det = g.determinant();
    if (!(det > 1e-10 * hadamard)) return -1.0;
    return det;
}

}  // namespace

AlphaEstimate alpha_d_lower(const Lattice& lat, bool with_mu_counts,
                            const ShortVectorLimits& limits) {
    const int rank = lat.rank();
    if (rank > 16) throw DomainError("alpha_d_lower: rank <= 16");
    const int d = rank / 2;

    // radius from the LLL profile: enough to contain d independent vectors
    Matrix reduced = lll_reduce(lat.basis);
    std::vector<double> norms;
    for (int j = 0; j < rank; ++j) norms.push_back(reduced.col(j).norm());
    std::sort(norms.begin(), norms.end());
    double radius = 1.2 * norms[d - 1] + 1e-12;

    ShortVectorResult cand;
    for (;;) {
        cand = short_vectors(lat, radius, Ball::Euclidean, false, limits);
        // stop once the candidates span a rank-d subspace
        Matrix m(rank, cand.vectors.size());
        for (std::size_t i = 0; i < cand.vectors.size(); ++i) m.col(i) = cand.vectors[i];
        if (cand.vectors.size() >= static_cast<std::size_t>(d) &&
            m.colPivHouseholderQr().rank() >= d)
            break;
        radius *= 1.5;
    }

    // order candidates by norm, drop the zero vector
    std::vector<int> order(cand.vectors.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return cand.vectors[a].squaredNorm() < cand.vectors[b].squaredNorm();
    });

    // greedy: shortest independent vectors first
    std::vector<int> chosen;
    for (int idx : order) {
        if (cand.vectors[idx].squaredNorm() < 1e-24) continue;
        if (static_cast<int>(chosen.size()) == d) break;
        std::vector<int> trial = chosen;
        trial.push_back(idx);
        if (gram_det(cand.vectors, trial) > 0.0) chosen = trial;
    }
    if (static_cast<int>(chosen.size()) < d)
        throw CapacityExceeded("alpha_d_lower: failed to assemble a rank-d witness");

    // local swaps until the Gram determinant stops improving
    double best = gram_det(cand.vectors, chosen);
    for (int pass = 0; pass < 24; ++pass) {
        bool improved = false;
        for (int slot = 0; slot < d; ++slot) {
            for (int idx : order) {
                if (cand.vectors[idx].squaredNorm() < 1e-24) continue;
                if (std::find(chosen.begin(), chosen.end(), idx) != chosen.end()) continue;
                std::vector<int> trial = chosen;
                trial[slot] = idx;
                const double det = gram_det(cand.vectors, trial);
                if (det > 0.0 && det < best * (1.0 - 1e-12)) {
                    best = det;
                    chosen = trial;
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }

    AlphaEstimate est;
    est.alpha_d_lower = 1.0 / std::sqrt(best);
    est.enumeration_radius = radius;
    for (int idx : chosen) {
        est.witness.push_back(cand.vectors[idx]);
        est.witness_coords.push_back(cand.coordinates[idx]);
    }
    if (with_mu_counts) {
        for (double mu : {1.0, 2.0, 4.0})
            est.mu_counts.push_back(short_vectors(lat, mu, Ball::Euclidean, true, limits).count);
    }
    return est;
}

GammaResult gamma_sup(const QuadraticForm& q, const Interval& interval, double beta, double T,
                      int grid_points) {
    const int d = q.dim();
    if (!(beta > 2.0 / d && beta < 0.5))
        throw DomainError("gamma_sup: beta in (2/d, 1/2)");
    if (grid_points < 2) throw DomainError("gamma_sup: need at least 2 grid points");

    const Lattice base = lambda_q(q);
    const PlaneAction dT = PlaneAction::diagonal_flow(T);
    auto alpha_at = [&](double x) {
        const Lattice moved = apply_action(apply_action(base, PlaneAction::horocycle(x)), dT);
        return alpha_d_lower(moved, false).alpha_d_lower;
    };

    GammaResult res;
    double best_alpha = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double x = interval.a + (interval.b - interval.a) * i / (grid_points - 1);
        const double a = alpha_at(x);
        res.samples.emplace_back(x, a);
        if (a > best_alpha) {
            best_alpha = a;
            res.argmax_x = x;
        }
    }
    // one refinement pass around the maximizer
    const double cell = (interval.b - interval.a) / (grid_points - 1);
    for (int i = 1; i <= 8; ++i) {
        const double x = std::clamp(res.argmax_x + cell * (i - 4.5) / 4.0, interval.a, interval.b);
        const double a = alpha_at(x);
        res.samples.emplace_back(x, a);
        if (a > best_alpha) best_alpha = a;
    }
    res.gamma = std::pow(best_alpha / std::pow(T, d), 0.5 - beta);
    return res;
}

KAverageReport k_average_check(const Lattice& lat, const PlaneAction& g, double beta,
                               int quad_points) {
    if (quad_points < 4) throw DomainError("k_average_check: need at least 4 nodes");
    const int d = lat.rank() / 2;

    KAverageReport rep;
    rep.alpha_ref = alpha_d_lower(lat, false).alpha_d_lower;
    rep.norm_g = g.operator_norm();

    // midpoint rule over theta in [-pi, pi]; the integrand has peaks of width
    // ~ ||g||^{-2} near alignments, so quad_points should scale accordingly
    double sum = 0.0;
    for (int i = 0; i < quad_points; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * (i + 0.5) / quad_points;
        const Lattice moved = apply_action(apply_action(lat, PlaneAction::rotation(theta)), g);
        sum += std::pow(alpha_d_lower(moved, false).alpha_d_lower, beta);
    }
    rep.integral = sum * (2.0 * M_PI / quad_points);
    rep.c_value = rep.integral /
                  (std::pow(rep.alpha_ref, beta) * std::pow(rep.norm_g, beta * d - 2.0));
    return rep;
}

}  // namespace qfc
