#ifndef QFC_LATTICE_HPP
#define QFC_LATTICE_HPP

#include <cstdint>
#include <vector>

#include "qfc/interval.hpp"
#include "qfc/qform.hpp"

namespace qfc {

/// Full-rank lattice given by a basis matrix (columns generate).
struct Lattice {
    Matrix basis;

    int rank() const { return static_cast<int>(basis.rows()); }
    double covolume() const { return std::abs(basis.determinant()); }
};

/// Element of SL2(R) acting blockwise on the d coordinate pairs of R^{2d}.
struct PlaneAction {
    Eigen::Matrix2d m;

    PlaneAction(double a, double b, double c, double d);
    static PlaneAction diagonal_flow(double T);   // d_T = diag(T, 1/T)
    static PlaneAction horocycle(double x);       // u_x = [[1, x], [0, 1]]
    static PlaneAction rotation(double theta);    // k_theta

    PlaneAction composed(const PlaneAction& other) const;  // this * other
    double operator_norm() const;
};

/// Lattice built from the form: Pi * blockdiag(Q_+^{-1/2}, Q_+^{-1/2} Q) Z^{2d}
/// with Q_+ = Q^2 and Pi the pair-interleaving permutation. Covolume 1/|det Q|.
Lattice lambda_q(const QuadraticForm& q);

/// Blockwise action on the basis; covolume is unchanged (det = 1).
Lattice apply_action(const Lattice& lat, const PlaneAction& g);

/// H_{T,x}(m, mbar) = T^2 Q_+^{-1}(m + (2/pi) x Q mbar) + T^{-2} ||mbar||^2,
/// the closed form whose lattice realization is
/// || d_T u_{(2/pi) x} Pi(m', mbar') ||^2 (checked to 1e-10 in the tests).
double h_form(const QuadraticForm& q, double T, double x, const Vector& m, const Vector& mbar);

/// The same value through the explicit lattice route (independent computation).
double h_form_lattice(const QuadraticForm& q, double T, double x, const Vector& m,
                      const Vector& mbar);

/// LLL reduction with delta = 0.99 (in place on a copy; returns the reduced basis).
Matrix lll_reduce(const Matrix& basis, double delta = 0.99);

struct ShortVectorLimits {
    std::uint64_t max_vectors = 10000000;  // 1e7
};

struct ShortVectorResult {
    std::uint64_t count = 0;
    std::vector<Vector> vectors;       // empty when count_only
    std::vector<Vector> coordinates;   // integer coordinates in the given basis
};

/// Exact enumeration of lattice vectors with ||v|| <= mu (Euclidean) or
/// ||v||_inf <= mu (Max), including 0 and both signs. LLL then Fincke-Pohst
/// with floating bounds; every emitted vector is re-verified against the exact
/// norm predicate. Throws CapacityExceeded when the predicted count is too big.
ShortVectorResult short_vectors(const Lattice& lat, double mu, Ball norm,
                                bool count_only = false, const ShortVectorLimits& limits = {});

/// psi(T, x) = sum over (m, mbar) of exp(-H_{T,x}) = Gaussian sum over
/// Lambda_{T, (2/pi) x}, truncated at a relative tolerance.
double psi(const QuadraticForm& q, double T, double x, double tol,
           const ShortVectorLimits& limits = {});

}  // namespace qfc

#endif
