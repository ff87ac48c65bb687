#ifndef QFC_QFORM_HPP
#define QFC_QFORM_HPP

#include <Eigen/Dense>

#include <utility>

namespace qfc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric nondegenerate quadratic form with cached spectral data.
///
/// The diagonalizer g0 satisfies Q(v) = Q0(g0 v) where Q0 = diag(+1,...,-1,...)
/// with the positive entries first; eigenvalues are stored in the same order
/// (positive eigenvalues first, each group sorted descending by |lambda|).
/// All members are immutable after construction, so instances can be shared
/// freely across workers.
class QuadraticForm {
public:
    /// Builds the form from a square matrix of entries. Asymmetric input is
    /// symmetrized as (A + A^T)/2 (v^T A v only sees the symmetric part) and
    /// flagged. Throws NotSquare / DegenerateForm.
    static QuadraticForm construct(const Matrix& entries);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    const Vector& eigenvalues() const { return eigenvalues_; }
    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }
    /// (p, q) = counts of positive / negative eigenvalues.
    std::pair<int, int> signature() const { return signature_; }
    /// g0 with Q(v) = Q0(g0 v); rows ordered so Q0 = diag(1,..,1,-1,..,-1).
    const Matrix& diagonalizer() const { return diagonalizer_; }
    /// Orthogonal eigenbasis U, columns ordered like eigenvalues(); Q = U diag(lambda) U^T.
    const Matrix& eigenbasis() const { return eigenbasis_; }
    bool was_symmetrized() const { return symmetrized_; }

    /// |det g0| = sqrt(|det Q|).
    double abs_det_diagonalizer() const { return abs_det_g0_; }
    /// d_Q = 1/|det g0|^n, the volume factor for an n-block product space.
    double vol_factor(int n) const;

    /// v^T Q v. Throws DimensionMismatch.
    double evaluate(const Vector& v) const;
    /// Q_+ = Q^2 evaluated at v: v^T Q^2 v = ||Qv||^2.
    double evaluate_plus(const Vector& v) const;

    /// c*Q with c = (n-1)/lambda_min when lambda_min < n-1, otherwise *this.
    /// Counting with (c*Q, c*I_i) is equivalent to counting with (Q, I_i).
    QuadraticForm rescale_to_min_eigen(int n) const;
    /// The scale factor applied relative to the original entries (1 if none).
    double rescale_factor() const { return rescale_factor_; }

    QuadraticForm scaled(double c) const;

private:
    QuadraticForm() = default;
    Matrix matrix_;
    Vector eigenvalues_;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
    std::pair<int, int> signature_{0, 0};
    Matrix diagonalizer_;
    Matrix eigenbasis_;
    double abs_det_g0_ = 0.0;
    bool symmetrized_ = false;
    double rescale_factor_ = 1.0;
};

/// Free-function views matching the operation names used across the project.
inline double evaluate(const QuadraticForm& q, const Vector& v) { return q.evaluate(v); }

struct DiagonalizeResult {
    Matrix g0;
    std::pair<int, int> signature;
    double d_q;  // 1/|det g0|^n
};

DiagonalizeResult diagonalize(const QuadraticForm& q, int n);

}  // namespace qfc

#endif
