#include "qfc/qform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qfc/errors.hpp"

namespace qfc {

namespace {
constexpr double kDegeneracyTol = 1e-10;  // relative to lambda_max
}

QuadraticForm QuadraticForm::construct(const Matrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw NotSquare("quadratic form matrix must be square, d >= 1");

    QuadraticForm q;
    q.symmetrized_ = false;
    Matrix sym = 0.5 * (entries + entries.transpose());
    for (Eigen::Index i = 0; i < entries.rows() && !q.symmetrized_; ++i)
        for (Eigen::Index j = 0; j < entries.cols(); ++j)
            if (entries(i, j) != entries(j, i)) {
                q.symmetrized_ = true;
                break;
            }
    q.matrix_ = q.symmetrized_ ? sym : entries;

    Eigen::SelfAdjointEigenSolver<Matrix> es(q.matrix_);
    if (es.info() != Eigen::Success) throw DegenerateForm("eigendecomposition failed");
    Vector evals = es.eigenvalues();
    Matrix evecs = es.eigenvectors();

    const int d = static_cast<int>(entries.rows());
    double lmax = 0.0, lmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j) {
        lmax = std::max(lmax, std::abs(evals(j)));
        lmin = std::min(lmin, std::abs(evals(j)));
    }
    if (lmin <= kDegeneracyTol * lmax)
        throw DegenerateForm("form is degenerate: min|lambda| <= 1e-10 * max|lambda|");

    // Order columns positive-eigenvalue-first, each group by descending |lambda|.
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const bool pa = evals(a) > 0, pb = evals(b) > 0;
        if (pa != pb) return pa;
        if (std::abs(evals(a)) != std::abs(evals(b))) return std::abs(evals(a)) > std::abs(evals(b));
        return a < b;
    });

    q.eigenvalues_.resize(d);
    Matrix u(d, d);
    int p = 0, nneg = 0;
    for (int k = 0; k < d; ++k) {
        q.eigenvalues_(k) = evals(order[k]);
        u.col(k) = evecs.col(order[k]);
        (q.eigenvalues_(k) > 0 ? p : nneg)++;
    }
    q.signature_ = {p, nneg};
    q.lambda_min_ = lmin;
    q.lambda_max_ = lmax;

    // g0 = diag(sqrt|lambda|) U^T gives Q(v) = Q0(g0 v), Q0 = diag(+-1).
    q.eigenbasis_ = u;
    q.diagonalizer_ = q.eigenvalues_.cwiseAbs().cwiseSqrt().asDiagonal() * u.transpose();
    q.abs_det_g0_ = std::sqrt(std::abs(q.eigenvalues_.prod()));
    q.rescale_factor_ = 1.0;
    return q;
}

double QuadraticForm::vol_factor(int n) const {
    return 1.0 / std::pow(abs_det_g0_, n);
}

double QuadraticForm::evaluate(const Vector& v) const {
    if (v.size() != matrix_.rows())
        throw DimensionMismatch("vector length does not match form dimension");
    return v.dot(matrix_ * v);
}

double QuadraticForm::evaluate_plus(const Vector& v) const {
    if (v.size() != matrix_.rows())
        throw DimensionMismatch("vector length does not match form dimension");
    return (matrix_ * v).squaredNorm();
}

QuadraticForm QuadraticForm::rescale_to_min_eigen(int n) const {
    if (n < 2) throw DomainError("rescale_to_min_eigen requires n >= 2");
    if (lambda_min_ >= static_cast<double>(n - 1)) return *this;
    const double c = static_cast<double>(n - 1) / lambda_min_;
    return scaled(c);
}

QuadraticForm QuadraticForm::scaled(double c) const {
    QuadraticForm q = construct(Matrix(c * matrix_));
    q.rescale_factor_ = rescale_factor_ * c;
    return q;
}

DiagonalizeResult diagonalize(const QuadraticForm& q, int n) {
    return DiagonalizeResult{q.diagonalizer(), q.signature(), q.vol_factor(n)};
}

}  // namespace qfc
