#include "qfc/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "qfc/errors.hpp"

namespace qfc {

PlaneAction::PlaneAction(double a, double b, double c, double d) {
    m << a, b, c, d;
    if (std::abs(m.determinant() - 1.0) > 1e-12)
        throw DomainError("PlaneAction must have determinant 1");
}

PlaneAction PlaneAction::diagonal_flow(double T) {
    if (T <= 0.0) throw DomainError("diagonal_flow: T > 0");
    return PlaneAction(T, 0.0, 0.0, 1.0 / T);
}

PlaneAction PlaneAction::horocycle(double x) { return PlaneAction(1.0, x, 0.0, 1.0); }

PlaneAction PlaneAction::rotation(double theta) {
    return PlaneAction(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta));
}

PlaneAction PlaneAction::composed(const PlaneAction& other) const {
    Eigen::Matrix2d p = m * other.m;
    return PlaneAction(p(0, 0), p(0, 1), p(1, 0), p(1, 1));
}

double PlaneAction::operator_norm() const {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    return svd.singularValues()(0);
}

namespace {

Matrix interleave_permutation(int d) {
    Matrix pi = Matrix::Zero(2 * d, 2 * d);
    for (int j = 0; j < d; ++j) {
        pi(2 * j, j) = 1.0;          // m'_j
        pi(2 * j + 1, d + j) = 1.0;  // mbar'_j
    }
    return pi;
}

}  // namespace

Lattice lambda_q(const QuadraticForm& q) {
    const int d = q.dim();
    const Matrix& u = q.eigenbasis();
    Vector inv_abs = q.eigenvalues().cwiseAbs().cwiseInverse();
    Matrix qplus_inv_sqrt = u * inv_abs.asDiagonal() * u.transpose();  // |Q|^{-1}
    Matrix sign_q = qplus_inv_sqrt * q.matrix();                       // |Q|^{-1} Q

    Matrix block = Matrix::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = qplus_inv_sqrt;
    block.bottomRightCorner(d, d) = sign_q;
    Lattice lat;
    lat.basis = interleave_permutation(d) * block;
    return lat;
}

Lattice apply_action(const Lattice& lat, const PlaneAction& g) {
    const int pairs = lat.rank() / 2;
    Lattice out;
    out.basis = lat.basis;
    for (int col = 0; col < lat.rank(); ++col) {
        for (int j = 0; j < pairs; ++j) {
            const double a = out.basis(2 * j, col), b = out.basis(2 * j + 1, col);
            out.basis(2 * j, col) = g.m(0, 0) * a + g.m(0, 1) * b;
            out.basis(2 * j + 1, col) = g.m(1, 0) * a + g.m(1, 1) * b;
        }
    }
    return out;
}

double h_form(const QuadraticForm& q, double T, double x, const Vector& m, const Vector& mbar) {
    const double xp = 2.0 / M_PI * x;
    const Vector w = m + xp * (q.matrix() * mbar);
    // Q_+^{-1}(w) = || |Q|^{-1} w ||^2, evaluated through the eigenbasis
    const Vector u = q.eigenbasis().transpose() * w;
    double qp_inv = 0.0;
    for (int j = 0; j < q.dim(); ++j) {
        const double lam = q.eigenvalues()(j);
        qp_inv += u(j) * u(j) / (lam * lam);
    }
    return T * T * qp_inv + mbar.squaredNorm() / (T * T);
}

double h_form_lattice(const QuadraticForm& q, double T, double x, const Vector& m,
                      const Vector& mbar) {
    const Lattice lam = lambda_q(q);
    Vector coords(2 * q.dim());
    coords.head(q.dim()) = m;
    coords.tail(q.dim()) = mbar;
    const Lattice moved =
        apply_action(apply_action(lam, PlaneAction::horocycle(2.0 / M_PI * x)),
                     PlaneAction::diagonal_flow(T));
    return (moved.basis * coords).squaredNorm();
}

Matrix lll_reduce(const Matrix& basis, double delta) {
    Matrix b = basis;
    const int n = static_cast<int>(b.cols());
    Matrix bstar = b;
    Matrix mu = Matrix::Identity(n, n);
    Vector norms(n);

    auto gram_schmidt = [&]() {
        for (int i = 0; i < n; ++i) {
            bstar.col(i) = b.col(i);
            for (int j = 0; j < i; ++j) {
                mu(i, j) = b.col(i).dot(bstar.col(j)) / norms(j);
                bstar.col(i) -= mu(i, j) * bstar.col(j);
            }
            norms(i) = bstar.col(i).squaredNorm();
        }
    };
    gram_schmidt();

    int k = 1;
    int guard = 0;
    while (k < n) {
        if (++guard > 100000) throw CapacityExceeded("lll_reduce: iteration guard tripped");
        // size reduction
        for (int j = k - 1; j >= 0; --j) {
            const double r = std::round(mu(k, j));
            if (r != 0.0) {
                b.col(k) -= r * b.col(j);
                gram_schmidt();
            }
        }
        if (norms(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norms(k - 1)) {
            ++k;
        } else {
            b.col(k).swap(b.col(k - 1));
            gram_schmidt();
            k = std::max(k - 1, 1);
        }
    }
    return b;
}

namespace {

// Gaussian-heuristic estimate of |{v : ||v|| <= mu}| for the refusal check.
double heuristic_count(int rank, double mu, double covol) {
    const double logv = (rank / 2.0) * std::log(M_PI) + rank * std::log(mu) -
                        std::lgamma(rank / 2.0 + 1.0);
    return std::exp(logv) / covol + std::pow(1.0 + 2.0 * mu, rank / 2.0);
}

}  // namespace

namespace {

/// Fincke-Pohst depth-first enumeration of ||reduced x|| <= radius with
/// floating pruning bounds; emits each integer coordinate vector once.
template <typename Emit>
std::uint64_t enumerate_ellipsoid(const Matrix& reduced, double radius, std::uint64_t cap,
                                  const Emit& emit) {
    const int n = static_cast<int>(reduced.cols());
    Matrix gram = reduced.transpose() * reduced;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw DegenerateForm("short_vectors: basis numerically singular");
    Matrix R = llt.matrixU();  // gram = R^T R, R upper triangular

    const double bound2 = radius * radius * (1.0 + 1e-9);
    std::vector<double> center(n, 0.0), partial(n + 1, 0.0);
    std::vector<long long> xcoord(n, 0), hi(n, -1);
    std::uint64_t visited = 0;

    int level = n - 1;
    auto set_range = [&](int lev) {
        double c = 0.0;
        for (int j = lev + 1; j < n; ++j) c += R(lev, j) * static_cast<double>(xcoord[j]);
        center[lev] = c;
        const double room = bound2 - partial[lev + 1];
        if (room < 0.0) {
            xcoord[lev] = 1;
            hi[lev] = 0;
            return;
        }
        const double half = std::sqrt(room) / R(lev, lev);
        xcoord[lev] = static_cast<long long>(std::ceil(-half - c / R(lev, lev) - 1e-12));
        hi[lev] = static_cast<long long>(std::floor(half - c / R(lev, lev) + 1e-12));
    };
    set_range(level);
    Vector coords(n);
    for (;;) {
        if (xcoord[level] > hi[level]) {
            ++level;
            if (level > n - 1) break;
            ++xcoord[level];
            continue;
        }
        const double t = R(level, level) * static_cast<double>(xcoord[level]) + center[level];
        const double newpartial = partial[level + 1] + t * t;
        if (newpartial > bound2) {
            ++xcoord[level];
            continue;
        }
        if (level == 0) {
            for (int j = 0; j < n; ++j) coords(j) = static_cast<double>(xcoord[j]);
            if (++visited > cap) throw CapacityExceeded("lattice enumeration exceeded the cap");
            emit(coords);
            ++xcoord[level];
        } else {
            partial[level] = newpartial;
            --level;
            set_range(level);
        }
    }
    return visited;
}

}  // namespace

ShortVectorResult short_vectors(const Lattice& lat, double mu, Ball norm, bool count_only,
                                const ShortVectorLimits& limits) {
    if (mu <= 0.0) throw DomainError("short_vectors: mu > 0");
    const int n = lat.rank();
    const double enum_radius = norm == Ball::Euclidean ? mu : mu * std::sqrt(static_cast<double>(n));
    if (heuristic_count(n, enum_radius, lat.covolume()) > 8.0 * limits.max_vectors)
        throw CapacityExceeded("short_vectors: predicted count exceeds limit");

    Matrix reduced = lll_reduce(lat.basis);
    // map from reduced-basis coordinates back to the caller's basis
    Matrix to_input = lat.basis.colPivHouseholderQr().solve(reduced);

    ShortVectorResult out;
    Vector vec(n);
    enumerate_ellipsoid(reduced, enum_radius, limits.max_vectors * 8, [&](const Vector& coords) {
        vec.noalias() = reduced * coords;
        const bool ok = norm == Ball::Euclidean ? vec.squaredNorm() <= mu * mu
                                                : vec.lpNorm<Eigen::Infinity>() <= mu;
        if (!ok) return;
        if (++out.count > limits.max_vectors)
            throw CapacityExceeded("short_vectors: count exceeded limit");
        if (!count_only) {
            out.vectors.push_back(vec);
            out.coordinates.push_back(to_input * coords);
        }
    });
    return out;
}

double psi(const QuadraticForm& q, double T, double x, double tol,
           const ShortVectorLimits& limits) {
    if (T < 1.0) throw DomainError("psi: T >= 1");
    if (!(tol > 0.0 && tol <= 1e-2)) throw DomainError("psi: tol in (0, 1e-2]");
    const Lattice moved =
        apply_action(apply_action(lambda_q(q), PlaneAction::horocycle(2.0 / M_PI * x)),
                     PlaneAction::diagonal_flow(T));
    Matrix reduced = lll_reduce(moved.basis);

    double radius = std::sqrt(std::log(1.0 / tol) + 4.0);
    double value = 0.0;
    Vector vec(moved.rank());
    for (int iter = 0; iter < 12; ++iter) {
        double sum = 0.0;
        enumerate_ellipsoid(reduced, radius, limits.max_vectors, [&](const Vector& coords) {
            vec.noalias() = reduced * coords;
            sum += std::exp(-vec.squaredNorm());
        });
        if (iter > 0 && std::abs(sum - value) <= tol * sum) return sum;
        value = sum;
        radius += 0.5;
    }
    throw TruncationBudgetExceeded("psi: truncation did not settle within budget");
}

}  // namespace qfc
