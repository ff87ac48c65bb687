#ifndef QFC_BESSEL_HPP
#define QFC_BESSEL_HPP

namespace qfc {

/// Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0.
///
/// Power series for x <= max(12, 2 nu); otherwise trigonometric seeds plus
/// forward recurrence, which in that region is stable (x >= 2 nu keeps the
/// recurrence in the oscillatory regime). The large-argument branch requires
/// nu on the integer/half-integer grid, which covers every order nd/2 used
/// here. Absolute error <= 1e-10 where the two branches overlap.
///
/// Throws DomainError for nu > 60, x > 1e6, negative arguments, or an
/// off-grid order in the large-argument branch.
double bessel_j(double nu, double x);

}  // namespace qfc

#endif
