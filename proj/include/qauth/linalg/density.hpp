#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qauth/linalg/eig.hpp"
#include "qauth/linalg/matrix.hpp"
#include "qauth/tolerances.hpp"

namespace qauth::linalg {

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
/// Construction throws InvariantError when any of these fail beyond
/// `Tolerances::sanity`.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m, const Tolerances& tol = kDefaultTolerances) : m_(std::move(m)) {
    if (!m_.is_square()) throw InvariantError("DensityOperator: matrix is " + m_.shape());
    const double norm = frobenius_norm(m_);
    const double asym = hermiticity_residual(m_);
    if (asym > tol.sanity * norm) {
      std::ostringstream msg;
      msg << "DensityOperator: not Hermitian (||M - M^dagger||_F = " << asym << ")";
      throw InvariantError(msg.str());
    }
    const Complex tr = trace(m_);
    if (std::abs(tr - Complex(1.0)) > tol.sanity) {
      std::ostringstream msg;
      msg << "DensityOperator: trace is " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
          << "i, expected 1";
      throw InvariantError(msg.str());
    }
    const double min_eig = hermitian_eig(m_, tol.sanity).values.back();
    if (min_eig < -tol.sanity) {
      std::ostringstream msg;
      msg << "DensityOperator: smallest eigenvalue " << min_eig << " is negative";
      throw InvariantError(msg.str());
    }
  }

  /// Pure state |v><v| from a (not necessarily normalised) column vector.
  static DensityOperator pure(const ComplexMatrix& v) {
    if (v.cols() != 1) throw DimensionError("DensityOperator::pure: expected a column vector, got " + v.shape());
    ComplexMatrix u = v;
    u *= 1.0 / frobenius_norm(v);
    return DensityOperator(projector(u));
  }

  static DensityOperator basis(std::size_t dim, std::size_t k) {
    return DensityOperator(projector(ComplexMatrix::basis_vector(dim, k)));
  }

  static DensityOperator maximally_mixed(std::size_t dim) {
    return DensityOperator(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  double purity() const { return trace(m_ * m_).real(); }

 private:
  ComplexMatrix m_;
};

/// Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("fidelity: states of dimension " + std::to_string(rho.dim()) + " and " +
                         std::to_string(sigma.dim()));
  }
  // Eigenvalues at round-off level are zeros; their square roots would
  // otherwise contribute O(sqrt(eps)).
  constexpr double kFloor = 64 * std::numeric_limits<double>::epsilon();
  const auto root_of = [](double x) { return x > kFloor ? std::sqrt(x) : 0.0; };
  const auto root = hermitian_function(rho.matrix(), root_of);
  ComplexMatrix inner = root * sigma.matrix() * root;
  inner = (inner + adjoint(inner)) * Complex(0.5);
  // inner can be exactly zero (orthogonal pure states); skip the relative
  // Hermiticity gate, the matrix was symmetrised above.
  const auto eig = hermitian_eig(inner, INFINITY);
  double s = 0.0;
  for (double x : eig.values) s += root_of(x);
  return std::clamp(s * s, 0.0, 1.0);
}

/// Trace distance (1/2) ||rho - sigma||_1.
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("trace_distance: states of dimension " + std::to_string(rho.dim()) + " and " +
                         std::to_string(sigma.dim()));
  }
  const ComplexMatrix diff = rho.matrix() - sigma.matrix();
  const auto eig = hermitian_eig(diff, INFINITY);
  double s = 0.0;
  for (double x : eig.values) s += std::abs(x);
  return 0.5 * s;
}

}  // namespace qauth::linalg
