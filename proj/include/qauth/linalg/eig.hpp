#pragma once

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qauth/linalg/matrix.hpp"
#include "qauth/tolerances.hpp"

namespace qauth::linalg {

struct HermitianEigen {
  /// Real eigenvalues, descending.
  std::vector<double> values;
  /// Orthonormal eigenvectors as columns, in the order of `values`.
  ComplexMatrix vectors;

  ComplexMatrix vector(std::size_t k) const { return submatrix(vectors, 0, k, vectors.rows(), 1); }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q). The rotation is the product of
// a phase on column q that makes a(p,q) real and positive, followed by the
// classical real symmetric Jacobi rotation.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = std::conj(apq) / r;  // e^{-i arg(apq)}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // J restricted to the (p,q) plane: [[c, s], [-s*phase, c*phase]].
  const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;
  const std::size_t n = a.rows();

  // A <- A J (columns p, q).
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  // A <- J^dagger A (rows p, q).
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// Throws InvariantError if ||m - m^dagger||_F exceeds `hermitian_tol * ||m||_F`.
inline HermitianEigen hermitian_eig(const ComplexMatrix& m, double hermitian_tol = kDefaultTolerances.sanity,
                                    double convergence_tol = kDefaultTolerances.jacobi) {
  if (!m.is_square()) throw DimensionError("hermitian_eig: matrix is " + m.shape());
  const double norm = frobenius_norm(m);
  const double asym = hermiticity_residual(m);
  if (asym > hermitian_tol * norm) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian, ||m - m^dagger||_F = " << asym << " (||m||_F = " << norm << ")";
    throw InvariantError(msg.str());
  }

  const std::size_t n = m.rows();
  // Work on the exact Hermitian part.
  ComplexMatrix a = (m + adjoint(m)) * Complex(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double target = convergence_tol * norm;
  for (int sweep = 0; sweep < 100 && detail::off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }
  if (detail::off_diagonal_norm(a) > target && norm > 0.0) {
    throw NumericError("hermitian_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi: columns are
/// rotated pairwise until mutually orthogonal and the singular values are the
/// resulting column norms. Small singular values stay accurate to machine
/// precision relative to ||m|| (no squaring). Returns min(rows, cols) values.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  ComplexMatrix w = m;
  const std::size_t rows = w.rows(), cols = w.cols();
  auto column_dot = [&](std::size_t p, std::size_t q) {
    Complex s{};
    for (std::size_t r = 0; r < rows; ++r) s += std::conj(w(r, p)) * w(r, q);
    return s;
  };

  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p)
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = column_dot(p, p).real();
        const double beta = column_dot(q, q).real();
        const Complex gamma = column_dot(p, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Same rotation as the Hermitian Jacobi step on the 2x2 Gram matrix.
        const Complex phase = std::conj(gamma) / g;
        const double tau = (beta - alpha) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;
        for (std::size_t r = 0; r < rows; ++r) {
          const Complex wp = w(r, p), wq = w(r, q);
          w(r, p) = wp * jpp + wq * jqp;
          w(r, q) = wp * jpq + wq * jqq;
        }
      }
    if (!rotated) break;
  }

  std::vector<double> norms(cols);
  for (std::size_t c = 0; c < cols; ++c) norms[c] = std::sqrt(column_dot(c, c).real());
  std::sort(norms.begin(), norms.end(), std::greater<>{});
  norms.resize(std::min(rows, cols));
  return norms;
}

/// f(m) = V f(Lambda) V^dagger for Hermitian m.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f, double hermitian_tol = kDefaultTolerances.sanity) {
  const auto eig = hermitian_eig(m, hermitian_tol);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex fk = f(eig.values[k]);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out(r, c) += fk * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
  }
  return out;
}

/// Inverse of a 2x2 matrix via the adjugate. Throws PreconditionError when
/// sigma_min / sigma_max < `min_condition_ratio`.
inline ComplexMatrix inverse_2x2(const ComplexMatrix& m, double min_condition_ratio = kDefaultTolerances.decision) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("inverse_2x2: matrix is " + m.shape());
  const auto sv = singular_values(m);
  if (sv[0] == 0.0 || sv[1] / sv[0] < min_condition_ratio) {
    std::ostringstream msg;
    msg << "inverse_2x2: matrix is numerically singular (sigma_min = " << sv[1] << ", sigma_max = " << sv[0] << ")";
    throw PreconditionError(msg.str());
  }
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return ComplexMatrix{{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
}

}  // namespace qauth::linalg
