#pragma once

#include <cmath>

#include "qauth/linalg/matrix.hpp"

// Single-qubit operators in the computational basis.
namespace qauth::linalg::gates {

inline ComplexMatrix identity() { return ComplexMatrix::identity(2); }
inline ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return ComplexMatrix{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
inline ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
inline ComplexMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return ComplexMatrix{{h, h}, {h, -h}};
}

}  // namespace qauth::linalg::gates
