#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qauth/attacks.hpp"
#include "qauth/linalg.hpp"
#include "qauth/protocol.hpp"

namespace qauth::diagnostics {

using linalg::ComplexMatrix;
using protocol::EncodingUnitary;

/// Relative position of the two code subspaces: V0 = span{|00>, |10>} (valid
/// tag) and V1 = U_E V0.
struct SubspaceGeometry {
  bool spans = false;
  bool orthogonal = false;
  /// Ascending principal angles between V0 and V1, in radians.
  std::vector<double> principal_angles;
};

inline SubspaceGeometry code_subspace_geometry(const EncodingUnitary& u, double rank_tol = kDefaultTolerances.sanity) {
  // Orthonormal bases as 4x2 column stacks. Valid-tag states |m, 0> sit at
  // flattened indices 0 and 2.
  ComplexMatrix v0(4, 2);
  v0(0, 0) = 1.0;
  v0(2, 1) = 1.0;
  const ComplexMatrix v1 = u.matrix() * v0;

  ComplexMatrix stacked(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      stacked(r, c) = v0(r, c);
      stacked(r, c + 2) = v1(r, c);
    }

  SubspaceGeometry out;
  out.spans = linalg::singular_values(stacked).back() > rank_tol;

  const ComplexMatrix cross = adjoint(v0) * v1;
  out.orthogonal = std::all_of(cross.entries().begin(), cross.entries().end(),
                               [&](const linalg::Complex& z) { return std::abs(z) < rank_tol; });
  for (double s : linalg::singular_values(cross)) out.principal_angles.push_back(std::acos(std::clamp(s, 0.0, 1.0)));
  return out;
}

struct SecurityReport {
  /// Descending singular values of U00, U01, U10, U11.
  std::array<std::vector<double>, 4> block_sigmas;
  bool u01_nonsingular = false;
  bool u00_nonsingular = false;
  double no_message_pf = 0.0;
  bool measurement_feasible = false;
  bool unitary_attack_exists = false;
  /// Why the construction was refused, when it was.
  std::optional<std::string> attack_refusal;
  bool subspaces_span = false;
  bool subspaces_orthogonal = false;
  std::vector<double> principal_angles;
};

inline SecurityReport security_report(const EncodingUnitary& u, const Tolerances& tol = kDefaultTolerances) {
  SecurityReport r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r.block_sigmas[2 * i + j] = linalg::singular_values(u.block(i, j));

  auto nonsingular = [&](const std::vector<double>& sv) { return sv[0] > 0.0 && sv[1] >= tol.decision * sv[0]; };
  r.u00_nonsingular = nonsingular(r.block_sigmas[0]);
  r.u01_nonsingular = nonsingular(r.block_sigmas[1]);

  r.no_message_pf = attacks::optimal_forgery(u, tol).p_f;
  r.measurement_feasible = attacks::measurement_attack(u, tol.sanity).feasible;
  try {
    attacks::construct_unitary_attack(u, tol);
    r.unitary_attack_exists = true;
  } catch (const Error& e) {
    r.attack_refusal = e.what();
  }

  auto geometry = code_subspace_geometry(u, tol.sanity);
  r.subspaces_span = geometry.spans;
  r.subspaces_orthogonal = geometry.orthogonal;
  r.principal_angles = std::move(geometry.principal_angles);
  return r;
}

}  // namespace qauth::diagnostics
