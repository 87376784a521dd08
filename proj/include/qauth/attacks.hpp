#pragma once

// Adversary strategies against the tagged-qubit protocol:
//
//   * no-message forgery: prepare a state that passes Bob's check with no
//     authentic transmission present;
//   * measurement attack: distinguish the two key branches in the channel
//     by looking at the tag;
//   * unitary message attack: rotate the in-flight tagged message by a
//     block-diagonal A_E whose conjugate B_E = U^dagger A_E U is also
//     block-diagonal, so Bob accepts a modified message with certainty.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qauth/errors.hpp"
#include "qauth/linalg.hpp"
#include "qauth/protocol.hpp"
#include "qauth/tolerances.hpp"

namespace qauth::attacks {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::DensityOperator;
using protocol::EncodingUnitary;

// ---------------------------------------------------------------------------
// No-message attack

struct NoMessageResult {
  /// Q = U P U^dagger + P, with P the projector onto valid-tag states.
  ComplexMatrix q_operator;
  double lambda_max = 0.0;
  /// Pure state on the top eigenvector of Q.
  DensityOperator optimal_forgery;
  double p_f = 0.0;
};

/// P = |00><00| + |10><10| = 1_M (x) |0><0|_T.
inline ComplexMatrix valid_tag_projector() {
  return tensor(ComplexMatrix::identity(2), projector(ComplexMatrix::basis_vector(2, 0)));
}

/// Probability that a forged tagged message passes Bob's decode-and-verify:
/// <0| tr_M[(rho + U^dagger rho U)/2] |0>_T.
inline double forgery_probability(const DensityOperator& forged, const EncodingUnitary& u) {
  if (forged.dim() != 4) {
    throw DimensionError("forgery_probability: forged state must be 4-dimensional, got " +
                         std::to_string(forged.dim()));
  }
  const ComplexMatrix& rho = forged.matrix();
  const ComplexMatrix decoded = (rho + adjoint(u.matrix()) * rho * u.matrix()) * Complex(0.5);
  const ComplexMatrix tag = partial_trace(decoded, protocol::tagged_layout(), {0});
  return std::clamp(tag(0, 0).real(), 0.0, 1.0);
}

/// Optimal no-message forgery: the top eigenvector of Q, with P_f = lambda_max / 2.
inline NoMessageResult optimal_forgery(const EncodingUnitary& u, const Tolerances& tol = kDefaultTolerances) {
  const ComplexMatrix p = valid_tag_projector();
  const ComplexMatrix q = u.matrix() * p * adjoint(u.matrix()) + p;
  const auto eig = linalg::hermitian_eig(q, tol.sanity);
  auto forged = DensityOperator::pure(eig.vector(0));
  NoMessageResult out{q, eig.values[0], forged, std::clamp(eig.values[0] / 2.0, 0.0, 1.0)};

  const double direct = forgery_probability(out.optimal_forgery, u);
  if (std::abs(direct - out.p_f) > tol.sanity) {
    std::ostringstream msg;
    msg << "optimal_forgery: lambda_max/2 = " << out.p_f << " but the forged state passes with " << direct;
    throw NumericError(msg.str());
  }
  return out;
}

/// True when U01 is numerically singular, i.e. sigma_min(U01) < tol * sigma_max(U01)
/// (a zero block counts as singular). Then some forged state passes with certainty.
inline bool no_message_vulnerable(const EncodingUnitary& u, double tol = kDefaultTolerances.decision) {
  const auto sv = linalg::singular_values(u.u01());
  return sv[0] == 0.0 || sv[1] < tol * sv[0];
}

/// Best forgery probability found by direct search over pure states:
/// `samples` uniformly random states, then `refine_steps` rounds of
/// perturb-and-keep-if-better around the best one. This never touches Q, so
/// it can serve as an independent lower bound on the eigen-method optimum.
inline double search_forgery_probability(const EncodingUnitary& u, linalg::Rng& rng, int samples = 10000,
                                         int refine_steps = 200) {
  auto score = [&](const ComplexMatrix& v) { return forgery_probability(DensityOperator::pure(v), u); };

  ComplexMatrix best = linalg::random_pure_vector(4, rng);
  double best_score = score(best);
  for (int i = 1; i < samples; ++i) {
    ComplexMatrix v = linalg::random_pure_vector(4, rng);
    const double s = score(v);
    if (s > best_score) {
      best_score = s;
      best = std::move(v);
    }
  }

  // (1+1) evolution strategy with a success-driven step size. Each round
  // proposes a few perturbations and keeps the best improving one.
  constexpr int kProposalsPerStep = 8;
  double step = 0.1;
  for (int it = 0; it < refine_steps; ++it) {
    bool improved = false;
    for (int k = 0; k < kProposalsPerStep; ++k) {
      ComplexMatrix v = best + linalg::ginibre(4, 1, rng) * Complex(step);
      v *= 1.0 / frobenius_norm(v);
      const double s = score(v);
      if (s > best_score) {
        best_score = s;
        best = std::move(v);
        improved = true;
      }
    }
    step = improved ? std::min(step * 1.5, 1.0) : std::max(step * 0.6, 1e-7);
  }
  return best_score;
}

// ---------------------------------------------------------------------------
// Measurement attack

struct MeasurementResult {
  /// Worst-case probability that an honest branch-U tag still reads |0>,
  /// minimised over messages: sigma_min(U00)^2.
  double min_overlap = 0.0;
  /// Eve can perfectly tell the two key branches apart.
  bool feasible = false;
};

/// <0| tr_M[U (|phi><phi| (x) |0><0|) U^dagger] |0>_T for a message vector phi.
inline double tag_zero_overlap(const EncodingUnitary& u, const ComplexMatrix& phi) {
  const auto message = DensityOperator::pure(phi);
  const auto tagged = protocol::attach_tag(message);
  const ComplexMatrix rotated = u.matrix() * tagged.matrix() * adjoint(u.matrix());
  return partial_trace(rotated, protocol::tagged_layout(), {0})(0, 0).real();
}

inline MeasurementResult measurement_attack(const EncodingUnitary& u, double tol = kDefaultTolerances.sanity) {
  const auto sv = linalg::singular_values(u.u00());
  MeasurementResult out;
  out.min_overlap = sv.back() * sv.back();
  out.feasible = out.min_overlap < tol;
  return out;
}

// ---------------------------------------------------------------------------
// Unitary message attack

struct AttackArtifacts {
  /// Block-diagonal attack unitary A_E = A00 (x) |0><0| + A11 (x) |1><1|.
  ComplexMatrix a_operator;
  /// B_E = U^dagger A_E U, block-diagonal by construction.
  ComplexMatrix b_operator;
  /// G = U01 U11^{-1} U10 U00^{-1}, Hermitian for unitary U.
  ComplexMatrix g_operator;
  double intertwining_residual = 0.0;
  double nonscalarity = 0.0;

  double g_hermiticity_residual = 0.0;  // relative to ||G||_F
  double a11_branch_gap = 0.0;          // distance between the two closed forms for A11
  double a_unitarity_residual = 0.0;
  double b_unitarity_residual = 0.0;
  double b_off_diagonal = 0.0;  // max Frobenius norm of B01, B10

  ComplexMatrix a_block(std::size_t i) const { return submatrix_block(a_operator, i); }
  ComplexMatrix b_block(std::size_t i) const { return submatrix_block(b_operator, i); }

 private:
  static ComplexMatrix submatrix_block(const ComplexMatrix& m, std::size_t i) {
    ComplexMatrix b(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) b(r, c) = m(2 * r + i, 2 * c + i);
    return b;
  }
};

/// min over phases theta of ||A - e^{i theta} I||_F; the minimiser is the
/// phase of tr(A).
inline double nonscalarity(const ComplexMatrix& a) {
  const Complex tr = trace(a);
  const Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0);
  return distance(a, ComplexMatrix::identity(a.rows()) * phase);
}

/// A non-scalar unitary commuting with Hermitian 2x2 G: +1 on the top
/// eigenvalue cluster, -1 on the rest; Z when G is scalar.
inline ComplexMatrix commuting_reflection(const ComplexMatrix& g, double cluster_gap = 1e-6) {
  const auto eig = linalg::hermitian_eig(g, INFINITY);
  const double scale = std::max({1.0, std::abs(eig.values.front()), std::abs(eig.values.back())});
  if (eig.values.front() - eig.values.back() <= cluster_gap * scale) return linalg::gates::pauli_z();

  const std::size_t n = g.rows();
  ComplexMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double sign = (eig.values[0] - eig.values[k] <= cluster_gap * scale) ? 1.0 : -1.0;
    const auto v = eig.vector(k);
    a += projector(v) * Complex(sign);
  }
  return a;
}

/// Builds block-diagonal unitaries A_E, B_E with U B_E = A_E U and A_E not a
/// multiple of the identity. Requires every 2x2 block of U to be
/// nonsingular; throws PreconditionError naming the first singular block.
inline AttackArtifacts construct_unitary_attack(const EncodingUnitary& u, const Tolerances& tol = kDefaultTolerances) {
  const std::array<ComplexMatrix, 4> blocks{u.u00(), u.u01(), u.u10(), u.u11()};
  static constexpr std::array<const char*, 4> names{"U00", "U01", "U10", "U11"};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto sv = linalg::singular_values(blocks[k]);
    if (sv[0] == 0.0 || sv[1] / sv[0] < tol.decision) {
      std::ostringstream msg;
      msg << names[k] << " singular (sigma_min = " << sv[1] << ", sigma_max = " << sv[0] << ")";
      throw PreconditionError(msg.str());
    }
  }
  const auto& [u00, u01, u10, u11] = blocks;
  const ComplexMatrix u00_inv = linalg::inverse_2x2(u00, tol.decision);
  const ComplexMatrix u10_inv = linalg::inverse_2x2(u10, tol.decision);
  const ComplexMatrix u11_inv = linalg::inverse_2x2(u11, tol.decision);
  const ComplexMatrix u10_adj_inv = linalg::inverse_2x2(adjoint(u10), tol.decision);
  const ComplexMatrix u11_adj_inv = linalg::inverse_2x2(adjoint(u11), tol.decision);

  AttackArtifacts out{ComplexMatrix(4, 4), ComplexMatrix(4, 4), u01 * u11_inv * u10 * u00_inv};
  const ComplexMatrix& g = out.g_operator;
  const double g_norm = frobenius_norm(g);
  out.g_hermiticity_residual = linalg::hermiticity_residual(g) / g_norm;
  if (out.g_hermiticity_residual > tol.decision) {
    std::ostringstream msg;
    msg << "construct_unitary_attack: G is not Hermitian (relative residual " << out.g_hermiticity_residual
        << "); the encoding is not unitary";
    throw NumericError(msg.str());
  }

  const ComplexMatrix a00 = commuting_reflection((g + adjoint(g)) * Complex(0.5));
  const ComplexMatrix a11 = -(u10_adj_inv * adjoint(u00) * a00 * u01 * u11_inv);
  const ComplexMatrix a11_alt = -(u11_adj_inv * adjoint(u01) * a00 * u00 * u10_inv);
  out.a11_branch_gap = distance(a11, a11_alt);

  const ComplexMatrix zero(2, 2);
  out.a_operator = EncodingUnitary::assemble_blocks(a00, zero, zero, a11);
  out.b_operator = adjoint(u.matrix()) * out.a_operator * u.matrix();

  out.intertwining_residual = distance(u.matrix() * out.b_operator, out.a_operator * u.matrix());
  out.nonscalarity = nonscalarity(out.a_operator);
  out.a_unitarity_residual = linalg::unitarity_residual(out.a_operator);
  out.b_unitarity_residual = linalg::unitarity_residual(out.b_operator);
  ComplexMatrix b01(2, 2), b10(2, 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      b01(r, c) = out.b_operator(2 * r, 2 * c + 1);
      b10(r, c) = out.b_operator(2 * r + 1, 2 * c);
    }
  out.b_off_diagonal = std::max(frobenius_norm(b01), frobenius_norm(b10));

  const bool ok = out.a_unitarity_residual < tol.decision && out.b_unitarity_residual < tol.decision &&
                  out.b_off_diagonal < tol.sanity && out.intertwining_residual < tol.decision &&
                  out.nonscalarity > 1e-6 && out.a11_branch_gap < tol.decision;
  if (!ok) {
    std::ostringstream msg;
    msg << "construct_unitary_attack: artifact check failed (unitarity A " << out.a_unitarity_residual << ", B "
        << out.b_unitarity_residual << "; off-diagonal " << out.b_off_diagonal << "; intertwining "
        << out.intertwining_residual << "; nonscalarity " << out.nonscalarity << "; A11 branch gap "
        << out.a11_branch_gap << ")";
    throw NumericError(msg.str());
  }
  return out;
}

struct MessageAttackOutcome {
  double accept_probability = 0.0;
  DensityOperator decoded_message;
  double fidelity_to_original = 0.0;
};

/// Closed form of Bob's output under the attack: each key branch sees one of
/// the two diagonal blocks, (A00 rho A00^dagger + B00 rho B00^dagger) / 2.
inline DensityOperator predicted_decoded_message(const DensityOperator& message, const AttackArtifacts& art) {
  const ComplexMatrix a00 = art.a_block(0);
  const ComplexMatrix b00 = art.b_block(0);
  const ComplexMatrix& rho = message.matrix();
  return DensityOperator((a00 * rho * adjoint(a00) + b00 * rho * adjoint(b00)) * Complex(0.5));
}

/// Full 16-dimensional run: singlet key, honest encoding, Eve applies A_E to
/// the channel, Bob decodes and verifies.
inline MessageAttackOutcome simulate_message_attack(const DensityOperator& message, const EncodingUnitary& u,
                                                    const AttackArtifacts& art,
                                                    const Tolerances& tol = kDefaultTolerances) {
  const double residual = distance(u.matrix() * art.b_operator, art.a_operator * u.matrix());
  if (residual > tol.decision) {
    std::ostringstream msg;
    msg << "simulate_message_attack: artifacts do not match this encoding (||U B - A U||_F = " << residual << ")";
    throw PreconditionError(msg.str());
  }
  const auto encoded = protocol::encode(protocol::prepare(message), u);
  const auto tampered = protocol::apply_to_channel(encoded, art.a_operator);
  const auto decoded = protocol::tagged_message(protocol::decode(tampered, u));
  const auto verdict = protocol::verify_tag(decoded, tol);
  if (!verdict.accepted_message) {
    throw NumericError("simulate_message_attack: attacked message was never accepted");
  }
  return MessageAttackOutcome{verdict.accept_probability, *verdict.accepted_message,
                              linalg::fidelity(*verdict.accepted_message, message)};
}

}  // namespace qauth::attacks
