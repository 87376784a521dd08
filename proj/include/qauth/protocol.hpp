#pragma once

// Honest authentication pipeline: shared singlet key, tag attachment,
// key-controlled encoding on Alice's side, key-controlled decoding on Bob's
// side, and the orthogonal tag measurement.
//
// Basis conventions. The global space is A (x) B (x) M (x) T with Alice's key
// qubit slowest and the tag fastest. Inside E = M (x) T the flattened index is
// 2*m + t, so the block U_ij = <i|_T U |j>_T is the 2x2 matrix with entries
// U(2a + i, 2b + j).

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

#include "qauth/errors.hpp"
#include "qauth/linalg.hpp"
#include "qauth/tolerances.hpp"

namespace qauth::protocol {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::DensityOperator;

/// Factor indices of the global layout.
enum Factor : std::size_t { kAlice = 0, kBob = 1, kMessage = 2, kTag = 3 };

inline const linalg::SubsystemLayout& global_layout() {
  static const linalg::SubsystemLayout layout{2, 2, 2, 2};
  return layout;
}

inline const linalg::SubsystemLayout& tagged_layout() {
  static const linalg::SubsystemLayout layout{2, 2};
  return layout;
}

/// The publicly known 4x4 encoding unitary U_E on M (x) T.
class EncodingUnitary {
 public:
  explicit EncodingUnitary(ComplexMatrix m, const Tolerances& tol = kDefaultTolerances) : m_(std::move(m)) {
    if (m_.rows() != 4 || m_.cols() != 4) throw DimensionError("EncodingUnitary: expected 4x4, got " + m_.shape());
    const double res = linalg::unitarity_residual(m_);
    if (res > tol.sanity) {
      std::ostringstream msg;
      msg << "EncodingUnitary: not unitary (||U^dagger U - I||_F = " << res << ")";
      throw InvariantError(msg.str());
    }
  }

  /// Accepts a matrix that is unitary only to `gate_tol` (e.g. parsed from a
  /// text file with few digits) and replaces it by its unitary polar factor.
  static EncodingUnitary from_approximate(const ComplexMatrix& m, double gate_tol) {
    if (m.rows() != 4 || m.cols() != 4) throw DimensionError("EncodingUnitary: expected 4x4, got " + m.shape());
    const double res = linalg::unitarity_residual(m);
    if (res > gate_tol) {
      std::ostringstream msg;
      msg << "EncodingUnitary: not unitary within " << gate_tol << " (||U^dagger U - I||_F = " << res << ")";
      throw InvariantError(msg.str());
    }
    // U (U^dagger U)^{-1/2}
    const auto inv_sqrt =
        linalg::hermitian_function(adjoint(m) * m, [](double x) { return 1.0 / std::sqrt(x); }, INFINITY);
    return EncodingUnitary(m * inv_sqrt);
  }

  static EncodingUnitary identity() { return EncodingUnitary(ComplexMatrix::identity(4)); }
  /// I (x) X: maps the valid-tag subspace onto its orthogonal complement.
  static EncodingUnitary tag_flip() { return EncodingUnitary(tensor(linalg::gates::identity(), linalg::gates::pauli_x())); }
  static EncodingUnitary hadamard_pair() {
    return EncodingUnitary(tensor(linalg::gates::hadamard(), linalg::gates::hadamard()));
  }

  /// Reassembles sum_ij U_ij (x) |i><j|_T.
  static EncodingUnitary from_blocks(const ComplexMatrix& u00, const ComplexMatrix& u01, const ComplexMatrix& u10,
                                     const ComplexMatrix& u11) {
    return EncodingUnitary(assemble_blocks(u00, u01, u10, u11));
  }

  /// <i|_T U |j>_T as a 2x2 operator on M.
  ComplexMatrix block(std::size_t i, std::size_t j) const {
    ComplexMatrix b(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 2; ++c) b(a, c) = m_(2 * a + i, 2 * c + j);
    return b;
  }
  ComplexMatrix u00() const { return block(0, 0); }
  ComplexMatrix u01() const { return block(0, 1); }
  ComplexMatrix u10() const { return block(1, 0); }
  ComplexMatrix u11() const { return block(1, 1); }

  const ComplexMatrix& matrix() const noexcept { return m_; }

  static ComplexMatrix assemble_blocks(const ComplexMatrix& b00, const ComplexMatrix& b01, const ComplexMatrix& b10,
                                       const ComplexMatrix& b11) {
    const ComplexMatrix* blocks[2][2] = {{&b00, &b01}, {&b10, &b11}};
    ComplexMatrix out(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto& b = *blocks[i][j];
        if (b.rows() != 2 || b.cols() != 2) throw DimensionError("assemble_blocks: block is " + b.shape());
        out += tensor(b, projector_ij(i, j));
      }
    return out;
  }

 private:
  static ComplexMatrix projector_ij(std::size_t i, std::size_t j) {
    ComplexMatrix e(2, 2);
    e(i, j) = 1.0;
    return e;
  }

  ComplexMatrix m_;
};

/// 16-dimensional state of key (A, B) and tagged message (M, T).
class GlobalState {
 public:
  explicit GlobalState(DensityOperator state) : state_(std::move(state)) {
    if (state_.dim() != 16) {
      throw DimensionError("GlobalState: expected a 16-dimensional state, got " + std::to_string(state_.dim()));
    }
  }
  explicit GlobalState(ComplexMatrix m) : GlobalState(DensityOperator(std::move(m))) {}

  const DensityOperator& state() const noexcept { return state_; }
  const ComplexMatrix& matrix() const noexcept { return state_.matrix(); }

 private:
  DensityOperator state_;
};

struct QuantumSinglet {};
struct ClassicalBit {
  int value = 0;
};
struct ClassicalUniform {};

/// How the one-bit key is shared: an entangled singlet, or a classical bit
/// (known, or uniformly random and averaged over).
using KeyMode = std::variant<QuantumSinglet, ClassicalBit, ClassicalUniform>;

inline std::string key_mode_name(const KeyMode& key) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, QuantumSinglet>) return "quantum";
        else if constexpr (std::is_same_v<K, ClassicalBit>) return "classical-" + std::to_string(k.value);
        else return "classical-uniform";
      },
      key);
}

struct VerificationOutcome {
  double accept_probability = 0.0;
  double rejected_probability = 1.0;
  /// Message state conditioned on acceptance; empty when the accept branch
  /// has probability below `Tolerances::zero_probability`.
  std::optional<DensityOperator> accepted_message;
};

/// (|01> - |10>)/sqrt(2) on A (x) B.
inline DensityOperator make_singlet() {
  ComplexMatrix psi(4, 1);
  psi(1, 0) = 1.0 / std::sqrt(2.0);
  psi(2, 0) = -1.0 / std::sqrt(2.0);
  return DensityOperator(projector(psi));
}

/// rho_M (x) |0><0|_T.
inline DensityOperator attach_tag(const DensityOperator& message) {
  if (message.dim() != 2) {
    throw DimensionError("attach_tag: message must be a qubit, got dimension " + std::to_string(message.dim()));
  }
  return DensityOperator(tensor(message.matrix(), projector(ComplexMatrix::basis_vector(2, 0))));
}

/// Key state (x) tagged message.
inline GlobalState combine(const DensityOperator& key, const DensityOperator& tagged) {
  if (key.dim() != 4 || tagged.dim() != 4) throw DimensionError("combine: expected 4-dimensional key and tagged states");
  return GlobalState(tensor(key.matrix(), tagged.matrix()));
}

/// Singlet (x) rho_M (x) |0><0|_T.
inline GlobalState prepare(const DensityOperator& message) { return combine(make_singlet(), attach_tag(message)); }

/// E_AE = |0><0|_A (x) 1 + |1><1|_A (x) U_E, acting on the whole global space.
inline ComplexMatrix encoding_operator(const EncodingUnitary& u) {
  const auto p0 = projector(ComplexMatrix::basis_vector(2, 0));
  const auto p1 = projector(ComplexMatrix::basis_vector(2, 1));
  const auto id2 = ComplexMatrix::identity(2);
  return tensor(p0, id2, ComplexMatrix::identity(4)) + tensor(p1, id2, u.matrix());
}

/// D_BE = |0><0|_B (x) U_E^dagger + |1><1|_B (x) 1, acting on the whole global space.
inline ComplexMatrix decoding_operator(const EncodingUnitary& u) {
  const auto p0 = projector(ComplexMatrix::basis_vector(2, 0));
  const auto p1 = projector(ComplexMatrix::basis_vector(2, 1));
  const auto id2 = ComplexMatrix::identity(2);
  return tensor(id2, p0, adjoint(u.matrix())) + tensor(id2, p1, ComplexMatrix::identity(4));
}

namespace detail {
inline ComplexMatrix conjugate(const ComplexMatrix& op, const ComplexMatrix& rho) { return op * rho * adjoint(op); }
}  // namespace detail

inline GlobalState encode(const GlobalState& global, const EncodingUnitary& u) {
  return GlobalState(detail::conjugate(encoding_operator(u), global.matrix()));
}

inline GlobalState decode(const GlobalState& global, const EncodingUnitary& u) {
  return GlobalState(detail::conjugate(decoding_operator(u), global.matrix()));
}

/// Applies a 4x4 operator to the tagged-message portion (M, T) only, as an
/// adversary with channel access would.
inline GlobalState apply_to_channel(const GlobalState& global, const ComplexMatrix& op) {
  if (op.rows() != 4 || op.cols() != 4) throw DimensionError("apply_to_channel: operator is " + op.shape());
  return GlobalState(detail::conjugate(tensor(ComplexMatrix::identity(4), op), global.matrix()));
}

/// tr_AB of the global state: what travels through (or sits in) the channel.
inline DensityOperator tagged_message(const GlobalState& global) {
  return DensityOperator(partial_trace(global.matrix(), global_layout(), {kAlice, kBob}));
}

/// tr_AB of the encoded state.
inline DensityOperator channel_state(const GlobalState& encoded) { return tagged_message(encoded); }

/// (1/2)(rho_E + U rho_E U^dagger), the channel state without simulating the key.
inline DensityOperator channel_closed_form(const DensityOperator& tagged, const EncodingUnitary& u) {
  return DensityOperator((tagged.matrix() + detail::conjugate(u.matrix(), tagged.matrix())) * Complex(0.5));
}

/// Tag measurement {|0><0|_T, |1><1|_T} on a state of M (x) T.
inline VerificationOutcome verify_tag(const DensityOperator& tagged, const Tolerances& tol = kDefaultTolerances) {
  if (tagged.dim() != 4) {
    throw DimensionError("verify_tag: expected a 4-dimensional tagged message, got " + std::to_string(tagged.dim()));
  }
  const auto pi0 = tensor(ComplexMatrix::identity(2), projector(ComplexMatrix::basis_vector(2, 0)));
  const ComplexMatrix kept = pi0 * tagged.matrix() * pi0;
  const ComplexMatrix unnormalised = partial_trace(kept, tagged_layout(), {1});

  VerificationOutcome out;
  out.accept_probability = std::clamp(trace(unnormalised).real(), 0.0, 1.0);
  out.rejected_probability = 1.0 - out.accept_probability;
  if (out.accept_probability > tol.zero_probability) {
    out.accepted_message = DensityOperator(unnormalised * Complex(1.0 / out.accept_probability));
  }
  return out;
}

/// Channel state for any key mode. For the singlet this is the full
/// 16-dimensional simulation; for classical keys the branches are computed
/// directly (the uniform mode mixes both branches with weight 1/2).
inline DensityOperator transmit(const DensityOperator& message, const EncodingUnitary& u, const KeyMode& key) {
  const auto tagged = attach_tag(message);
  return std::visit(
      [&](const auto& k) -> DensityOperator {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, QuantumSinglet>) {
          return channel_state(encode(prepare(message), u));
        } else if constexpr (std::is_same_v<K, ClassicalBit>) {
          return k.value == 0 ? tagged : DensityOperator(detail::conjugate(u.matrix(), tagged.matrix()));
        } else {
          const ComplexMatrix b0 = tagged.matrix();
          const ComplexMatrix b1 = detail::conjugate(u.matrix(), tagged.matrix());
          return DensityOperator((b0 + b1) * Complex(0.5));
        }
      },
      key);
}

/// Full honest session: tag, encode, transmit, decode, verify.
inline VerificationOutcome run_honest(const DensityOperator& message, const EncodingUnitary& u, const KeyMode& key,
                                      const Tolerances& tol = kDefaultTolerances) {
  if (const auto* bit = std::get_if<ClassicalBit>(&key); bit && bit->value != 0 && bit->value != 1) {
    throw InvariantError("run_honest: classical key bit must be 0 or 1, got " + std::to_string(bit->value));
  }
  const auto tagged = attach_tag(message);
  const ComplexMatrix ud = adjoint(u.matrix());

  const DensityOperator decoded = std::visit(
      [&](const auto& k) -> DensityOperator {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, QuantumSinglet>) {
          return tagged_message(decode(encode(prepare(message), u), u));
        } else if constexpr (std::is_same_v<K, ClassicalBit>) {
          if (k.value == 0) return tagged;
          return DensityOperator(detail::conjugate(ud, detail::conjugate(u.matrix(), tagged.matrix())));
        } else {
          const ComplexMatrix b0 = tagged.matrix();
          const ComplexMatrix b1 = detail::conjugate(ud, detail::conjugate(u.matrix(), tagged.matrix()));
          return DensityOperator((b0 + b1) * Complex(0.5));
        }
      },
      key);
  return verify_tag(decoded, tol);
}

}  // namespace qauth::protocol
