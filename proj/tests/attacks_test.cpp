#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qauth/attacks.hpp"

namespace qauth::attacks {
namespace {

using linalg::distance;
using linalg::Rng;
using protocol::EncodingUnitary;

const ComplexMatrix kZeroTag = projector(ComplexMatrix::basis_vector(2, 0));
const ComplexMatrix kOneTag = projector(ComplexMatrix::basis_vector(2, 1));

EncodingUnitary haar(std::uint64_t seed) { return EncodingUnitary(linalg::haar_random_unitary(4, seed)); }

TEST(ForgeryProbability, Examples) {
  Rng rng(1);
  const auto psi = DensityOperator::pure(linalg::random_pure_vector(2, rng));
  EXPECT_NEAR(forgery_probability(DensityOperator(tensor(psi.matrix(), kZeroTag)), EncodingUnitary::identity()), 1.0,
              1e-15);
  EXPECT_NEAR(forgery_probability(DensityOperator(tensor(psi.matrix(), kOneTag)), EncodingUnitary::identity()), 0.0,
              1e-15);
  EXPECT_THROW(forgery_probability(psi, EncodingUnitary::identity()), DimensionError);
}

TEST(ForgeryProbability, AgreesWithFullPipeline) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const DensityOperator forged(linalg::random_density_matrix(4, rng));
    const EncodingUnitary u(linalg::haar_random_unitary(4, rng));
    const double p = forgery_probability(forged, u);
    EXPECT_NEAR(p, oracle::pipeline_forgery_probability(forged, u), 1e-12);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(OptimalForgery, IdentityEncodingIsFullyForgeable) {
  const auto r = optimal_forgery(EncodingUnitary::identity());
  EXPECT_LT(distance(r.q_operator, valid_tag_projector() * Complex(2.0)), 1e-15);
  EXPECT_NEAR(r.lambda_max, 2.0, 1e-12);
  EXPECT_NEAR(r.p_f, 1.0, 1e-12);
}

TEST(OptimalForgery, TagFlipHalvesForgeryProbability) {
  const auto r = optimal_forgery(EncodingUnitary::tag_flip());
  EXPECT_NEAR(r.lambda_max, 1.0, 1e-12);
  EXPECT_NEAR(r.p_f, 0.5, 1e-12);
}

TEST(OptimalForgery, InvariantsOnHaarSamples) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto u = haar(s);
    const auto r = optimal_forgery(u);
    EXPECT_NEAR(r.p_f, r.lambda_max / 2.0, 1e-10);
    EXPECT_GE(r.lambda_max, 1.0 - 1e-10);
    EXPECT_GE(r.p_f, 0.5 - 1e-10);
    EXPECT_NEAR(r.optimal_forgery.purity(), 1.0, 1e-9);
    EXPECT_NEAR(forgery_probability(r.optimal_forgery, u), r.p_f, 1e-10);
  }
}

TEST(OptimalForgery, MatchesDirectSearch) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto u = haar(1000 + s);
    Rng rng(s);
    const double searched = search_forgery_probability(u, rng);
    const double exact = optimal_forgery(u).p_f;
    EXPECT_NEAR(exact, searched, 1e-4);
    EXPECT_GE(exact, searched - 1e-10);
  }
}

TEST(NoMessageVulnerable, Examples) {
  EXPECT_TRUE(no_message_vulnerable(EncodingUnitary::identity()));
  EXPECT_FALSE(no_message_vulnerable(EncodingUnitary::hadamard_pair()));
  EXPECT_FALSE(no_message_vulnerable(EncodingUnitary::tag_flip()));
}

TEST(NoMessageVulnerable, ConsistentWithOptimalForgery) {
  // Haar samples plus encodings with a singular U01 built from blocks.
  std::vector<EncodingUnitary> us;
  for (std::uint64_t s = 0; s < 100; ++s) us.push_back(haar(200 + s));
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    // (1 (+) V) (x) 1 keeps U01 = 0 for any message unitary V.
    const auto v = linalg::haar_random_unitary(2, rng);
    us.push_back(EncodingUnitary(tensor(v, linalg::gates::identity())));
  }
  for (const auto& u : us) {
    const bool vulnerable = no_message_vulnerable(u);
    const double pf = optimal_forgery(u).p_f;
    EXPECT_EQ(vulnerable, pf >= 1.0 - 1e-9);
    if (!vulnerable) { EXPECT_LT(pf, 1.0 - 1e-9); }
  }
}

TEST(MeasurementAttack, Examples) {
  const auto flip = measurement_attack(EncodingUnitary::tag_flip());
  EXPECT_TRUE(flip.feasible);
  EXPECT_LT(flip.min_overlap, 1e-20);

  const auto id = measurement_attack(EncodingUnitary::identity());
  EXPECT_FALSE(id.feasible);
  EXPECT_NEAR(id.min_overlap, 1.0, 1e-14);

  const auto hh = measurement_attack(EncodingUnitary::hadamard_pair());
  EXPECT_FALSE(hh.feasible);
  EXPECT_NEAR(hh.min_overlap, 0.5, 1e-14);
}

TEST(MeasurementAttack, MinOverlapEqualsGridMinimum) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto u = haar(300 + s);
    EXPECT_NEAR(measurement_attack(u).min_overlap, oracle::grid_min_survival(u.matrix()), 1e-6);
  }
}

TEST(MeasurementAttack, OverlapIsNormOfU00Image) {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const EncodingUnitary u(linalg::haar_random_unitary(4, rng));
    const auto phi = linalg::random_pure_vector(2, rng);
    const double via_block = linalg::frobenius_norm(u.u00() * phi);
    EXPECT_NEAR(tag_zero_overlap(u, phi), via_block * via_block, 1e-12);
    EXPECT_NEAR(tag_zero_overlap(u, phi), oracle::survival(u.matrix(), phi(0, 0), phi(1, 0)), 1e-12);
  }
}

TEST(Nonscalarity, Values) {
  EXPECT_NEAR(nonscalarity(ComplexMatrix::identity(4) * std::polar(1.0, 0.7)), 0.0, 1e-15);
  // Z (x) I has zero trace; every phase gives sqrt(8).
  EXPECT_NEAR(nonscalarity(tensor(linalg::gates::pauli_z(), linalg::gates::identity())), std::sqrt(8.0), 1e-15);
  // diag(1,1,1,-1): tr = 2, distance to I is 2.
  EXPECT_NEAR(nonscalarity(ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}), 2.0, 1e-15);
}

TEST(CommutingReflection, CommutesAndIsNonScalar) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto g0 = linalg::ginibre(2, 2, rng);
    const auto g = (g0 + adjoint(g0)) * Complex(0.5);
    const auto a = commuting_reflection(g);
    EXPECT_LT(distance(a * g, g * a), 1e-12);
    EXPECT_LT(linalg::unitarity_residual(a), 1e-12);
    EXPECT_GT(nonscalarity(a), 1.0);
  }
  EXPECT_LT(distance(commuting_reflection(ComplexMatrix::identity(2) * Complex(-3.0)), linalg::gates::pauli_z()), 0.0 + 1e-15);
}

TEST(ConstructUnitaryAttack, HadamardPairWorkedExample) {
  const auto u = EncodingUnitary::hadamard_pair();
  const auto art = construct_unitary_attack(u);
  const auto z = linalg::gates::pauli_z(), x = linalg::gates::pauli_x(), id = linalg::gates::identity();
  EXPECT_LT(distance(art.g_operator, id * Complex(-1.0)), 1e-12);
  EXPECT_LT(distance(art.a_block(0), z), 1e-12);
  EXPECT_LT(distance(art.a_block(1), z), 1e-12);
  EXPECT_LT(distance(art.a_operator, tensor(z, id)), 1e-12);
  EXPECT_LT(distance(art.b_operator, tensor(x, id)), 1e-12);
  EXPECT_LT(distance(u.matrix() * tensor(x, id), tensor(z, id) * u.matrix()), 1e-12);
}

TEST(ConstructUnitaryAttack, RefusesSingularBlocks) {
  try {
    construct_unitary_attack(EncodingUnitary::identity());
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("U01 singular"), std::string::npos) << e.what();
  }
  try {
    construct_unitary_attack(EncodingUnitary::tag_flip());
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("U00 singular"), std::string::npos) << e.what();
  }
}

TEST(ConstructUnitaryAttack, ArtifactInvariantsOnHaarSamples) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto u = haar(400 + s);
    const auto art = construct_unitary_attack(u);
    EXPECT_LT(art.a_unitarity_residual, 1e-8);
    EXPECT_LT(art.b_unitarity_residual, 1e-8);
    EXPECT_LT(art.b_off_diagonal, 1e-10);
    EXPECT_LT(art.intertwining_residual, 1e-8);
    EXPECT_GT(art.nonscalarity, 1e-6);
    EXPECT_LT(art.g_hermiticity_residual, 1e-8);
    EXPECT_LT(art.a11_branch_gap, 1e-8);
    // Independent recomputation of the residuals.
    EXPECT_LT(distance(oracle::naive_multiply(adjoint(u.matrix()), oracle::naive_multiply(art.a_operator, u.matrix())),
                       art.b_operator),
              1e-12);
    EXPECT_LT(linalg::unitarity_residual(art.b_block(0)), 1e-8);
    EXPECT_LT(linalg::unitarity_residual(art.b_block(1)), 1e-8);
  }
}

TEST(ConstructUnitaryAttack, PreservesValidTagForEveryMessage) {
  Rng rng(6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto art = construct_unitary_attack(haar(500 + s));
    for (int k = 0; k < 20; ++k) {
      const auto phi = DensityOperator::pure(linalg::random_pure_vector(2, rng));
      const ComplexMatrix in = tensor(phi.matrix(), kZeroTag);
      for (const auto* op : {&art.a_operator, &art.b_operator}) {
        const ComplexMatrix out = *op * in * adjoint(*op);
        const ComplexMatrix tag = oracle::trace_first(out, 2, 2);
        EXPECT_LT(distance(tag, kZeroTag), 1e-10);
      }
    }
  }
}

TEST(SimulateMessageAttack, HadamardPairOnZeroMessage) {
  const auto u = EncodingUnitary::hadamard_pair();
  const auto art = construct_unitary_attack(u);
  const auto out = simulate_message_attack(DensityOperator::basis(2, 0), u, art);
  EXPECT_NEAR(out.accept_probability, 1.0, 1e-12);
  EXPECT_LT(distance(out.decoded_message.matrix(), ComplexMatrix::identity(2) * Complex(0.5)), 1e-12);
  EXPECT_NEAR(out.fidelity_to_original, 0.5, 1e-10);
}

TEST(SimulateMessageAttack, MaximallyMixedMessageIsFixed) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto u = haar(600 + s);
    const auto out = simulate_message_attack(DensityOperator::maximally_mixed(2), u, construct_unitary_attack(u));
    EXPECT_NEAR(out.accept_probability, 1.0, 1e-9);
    EXPECT_LT(distance(out.decoded_message.matrix(), ComplexMatrix::identity(2) * Complex(0.5)), 1e-10);
  }
}

TEST(SimulateMessageAttack, AcceptedWithCertaintyAndMatchesBranchFormula) {
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    const EncodingUnitary u(linalg::haar_random_unitary(4, rng));
    const DensityOperator msg(linalg::random_density_matrix(2, rng));
    const auto art = construct_unitary_attack(u);
    const auto out = simulate_message_attack(msg, u, art);
    EXPECT_NEAR(out.accept_probability, 1.0, 1e-9);
    const auto a00 = art.a_block(0), b00 = art.b_block(0);
    const ComplexMatrix expected =
        (a00 * msg.matrix() * adjoint(a00) + b00 * msg.matrix() * adjoint(b00)) * Complex(0.5);
    EXPECT_LT(distance(out.decoded_message.matrix(), expected), 1e-10);
    EXPECT_LT(distance(predicted_decoded_message(msg, art).matrix(), expected), 1e-12);
  }
}

TEST(SimulateMessageAttack, RejectsArtifactsForAnotherEncoding) {
  const auto art = construct_unitary_attack(haar(700));
  EXPECT_THROW(simulate_message_attack(DensityOperator::basis(2, 0), haar(701), art), PreconditionError);
}

}  // namespace
}  // namespace qauth::attacks
