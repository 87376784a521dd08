// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance_test <path-to-qauth-cli> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qauth/attacks.hpp"
#include "qauth/diagnostics.hpp"
#include "qauth/experiment.hpp"

namespace {

using qauth::linalg::Complex;
using qauth::linalg::ComplexMatrix;
using qauth::linalg::DensityOperator;
using qauth::linalg::Rng;
using qauth::protocol::EncodingUnitary;

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

/// Frobenius distance from a to e^{i phi} b minimised over phi, for unitaries of equal size.
double phase_free_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex overlap = qauth::linalg::trace(qauth::linalg::adjoint(b) * a);
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return qauth::linalg::distance(a, b * phase);
}

Verdict honest_decoding() {
  Stopwatch clock;
  Rng rng(1001);
  const std::vector<qauth::protocol::KeyMode> keys{qauth::protocol::QuantumSinglet{},
                                                   qauth::protocol::ClassicalBit{0}, qauth::protocol::ClassicalBit{1},
                                                   qauth::protocol::ClassicalUniform{}};
  double worst_accept = 0.0, worst_distance = 0.0;
  for (int k = 0; k < 100; ++k) {
    const DensityOperator message(qauth::linalg::random_density_matrix(2, rng));
    const EncodingUnitary u(qauth::linalg::haar_random_unitary(4, rng));
    for (const auto& key : keys) {
      const auto outcome = qauth::protocol::run_honest(message, u, key);
      worst_accept = std::max(worst_accept, std::abs(outcome.accept_probability - 1.0));
      if (!outcome.accepted_message) return {false, "message rejected"};
      worst_distance = std::max(worst_distance, qauth::linalg::trace_distance(*outcome.accepted_message, message));
    }
  }
  const double t = clock.seconds();
  return {worst_accept < 1e-10 && worst_distance < 1e-10 && t < 5.0,
          "max |accept-1| = " + fmt(worst_accept) + ", max trace distance = " + fmt(worst_distance) +
              ", runtime " + fmt(t) + " s"};
}

Verdict no_message_optimum() {
  const auto flip = qauth::attacks::optimal_forgery(EncodingUnitary::tag_flip());
  const auto id = qauth::attacks::optimal_forgery(EncodingUnitary::identity());
  const bool pass = std::abs(flip.lambda_max - 1.0) < 1e-9 && std::abs(flip.p_f - 0.5) < 1e-9 &&
                    std::abs(id.p_f - 1.0) < 1e-9;
  return {pass, "tag-flip lambda_max = " + fmt(flip.lambda_max) + ", P_f = " + fmt(flip.p_f) +
                    "; identity P_f = " + fmt(id.p_f)};
}

Verdict eigen_vs_search() {
  Stopwatch clock;
  Rng rng(3003);
  double worst_gap = 0.0, worst_excess = -INFINITY;
  for (int k = 0; k < 50; ++k) {
    const EncodingUnitary u(qauth::linalg::haar_random_unitary(4, rng));
    const double eigen = qauth::attacks::optimal_forgery(u).p_f;
    const double search = qauth::attacks::search_forgery_probability(u, rng, 10000, 200);
    worst_gap = std::max(worst_gap, std::abs(eigen - search));
    worst_excess = std::max(worst_excess, search - eigen);
  }
  const double t = clock.seconds();
  return {worst_gap < 1e-4 && worst_excess <= 1e-10 && t < 60.0,
          "max |eigen-search| = " + fmt(worst_gap) + ", max (search-eigen) = " + fmt(worst_excess) + ", runtime " +
              fmt(t) + " s"};
}

Verdict measurement_identity() {
  Rng rng(4004);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const EncodingUnitary u(qauth::linalg::haar_random_unitary(4, rng));
    const double predicted = qauth::attacks::measurement_attack(u).min_overlap;
    worst = std::max(worst, std::abs(predicted - qauth::oracle::grid_min_survival(u.matrix())));
  }
  const bool flip = qauth::attacks::measurement_attack(EncodingUnitary::tag_flip()).feasible;
  const bool id = qauth::attacks::measurement_attack(EncodingUnitary::identity()).feasible;
  return {worst < 1e-6 && flip && !id, "max |sigma_min^2 - grid| = " + fmt(worst) + ", tag-flip feasible = " +
                                           (flip ? "true" : "false") + ", identity feasible = " +
                                           (id ? "true" : "false")};
}

Verdict unitary_attack_construction() {
  Stopwatch clock;
  Rng rng(5005);
  const auto basis = qauth::experiment::detail::pauli_eigenstates();
  int gated = 0, constructed = 0, altered = 0;
  double unitarity = 0.0, off_diagonal = 0.0, intertwining = 0.0, hermiticity = 0.0, accept_gap = 0.0;
  double min_nonscalarity = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const EncodingUnitary u(qauth::linalg::haar_random_unitary(4, rng));
    std::optional<qauth::attacks::AttackArtifacts> built;
    try {
      built = qauth::attacks::construct_unitary_attack(u);
    } catch (const qauth::PreconditionError&) {
      ++gated;
      continue;
    } catch (const qauth::Error& e) {
      return {false, std::string("construction failed: ") + e.what()};
    }
    const auto& art = *built;
    ++constructed;
    unitarity = std::max({unitarity, art.a_unitarity_residual, art.b_unitarity_residual});
    off_diagonal = std::max(off_diagonal, art.b_off_diagonal);
    intertwining = std::max(intertwining, art.intertwining_residual);
    hermiticity = std::max(hermiticity, art.g_hermiticity_residual);
    min_nonscalarity = std::min(min_nonscalarity, art.nonscalarity);
    double min_fidelity = 1.0;
    for (const auto& message : basis) {
      const auto outcome = qauth::attacks::simulate_message_attack(message, u, art);
      accept_gap = std::max(accept_gap, std::abs(outcome.accept_probability - 1.0));
      min_fidelity = std::min(min_fidelity, outcome.fidelity_to_original);
    }
    if (min_fidelity < 1.0 - 1e-3) ++altered;
  }
  const double t = clock.seconds();
  const bool pass = constructed > 0 && unitarity < 1e-8 && off_diagonal < 1e-10 && intertwining < 1e-8 &&
                    min_nonscalarity > 1e-6 && hermiticity < 1e-8 && accept_gap < 1e-9 && altered == constructed &&
                    t < 30.0;
  return {pass, std::to_string(constructed) + " constructed, " + std::to_string(gated) + " gated; unitarity " +
                    fmt(unitarity) + ", off-diagonal " + fmt(off_diagonal) + ", intertwining " + fmt(intertwining) +
                    ", min nonscalarity " + fmt(min_nonscalarity) + ", G hermiticity " + fmt(hermiticity) +
                    ", max |accept-1| " + fmt(accept_gap) + ", altered " + std::to_string(altered) + "/" +
                    std::to_string(constructed) + ", runtime " + fmt(t) + " s"};
}

Verdict worked_example() {
  namespace gates = qauth::linalg::gates;
  const auto u = EncodingUnitary::hadamard_pair();
  const auto art = qauth::attacks::construct_unitary_attack(u);
  const double da = phase_free_distance(art.a_operator, qauth::linalg::tensor(gates::pauli_z(), gates::identity()));
  const double db = phase_free_distance(art.b_operator, qauth::linalg::tensor(gates::pauli_x(), gates::identity()));
  const auto zero = DensityOperator::basis(2, 0);
  const auto outcome = qauth::attacks::simulate_message_attack(zero, u, art);
  const double dm = qauth::linalg::distance(outcome.decoded_message.matrix(), ComplexMatrix::identity(2) * Complex(0.5));
  const bool pass = da < 1e-10 && db < 1e-10 && dm < 1e-10 && std::abs(outcome.fidelity_to_original - 0.5) < 1e-10 &&
                    std::abs(outcome.accept_probability - 1.0) < 1e-10;
  return {pass, "||A - Z(x)I|| = " + fmt(da) + ", ||B - X(x)I|| = " + fmt(db) + ", ||rho_out - I/2|| = " + fmt(dm) +
                    ", fidelity = " + fmt(outcome.fidelity_to_original)};
}

Verdict geometry_concordance() {
  Rng rng(7007);
  std::vector<EncodingUnitary> cases{EncodingUnitary::identity(), EncodingUnitary::tag_flip(),
                                     EncodingUnitary::hadamard_pair()};
  for (int k = 0; k < 200; ++k) cases.emplace_back(qauth::linalg::haar_random_unitary(4, rng));
  int checked = 0, counterexamples = 0;
  for (const auto& u : cases) {
    const auto r = qauth::diagnostics::security_report(u);
    if (!r.subspaces_span) {
      ++checked;
      if (std::abs(r.no_message_pf - 1.0) > 1e-9) ++counterexamples;
    }
    if (r.subspaces_orthogonal) {
      ++checked;
      if (!r.measurement_feasible) ++counterexamples;
    }
    if (r.u00_nonsingular && r.u01_nonsingular) {
      ++checked;
      if (!r.unitary_attack_exists) ++counterexamples;
    }
  }
  return {counterexamples == 0 && checked > 0, std::to_string(cases.size()) + " unitaries, " +
                                                   std::to_string(checked) + " implications exercised, " +
                                                   std::to_string(counterexamples) + " counterexamples"};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict cli_determinism(const std::string& cli, const std::filesystem::path& scratch) {
  if (cli.empty()) return {false, "no CLI path given"};
  std::filesystem::create_directories(scratch);
  int runs = 0;
  for (const std::string command : {"honest", "no-message", "attack", "classify"}) {
    for (const std::string format : {"json", "csv"}) {
      std::string outputs[2];
      for (int rep = 0; rep < 2; ++rep) {
        const auto out = scratch / (command + "_" + format + "_" + std::to_string(rep) + "." + format);
        std::filesystem::remove(out);
        const std::string line = "\"" + cli + "\" " + command + " --seed 11 --trials 4 --unitary haar --format " +
                                 format + " --out \"" + out.string() + "\" > /dev/null";
        if (const int rc = std::system(line.c_str()); rc != 0) {
          return {false, command + " exited with status " + std::to_string(rc)};
        }
        outputs[rep] = slurp(out);
      }
      if (outputs[0].empty()) return {false, command + " " + format + " wrote an empty file"};
      if (outputs[0] != outputs[1]) return {false, command + " " + format + " outputs differ"};
      ++runs;
    }
  }
  return {true, std::to_string(runs) + " subcommand/format pairs byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::filesystem::path scratch =
      argc > 2 ? std::filesystem::path(argv[2]) : std::filesystem::temp_directory_path() / "qauth_acceptance";

  struct Criterion {
    const char* id;
    const char* title;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "honest decoding is perfect", honest_decoding},
      {"AC2", "no-message optimum for named unitaries", no_message_optimum},
      {"AC3", "eigen method matches sampled search", eigen_vs_search},
      {"AC4", "measurement min-overlap equals sigma_min(U00)^2", measurement_identity},
      {"AC5", "unitary message attack construction", unitary_attack_construction},
      {"AC6", "H(x)H worked example", worked_example},
      {"AC7", "geometry concordance", geometry_concordance},
      {"AC8", "CLI determinism", [&] { return cli_determinism(cli, scratch); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << ": " << v.detail << "\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
