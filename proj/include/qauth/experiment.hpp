#pragma once

// Batch experiments behind the `qauth` command-line tool. Each subcommand
// runs `trials` independent trials and returns a RunRecord; trial k draws all
// of its randomness from an engine seeded with derive_seed(seed, k), so
// results do not depend on execution order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qauth/attacks.hpp"
#include "qauth/diagnostics.hpp"
#include "qauth/errors.hpp"
#include "qauth/linalg.hpp"
#include "qauth/protocol.hpp"

namespace qauth::experiment {

using Json = nlohmann::ordered_json;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::DensityOperator;
using protocol::EncodingUnitary;

inline constexpr const char* kSchemaVersion = "1.0";

enum class UnitarySource { Identity, TagFlip, HadamardPair, Haar, Explicit };
enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int trials = 1;
  double tolerance = 1e-8;
  UnitarySource unitary_source = UnitarySource::Haar;
  /// Row-major 4x4 entries when `unitary_source == Explicit`.
  std::optional<ComplexMatrix> explicit_unitary;
  std::string explicit_path;
  protocol::KeyMode key_mode = protocol::QuantumSinglet{};
  OutputFormat output_format = OutputFormat::Json;
};

inline std::string source_name(const ExperimentConfig& c) {
  switch (c.unitary_source) {
    case UnitarySource::Identity: return "identity";
    case UnitarySource::TagFlip: return "tag-flip";
    case UnitarySource::HadamardPair: return "hadamard-pair";
    case UnitarySource::Haar: return "haar";
    case UnitarySource::Explicit: return "file:" + c.explicit_path;
  }
  return "unknown";
}

inline UnitarySource parse_unitary_source(const std::string& s, std::string* path = nullptr) {
  if (s == "identity") return UnitarySource::Identity;
  if (s == "tag-flip") return UnitarySource::TagFlip;
  if (s == "hadamard-pair") return UnitarySource::HadamardPair;
  if (s == "haar" || s == "haar-random") return UnitarySource::Haar;
  if (s.rfind("file:", 0) == 0 && s.size() > 5) {
    if (path) *path = s.substr(5);
    return UnitarySource::Explicit;
  }
  throw ConfigError("unknown unitary source '" + s + "' (expected identity|tag-flip|hadamard-pair|haar|file:<path>)");
}

inline protocol::KeyMode parse_key_mode(const std::string& s) {
  if (s == "quantum") return protocol::QuantumSinglet{};
  if (s == "classical-0") return protocol::ClassicalBit{0};
  if (s == "classical-1") return protocol::ClassicalBit{1};
  if (s == "classical-uniform") return protocol::ClassicalUniform{};
  throw ConfigError("unknown key mode '" + s + "' (expected quantum|classical-0|classical-1|classical-uniform)");
}

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  throw ConfigError("unknown output format '" + s + "' (expected json|csv)");
}

/// Parses the explicit-unitary text format: 16 lines of "re im", row-major.
/// Blank lines and lines starting with '#' are ignored.
inline ComplexMatrix parse_unitary_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<Complex> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(fields >> re >> im) || (fields >> extra)) {
      throw ConfigError("unitary file line " + std::to_string(line_no) + ": expected \"re im\", got '" + line + "'");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ConfigError("unitary file line " + std::to_string(line_no) + ": non-finite entry");
    }
    entries.emplace_back(re, im);
  }
  if (entries.size() != 16) {
    throw ConfigError("unitary file: expected 16 entries, found " + std::to_string(entries.size()));
  }
  return ComplexMatrix(4, 4, std::move(entries));
}

inline ComplexMatrix read_unitary_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open unitary file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_unitary_text(ss.str());
}

/// Rejects configurations the runners cannot honour.
inline void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw ConfigError("trials must be positive, got " + std::to_string(c.trials));
  if (!(c.tolerance > 0.0 && c.tolerance <= 1e-2)) {
    std::ostringstream msg;
    msg << "tolerance must lie in (0, 1e-2], got " << c.tolerance;
    throw ConfigError(msg.str());
  }
  if (c.unitary_source == UnitarySource::Explicit) {
    if (!c.explicit_unitary) throw ConfigError("explicit unitary source without a matrix");
    try {
      EncodingUnitary::from_approximate(*c.explicit_unitary, c.tolerance);
    } catch (const Error& e) {
      throw ConfigError(std::string("explicit unitary rejected: ") + e.what());
    }
  }
}

/// The encoding unitary used in trial `trial`, drawn from `rng` when Haar.
inline EncodingUnitary unitary_for_trial(const ExperimentConfig& c, linalg::Rng& rng) {
  switch (c.unitary_source) {
    case UnitarySource::Identity: return EncodingUnitary::identity();
    case UnitarySource::TagFlip: return EncodingUnitary::tag_flip();
    case UnitarySource::HadamardPair: return EncodingUnitary::hadamard_pair();
    case UnitarySource::Haar: return EncodingUnitary(linalg::haar_random_unitary(4, rng));
    case UnitarySource::Explicit: return EncodingUnitary::from_approximate(*c.explicit_unitary, c.tolerance);
  }
  throw ConfigError("unhandled unitary source");
}

inline Json config_json(const std::string& command, const ExperimentConfig& c) {
  Json j;
  j["command"] = command;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["tolerance"] = c.tolerance;
  j["unitary"] = source_name(c);
  j["key"] = protocol::key_mode_name(c.key_mode);
  j["format"] = c.output_format == OutputFormat::Json ? "json" : "csv";
  return j;
}

struct RunRecord {
  std::string command;
  ExperimentConfig config;
  /// One flat JSON object per trial.
  std::vector<Json> records;
  /// min/mean/max of every numeric field and true-counts of every boolean field.
  Json aggregates;
  double wall_time_s = 0.0;
};

inline Json aggregate(const std::vector<Json>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> numbers;
  std::map<std::string, std::pair<int, int>> flags;  // (true count, total)
  for (const auto& r : records) {
    for (const auto& [key, value] : r.items()) {
      if (key == "trial") continue;
      if (value.is_boolean()) {
        if (!flags.count(key) && !numbers.count(key)) order.push_back(key);
        auto& f = flags[key];
        f.first += value.get<bool>() ? 1 : 0;
        f.second += 1;
      } else if (value.is_number()) {
        if (!flags.count(key) && !numbers.count(key)) order.push_back(key);
        numbers[key].push_back(value.get<double>());
      }
    }
  }
  Json out = Json::object();
  for (const auto& key : order) {
    if (auto it = numbers.find(key); it != numbers.end()) {
      const auto& v = it->second;
      double sum = 0.0;
      for (double x : v) sum += x;
      out[key] = Json{{"min", *std::min_element(v.begin(), v.end())},
                      {"mean", sum / static_cast<double>(v.size())},
                      {"max", *std::max_element(v.begin(), v.end())}};
    } else {
      const auto& [count, total] = flags.at(key);
      out[key] = Json{{"true", count}, {"of", total}};
    }
  }
  return out;
}

namespace detail {

template <typename TrialFn>
RunRecord run_trials(const std::string& command, const ExperimentConfig& config, TrialFn&& trial_fn) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunRecord run{command, config, {}, {}, 0.0};
  run.records.reserve(static_cast<std::size_t>(config.trials));
  for (int t = 0; t < config.trials; ++t) {
    linalg::Rng rng(linalg::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    Json rec;
    rec["trial"] = t;
    trial_fn(rng, rec);
    run.records.push_back(std::move(rec));
  }
  run.aggregates = aggregate(run.records);
  run.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

inline DensityOperator random_pure_state(linalg::Rng& rng) {
  return DensityOperator::pure(linalg::random_pure_vector(2, rng));
}

/// The six eigenstates of X, Y and Z.
inline std::vector<DensityOperator> pauli_eigenstates() {
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<ComplexMatrix> vs{
      ComplexMatrix{{1.0}, {0.0}}, ComplexMatrix{{0.0}, {1.0}},
      ComplexMatrix{{h}, {h}},     ComplexMatrix{{h}, {-h}},
      ComplexMatrix{{h}, {Complex(0, h)}}, ComplexMatrix{{h}, {Complex(0, -h)}},
  };
  std::vector<DensityOperator> out;
  for (const auto& v : vs) out.push_back(DensityOperator::pure(v));
  return out;
}

}  // namespace detail

/// Honest sessions on random mixed messages.
inline RunRecord cmd_honest(const ExperimentConfig& config) {
  return detail::run_trials("honest", config, [&](linalg::Rng& rng, Json& rec) {
    const auto u = unitary_for_trial(config, rng);
    const DensityOperator message(linalg::random_density_matrix(2, rng));
    const auto outcome = protocol::run_honest(message, u, config.key_mode);
    if (!outcome.accepted_message || outcome.accept_probability < 1.0 - config.tolerance) {
      std::ostringstream msg;
      msg << "honest run rejected with probability " << outcome.rejected_probability;
      throw NumericError(msg.str());
    }
    rec["accept_probability"] = outcome.accept_probability;
    rec["rejected_probability"] = outcome.rejected_probability;
    rec["fidelity"] = linalg::fidelity(*outcome.accepted_message, message);
    rec["trace_distance"] = linalg::trace_distance(*outcome.accepted_message, message);
  });
}

/// Optimal no-message forgery per unitary, cross-checked by direct search.
inline RunRecord cmd_no_message(const ExperimentConfig& config) {
  return detail::run_trials("no-message", config, [&](linalg::Rng& rng, Json& rec) {
    const auto u = unitary_for_trial(config, rng);
    const auto result = attacks::optimal_forgery(u);
    const double searched = attacks::search_forgery_probability(u, rng);
    rec["lambda_max"] = result.lambda_max;
    rec["p_f"] = result.p_f;
    rec["p_f_search"] = searched;
    rec["search_gap"] = result.p_f - searched;
    rec["u01_singular"] = attacks::no_message_vulnerable(u, config.tolerance);
  });
}

/// Unitary message attack: construct A_E, B_E and run it on a random pure
/// message, on |0><0|, and on the six Pauli eigenstates.
inline RunRecord cmd_attack(const ExperimentConfig& config) {
  const auto basis = detail::pauli_eigenstates();
  return detail::run_trials("attack", config, [&](linalg::Rng& rng, Json& rec) {
    const auto u = unitary_for_trial(config, rng);
    const auto message = detail::random_pure_state(rng);
    Tolerances tol;
    tol.decision = config.tolerance;
    std::optional<attacks::AttackArtifacts> art;
    try {
      art = attacks::construct_unitary_attack(u, tol);
    } catch (const PreconditionError& e) {
      rec["constructed"] = false;
      rec["refusal"] = e.what();
      return;
    }
    rec["constructed"] = true;
    rec["intertwining_residual"] = art->intertwining_residual;
    rec["nonscalarity"] = art->nonscalarity;
    rec["g_hermiticity_residual"] = art->g_hermiticity_residual;
    rec["a11_branch_gap"] = art->a11_branch_gap;
    rec["block_off_diagonal"] = art->b_off_diagonal;
    rec["unitarity_residual"] = std::max(art->a_unitarity_residual, art->b_unitarity_residual);

    const auto outcome = attacks::simulate_message_attack(message, u, *art, tol);
    rec["accept_probability"] = outcome.accept_probability;
    rec["fidelity"] = outcome.fidelity_to_original;
    rec["fidelity_zero"] = attacks::simulate_message_attack(basis[0], u, *art, tol).fidelity_to_original;
    double worst = 1.0;
    for (const auto& b : basis) worst = std::min(worst, attacks::simulate_message_attack(b, u, *art, tol).fidelity_to_original);
    rec["min_basis_fidelity"] = worst;
  });
}

/// Full security classification per unitary.
inline RunRecord cmd_classify(const ExperimentConfig& config) {
  return detail::run_trials("classify", config, [&](linalg::Rng& rng, Json& rec) {
    const auto u = unitary_for_trial(config, rng);
    Tolerances tol;
    tol.decision = config.tolerance;
    const auto r = diagnostics::security_report(u, tol);
    static constexpr const char* names[4] = {"u00", "u01", "u10", "u11"};
    for (std::size_t k = 0; k < 4; ++k) {
      rec[std::string("sigma_max_") + names[k]] = r.block_sigmas[k][0];
      rec[std::string("sigma_min_") + names[k]] = r.block_sigmas[k][1];
    }
    rec["u00_nonsingular"] = r.u00_nonsingular;
    rec["u01_nonsingular"] = r.u01_nonsingular;
    rec["no_message_pf"] = r.no_message_pf;
    rec["measurement_feasible"] = r.measurement_feasible;
    rec["unitary_attack_exists"] = r.unitary_attack_exists;
    rec["subspaces_span"] = r.subspaces_span;
    rec["subspaces_orthogonal"] = r.subspaces_orthogonal;
    rec["principal_angle_0"] = r.principal_angles[0];
    rec["principal_angle_1"] = r.principal_angles[1];
    if (r.attack_refusal) rec["refusal"] = *r.attack_refusal;
  });
}

inline RunRecord run_command(const std::string& command, const ExperimentConfig& config) {
  if (command == "honest") return cmd_honest(config);
  if (command == "no-message") return cmd_no_message(config);
  if (command == "attack") return cmd_attack(config);
  if (command == "classify") return cmd_classify(config);
  throw ConfigError("unknown command '" + command + "'");
}

/// Report file contents. Wall time is deliberately absent so that identical
/// configurations produce identical bytes.
inline std::string to_json(const RunRecord& run) {
  Json j;
  j["version"] = kSchemaVersion;
  j["config"] = config_json(run.command, run.config);
  j["records"] = run.records;
  j["aggregates"] = run.aggregates;
  return j.dump(2) + "\n";
}

inline std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  return v.dump();
}

/// One row per trial; the header is the union of record keys in first-seen order.
inline std::string to_csv(const RunRecord& run) {
  std::vector<std::string> columns;
  for (const auto& r : run.records)
    for (const auto& [key, value] : r.items())
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);

  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& r : run.records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "");
      if (r.contains(columns[i])) out << csv_field(r.at(columns[i]));
    }
    out << "\n";
  }
  return out.str();
}

inline std::string render(const RunRecord& run) {
  return run.config.output_format == OutputFormat::Json ? to_json(run) : to_csv(run);
}

/// Console summary: the aggregate block plus timing.
inline std::string summary(const RunRecord& run) {
  Json j;
  j["command"] = run.command;
  j["trials"] = run.records.size();
  j["aggregates"] = run.aggregates;
  j["wall_time_s"] = run.wall_time_s;
  return j.dump(2) + "\n";
}

}  // namespace qauth::experiment
