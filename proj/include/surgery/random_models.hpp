#pragma once

// Seeded random semi-Markovian models and the oracle-equivalence harness
// behind `surgery randcheck`.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "surgery/finstoch.hpp"
#include "surgery/semantics.hpp"

namespace surgery {

/// mt19937_64 with a portable double conversion, so a seed gives the same
/// stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct RandomModelSpec {
  std::size_t min_observed = 2;
  std::size_t max_observed = 5;
  std::size_t max_latent = 2;
  std::size_t min_card = 2;
  std::size_t max_card = 3;
  double edge_prob = 0.5;
  /// Every sampled probability is at least this, so joints have full support.
  double min_entry = 0.01;
};

/// Columns sampled independently; each entry >= min_entry.
RMatrix random_cpt(Rng& rng, const VarSpace& cod, const VarSpace& dom, double min_entry);
JointState random_full_support_state(Rng& rng, const VarSpace& vars, double min_entry);

/// Observed V1..Vn with random forward edges; latents U1.. each with two
/// distinct observed children and no parents.
Model random_semi_markovian_model(Rng& rng, const RandomModelSpec& spec = {});

struct RandcheckReport {
  std::uint64_t seed = 0;
  std::size_t models = 0;
  std::size_t targets = 0;
  std::size_t identifiable = 0;
  std::size_t not_identifiable = 0;
  /// Verdicts that disagree with the confounding-path criterion.
  std::size_t criterion_mismatches = 0;
  /// Identifiable cases whose pipeline result deviates from the oracle by > tol.
  std::size_t deviations = 0;
  double max_deviation = 0.0;
  double tol = 1e-9;
  std::vector<std::string> notes;
};

/// `count` models from `seed`; every observed node is tried as a target.
RandcheckReport randcheck(std::uint64_t seed, std::size_t count, std::size_t max_observed, double tol = 1e-9);

}  // namespace surgery
