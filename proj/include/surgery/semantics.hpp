#pragma once

// Interpretation of network diagrams as stochastic matrices: a Bayesian
// network is a DAG plus one conditional probability table per node.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surgery/causal_syntax.hpp"
#include "surgery/finstoch.hpp"

namespace surgery {

/// node name -> P(node | parents), with dom = parents' space in
/// declaration order and cod = the node's own space. Column-stochasticity
/// is checked by validate(), so malformed input can still be reported.
using Interpretation = std::map<std::string, RMatrix>;

struct Model {
  CausalDag dag;
  Interpretation interp;
};

struct Violation {
  enum class Kind { Missing, Extra, Shape, Stochasticity };
  Kind kind;
  std::string node;
  std::string detail;
  /// Offending CPT column for stochasticity violations.
  std::optional<std::size_t> column;
};

std::string_view to_string(Violation::Kind kind);

/// Every mismatch between the DAG and its CPTs. Never throws.
std::vector<Violation> validate(const Model& m, double tol = kTolStoch);

/// Model from raw CPT columns (each inner vector is P(node | one parent
/// assignment).
Model make_model(CausalDag dag, const std::map<std::string, std::vector<std::vector<double>>>& columns);

struct EvalOptions {
  /// Topological order to process nodes in; defaults to the DAG's own.
  std::optional<std::vector<std::string>> order;
  /// Upper bound on the live joint table (DimensionOverflow beyond it).
  std::size_t max_states = std::size_t{1} << 20;
};

/// Joint state over d.outputs(): conditional factors multiplied in
/// topological order, cut nodes replaced by the uniform factor, latents
/// summed out as soon as all their children are in.
JointState evaluate(const NetworkDiagram& d, const Model& m, const EvalOptions& opts = {});

/// Ground-truth interventional state using full knowledge of the model.
JointState intervene_oracle(const Model& m, std::string_view target, const EvalOptions& opts = {});

/// CPTs P(v | parents) read off a joint over all nodes of `dag` (which must
/// have no latents) by marginalisation and disintegration.
Model conditionals_from_joint(const CausalDag& dag, const JointState& joint);

}  // namespace surgery
