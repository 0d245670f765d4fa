#pragma once

// JSON model / distribution files and fixed-precision result rendering.
//
// Model file:
//   {
//     "variables": [{"name": "S", "cardinality": 2, "latent": false}, ...],
//     "edges": [["H", "S"], ...],
//     "cpts": {"S": [[0.9, 0.1], [0.2, 0.8]], ...},   // optional: list of columns
//     "joint": [0.5, 0.1, ...]                        // optional: observed vars, declared order
//   }
// CPT columns are indexed by parent assignments, mixed-radix over the
// parents in declaration order; each column lists P(node = 0..card-1 | ...).

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surgery/causal_syntax.hpp"
#include "surgery/finstoch.hpp"
#include "surgery/inference.hpp"
#include "surgery/semantics.hpp"

namespace surgery {

/// Malformed input: bad JSON, wrong field types, inconsistent lengths.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CptColumns = std::map<std::string, std::vector<std::vector<double>>>;

struct ModelFile {
  std::vector<NodeDecl> variables;
  std::vector<Edge> edges;
  std::optional<CptColumns> cpts;
  std::optional<std::vector<double>> joint;
};

ModelFile parse_model_file(std::string_view text);
ModelFile load_model_file(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ModelFile& f);

/// Throws surgery::Error (CycleDetected, UnknownVariable, ...).
CausalDag build_dag(const ModelFile& f);
/// Requires cpts.
Model build_model(const ModelFile& f);
/// The joint over observed variables: the file's own, or evaluated from its
/// CPTs (latents forgotten).
JointState build_joint(const ModelFile& f);
/// The observed variables as a space, declared order.
VarSpace observed_space(const ModelFile& f);

CptColumns cpt_columns(const Model& m);

// Result documents. Floating-point numbers are rendered in fixed notation
// with `precision` decimals; everything else is plain JSON.
nlohmann::ordered_json space_json(const VarSpace& s);
nlohmann::ordered_json state_json(const JointState& s, double tol);
/// Matrix as a list of columns (each column: one conditional distribution).
nlohmann::ordered_json columns_json(const RMatrix& m);
nlohmann::ordered_json factorisation_json(const SurgeryFactorisation& f);

std::string render(const nlohmann::ordered_json& doc, int precision);

}  // namespace surgery
