#include "surgery/random_models.hpp"

#include <algorithm>
#include <variant>

#include "surgery/causal_syntax.hpp"
#include "surgery/inference.hpp"

namespace surgery {

RMatrix random_cpt(Rng& rng, const VarSpace& cod, const VarSpace& dom, double min_entry) {
  const auto rows = cod.dim(), cols = dom.dim();
  const double free_mass = 1.0 - min_entry * static_cast<double>(rows);
  Eigen::MatrixXd e(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> w(rows);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.uniform() + 1e-3);
    for (std::size_t r = 0; r < rows; ++r) {
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = min_entry + free_mass * w[r] / total;
    }
  }
  return RMatrix(cod, dom, std::move(e));
}

JointState random_full_support_state(Rng& rng, const VarSpace& vars, double min_entry) {
  return JointState(StochMap(random_cpt(rng, vars, VarSpace{}, min_entry)));
}

Model random_semi_markovian_model(Rng& rng, const RandomModelSpec& spec) {
  const std::size_t n_obs = spec.min_observed + rng.below(spec.max_observed - spec.min_observed + 1);
  const std::size_t n_lat = n_obs >= 2 ? rng.below(spec.max_latent + 1) : 0;

  std::vector<NodeDecl> nodes;
  std::vector<Edge> edges;
  // Latents first so they precede their children in declaration order.
  for (std::size_t l = 0; l < n_lat; ++l) nodes.push_back({"U" + std::to_string(l + 1), 0, true});
  for (std::size_t v = 0; v < n_obs; ++v) nodes.push_back({"V" + std::to_string(v + 1), 0, false});
  for (auto& n : nodes) n.card = spec.min_card + rng.below(spec.max_card - spec.min_card + 1);

  for (std::size_t a = 0; a < n_obs; ++a) {
    for (std::size_t b = a + 1; b < n_obs; ++b) {
      if (rng.chance(spec.edge_prob)) edges.emplace_back(nodes[n_lat + a].name, nodes[n_lat + b].name);
    }
  }
  for (std::size_t l = 0; l < n_lat; ++l) {
    std::size_t a = rng.below(n_obs);
    std::size_t b = rng.below(n_obs - 1);
    if (b >= a) ++b;
    edges.emplace_back(nodes[l].name, nodes[n_lat + a].name);
    edges.emplace_back(nodes[l].name, nodes[n_lat + b].name);
  }

  CausalDag dag(std::move(nodes), std::move(edges));
  Interpretation interp;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    interp.emplace(dag.node(i).name, random_cpt(rng, dag.space({i}), dag.space(dag.parents(i)), spec.min_entry));
  }
  return Model{std::move(dag), std::move(interp)};
}

RandcheckReport randcheck(std::uint64_t seed, std::size_t count, std::size_t max_observed, double tol) {
  RandcheckReport report;
  report.seed = seed;
  report.tol = tol;
  Rng rng(seed);
  RandomModelSpec spec;
  spec.max_observed = std::max<std::size_t>(max_observed, spec.min_observed);

  for (std::size_t m_idx = 0; m_idx < count; ++m_idx) {
    Model m = random_semi_markovian_model(rng, spec);
    ++report.models;
    const NetworkDiagram d = network_diagram(m.dag);
    const JointState observational = evaluate(d, m);
    for (const auto& x : m.dag.observed()) {
      ++report.targets;
      const bool confounded = confounded_with_child(m.dag, x);
      FactorizeResult r = factorize_single(d, x);
      const bool ok = std::holds_alternative<SurgeryFactorisation>(r);
      if (ok == confounded) {
        ++report.criterion_mismatches;
        if (report.notes.size() < 20) {
          std::string edges;
          for (const auto& [p, c] : m.dag.edges()) edges += " " + p + "->" + c;
          report.notes.push_back("model " + std::to_string(m_idx) + " target " + x + ": factorisation " +
                                 (ok ? "succeeded" : "failed") + ", confounding-path criterion says " +
                                 (confounded ? "not identifiable" : "identifiable") + ";" + edges);
        }
      }
      if (!ok) {
        ++report.not_identifiable;
        continue;
      }
      ++report.identifiable;
      const JointState via_comb = intervene_from_observational(observational, std::get<SurgeryFactorisation>(r)).state;
      const JointState truth = intervene_oracle(m, x);
      const double dev = max_abs_diff(via_comb.matrix(), truth.matrix());
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev > tol) ++report.deviations;
    }
  }
  return report;
}

}  // namespace surgery
