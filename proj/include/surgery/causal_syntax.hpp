#pragma once

// Syntax of causal structures: DAGs with latent flags, the generators of the
// free CDU category they present, network-normal-form diagrams, the cut
// endofunctor, and the search for a comb-shaped factorisation around a
// single intervention target.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "surgery/error.hpp"
#include "surgery/finstoch.hpp"

namespace surgery {

struct NodeDecl {
  std::string name;
  std::size_t card = 2;
  bool latent = false;

  friend bool operator==(const NodeDecl&, const NodeDecl&) = default;
};

using Edge = std::pair<std::string, std::string>;  // (parent, child)

/// A validated DAG. Construction throws UnknownVariable, DuplicateVariable,
/// InvalidCardinality, SelfLoop or CycleDetected.
class CausalDag {
 public:
  CausalDag(std::vector<NodeDecl> nodes, std::vector<Edge> edges);

  const std::vector<NodeDecl>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  const NodeDecl& node(std::size_t i) const { return nodes_.at(i); }
  const NodeDecl& node(std::string_view name) const { return nodes_[index_of(name)]; }

  /// Parents in declaration order.
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_.at(i); }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_.at(i); }
  /// Kahn order, ties broken by declaration index.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  std::vector<std::string> observed() const;
  std::vector<std::string> names(const std::vector<std::size_t>& idx) const;
  VarSpace space(const std::vector<std::size_t>& idx) const;

  /// Strict descendants of i.
  std::vector<bool> descendants(std::size_t i) const;
  /// Strict ancestors of i.
  std::vector<bool> ancestors(std::size_t i) const;

  friend bool operator==(const CausalDag& a, const CausalDag& b) {
    return a.nodes_ == b.nodes_ && a.parents_ == b.parents_;
  }

 private:
  std::vector<NodeDecl> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> topo_;
};

/// One box of the free signature: the mechanism of `node`.
struct Generator {
  std::string node;
  std::vector<std::string> inputs;
  std::string output;

  friend bool operator==(const Generator&, const Generator&) = default;
};

std::vector<Generator> free_signature(const CausalDag& dag);

/// A morphism I -> (observed nodes) of the free CDU category in network
/// normal form: one box per node, copies fanning out each box's output to
/// its consumers and (if observed) to the diagram's outputs.
///
/// Nodes in the cut set have their box replaced by discard-then-uniform;
/// the box stays in `boxes()` and is only marked.
class NetworkDiagram {
 public:
  explicit NetworkDiagram(CausalDag dag);

  const CausalDag& dag() const noexcept { return dag_; }
  const std::vector<Generator>& boxes() const noexcept { return boxes_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::set<std::string>& cut_set() const noexcept { return cut_set_; }
  bool is_cut(std::string_view name) const { return cut_set_.contains(std::string(name)); }

  friend bool operator==(const NetworkDiagram&, const NetworkDiagram&) = default;

 private:
  friend NetworkDiagram cut(const NetworkDiagram& d, std::string_view target);

  CausalDag dag_;
  std::vector<Generator> boxes_;
  std::vector<std::string> outputs_;
  std::set<std::string> cut_set_;
};

NetworkDiagram network_diagram(const CausalDag& dag);

/// Diagram surgery at `target`. Idempotent; cuts at distinct targets commute.
NetworkDiagram cut(const NetworkDiagram& d, std::string_view target);

bool diagram_equal(const NetworkDiagram& a, const NetworkDiagram& b);

/// Throws NotSemiMarkovian unless every latent is parentless with exactly
/// two observed children.
void require_semi_markovian(const CausalDag& dag);
bool is_semi_markovian(const CausalDag& dag);

/// Observed nodes partitioned by the transitive closure of "shares a latent
/// parent". Components are listed in order of their first member; members
/// in declaration order.
std::vector<std::vector<std::string>> confounded_components(const CausalDag& dag);

/// True iff `target` lies in the same confounded component as one of its
/// children.
bool confounded_with_child(const CausalDag& dag, std::string_view target);

/// Output grouping for comb disintegration. `context` holds observed nodes
/// that feed g from outside; the comb is taken conditionally on them.
struct Grouping {
  std::vector<std::string> context;
  std::vector<std::string> a;
  std::vector<std::string> b;
  std::vector<std::string> c;

  friend bool operator==(const Grouping&, const Grouping&) = default;
};

/// Partition of the boxes around target x:
///   f1 (everything upstream), x, g (every consumer of x, closed), f2 (downstream of g).
/// Only x and observed f1 nodes (copied wires) feed g; latents inside g
/// have all their children inside g.
struct SurgeryFactorisation {
  std::string target;
  std::vector<std::string> f1;
  std::vector<std::string> g;
  std::vector<std::string> f2;
  Grouping grouping;

  friend bool operator==(const SurgeryFactorisation&, const SurgeryFactorisation&) = default;
};

struct NotIdentifiable {
  std::string target;
  /// The node whose wiring forced the failure (usually a latent confounder).
  std::string witness;
  std::string reason;
};

using FactorizeResult = std::variant<SurgeryFactorisation, NotIdentifiable>;

/// Throws UnknownVariable, TargetLatent, TargetAlreadyCut.
FactorizeResult factorize_single(const NetworkDiagram& d, std::string_view target);

/// Every broken factorisation invariant, as human-readable lines.
std::vector<std::string> factorisation_violations(const CausalDag& dag, const SurgeryFactorisation& f);

}  // namespace surgery
