#include "surgery/semantics.hpp"

#include <algorithm>
#include <cmath>

namespace surgery {

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Missing: return "MissingCpt";
    case Violation::Kind::Extra: return "UnknownNode";
    case Violation::Kind::Shape: return "ShapeViolation";
    case Violation::Kind::Stochasticity: return "StochasticityViolation";
  }
  return "Unknown";
}

namespace {

VarSpace node_space(const CausalDag& dag, std::size_t i) { return dag.space({i}); }

VarSpace parent_space(const CausalDag& dag, std::size_t i) { return dag.space(dag.parents(i)); }

}  // namespace

std::vector<Violation> validate(const Model& m, double tol) {
  std::vector<Violation> out;
  const CausalDag& dag = m.dag;
  for (const auto& [name, cpt] : m.interp) {
    if (!dag.contains(name)) out.push_back({Violation::Kind::Extra, name, "CPT given for a node not in the DAG", {}});
  }
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const auto& name = dag.node(i).name;
    auto it = m.interp.find(name);
    if (it == m.interp.end()) {
      out.push_back({Violation::Kind::Missing, name, "no CPT", {}});
      continue;
    }
    const RMatrix& cpt = it->second;
    const auto want_rows = node_space(dag, i).dim();
    const auto want_cols = parent_space(dag, i).dim();
    if (cpt.rows() != want_rows || cpt.cols() != want_cols) {
      out.push_back({Violation::Kind::Shape, name,
                     "CPT is " + std::to_string(cpt.rows()) + "x" + std::to_string(cpt.cols()) + ", expected " +
                         std::to_string(want_rows) + "x" + std::to_string(want_cols) + " (" +
                         std::to_string(dag.parents(i).size()) + " parents)",
                     {}});
      continue;
    }
    for (std::size_t c = 0; c < cpt.cols(); ++c) {
      double sum = cpt.entries().col(static_cast<Eigen::Index>(c)).sum();
      if (std::abs(sum - 1.0) > tol) {
        out.push_back({Violation::Kind::Stochasticity, name, "column sums to " + std::to_string(sum), c});
      }
    }
  }
  return out;
}

Model make_model(CausalDag dag, const std::map<std::string, std::vector<std::vector<double>>>& columns) {
  Interpretation interp;
  for (const auto& [name, cols] : columns) {
    const std::size_t rows = cols.empty() ? 0 : cols.front().size();
    Eigen::MatrixXd e(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].size() != rows) {
        throw Error(ErrorKind::ShapeViolation, "CPT of '" + name + "' has ragged columns");
      }
      for (std::size_t r = 0; r < rows; ++r) {
        e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
      }
    }
    // Spaces are attached only when the shape fits; validate() reports the rest.
    VarSpace cod, dom;
    if (dag.contains(name)) {
      auto i = dag.index_of(name);
      VarSpace want_cod = node_space(dag, i), want_dom = parent_space(dag, i);
      if (want_cod.dim() == rows && want_dom.dim() == cols.size()) {
        cod = std::move(want_cod);
        dom = std::move(want_dom);
      }
    }
    if (cod.dim() != rows) cod = VarSpace{{name, std::max<std::size_t>(rows, 1)}};
    if (dom.dim() != cols.size()) dom = VarSpace{{"pa(" + name + ")", std::max<std::size_t>(cols.size(), 1)}};
    interp.emplace(name, RMatrix(std::move(cod), std::move(dom), std::move(e)));
  }
  return Model{std::move(dag), std::move(interp)};
}

namespace {

std::vector<std::size_t> resolve_order(const CausalDag& dag, const EvalOptions& opts) {
  if (!opts.order) return dag.topological_order();
  std::vector<std::size_t> order;
  std::vector<bool> placed(dag.size(), false);
  for (const auto& name : *opts.order) {
    auto i = dag.index_of(name);
    if (placed[i]) throw Error(ErrorKind::InvalidPermutation, "node '" + name + "' listed twice in order");
    for (auto p : dag.parents(i)) {
      if (!placed[p]) {
        throw Error(ErrorKind::InvalidPermutation,
                    "order places '" + name + "' before its parent '" + dag.node(p).name + "'");
      }
    }
    placed[i] = true;
    order.push_back(i);
  }
  if (order.size() != dag.size()) throw Error(ErrorKind::InvalidPermutation, "order does not list every node");
  return order;
}

// A normalised table over the `live` nodes, mixed-radix in list order.
struct LiveTable {
  std::vector<std::size_t> live;
  std::vector<double> p{1.0};
};

void sum_out(LiveTable& t, std::size_t pos, const CausalDag& dag) {
  std::vector<std::size_t> cards;
  for (auto v : t.live) cards.push_back(dag.node(v).card);
  MixedRadix in(cards);
  std::vector<std::size_t> kept_cards = cards;
  kept_cards.erase(kept_cards.begin() + static_cast<std::ptrdiff_t>(pos));
  MixedRadix out(kept_cards);
  std::vector<double> acc(out.size(), 0.0);
  std::vector<std::size_t> digits(cards.size()), sub(kept_cards.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    in.decode(idx, digits);
    for (std::size_t k = 0, j = 0; k < digits.size(); ++k) {
      if (k != pos) sub[j++] = digits[k];
    }
    acc[out.encode(sub)] += t.p[idx];
  }
  t.live.erase(t.live.begin() + static_cast<std::ptrdiff_t>(pos));
  t.p = std::move(acc);
}

}  // namespace

JointState evaluate(const NetworkDiagram& d, const Model& m, const EvalOptions& opts) {
  const CausalDag& dag = m.dag;
  if (!(d.dag() == dag)) throw Error(ErrorKind::ShapeViolation, "diagram and model are built on different DAGs");
  if (auto bad = validate(m); !bad.empty()) {
    throw Error(ErrorKind::ShapeViolation, "node '" + bad.front().node + "': " + bad.front().detail);
  }

  const auto order = resolve_order(dag, opts);
  std::vector<bool> done(dag.size(), false);
  LiveTable t;

  for (auto v : order) {
    const auto card = dag.node(v).card;
    if (t.p.size() * card > opts.max_states) {
      throw Error(ErrorKind::DimensionOverflow, "live joint would exceed " + std::to_string(opts.max_states) +
                                                    " states at node '" + dag.node(v).name + "'");
    }
    const bool is_cut = d.is_cut(dag.node(v).name);
    const RMatrix& cpt = m.interp.at(dag.node(v).name);

    std::vector<std::size_t> cards;
    for (auto u : t.live) cards.push_back(dag.node(u).card);
    MixedRadix in(cards);
    // Position of each parent inside the live list, and the CPT column radix.
    std::vector<std::size_t> parent_pos;
    std::vector<std::size_t> parent_cards;
    for (auto p : dag.parents(v)) {
      auto it = std::find(t.live.begin(), t.live.end(), p);
      parent_pos.push_back(static_cast<std::size_t>(it - t.live.begin()));
      parent_cards.push_back(dag.node(p).card);
    }
    MixedRadix pa(parent_cards);

    std::vector<double> next(in.size() * card);
    std::vector<std::size_t> digits(cards.size()), pdigits(parent_pos.size());
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
      const double base = t.p[idx];
      if (is_cut) {
        for (std::size_t val = 0; val < card; ++val) next[idx * card + val] = base / static_cast<double>(card);
        continue;
      }
      in.decode(idx, digits);
      for (std::size_t k = 0; k < parent_pos.size(); ++k) pdigits[k] = digits[parent_pos[k]];
      const auto col = pa.encode(pdigits);
      for (std::size_t val = 0; val < card; ++val) next[idx * card + val] = base * cpt(val, col);
    }
    t.live.push_back(v);
    t.p = std::move(next);
    done[v] = true;

    // Eliminate latents whose consumers have all been processed.
    for (std::size_t pos = t.live.size(); pos-- > 0;) {
      auto u = t.live[pos];
      if (!dag.node(u).latent) continue;
      const auto& ch = dag.children(u);
      if (std::all_of(ch.begin(), ch.end(), [&](std::size_t c) { return done[c]; })) sum_out(t, pos, dag);
    }
  }

  // Reorder the surviving observed nodes into declaration order.
  VarSpace live_space = dag.space(t.live);
  JointState raw(live_space, std::move(t.p));
  return permute_state(raw, d.outputs());
}

JointState intervene_oracle(const Model& m, std::string_view target, const EvalOptions& opts) {
  return evaluate(cut(network_diagram(m.dag), target), m, opts);
}

Model conditionals_from_joint(const CausalDag& dag, const JointState& joint) {
  for (const auto& n : dag.nodes()) {
    if (n.latent) throw Error(ErrorKind::ShapeViolation, "conditionals need a fully observed DAG");
  }
  if (joint.vars().names() != dag.observed()) {
    throw Error(ErrorKind::GroupingMismatch, "joint variables do not match the DAG's nodes");
  }
  Interpretation interp;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    auto family = dag.names(dag.parents(i));
    family.push_back(dag.node(i).name);
    // marginalize keeps declaration order; put parents first, node last.
    JointState fam = permute_state(marginalize(joint, family), family);
    const auto rows = dag.node(i).card;
    const auto cols = fam.size() / rows;
    Eigen::MatrixXd e(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      double mass = 0.0;
      for (std::size_t r = 0; r < rows; ++r) mass += fam[c * rows + r];
      for (std::size_t r = 0; r < rows; ++r) {
        // Unsupported parent assignments get the uniform column.
        e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            mass > 0.0 ? fam[c * rows + r] / mass : 1.0 / static_cast<double>(rows);
      }
    }
    interp.emplace(dag.node(i).name, RMatrix(dag.space({i}), dag.space(dag.parents(i)), std::move(e)));
  }
  return Model{dag, std::move(interp)};
}

}  // namespace surgery
