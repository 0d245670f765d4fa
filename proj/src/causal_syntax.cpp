#include "surgery/causal_syntax.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace surgery {

// ---------------------------------------------------------------------------
// CausalDag

CausalDag::CausalDag(std::vector<NodeDecl> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), parents_(nodes_.size()), children_(nodes_.size()) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].card < 1) {
      throw Error(ErrorKind::InvalidCardinality, "node '" + nodes_[i].name + "' has cardinality 0");
    }
    if (!idx.emplace(nodes_[i].name, i).second) {
      throw Error(ErrorKind::DuplicateVariable, "node '" + nodes_[i].name + "' declared twice");
    }
  }
  auto lookup = [&](const std::string& name) {
    auto it = idx.find(name);
    if (it == idx.end()) throw Error(ErrorKind::UnknownVariable, "edge endpoint '" + name + "' is not a node");
    return it->second;
  };
  for (const auto& [from, to] : edges_) {
    std::size_t p = lookup(from), c = lookup(to);
    if (p == c) throw Error(ErrorKind::SelfLoop, "edge " + from + " -> " + to);
    if (std::find(parents_[c].begin(), parents_[c].end(), p) != parents_[c].end()) continue;
    parents_[c].push_back(p);
    children_[p].push_back(c);
  }
  for (auto& ps : parents_) std::sort(ps.begin(), ps.end());
  for (auto& cs : children_) std::sort(cs.begin(), cs.end());

  std::vector<std::size_t> indeg(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indeg[i] = parents_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (indeg[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    auto v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (auto c : children_[v]) {
      if (--indeg[c] == 0) ready.push(c);
    }
  }
  if (topo_.size() != nodes_.size()) {
    std::string stuck;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (indeg[i] > 0) stuck += (stuck.empty() ? "" : ", ") + nodes_[i].name;
    }
    throw Error(ErrorKind::CycleDetected, "edges contain a directed cycle through {" + stuck + "}");
  }
}

bool CausalDag::contains(std::string_view name) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [&](const NodeDecl& n) { return n.name == name; });
}

std::size_t CausalDag::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  throw Error(ErrorKind::UnknownVariable, "no node '" + std::string(name) + "'");
}

std::vector<std::string> CausalDag::observed() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (!n.latent) out.push_back(n.name);
  }
  return out;
}

std::vector<std::string> CausalDag::names(const std::vector<std::size_t>& idx) const {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(nodes_.at(i).name);
  return out;
}

VarSpace CausalDag::space(const std::vector<std::size_t>& idx) const {
  std::vector<Var> vars;
  vars.reserve(idx.size());
  for (auto i : idx) vars.push_back({nodes_.at(i).name, nodes_.at(i).card});
  return VarSpace(std::move(vars));
}

namespace {

std::vector<bool> reach(const std::vector<std::vector<std::size_t>>& adj, std::size_t start) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack(adj[start].begin(), adj[start].end());
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    stack.insert(stack.end(), adj[v].begin(), adj[v].end());
  }
  return seen;
}

}  // namespace

std::vector<bool> CausalDag::descendants(std::size_t i) const { return reach(children_, i); }

std::vector<bool> CausalDag::ancestors(std::size_t i) const { return reach(parents_, i); }

// ---------------------------------------------------------------------------
// Free signature and network diagrams

std::vector<Generator> free_signature(const CausalDag& dag) {
  std::vector<Generator> out;
  out.reserve(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    out.push_back({dag.node(i).name, dag.names(dag.parents(i)), dag.node(i).name});
  }
  return out;
}

NetworkDiagram::NetworkDiagram(CausalDag dag)
    : dag_(std::move(dag)), boxes_(free_signature(dag_)), outputs_(dag_.observed()) {}

NetworkDiagram network_diagram(const CausalDag& dag) { return NetworkDiagram(dag); }

NetworkDiagram cut(const NetworkDiagram& d, std::string_view target) {
  d.dag().index_of(target);  // throws UnknownVariable
  NetworkDiagram out = d;
  out.cut_set_.insert(std::string(target));
  return out;
}

bool diagram_equal(const NetworkDiagram& a, const NetworkDiagram& b) { return a == b; }

// ---------------------------------------------------------------------------
// Confounded components

void require_semi_markovian(const CausalDag& dag) {
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (!dag.node(i).latent) continue;
    const auto& name = dag.node(i).name;
    if (!dag.parents(i).empty()) {
      throw Error(ErrorKind::NotSemiMarkovian, "latent '" + name + "' has parents");
    }
    const auto& ch = dag.children(i);
    if (ch.size() != 2) {
      throw Error(ErrorKind::NotSemiMarkovian,
                  "latent '" + name + "' has " + std::to_string(ch.size()) + " children, expected 2");
    }
    for (auto c : ch) {
      if (dag.node(c).latent) {
        throw Error(ErrorKind::NotSemiMarkovian, "latent '" + name + "' has latent child '" + dag.node(c).name + "'");
      }
    }
  }
}

bool is_semi_markovian(const CausalDag& dag) {
  try {
    require_semi_markovian(dag);
    return true;
  } catch (const Error&) {
    return false;
  }
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

UnionFind component_forest(const CausalDag& dag) {
  require_semi_markovian(dag);
  UnionFind uf(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (dag.node(i).latent) uf.unite(dag.children(i)[0], dag.children(i)[1]);
  }
  return uf;
}

}  // namespace

std::vector<std::vector<std::string>> confounded_components(const CausalDag& dag) {
  UnionFind uf = component_forest(dag);
  std::vector<std::vector<std::string>> out;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (dag.node(i).latent) continue;
    auto root = uf.find(i);
    auto [it, fresh] = slot.emplace(root, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(dag.node(i).name);
  }
  return out;
}

bool confounded_with_child(const CausalDag& dag, std::string_view target) {
  auto x = dag.index_of(target);
  if (dag.node(x).latent) throw Error(ErrorKind::TargetLatent, "'" + std::string(target) + "' is latent");
  UnionFind uf = component_forest(dag);
  return std::any_of(dag.children(x).begin(), dag.children(x).end(),
                     [&](std::size_t c) { return uf.find(c) == uf.find(x); });
}

// ---------------------------------------------------------------------------
// Single-target factorisation

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::vector<std::string> members(const CausalDag& dag, const std::vector<bool>& in) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (in[i]) out.push_back(dag.node(i).name);
  }
  return out;
}

}  // namespace

FactorizeResult factorize_single(const NetworkDiagram& d, std::string_view target) {
  const CausalDag& dag = d.dag();
  const std::size_t x = dag.index_of(target);
  const std::string xname(target);
  if (dag.node(x).latent) throw Error(ErrorKind::TargetLatent, "'" + xname + "' is latent");
  if (d.is_cut(target)) throw Error(ErrorKind::TargetAlreadyCut, "'" + xname + "' is already cut");

  const std::size_t n = dag.size();
  const auto below_x = dag.descendants(x);
  const auto above_x = dag.ancestors(x);

  std::vector<bool> in_g(n, false);
  std::vector<std::size_t> pulled_by(n, kNone);
  std::vector<std::size_t> g_list;
  auto add = [&](std::size_t v, std::size_t by) {
    if (in_g[v]) return false;
    in_g[v] = true;
    pulled_by[v] = by;
    g_list.push_back(v);
    return true;
  };
  // The latent (if any) responsible for v entering g; otherwise v itself.
  auto blame = [&](std::size_t v) {
    for (std::size_t u = v; u != kNone && u != x; u = pulled_by[u]) {
      if (dag.node(u).latent) return u;
    }
    return v;
  };
  auto has_ancestor_in_g = [&](std::size_t v) {
    auto anc = dag.ancestors(v);
    for (auto u : g_list) {
      if (anc[u]) return true;
    }
    return false;
  };

  for (auto c : dag.children(x)) add(c, x);

  // Minimal closure: every wire entering g must come from x or be a copied
  // (observed) wire out of f1.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < g_list.size(); ++k) {
      const auto v = g_list[k];
      for (auto p : dag.parents(v)) {
        if (p == x || in_g[p]) continue;
        if (dag.node(p).latent || below_x[p] || has_ancestor_in_g(p)) changed |= add(p, v);
      }
      if (dag.node(v).latent) {
        for (auto c : dag.children(v)) {
          if (c == x) {
            return NotIdentifiable{xname, dag.node(v).name,
                                   "latent '" + dag.node(v).name + "' feeds both '" + xname +
                                       "' and the consumers of '" + xname + "'"};
          }
          changed |= add(c, v);
        }
      }
    }
    for (auto v : g_list) {
      if (above_x[v]) {
        auto w = blame(v);
        return NotIdentifiable{xname, dag.node(w).name,
                               "'" + dag.node(v).name + "' must sit downstream of '" + xname +
                                   "' but is one of its ancestors"};
      }
    }
  }

  std::vector<bool> in_f2(n, false), in_f1(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == x || in_g[i]) continue;
    if (has_ancestor_in_g(i)) {
      in_f2[i] = true;
    } else {
      in_f1[i] = true;
    }
  }

  SurgeryFactorisation out;
  out.target = xname;
  out.f1 = members(dag, in_f1);
  out.g = members(dag, in_g);
  out.f2 = members(dag, in_f2);

  std::vector<bool> is_context(n, false);
  for (auto v : g_list) {
    for (auto p : dag.parents(v)) {
      if (in_f1[p] && !dag.node(p).latent) is_context[p] = true;
    }
  }
  out.grouping.a = {xname};
  for (std::size_t i = 0; i < n; ++i) {
    if (dag.node(i).latent || i == x) continue;
    if (is_context[i]) {
      out.grouping.context.push_back(dag.node(i).name);
    } else if (in_g[i]) {
      out.grouping.b.push_back(dag.node(i).name);
    } else {
      out.grouping.c.push_back(dag.node(i).name);
    }
  }

  if (auto bad = factorisation_violations(dag, out); !bad.empty()) {
    // Unreachable when the closure above is correct.
    return NotIdentifiable{xname, xname, "internal: " + bad.front()};
  }
  return out;
}

std::vector<std::string> factorisation_violations(const CausalDag& dag, const SurgeryFactorisation& f) {
  std::vector<std::string> bad;
  const std::size_t n = dag.size();
  enum Part { kUnset, kF1, kX, kG, kF2 };
  std::vector<Part> part(n, kUnset);
  auto assign = [&](const std::vector<std::string>& names, Part p) {
    for (const auto& name : names) {
      if (!dag.contains(name)) {
        bad.push_back("unknown node '" + name + "'");
        continue;
      }
      auto i = dag.index_of(name);
      if (part[i] != kUnset) bad.push_back("node '" + name + "' appears in two parts");
      part[i] = p;
    }
  };
  assign({f.target}, kX);
  assign(f.f1, kF1);
  assign(f.g, kG);
  assign(f.f2, kF2);
  if (!bad.empty()) return bad;
  for (std::size_t i = 0; i < n; ++i) {
    if (part[i] == kUnset) bad.push_back("node '" + dag.node(i).name + "' is in no part");
  }
  if (!bad.empty()) return bad;

  const auto x = dag.index_of(f.target);
  std::vector<bool> context(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    for (auto p : dag.parents(c)) {
      const auto& pn = dag.node(p).name;
      const auto& cn = dag.node(c).name;
      const std::string edge = "'" + pn + "' -> '" + cn + "'";
      switch (part[c]) {
        case kF1:
          if (part[p] != kF1) bad.push_back("edge " + edge + " enters f1 from outside f1");
          break;
        case kX:
          if (part[p] != kF1) bad.push_back("edge " + edge + " enters the target from outside f1");
          break;
        case kG:
          if (part[p] == kF2) bad.push_back("edge " + edge + " runs from f2 back into g");
          if (part[p] == kF1) {
            if (dag.node(p).latent) bad.push_back("edge " + edge + " is an un-copied wire from f1 into g");
            context[p] = true;
          }
          break;
        case kF2:
          if (part[p] == kX) bad.push_back("edge " + edge + " bypasses g");
          break;
        case kUnset:
          break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (part[i] != kG || !dag.node(i).latent) continue;
    for (auto c : dag.children(i)) {
      if (part[c] != kG) bad.push_back("latent '" + dag.node(i).name + "' in g has a child outside g");
    }
  }

  Grouping expect;
  expect.a = {f.target};
  for (std::size_t i = 0; i < n; ++i) {
    if (dag.node(i).latent || i == x) continue;
    if (context[i]) {
      expect.context.push_back(dag.node(i).name);
    } else if (part[i] == kG) {
      expect.b.push_back(dag.node(i).name);
    } else {
      expect.c.push_back(dag.node(i).name);
    }
  }
  if (!(expect == f.grouping)) bad.push_back("grouping does not match the partition");
  return bad;
}

}  // namespace surgery
