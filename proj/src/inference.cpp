#include "surgery/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace surgery {

namespace {

VarSpace prefix(const VarSpace& s, std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  return s.select(idx);
}

VarSpace range(const VarSpace& s, std::size_t from, std::size_t to) {
  std::vector<std::size_t> idx;
  for (std::size_t k = from; k < to; ++k) idx.push_back(k);
  return s.select(idx);
}

void require_full_support(const JointState& omega) {
  for (std::size_t idx = 0; idx < omega.size(); ++idx) {
    if (!(omega[idx] > 0.0)) {
      throw Error(ErrorKind::NoFullSupport, "entry " + std::to_string(idx) + " of the joint is zero");
    }
  }
}

Eigen::Index ei(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

// ---------------------------------------------------------------------------
// Comb2

double comb_defect(const RMatrix& f, std::size_t a_dim) {
  if (a_dim == 0 || f.rows() % a_dim != 0) {
    throw Error(ErrorKind::DimensionMismatch, "codomain of size " + std::to_string(f.rows()) +
                                                  " does not split with |A| = " + std::to_string(a_dim));
  }
  const std::size_t c_dim = f.rows() / a_dim;
  double worst = 0.0;
  for (std::size_t i = 0; i < a_dim; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = 0; j < f.cols(); ++j) {
      double s = f.entries().block(ei(i * c_dim), ei(j), ei(c_dim), 1).sum();
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (f.cols() > 0) worst = std::max(worst, hi - lo);
  }
  return worst;
}

bool is_comb2(const RMatrix& f, std::size_t a_dim, double tol) { return comb_defect(f, a_dim) <= tol; }

Comb2::Comb2(StochMap map, VarSpace a, VarSpace c, double tol)
    : map_(std::move(map)), a_(std::move(a)), c_(std::move(c)) {
  if (a_.dim() * c_.dim() != map_.cod().dim()) {
    throw Error(ErrorKind::DimensionMismatch, "A (x) C does not match the comb's codomain");
  }
  if (double d = comb_defect(map_, a_.dim()); d > tol) {
    throw Error(ErrorKind::NotAComb, "A-marginal varies with the B input by " + std::to_string(d));
  }
}

// ---------------------------------------------------------------------------
// Disintegration

Disintegration disintegrate(const JointState& omega, std::size_t a_vars) {
  const VarSpace& vars = omega.vars();
  if (a_vars > vars.size()) throw Error(ErrorKind::DimensionMismatch, "split point beyond the last variable");
  require_full_support(omega);
  VarSpace a = prefix(vars, a_vars);
  VarSpace b = range(vars, a_vars, vars.size());
  const std::size_t na = a.dim(), nb = b.dim();

  Eigen::VectorXd prior(ei(na));
  Eigen::MatrixXd channel(ei(nb), ei(na));
  for (std::size_t i = 0; i < na; ++i) {
    double ai = 0.0;
    for (std::size_t j = 0; j < nb; ++j) ai += omega[i * nb + j];
    prior(ei(i)) = ai;
    for (std::size_t j = 0; j < nb; ++j) channel(ei(j), ei(i)) = omega[i * nb + j] / ai;
  }
  return {JointState(a, prior), StochMap(b, a, std::move(channel))};
}

JointState recompose(const Disintegration& d) {
  return compose(tensor(identity(d.prior.vars()), d.channel), compose(copy(d.prior.vars()), d.prior));
}

CombDisintegration comb_disintegrate(const JointState& omega, std::size_t a_vars, std::size_t b_vars) {
  const VarSpace& vars = omega.vars();
  if (a_vars + b_vars > vars.size()) throw Error(ErrorKind::DimensionMismatch, "grouping exceeds the state's variables");
  require_full_support(omega);
  VarSpace a = prefix(vars, a_vars);
  VarSpace b = range(vars, a_vars, a_vars + b_vars);
  VarSpace c = range(vars, a_vars + b_vars, vars.size());
  const std::size_t na = a.dim(), nb = b.dim(), nc = c.dim();
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return omega[(i * nb + j) * nc + k]; };

  // omega = a^i b_i^j c_{ij}^k; g := b, f_j^{ik} := a^i c_{ij}^k.
  Eigen::MatrixXd f(ei(na * nc), ei(nb));
  Eigen::MatrixXd g(ei(nb), ei(na));
  for (std::size_t i = 0; i < na; ++i) {
    double ai = 0.0;
    std::vector<double> aij(nb, 0.0);
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t k = 0; k < nc; ++k) aij[j] += at(i, j, k);
      ai += aij[j];
    }
    for (std::size_t j = 0; j < nb; ++j) {
      g(ei(j), ei(i)) = aij[j] / ai;
      for (std::size_t k = 0; k < nc; ++k) f(ei(i * nc + k), ei(j)) = ai * (at(i, j, k) / aij[j]);
    }
  }
  VarSpace ac = a.concat(c);
  return {Comb2(StochMap(ac, b, std::move(f)), a, c), StochMap(b, a, std::move(g))};
}

namespace {

void check_plug_shapes(const Comb2& f, const StochMap& g) {
  if (!g.dom().same_shape(f.a()) || !g.cod().same_shape(f.b())) {
    throw Error(ErrorKind::DimensionMismatch, "channel A -> B does not fit the comb's hole");
  }
}

}  // namespace

JointState comb_plug(const Comb2& f, const StochMap& g) {
  check_plug_shapes(f, g);
  const std::size_t na = f.a().dim(), nb = f.b().dim(), nc = f.c().dim();
  Eigen::VectorXd out(ei(na * nb * nc));
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t k = 0; k < nc; ++k) out(ei((i * nb + j) * nc + k)) = f(i, j, k) * g(j, i);
    }
  }
  return JointState(f.a().concat(f.b()).concat(f.c()), out);
}

JointState comb_plug_cut(const Comb2& f, const StochMap& g) {
  check_plug_shapes(f, g);
  const std::size_t na = f.a().dim(), nb = f.b().dim(), nc = f.c().dim();
  // h_j^k = sum_{i'} f_j^{i'k}: f with its A output discarded.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ei(nc), ei(nb));
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t k = 0; k < nc; ++k) {
      for (std::size_t i = 0; i < na; ++i) h(ei(k), ei(j)) += f(i, j, k);
    }
  }
  const double u = 1.0 / static_cast<double>(na);
  Eigen::VectorXd out(ei(na * nb * nc));
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t k = 0; k < nc; ++k) out(ei((i * nb + j) * nc + k)) = u * g(j, i) * h(ei(k), ei(j));
    }
  }
  return JointState(f.a().concat(f.b()).concat(f.c()), out);
}

// ---------------------------------------------------------------------------
// Pipeline

InterventionReport intervene_from_observational(const JointState& omega, const SurgeryFactorisation& fact) {
  const Grouping& gr = fact.grouping;
  const VarSpace& vars = omega.vars();
  if (gr.a.size() != 1 || gr.a.front() != fact.target) {
    throw Error(ErrorKind::GroupingMismatch, "A must be exactly the target '" + fact.target + "'");
  }
  std::vector<std::string> order;
  for (const auto* part : {&gr.context, &gr.a, &gr.b, &gr.c}) order.insert(order.end(), part->begin(), part->end());
  std::set<std::string> listed(order.begin(), order.end());
  if (listed.size() != order.size()) throw Error(ErrorKind::GroupingMismatch, "a variable appears twice in the grouping");
  for (const auto& name : order) {
    if (!vars.find(name)) throw Error(ErrorKind::GroupingMismatch, "grouping names '" + name + "', absent from the joint");
  }
  if (order.size() != vars.size()) {
    throw Error(ErrorKind::GroupingMismatch, "the joint has variables the grouping does not place");
  }
  require_full_support(omega);

  InterventionReport report{omega, omega.matrix().min_entry(), 0.0};
  const auto original = vars.names();

  if (gr.b.empty()) {
    // Nothing consumes the target: randomise it and keep the rest.
    std::vector<std::string> others;
    for (const auto& name : original) {
      if (name != fact.target) others.push_back(name);
    }
    JointState u = uniform(VarSpace{vars[vars.index_of(fact.target)]});
    JointState joined = tensor(u, marginalize(omega, others));
    report.state = permute_state(joined, original);
    return report;
  }

  JointState grouped = permute_state(omega, order);
  const VarSpace& gv = grouped.vars();
  std::size_t nk = 1;
  for (std::size_t t = 0; t < gr.context.size(); ++t) nk *= gv[t].card;
  const std::size_t slice = grouped.size() / nk;
  std::vector<std::size_t> rest_idx;
  for (std::size_t t = gr.context.size(); t < gv.size(); ++t) rest_idx.push_back(t);
  const VarSpace rest = gv.select(rest_idx);

  Eigen::VectorXd out(ei(grouped.size()));
  const Eigen::VectorXd values = grouped.values();
  for (std::size_t k = 0; k < nk; ++k) {
    // Comb surgery on the conditional slice, reweighted by P(context = k).
    Eigen::VectorXd part = values.segment(ei(k * slice), ei(slice));
    const double mass = part.sum();
    JointState cond(rest, Eigen::VectorXd(part / mass));
    CombDisintegration cd = comb_disintegrate(cond, gr.a.size(), gr.b.size());
    report.comb_defect = std::max(report.comb_defect, comb_defect(cd.comb.map(), cd.comb.a().dim()));
    JointState cut_slice = comb_plug_cut(cd.comb, cd.channel);
    out.segment(ei(k * slice), ei(slice)) = mass * cut_slice.values();
  }
  report.state = permute_state(JointState(gv, out), original);
  return report;
}

}  // namespace surgery
