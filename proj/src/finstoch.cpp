#include "surgery/finstoch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <utility>

namespace surgery {

namespace {

std::string shape_string(const VarSpace& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += s[i].name + ":" + std::to_string(s[i].card);
  }
  return out + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// VarSpace

VarSpace::VarSpace(std::initializer_list<Var> vars) : VarSpace(std::vector<Var>(vars)) {}

VarSpace::VarSpace(std::vector<Var> vars) : vars_(std::move(vars)) {
  for (const auto& v : vars_) {
    if (v.card < 1) {
      throw Error(ErrorKind::InvalidCardinality, "variable '" + v.name + "' has cardinality 0");
    }
    dim_ *= v.card;
  }
}

std::vector<std::size_t> VarSpace::cards() const {
  std::vector<std::size_t> out;
  out.reserve(vars_.size());
  for (const auto& v : vars_) out.push_back(v.card);
  return out;
}

std::vector<std::string> VarSpace::names() const {
  std::vector<std::string> out;
  out.reserve(vars_.size());
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

std::optional<std::size_t> VarSpace::find(std::string_view name) const {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name != name) continue;
    if (hit) throw Error(ErrorKind::DuplicateVariable, "ambiguous variable '" + std::string(name) + "'");
    hit = i;
  }
  return hit;
}

std::size_t VarSpace::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw Error(ErrorKind::UnknownVariable, "no variable '" + std::string(name) + "' in " + shape_string(*this));
  return *i;
}

VarSpace VarSpace::concat(const VarSpace& other) const {
  std::vector<Var> vars = vars_;
  vars.insert(vars.end(), other.vars_.begin(), other.vars_.end());
  return VarSpace(std::move(vars));
}

VarSpace VarSpace::select(std::span<const std::size_t> indices) const {
  std::vector<Var> vars;
  vars.reserve(indices.size());
  for (auto i : indices) vars.push_back(vars_.at(i));
  return VarSpace(std::move(vars));
}

bool VarSpace::same_shape(const VarSpace& other) const {
  // The unit may be spelled with trivial factors; compare the non-trivial list.
  std::vector<std::size_t> a, b;
  for (const auto& v : vars_) if (v.card != 1) a.push_back(v.card);
  for (const auto& v : other.vars_) if (v.card != 1) b.push_back(v.card);
  return a == b;
}

bool VarSpace::has_unique_names() const {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars_) {
    if (!seen.insert(v.name).second) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// MixedRadix

MixedRadix::MixedRadix(std::vector<std::size_t> cards) : cards_(std::move(cards)), strides_(cards_.size()) {
  for (std::size_t k = cards_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= cards_[k];
  }
}

std::size_t MixedRadix::encode(std::span<const std::size_t> digits) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < cards_.size(); ++k) index += digits[k] * strides_[k];
  return index;
}

void MixedRadix::decode(std::size_t index, std::span<std::size_t> out) const {
  for (std::size_t k = 0; k < cards_.size(); ++k) {
    out[k] = index / strides_[k];
    index %= strides_[k];
  }
}

std::vector<std::size_t> MixedRadix::decode(std::size_t index) const {
  std::vector<std::size_t> out(cards_.size());
  decode(index, out);
  return out;
}

// ---------------------------------------------------------------------------
// RMatrix / StochMap / JointState

RMatrix::RMatrix(VarSpace cod, VarSpace dom, Eigen::MatrixXd entries)
    : cod_(std::move(cod)), dom_(std::move(dom)), entries_(std::move(entries)) {
  if (static_cast<std::size_t>(entries_.rows()) != cod_.dim() ||
      static_cast<std::size_t>(entries_.cols()) != dom_.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix is " + std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()) +
                    " but spaces are " + shape_string(cod_) + " <- " + shape_string(dom_));
  }
  for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
    for (Eigen::Index r = 0; r < entries_.rows(); ++r) {
      double v = entries_(r, c);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::NegativeEntry, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                                  ") = " + std::to_string(v) + " is not a nonnegative real");
      }
    }
  }
}

RMatrix RMatrix::zeros(VarSpace cod, VarSpace dom) {
  auto rows = static_cast<Eigen::Index>(cod.dim());
  auto cols = static_cast<Eigen::Index>(dom.dim());
  return RMatrix(std::move(cod), std::move(dom), Eigen::MatrixXd::Zero(rows, cols));
}

double RMatrix::min_entry() const { return entries_.size() ? entries_.minCoeff() : 0.0; }

double RMatrix::stochastic_defect() const {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
    worst = std::max(worst, std::abs(entries_.col(c).sum() - 1.0));
  }
  return worst;
}

StochMap::StochMap(RMatrix m, double tol) : m_(std::move(m)) {
  const auto& e = m_.entries();
  for (Eigen::Index c = 0; c < e.cols(); ++c) {
    double sum = e.col(c).sum();
    if (std::abs(sum - 1.0) > tol) {
      throw Error(ErrorKind::NotStochastic,
                  "column " + std::to_string(c) + " sums to " + std::to_string(sum));
    }
  }
}

StochMap::StochMap(VarSpace cod, VarSpace dom, Eigen::MatrixXd entries, double tol)
    : StochMap(RMatrix(std::move(cod), std::move(dom), std::move(entries)), tol) {}

JointState::JointState(StochMap m) : m_(std::move(m)) {
  if (m_.dom().dim() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "a state must have trivial input, got " + shape_string(m_.dom()));
  }
}

JointState::JointState(VarSpace vars, const Eigen::VectorXd& probs, double tol)
    : JointState(StochMap(RMatrix(std::move(vars), VarSpace{}, probs), tol)) {}

JointState::JointState(VarSpace vars, std::vector<double> probs, double tol)
    : JointState(std::move(vars), Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size())),
                 tol) {}

std::vector<double> JointState::to_vector() const {
  const auto& e = m_.entries();
  return std::vector<double>(e.data(), e.data() + e.size());
}

// ---------------------------------------------------------------------------
// Composition and tensor

RMatrix compose(const RMatrix& g, const RMatrix& f) {
  if (!f.cod().same_shape(g.dom())) {
    throw Error(ErrorKind::DimensionMismatch,
                "cannot compose: codomain " + shape_string(f.cod()) + " vs domain " + shape_string(g.dom()));
  }
  return RMatrix(g.cod(), f.dom(), g.entries() * f.entries());
}

StochMap compose(const StochMap& g, const StochMap& f) {
  return StochMap(compose(g.matrix(), f.matrix()));
}

JointState compose(const StochMap& g, const JointState& f) {
  return JointState(compose(g, f.map()));
}

RMatrix tensor(const RMatrix& f, const RMatrix& g) {
  const auto& a = f.entries();
  const auto& b = g.entries();
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      out.block(k * b.rows(), i * b.cols(), b.rows(), b.cols()) = a(k, i) * b;
    }
  }
  return RMatrix(f.cod().concat(g.cod()), f.dom().concat(g.dom()), std::move(out));
}

StochMap tensor(const StochMap& f, const StochMap& g) { return StochMap(tensor(f.matrix(), g.matrix())); }

JointState tensor(const JointState& f, const JointState& g) { return JointState(tensor(f.map(), g.map())); }

// ---------------------------------------------------------------------------
// Structure maps

StochMap identity(const VarSpace& a) {
  auto n = static_cast<Eigen::Index>(a.dim());
  return StochMap(a, a, Eigen::MatrixXd::Identity(n, n));
}

StochMap copy(const VarSpace& a) {
  const auto n = a.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i * n + i), static_cast<Eigen::Index>(i)) = 1.0;
  return StochMap(a.concat(a), a, std::move(m));
}

StochMap discard(const VarSpace& a) {
  return StochMap(VarSpace{}, a, Eigen::MatrixXd::Ones(1, static_cast<Eigen::Index>(a.dim())));
}

JointState uniform(const VarSpace& a) {
  auto n = static_cast<Eigen::Index>(a.dim());
  return JointState(a, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

StochMap swap(const VarSpace& a, const VarSpace& b) {
  // sigma_{ij}^{kl} = delta_i^l delta_j^k
  const auto na = a.dim(), nb = b.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(na * nb), static_cast<Eigen::Index>(na * nb));
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      m(static_cast<Eigen::Index>(j * na + i), static_cast<Eigen::Index>(i * nb + j)) = 1.0;
    }
  }
  return StochMap(b.concat(a), a.concat(b), std::move(m));
}

StochMap permutation(const VarSpace& dom, std::span<const std::size_t> order) {
  const auto n = dom.size();
  std::vector<bool> seen(n, false);
  if (order.size() != n) throw Error(ErrorKind::InvalidPermutation, "permutation has wrong length");
  for (auto k : order) {
    if (k >= n || seen[k]) throw Error(ErrorKind::InvalidPermutation, "not a permutation of the input wires");
    seen[k] = true;
  }
  VarSpace cod = dom.select(order);
  MixedRadix in(dom.cards()), out(cod.cards());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dom.dim()), static_cast<Eigen::Index>(dom.dim()));
  std::vector<std::size_t> src(n), dst(n);
  for (std::size_t col = 0; col < in.size(); ++col) {
    in.decode(col, src);
    for (std::size_t k = 0; k < n; ++k) dst[k] = src[order[k]];
    m(static_cast<Eigen::Index>(out.encode(dst)), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return StochMap(std::move(cod), dom, std::move(m));
}

JointState point_state(const VarSpace& a, std::size_t index) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.dim()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return JointState(a, v);
}

RMatrix cap(const VarSpace& a) {
  const auto n = a.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(n * n));
  for (std::size_t i = 0; i < n; ++i) m(0, static_cast<Eigen::Index>(i * n + i)) = 1.0;
  return RMatrix(VarSpace{}, a.concat(a), std::move(m));
}

RMatrix cup(const VarSpace& a) {
  const auto n = a.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * n), 1);
  for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i * n + i), 0) = 1.0;
  return RMatrix(a.concat(a), VarSpace{}, std::move(m));
}

bool is_stochastic(const RMatrix& f, double tol) {
  // Nonnegativity is an RMatrix invariant.
  return f.stochastic_defect() <= tol;
}

bool has_full_support(const RMatrix& f) { return f.entries().size() == 0 || f.min_entry() > 0.0; }

// ---------------------------------------------------------------------------
// Marginals and reorderings

JointState marginalize(const JointState& omega, const std::vector<std::string>& keep) {
  const VarSpace& vars = omega.vars();
  std::vector<bool> kept(vars.size(), false);
  for (const auto& name : keep) kept[vars.index_of(name)] = true;
  std::vector<std::size_t> keep_idx;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (kept[k]) keep_idx.push_back(k);
  }
  VarSpace out_vars = vars.select(keep_idx);
  MixedRadix in(vars.cards()), out(out_vars.cards());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out.size()));
  std::vector<std::size_t> digits(vars.size()), sub(keep_idx.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    in.decode(idx, digits);
    for (std::size_t k = 0; k < keep_idx.size(); ++k) sub[k] = digits[keep_idx[k]];
    acc(static_cast<Eigen::Index>(out.encode(sub))) += omega[idx];
  }
  return JointState(std::move(out_vars), acc);
}

JointState permute_state(const JointState& omega, const std::vector<std::string>& order) {
  const VarSpace& vars = omega.vars();
  if (order.size() != vars.size()) {
    throw Error(ErrorKind::InvalidPermutation, "order lists " + std::to_string(order.size()) + " of " +
                                                   std::to_string(vars.size()) + " variables");
  }
  std::vector<std::size_t> perm;
  perm.reserve(order.size());
  for (const auto& name : order) {
    auto i = vars.find(name);
    if (!i) throw Error(ErrorKind::InvalidPermutation, "unknown variable '" + name + "' in order");
    perm.push_back(*i);
  }
  std::vector<bool> seen(vars.size(), false);
  for (auto k : perm) {
    if (seen[k]) throw Error(ErrorKind::InvalidPermutation, "variable '" + vars[k].name + "' listed twice");
    seen[k] = true;
  }
  // Index form of compose(permutation(vars, perm), omega); avoids the dense |V|^2 matrix.
  VarSpace out_vars = vars.select(perm);
  MixedRadix in(vars.cards()), out(out_vars.cards());
  Eigen::VectorXd v(static_cast<Eigen::Index>(in.size()));
  std::vector<std::size_t> src(vars.size()), dst(vars.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    in.decode(idx, src);
    for (std::size_t k = 0; k < perm.size(); ++k) dst[k] = src[perm[k]];
    v(static_cast<Eigen::Index>(out.encode(dst))) = omega[idx];
  }
  return JointState(std::move(out_vars), v);
}

double max_abs_diff(const RMatrix& a, const RMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot compare matrices of different shape");
  }
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

}  // namespace surgery
