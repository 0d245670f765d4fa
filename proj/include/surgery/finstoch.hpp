#pragma once

// Dense finite-dimensional stochastic matrices: the category of finite sets
// and nonnegative matrices, its stochastic subcategory, and the copy /
// discard / uniform / cap / cup structure on every object.
//
// Index convention: a joint index over (A1, ..., An) is mixed-radix with A1
// most significant. Row index = output, column index = input.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "surgery/error.hpp"

namespace surgery {

/// Tolerance for column-stochasticity checks on computed values.
inline constexpr double kTolStoch = 1e-9;
/// Tolerance for algebraic laws on exactly representable inputs.
inline constexpr double kTolExact = 1e-12;

struct Var {
  std::string name;
  std::size_t card = 1;

  friend bool operator==(const Var&, const Var&) = default;
};

/// Ordered product of named finite variables. The empty space is the
/// monoidal unit I (dimension 1).
///
/// Names are not required to be distinct: copy(A) has codomain A (x) A.
/// Name lookups on a space with a repeated name throw DuplicateVariable.
class VarSpace {
 public:
  VarSpace() = default;
  VarSpace(std::initializer_list<Var> vars);
  explicit VarSpace(std::vector<Var> vars);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }
  const Var& operator[](std::size_t i) const { return vars_.at(i); }
  const std::vector<Var>& vars() const noexcept { return vars_; }

  std::vector<std::size_t> cards() const;
  std::vector<std::string> names() const;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable if absent, DuplicateVariable if ambiguous.
  std::size_t index_of(std::string_view name) const;

  VarSpace concat(const VarSpace& other) const;
  /// Subspace made of the variables at `indices`, in that order.
  VarSpace select(std::span<const std::size_t> indices) const;
  /// Same cardinality list; names are ignored.
  bool same_shape(const VarSpace& other) const;
  bool has_unique_names() const;

  friend bool operator==(const VarSpace&, const VarSpace&) = default;

 private:
  std::vector<Var> vars_;
  std::size_t dim_ = 1;
};

/// Mixed-radix codec, first digit most significant.
class MixedRadix {
 public:
  explicit MixedRadix(std::vector<std::size_t> cards);

  std::size_t size() const noexcept { return size_; }
  std::size_t digits() const noexcept { return cards_.size(); }
  std::size_t card(std::size_t axis) const { return cards_[axis]; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::size_t encode(std::span<const std::size_t> digits) const;
  void decode(std::size_t index, std::span<std::size_t> out) const;
  std::vector<std::size_t> decode(std::size_t index) const;

 private:
  std::vector<std::size_t> cards_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// A morphism of Mat(R+): a |cod| x |dom| matrix of nonnegative reals.
class RMatrix {
 public:
  RMatrix(VarSpace cod, VarSpace dom, Eigen::MatrixXd entries);

  static RMatrix zeros(VarSpace cod, VarSpace dom);

  const VarSpace& cod() const noexcept { return cod_; }
  const VarSpace& dom() const noexcept { return dom_; }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  std::size_t rows() const noexcept { return cod_.dim(); }
  std::size_t cols() const noexcept { return dom_.dim(); }

  double min_entry() const;
  /// Largest |column sum - 1|.
  double stochastic_defect() const;

 private:
  VarSpace cod_;
  VarSpace dom_;
  Eigen::MatrixXd entries_;
};

/// A morphism of Stoch: every column sums to one.
class StochMap {
 public:
  explicit StochMap(RMatrix m, double tol = kTolStoch);
  StochMap(VarSpace cod, VarSpace dom, Eigen::MatrixXd entries, double tol = kTolStoch);

  const RMatrix& matrix() const noexcept { return m_; }
  operator const RMatrix&() const noexcept { return m_; }  // NOLINT(google-explicit-constructor)

  const VarSpace& cod() const noexcept { return m_.cod(); }
  const VarSpace& dom() const noexcept { return m_.dom(); }
  const Eigen::MatrixXd& entries() const noexcept { return m_.entries(); }
  double operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

 private:
  RMatrix m_;
};

/// A state I -> vars, i.e. a probability distribution.
class JointState {
 public:
  explicit JointState(StochMap m);
  JointState(VarSpace vars, std::vector<double> probs, double tol = kTolStoch);
  JointState(VarSpace vars, const Eigen::VectorXd& probs, double tol = kTolStoch);

  const StochMap& map() const noexcept { return m_; }
  const RMatrix& matrix() const noexcept { return m_.matrix(); }
  const VarSpace& vars() const noexcept { return m_.cod(); }
  std::size_t size() const noexcept { return m_.cod().dim(); }
  double operator[](std::size_t i) const { return m_(i, 0); }
  Eigen::VectorXd values() const { return m_.entries().col(0); }
  std::vector<double> to_vector() const;

 private:
  StochMap m_;
};

RMatrix compose(const RMatrix& g, const RMatrix& f);
StochMap compose(const StochMap& g, const StochMap& f);
JointState compose(const StochMap& g, const JointState& f);

RMatrix tensor(const RMatrix& f, const RMatrix& g);
StochMap tensor(const StochMap& f, const StochMap& g);
JointState tensor(const JointState& f, const JointState& g);

StochMap identity(const VarSpace& a);
StochMap copy(const VarSpace& a);
StochMap discard(const VarSpace& a);
JointState uniform(const VarSpace& a);
StochMap swap(const VarSpace& a, const VarSpace& b);
/// Wire permutation dom -> cod where output wire k is input wire order[k].
StochMap permutation(const VarSpace& dom, std::span<const std::size_t> order);
JointState point_state(const VarSpace& a, std::size_t index);

RMatrix cap(const VarSpace& a);
RMatrix cup(const VarSpace& a);

bool is_stochastic(const RMatrix& f, double tol = kTolStoch);
/// Strict positivity of every entry, no epsilon.
bool has_full_support(const RMatrix& f);

JointState marginalize(const JointState& omega, const std::vector<std::string>& keep);
JointState permute_state(const JointState& omega, const std::vector<std::string>& order);

double max_abs_diff(const RMatrix& a, const RMatrix& b);

}  // namespace surgery
