#pragma once

// Disintegration, comb disintegration, and the observational-to-
// interventional pipeline.
//
// Index names follow the usual convention for a state on A (x) B (x) C:
// i ranges over A, j over B, k over C.

#include <cstddef>
#include <vector>

#include "surgery/causal_syntax.hpp"
#include "surgery/finstoch.hpp"

namespace surgery {

inline constexpr double kTolComb = 1e-9;
inline constexpr double kTolRecon = 1e-12;
inline constexpr double kTolReconComputed = 1e-10;

/// A stochastic map B -> A (x) C whose A-marginal does not depend on the
/// B input: sum_k f_j^{ik} is constant in j for every i.
class Comb2 {
 public:
  /// `a` and `c` split the codomain of `map`. Throws NotAComb or
  /// DimensionMismatch.
  Comb2(StochMap map, VarSpace a, VarSpace c, double tol = kTolComb);

  const StochMap& map() const noexcept { return map_; }
  const VarSpace& a() const noexcept { return a_; }
  const VarSpace& b() const noexcept { return map_.dom(); }
  const VarSpace& c() const noexcept { return c_; }
  /// f_j^{ik}
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return map_(i * c_.dim() + k, j); }

 private:
  StochMap map_;
  VarSpace a_;
  VarSpace c_;
};

/// max over i of (max_j - min_j) sum_k f_j^{ik}, with `a_dim` = |A|.
double comb_defect(const RMatrix& f, std::size_t a_dim);
bool is_comb2(const RMatrix& f, std::size_t a_dim, double tol = kTolComb);

struct Disintegration {
  JointState prior;   // on A
  StochMap channel;   // A -> B
};

/// Split a full-support state on A (x) B, where A is the first `a_vars`
/// variables. Throws NoFullSupport.
Disintegration disintegrate(const JointState& omega, std::size_t a_vars);

/// copy on A, then id (x) channel.
JointState recompose(const Disintegration& d);

struct CombDisintegration {
  Comb2 comb;        // B -> A (x) C
  StochMap channel;  // A -> B
};

/// The unique 2-comb f and channel g with omega^{ijk} = f_j^{ik} g_i^j, for a
/// full-support state on A (x) B (x) C split as (a_vars, b_vars, rest).
CombDisintegration comb_disintegrate(const JointState& omega, std::size_t a_vars, std::size_t b_vars);

/// omega^{ijk} = f_j^{ik} g_i^j
JointState comb_plug(const Comb2& f, const StochMap& g);

/// The same plug with a cut on the A wire: the A output of f is discarded
/// and a uniform A is copied into both the A output and g.
///   omega'^{ijk} = (1/|A|) g_i^j sum_{i'} f_j^{i'k}
JointState comb_plug_cut(const Comb2& f, const StochMap& g);

struct InterventionReport {
  JointState state;
  /// Smallest entry of the observational input (full-support margin).
  double min_input_entry = 0.0;
  /// Largest comb-law defect seen across context slices.
  double comb_defect = 0.0;
};

/// Interventional state at fact.target from the observational state
/// `omega`, using only the factorisation's grouping. The result is in
/// omega's variable order. Throws NoFullSupport, GroupingMismatch.
InterventionReport intervene_from_observational(const JointState& omega, const SurgeryFactorisation& fact);

}  // namespace surgery
