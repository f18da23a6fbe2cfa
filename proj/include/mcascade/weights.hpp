#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "mcascade/measures.hpp"
#include "mcascade/rng.hpp"

namespace mcascade {

struct WeightAtom {
  double value = 1.0;  // v >= 0
  double prob = 1.0;   // q >= 0
};

/// Law of the mean-one cascade weight X together with its size-biased
/// companion (the spine law). Three variants:
///   Discrete  — atoms (v_i, q_i) with Σq = 1 and ΣqV = 1;
///   LogNormal — log X ~ N(-σ²/2, σ²), mean one by construction;
///   QAlpha    — e^α with probability e^{-α}, else 0 (the β-model).
class WeightModel {
 public:
  enum class Kind { Discrete, LogNormal, QAlpha };

  static WeightModel discrete(std::vector<WeightAtom> atoms);
  static WeightModel log_normal(double s2);
  static WeightModel q_alpha(double alpha);

  Kind kind() const { return kind_; }
  const std::vector<WeightAtom>& atoms() const { return atoms_; }
  double s2() const { return s2_; }
  double alpha() const { return alpha_; }

  /// h_X = E(X log X), in closed form: Σ q v log v / σ²/2 / α.
  double h_x() const;

  /// One draw of X.
  double sample(Rng& rng) const { return from_uniform_source(rng); }

  /// log X with -inf encoding a zero weight.
  double sample_log(Rng& rng) const { return log_from_uniform_source(rng); }

  /// One draw of U with E f(U) = E[X f(log X)]: the size-biased log weight.
  /// Zero atoms disappear; LogNormal tilts to N(+σ²/2, σ²); QAlpha is the
  /// constant α.
  double sample_size_biased_log(Rng& rng) const;

  /// Deterministic node draw from a counter-based stream (cascade use).
  double log_from_stream(CounterStream& cs) const { return log_from_uniform_source(cs); }

  /// True iff X is almost surely 1 (the identity cascade).
  bool is_unit() const;

  /// α such that X conditioned on X > 0 is the constant e^α with α > 0,
  /// i.e. the law is of Q_α type; nullopt otherwise.
  std::optional<double> q_alpha_exponent() const;

  std::string id() const;

 private:
  WeightModel() = default;

  template <class Source>
  double log_from_uniform_source(Source& src) const;
  template <class Source>
  double from_uniform_source(Source& src) const;

  Kind kind_ = Kind::Discrete;
  std::vector<WeightAtom> atoms_;
  std::vector<double> cdf_;              // Discrete: sampling
  std::vector<double> size_biased_cdf_;  // Discrete: atom prob q·v
  double s2_ = 0.0;
  double alpha_ = 0.0;
};

struct VectorWeightAtom {
  Eigen::VectorXd values;  // (V_0, …, V_{b-1}), entries >= 0
  double prob = 1.0;
};

/// Discrete law of the weight vector V = (V_0, …, V_{b-1}) applied jointly to
/// a sibling group; coordinates may be dependent but each has mean one.
class VectorWeightModel {
 public:
  explicit VectorWeightModel(std::vector<VectorWeightAtom> atoms);

  int alphabet_size() const { return b_; }
  const std::vector<VectorWeightAtom>& atoms() const { return atoms_; }

  int sample_atom(Rng& rng) const { return atom_from_uniform(rng.next_u01()); }
  int atom_from_stream(CounterStream& cs) const { return atom_from_uniform(cs.next_u01()); }

  bool is_unit() const;
  std::string id() const;

 private:
  int atom_from_uniform(double u) const;

  std::vector<VectorWeightAtom> atoms_;
  std::vector<double> cdf_;
  int b_ = 0;
};

/// h_{V,ν} = Σ_j E(V_j log V_j) ν([j]).
double h_v_nu(const VectorWeightModel& v, const MeasureModel& m);

struct QAlphaVectorInfo {
  double alpha = 0.0;
  /// Set when every atom has exactly one coordinate equal to b and the rest
  /// zero: the surviving support is a single path (degenerate critical
  /// Galton-Watson line).
  bool degenerate_galton_watson = false;
};

/// α such that every coordinate of V, conditioned on positivity, is the
/// constant e^α with α > 0; nullopt otherwise.
std::optional<QAlphaVectorInfo> q_alpha_vector_type(const VectorWeightModel& v);

}  // namespace mcascade
