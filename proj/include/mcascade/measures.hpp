#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcascade/numeric.hpp"
#include "mcascade/rng.hpp"
#include "mcascade/symbolic.hpp"

namespace mcascade {

/// Tolerance used everywhere a probability vector must sum to one.
inline constexpr double kProbTolerance = 1e-12;

/// Mixture enumeration guard: b^n <= 2^24 leaf visits.
inline constexpr double kEnumerationGuardLog2 = 24.0;

class MeasureModel;

/// Incremental cylinder state over a measure: extends the current prefix one
/// symbol at a time and tracks log ν([u]) exactly, with O(1) advance/retreat
/// so depth-first tree walks and sequential conditional sampling share it.
/// All masses are carried in log space; a zero-mass cylinder is -inf.
class CylinderWalker {
 public:
  int depth() const { return static_cast<int>(lm_path_.size()) - 1; }
  double log_mass() const { return lm_path_.back(); }

  /// log ν([u·j]) without moving.
  double child_log_mass(int symbol) const;

  void advance(int symbol);
  void retreat();

 private:
  friend class MeasureModel;
  explicit CylinderWalker(const MeasureModel* m);

  const MeasureModel* model_;
  std::vector<double> lm_path_;           // log ν([u|_t]), t = 0..depth
  std::vector<int> state_path_;           // Markov: prefix/state index per level
  std::vector<CylinderWalker> comps_;     // Mixture: one walker per component
};

/// Computable Borel probability measure on Σ = Λ^{Z+} with exact cylinder
/// masses. Variants: maximal-entropy uniform, Bernoulli products, order-k
/// Markov chains (the finite-memory Gibbs class with constant distortion),
/// and one-level convex mixtures of the former.
class MeasureModel {
 public:
  enum class Kind { Uniform, Bernoulli, Markov, Mixture };

  static MeasureModel uniform(Alphabet a);
  static MeasureModel bernoulli(const Eigen::VectorXd& p);

  /// Order-k chain: `initial` is a probability vector over Λ^k (big-endian
  /// word indexing) and `transition` maps each k-word state to a distribution
  /// over the next symbol (rows of size b).
  static MeasureModel markov(Alphabet a, int order, const Eigen::VectorXd& initial,
                             const Eigen::MatrixXd& transition);

  /// Convex combination of non-mixture components over one alphabet.
  static MeasureModel mixture(std::vector<std::pair<double, MeasureModel>> components);

  Kind kind() const { return kind_; }
  Alphabet alphabet() const { return alphabet_; }
  int symbol_count() const { return alphabet_.size; }
  CylinderWalker walker() const { return CylinderWalker(this); }

  /// Short structural tag for reports ("bernoulli(0.7,0.3)", ...).
  std::string id() const;

  const Eigen::VectorXd& bernoulli_p() const { return p_; }
  int markov_order() const { return order_; }
  const Eigen::VectorXd& markov_initial() const { return initial_; }
  const Eigen::MatrixXd& markov_transition() const { return transition_; }
  const Eigen::VectorXd& markov_prefix_marginal(int len) const { return marginals_[len]; }
  const std::vector<double>& mixture_weights() const { return mix_w_; }
  const std::vector<MeasureModel>& mixture_components() const { return mix_comps_; }

 private:
  MeasureModel() = default;
  friend class CylinderWalker;

  Kind kind_ = Kind::Uniform;
  Alphabet alphabet_;
  double log_b_ = 0.0;

  Eigen::VectorXd p_, log_p_;                      // Bernoulli
  int order_ = 0;                                  // Markov
  Eigen::VectorXd initial_;                        //   over Λ^k
  Eigen::MatrixXd transition_, log_transition_;    //   b^k x b
  std::vector<Eigen::VectorXd> marginals_;         //   prefix marginals, len 0..k
  std::vector<double> mix_w_;                      // Mixture
  std::vector<MeasureModel> mix_comps_;
};

/// Exact ν([u]); 1 at the empty word.
double cylinder_mass(const MeasureModel& m, const Word& u);
double log_cylinder_mass(const MeasureModel& m, const Word& u);

/// Length-n word with the exact ν-marginal law on Λ^n, drawn by sequential
/// conditional sampling through the walker.
Word sample_prefix(const MeasureModel& m, int n, Rng& rng);

/// Closed-form entropy h_ν(σ) in nats. Throws input_error for mixtures
/// (entropy undefined for the non-ergodic convex combination).
double entropy(const MeasureModel& m);

/// -log ν([x|_n]) / n for each requested depth.
std::vector<double> local_dimension_trace(const MeasureModel& m, const Word& x,
                                          std::span<const int> depths);

/// Finite-n L^q approximant -(1/n) log Σ_{|u|=n} ν([u])^q, q >= 0. Closed
/// form for uniform/Bernoulli/Markov; mixtures enumerate under the guard.
double lq_sum(const MeasureModel& m, double q, int n);

/// Stationary law of the k-word chain (lazy power iteration, 1e-13 residual).
Eigen::VectorXd markov_stationary(const MeasureModel& m);

/// Asymptotic variance σ² of (log ν([x|_n]) + n·h_ν)/√n — the CLT scale of
/// the centered Birkhoff part. Zero iff the log-mass potential is cohomologous
/// to a constant (uniform-like masses). Exact via the lifted-chain Poisson
/// equation; Bernoulli reduces to Var(log p).
double log_mass_clt_variance(const MeasureModel& m);

}  // namespace mcascade
