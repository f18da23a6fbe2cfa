#include "mcascade/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mcascade {

namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

void check_probability_vector(const Eigen::VectorXd& p, const std::string& what) {
  if (p.size() < 1) throw input_error(what + ": empty probability vector");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0)) throw input_error(what + ": negative or NaN entry");
  }
  if (std::abs(p.sum() - 1.0) > kProbTolerance) {
    std::ostringstream os;
    os << what << ": sums to " << p.sum() << " (needs 1 within 1e-12)";
    throw input_error(os.str());
  }
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

MeasureModel MeasureModel::uniform(Alphabet a) {
  MeasureModel m;
  m.kind_ = Kind::Uniform;
  m.alphabet_ = a;
  m.log_b_ = std::log(static_cast<double>(a.size));
  return m;
}

MeasureModel MeasureModel::bernoulli(const Eigen::VectorXd& p) {
  check_probability_vector(p, "bernoulli.p");
  MeasureModel m;
  m.kind_ = Kind::Bernoulli;
  m.alphabet_ = Alphabet(static_cast<int>(p.size()));
  m.log_b_ = std::log(static_cast<double>(p.size()));
  m.p_ = p;
  m.log_p_ = p.unaryExpr([](double x) { return safe_log(x); });
  return m;
}

MeasureModel MeasureModel::markov(Alphabet a, int order, const Eigen::VectorXd& initial,
                                  const Eigen::MatrixXd& transition) {
  if (order < 1) throw input_error("markov.order: needs k >= 1");
  const std::int64_t states = ipow(a.size, order);
  if (states > (1 << 20)) throw input_error("markov: state space b^k too large");
  if (initial.size() != states) {
    throw input_error("markov.initial: needs length b^k = " + std::to_string(states));
  }
  check_probability_vector(initial, "markov.initial");
  if (transition.rows() != states || transition.cols() != a.size) {
    throw input_error("markov.transition: needs shape b^k x b");
  }
  for (Eigen::Index s = 0; s < transition.rows(); ++s) {
    Eigen::VectorXd row = transition.row(s);
    check_probability_vector(row, "markov.transition row " + std::to_string(s));
  }

  MeasureModel m;
  m.kind_ = Kind::Markov;
  m.alphabet_ = a;
  m.log_b_ = std::log(static_cast<double>(a.size));
  m.order_ = order;
  m.initial_ = initial;
  m.transition_ = transition;
  m.log_transition_ = transition.unaryExpr([](double x) { return safe_log(x); });

  // Prefix marginals by downward summation, so that sibling masses add up to
  // the parent mass exactly in floating point.
  m.marginals_.assign(static_cast<std::size_t>(order) + 1, Eigen::VectorXd());
  m.marginals_[static_cast<std::size_t>(order)] = initial;
  for (int len = order - 1; len >= 0; --len) {
    const Eigen::VectorXd& finer = m.marginals_[static_cast<std::size_t>(len) + 1];
    Eigen::VectorXd coarse = Eigen::VectorXd::Zero(ipow(a.size, len));
    for (Eigen::Index i = 0; i < finer.size(); ++i) coarse[i / a.size] += finer[i];
    m.marginals_[static_cast<std::size_t>(len)] = std::move(coarse);
  }
  return m;
}

MeasureModel MeasureModel::mixture(std::vector<std::pair<double, MeasureModel>> components) {
  if (components.empty()) throw input_error("mixture: needs at least one component");
  double total = 0.0;
  const Alphabet a = components.front().second.alphabet();
  for (const auto& [w, comp] : components) {
    if (!(w > 0.0)) throw input_error("mixture: weights must be positive");
    if (comp.kind() == Kind::Mixture) {
      throw input_error("mixture: nesting depth is limited to 1 (components must be non-mixtures)");
    }
    if (!(comp.alphabet() == a)) throw input_error("mixture: components must share one alphabet");
    total += w;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    throw input_error("mixture: weights sum to " + std::to_string(total));
  }

  MeasureModel m;
  m.kind_ = Kind::Mixture;
  m.alphabet_ = a;
  m.log_b_ = std::log(static_cast<double>(a.size));
  for (auto& [w, comp] : components) {
    m.mix_w_.push_back(w);
    m.mix_comps_.push_back(std::move(comp));
  }
  return m;
}

std::string MeasureModel::id() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Uniform:
      os << "uniform(b=" << alphabet_.size << ")";
      break;
    case Kind::Bernoulli:
      os << "bernoulli(";
      for (Eigen::Index i = 0; i < p_.size(); ++i) os << (i ? "," : "") << p_[i];
      os << ")";
      break;
    case Kind::Markov:
      os << "markov(b=" << alphabet_.size << ",k=" << order_ << ")";
      break;
    case Kind::Mixture:
      os << "mixture(";
      for (std::size_t i = 0; i < mix_comps_.size(); ++i) {
        os << (i ? "," : "") << mix_w_[i] << "*" << mix_comps_[i].id();
      }
      os << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Walker
// ---------------------------------------------------------------------------

CylinderWalker::CylinderWalker(const MeasureModel* m) : model_(m) {
  lm_path_.push_back(0.0);
  if (m->kind_ == MeasureModel::Kind::Markov) state_path_.push_back(0);
  if (m->kind_ == MeasureModel::Kind::Mixture) {
    comps_.reserve(m->mix_comps_.size());
    for (const MeasureModel& c : m->mix_comps_) comps_.push_back(c.walker());
  }
}

double CylinderWalker::child_log_mass(int symbol) const {
  const MeasureModel& m = *model_;
  switch (m.kind_) {
    case MeasureModel::Kind::Uniform:
      return log_mass() - m.log_b_;
    case MeasureModel::Kind::Bernoulli:
      return log_mass() + m.log_p_[symbol];
    case MeasureModel::Kind::Markov: {
      const int t = depth();
      if (t < m.order_) {
        const int pidx = state_path_.back() * m.alphabet_.size + symbol;
        return safe_log(m.marginals_[static_cast<std::size_t>(t) + 1][pidx]);
      }
      return log_mass() + m.log_transition_(state_path_.back(), symbol);
    }
    case MeasureModel::Kind::Mixture: {
      // log Σ w_i exp(lm_i), shifted by the running max for stability.
      double mx = kNegInf;
      for (const CylinderWalker& c : comps_) mx = std::max(mx, c.child_log_mass(symbol));
      if (mx == kNegInf) return kNegInf;
      double s = 0.0;
      for (std::size_t i = 0; i < comps_.size(); ++i) {
        const double lm = comps_[i].child_log_mass(symbol);
        if (lm != kNegInf) s += m.mix_w_[i] * std::exp(lm - mx);
      }
      return mx + std::log(s);
    }
  }
  return kNegInf;
}

void CylinderWalker::advance(int symbol) {
  const MeasureModel& m = *model_;
  lm_path_.push_back(child_log_mass(symbol));
  if (m.kind_ == MeasureModel::Kind::Markov) {
    const int t = depth() - 1;  // depth before this step
    const int b = m.alphabet_.size;
    if (t < m.order_) {
      state_path_.push_back(state_path_.back() * b + symbol);
    } else {
      const std::int64_t states = ipow(b, m.order_);
      state_path_.push_back(static_cast<int>((static_cast<std::int64_t>(state_path_.back()) * b +
                                              symbol) % states));
    }
  }
  for (CylinderWalker& c : comps_) c.advance(symbol);
}

void CylinderWalker::retreat() {
  lm_path_.pop_back();
  if (!state_path_.empty() && state_path_.size() > lm_path_.size()) state_path_.pop_back();
  for (CylinderWalker& c : comps_) c.retreat();
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double log_cylinder_mass(const MeasureModel& m, const Word& u) {
  CylinderWalker w = m.walker();
  for (int i = 0; i < u.length(); ++i) {
    if (u[i] >= m.symbol_count()) throw input_error("cylinder_mass: symbol out of range");
    w.advance(u[i]);
  }
  return w.log_mass();
}

double cylinder_mass(const MeasureModel& m, const Word& u) {
  return std::exp(log_cylinder_mass(m, u));
}

Word sample_prefix(const MeasureModel& m, int n, Rng& rng) {
  if (n < 0) throw input_error("sample_prefix: depth must be >= 0");
  const int b = m.symbol_count();
  CylinderWalker w = m.walker();
  std::vector<std::uint8_t> syms;
  syms.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const double lm = w.log_mass();
    const double u = rng.next_u01();
    double acc = 0.0;
    int pick = -1;
    for (int j = 0; j < b; ++j) {
      const double clm = w.child_log_mass(j);
      if (clm == kNegInf) continue;
      acc += std::exp(clm - lm);
      pick = j;
      if (u < acc) break;
    }
    if (pick < 0) throw support_error("sample_prefix: all child cylinders have zero mass");
    w.advance(pick);
    syms.push_back(static_cast<std::uint8_t>(pick));
  }
  return Word(std::move(syms));
}

double entropy(const MeasureModel& m) {
  switch (m.kind()) {
    case MeasureModel::Kind::Uniform:
      return std::log(static_cast<double>(m.symbol_count()));
    case MeasureModel::Kind::Bernoulli: {
      double h = 0.0;
      for (Eigen::Index i = 0; i < m.bernoulli_p().size(); ++i) h -= xlogx(m.bernoulli_p()[i]);
      return h;
    }
    case MeasureModel::Kind::Markov: {
      const Eigen::VectorXd pi = markov_stationary(m);
      const Eigen::MatrixXd& T = m.markov_transition();
      double h = 0.0;
      for (Eigen::Index s = 0; s < T.rows(); ++s) {
        for (Eigen::Index j = 0; j < T.cols(); ++j) h -= pi[s] * xlogx(T(s, j));
      }
      return h;
    }
    case MeasureModel::Kind::Mixture:
      throw input_error("entropy undefined for non-ergodic mixture; query components");
  }
  return 0.0;
}

std::vector<double> local_dimension_trace(const MeasureModel& m, const Word& x,
                                          std::span<const int> depths) {
  int max_depth = 0;
  for (int n : depths) {
    if (n < 1) throw input_error("local_dimension_trace: depths must be >= 1");
    max_depth = std::max(max_depth, n);
  }
  if (x.length() < max_depth) {
    throw input_error("local_dimension_trace: word shorter than requested depth");
  }
  CylinderWalker w = m.walker();
  std::vector<double> lm(static_cast<std::size_t>(max_depth) + 1, 0.0);
  for (int t = 0; t < max_depth; ++t) {
    w.advance(x[t]);
    lm[static_cast<std::size_t>(t) + 1] = w.log_mass();
    if (w.log_mass() == kNegInf) {
      throw support_error("local_dimension_trace: point outside support at depth " +
                          std::to_string(t + 1));
    }
  }
  std::vector<double> out;
  out.reserve(depths.size());
  for (int n : depths) out.push_back(-lm[static_cast<std::size_t>(n)] / n);
  return out;
}

namespace {

// Σ_{|u|=n} ν([u])^q by depth-first enumeration (mixtures), guarded.
double lq_sum_enumerated(const MeasureModel& m, double q, int n) {
  if (n * std::log2(static_cast<double>(m.symbol_count())) > kEnumerationGuardLog2) {
    throw resource_error("lq_sum: mixture enumeration guard b^n <= 2^24 exceeded (n=" +
                         std::to_string(n) + ")");
  }
  LogSumExp acc;
  CylinderWalker w = m.walker();
  const int b = m.symbol_count();
  // Explicit stack DFS: symbols tried per level.
  std::vector<int> next(static_cast<std::size_t>(n) + 1, 0);
  int depth = 0;
  while (depth >= 0) {
    if (depth == n) {
      acc.add(q * w.log_mass());
      --depth;
      w.retreat();
      continue;
    }
    int& j = next[static_cast<std::size_t>(depth)];
    if (j == b) {
      j = 0;
      --depth;
      if (depth >= 0) w.retreat();
      continue;
    }
    const int sym = j++;
    if (w.child_log_mass(sym) == kNegInf) continue;  // off support: prune
    w.advance(sym);
    ++depth;
  }
  return -acc.value() / n;
}

}  // namespace

double lq_sum(const MeasureModel& m, double q, int n) {
  if (!(q >= 0.0)) throw input_error("lq_sum: needs q >= 0");
  if (n < 1) throw input_error("lq_sum: needs n >= 1");
  if (q == 1.0) return 0.0;  // Σ ν([u]) = 1 identically

  switch (m.kind()) {
    case MeasureModel::Kind::Uniform:
      return (q - 1.0) * std::log(static_cast<double>(m.symbol_count()));
    case MeasureModel::Kind::Bernoulli: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < m.bernoulli_p().size(); ++i) {
        const double p = m.bernoulli_p()[i];
        if (p > 0.0) s += std::pow(p, q);
      }
      return -std::log(s);
    }
    case MeasureModel::Kind::Markov: {
      const int k = m.markov_order();
      if (n <= k) {
        const Eigen::VectorXd& marg = m.markov_prefix_marginal(n);
        double s = 0.0;
        for (Eigen::Index i = 0; i < marg.size(); ++i) {
          if (marg[i] > 0.0) s += std::pow(marg[i], q);
        }
        return -std::log(s) / n;
      }
      // v <- M_q v with M_q(s, next(s,j)) = T(s,j)^q, rescaled each step.
      const Eigen::MatrixXd& T = m.markov_transition();
      const int b = m.symbol_count();
      const std::int64_t states = T.rows();
      Eigen::VectorXd v = Eigen::VectorXd::Ones(states);
      double log_scale = 0.0;
      for (int step = 0; step < n - k; ++step) {
        Eigen::VectorXd nv = Eigen::VectorXd::Zero(states);
        for (std::int64_t s = 0; s < states; ++s) {
          double acc = 0.0;
          for (int j = 0; j < b; ++j) {
            const double t = T(s, j);
            if (t > 0.0) acc += std::pow(t, q) * v[(s * b + j) % states];
          }
          nv[s] = acc;
        }
        const double c = nv.maxCoeff();
        if (c <= 0.0) return std::numeric_limits<double>::infinity();
        nv /= c;
        log_scale += std::log(c);
        v = std::move(nv);
      }
      double s = 0.0;
      const Eigen::VectorXd& init = m.markov_initial();
      for (Eigen::Index i = 0; i < init.size(); ++i) {
        if (init[i] > 0.0) s += std::pow(init[i], q) * v[i];
      }
      return -(std::log(s) + log_scale) / n;
    }
    case MeasureModel::Kind::Mixture:
      return lq_sum_enumerated(m, q, n);
  }
  return 0.0;
}

Eigen::VectorXd markov_stationary(const MeasureModel& m) {
  if (m.kind() != MeasureModel::Kind::Markov) {
    throw input_error("markov_stationary: needs a Markov model");
  }
  const Eigen::MatrixXd& T = m.markov_transition();
  const int b = m.symbol_count();
  const std::int64_t states = T.rows();

  Eigen::VectorXd pi = m.markov_initial();
  Eigen::VectorXd step(states);
  // Lazy power iteration (half self-weight) so periodic chains converge too;
  // the fixed point is the same. Residual measured on the plain chain.
  for (int it = 0; it < 200000; ++it) {
    step.setZero();
    for (std::int64_t s = 0; s < states; ++s) {
      if (pi[s] == 0.0) continue;
      for (int j = 0; j < b; ++j) step[(s * b + j) % states] += pi[s] * T(s, j);
    }
    const double residual = (step - pi).lpNorm<1>();
    pi = 0.5 * pi + 0.5 * step;
    if (residual <= 1e-13) return pi / pi.sum();
  }
  throw precondition_error("markov_stationary: power iteration did not reach 1e-13 residual");
}

double log_mass_clt_variance(const MeasureModel& m) {
  switch (m.kind()) {
    case MeasureModel::Kind::Uniform:
      return 0.0;
    case MeasureModel::Kind::Bernoulli: {
      const Eigen::VectorXd& p = m.bernoulli_p();
      double mean = 0.0, sq = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
          const double l = std::log(p[i]);
          mean += p[i] * l;
          sq += p[i] * l * l;
        }
      }
      return std::max(0.0, sq - mean * mean);
    }
    case MeasureModel::Kind::Markov: {
      // Lift to the edge chain e = (s, j), reward F(e) = log T(s,j) + h. The
      // asymptotic variance is <F, (2Z - I) F>_π' with Z the fundamental
      // matrix (I - P' + 1 π')^{-1}.
      const Eigen::MatrixXd& T = m.markov_transition();
      const int b = m.symbol_count();
      const std::int64_t states = T.rows();
      const double h = entropy(m);
      const Eigen::VectorXd pi = markov_stationary(m);

      std::vector<std::pair<int, int>> edges;  // (state, symbol), positive prob
      for (std::int64_t s = 0; s < states; ++s) {
        for (int j = 0; j < b; ++j) {
          if (T(s, j) > 0.0) edges.emplace_back(static_cast<int>(s), j);
        }
      }
      const std::int64_t ne = static_cast<std::int64_t>(edges.size());
      Eigen::VectorXd piE(ne), F(ne);
      Eigen::MatrixXd P = Eigen::MatrixXd::Zero(ne, ne);
      std::vector<std::vector<std::int64_t>> by_state(static_cast<std::size_t>(states));
      for (std::int64_t e = 0; e < ne; ++e) {
        by_state[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].first)].push_back(e);
      }
      for (std::int64_t e = 0; e < ne; ++e) {
        const auto [s, j] = edges[static_cast<std::size_t>(e)];
        piE[e] = pi[s] * T(s, j);
        F[e] = std::log(T(s, j)) + h;
        const std::int64_t s2 = (static_cast<std::int64_t>(s) * b + j) % states;
        for (std::int64_t e2 : by_state[static_cast<std::size_t>(s2)]) {
          P(e, e2) = T(s2, edges[static_cast<std::size_t>(e2)].second);
        }
      }
      // Center F under π' (its mean is 0 analytically; re-center for fp).
      F.array() -= piE.dot(F) / piE.sum();
      const Eigen::MatrixXd A =
          Eigen::MatrixXd::Identity(ne, ne) - P + Eigen::VectorXd::Ones(ne) * piE.transpose();
      const Eigen::VectorXd u = A.colPivHouseholderQr().solve(F);
      const double var = piE.dot(F.cwiseProduct(2.0 * u - F));
      return std::max(0.0, var);
    }
    case MeasureModel::Kind::Mixture:
      throw input_error("log_mass_clt_variance: undefined for mixtures");
  }
  return 0.0;
}

}  // namespace mcascade
