#include "mcascade/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcascade/numeric.hpp"

namespace mcascade {

namespace {

constexpr double kAtomValueTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kAtomValueTol; }

}  // namespace

// ---------------------------------------------------------------------------
// WeightModel
// ---------------------------------------------------------------------------

WeightModel WeightModel::discrete(std::vector<WeightAtom> atoms) {
  if (atoms.empty()) throw input_error("weight.discrete: no atoms");
  double q_sum = 0.0, mean = 0.0;
  for (const WeightAtom& a : atoms) {
    if (!(a.value >= 0.0)) throw input_error("weight.discrete: atom value must be >= 0");
    if (!(a.prob >= 0.0)) throw input_error("weight.discrete: atom prob must be >= 0");
    q_sum += a.prob;
    mean += a.prob * a.value;
  }
  if (std::abs(q_sum - 1.0) > kProbTolerance) {
    throw input_error("weight.discrete: probs sum to " + std::to_string(q_sum));
  }
  if (std::abs(mean - 1.0) > kProbTolerance) {
    throw input_error("weight.discrete: E(X) = " + std::to_string(mean) +
                      " (mean-one is required)");
  }
  WeightModel w;
  w.kind_ = Kind::Discrete;
  w.atoms_ = std::move(atoms);
  double c = 0.0, sc = 0.0;
  for (const WeightAtom& a : w.atoms_) {
    c += a.prob;
    sc += a.prob * a.value;  // size-biased mass; totals E(X) = 1
    w.cdf_.push_back(c);
    w.size_biased_cdf_.push_back(sc);
  }
  return w;
}

WeightModel WeightModel::log_normal(double s2) {
  if (!(s2 > 0.0)) throw input_error("weight.lognormal: needs s2 > 0");
  WeightModel w;
  w.kind_ = Kind::LogNormal;
  w.s2_ = s2;
  return w;
}

WeightModel WeightModel::q_alpha(double alpha) {
  if (!(alpha > 0.0)) throw input_error("weight.qalpha: needs alpha > 0");
  WeightModel w;
  w.kind_ = Kind::QAlpha;
  w.alpha_ = alpha;
  return w;
}

double WeightModel::h_x() const {
  switch (kind_) {
    case Kind::Discrete: {
      double h = 0.0;
      for (const WeightAtom& a : atoms_) h += a.prob * xlogx(a.value);
      return h;
    }
    case Kind::LogNormal:
      return s2_ / 2.0;  // E(X log X) = μ + σ² with μ = -σ²/2
    case Kind::QAlpha:
      return alpha_;  // e^{-α}·e^{α}·α
  }
  return 0.0;
}

template <class Source>
double WeightModel::log_from_uniform_source(Source& src) const {
  switch (kind_) {
    case Kind::Discrete: {
      const double u = src.next_u01();
      for (std::size_t i = 0; i < cdf_.size(); ++i) {
        if (u < cdf_[i] || i + 1 == cdf_.size()) {
          return atoms_[i].value > 0.0 ? std::log(atoms_[i].value) : kNegInf;
        }
      }
      return kNegInf;
    }
    case Kind::LogNormal:
      return -s2_ / 2.0 + std::sqrt(s2_) * src.next_normal();
    case Kind::QAlpha:
      return src.next_u01() < std::exp(-alpha_) ? alpha_ : kNegInf;
  }
  return kNegInf;
}

template <class Source>
double WeightModel::from_uniform_source(Source& src) const {
  const double l = log_from_uniform_source(src);
  return l == kNegInf ? 0.0 : std::exp(l);
}

template double WeightModel::log_from_uniform_source<Rng>(Rng&) const;
template double WeightModel::log_from_uniform_source<CounterStream>(CounterStream&) const;
template double WeightModel::from_uniform_source<Rng>(Rng&) const;

double WeightModel::sample_size_biased_log(Rng& rng) const {
  switch (kind_) {
    case Kind::Discrete: {
      const double u = rng.next_u01();
      for (std::size_t i = 0; i < size_biased_cdf_.size(); ++i) {
        if (u < size_biased_cdf_[i]) {
          return std::log(atoms_[i].value);  // zero atoms carry no biased mass
        }
      }
      // fp slack: fall back to the last positive atom
      for (std::size_t i = atoms_.size(); i-- > 0;) {
        if (atoms_[i].value > 0.0 && atoms_[i].prob > 0.0) return std::log(atoms_[i].value);
      }
      throw input_error("size-biased draw: weight is almost surely zero");
    }
    case Kind::LogNormal:
      return s2_ / 2.0 + std::sqrt(s2_) * rng.next_normal();  // exponential tilt
    case Kind::QAlpha:
      return alpha_;
  }
  return 0.0;
}

bool WeightModel::is_unit() const {
  if (kind_ != Kind::Discrete) return false;
  for (const WeightAtom& a : atoms_) {
    if (a.prob > 0.0 && !near(a.value, 1.0)) return false;
  }
  return true;
}

std::optional<double> WeightModel::q_alpha_exponent() const {
  switch (kind_) {
    case Kind::QAlpha:
      return alpha_;
    case Kind::LogNormal:
      return std::nullopt;
    case Kind::Discrete: {
      double v = -1.0;
      for (const WeightAtom& a : atoms_) {
        if (a.prob <= 0.0 || a.value <= 0.0) continue;
        if (v < 0.0) {
          v = a.value;
        } else if (!near(v, a.value)) {
          return std::nullopt;
        }
      }
      if (v <= 1.0) return std::nullopt;  // v == 1 is the identity cascade
      return std::log(v);
    }
  }
  return std::nullopt;
}

std::string WeightModel::id() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Discrete:
      os << "discrete(";
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        os << (i ? "," : "") << atoms_[i].value << "@" << atoms_[i].prob;
      }
      os << ")";
      break;
    case Kind::LogNormal:
      os << "lognormal(s2=" << s2_ << ")";
      break;
    case Kind::QAlpha:
      os << "qalpha(" << alpha_ << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// VectorWeightModel
// ---------------------------------------------------------------------------

VectorWeightModel::VectorWeightModel(std::vector<VectorWeightAtom> atoms) {
  if (atoms.empty()) throw input_error("vector_weight: no atoms");
  b_ = static_cast<int>(atoms.front().values.size());
  if (b_ < 2) throw input_error("vector_weight: vectors need length b >= 2");
  double q_sum = 0.0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(b_);
  for (const VectorWeightAtom& a : atoms) {
    if (a.values.size() != b_) throw input_error("vector_weight: inconsistent vector lengths");
    if (!(a.prob >= 0.0)) throw input_error("vector_weight: atom prob must be >= 0");
    for (Eigen::Index j = 0; j < a.values.size(); ++j) {
      if (!(a.values[j] >= 0.0)) throw input_error("vector_weight: coordinates must be >= 0");
    }
    q_sum += a.prob;
    mean += a.prob * a.values;
  }
  if (std::abs(q_sum - 1.0) > kProbTolerance) {
    throw input_error("vector_weight: probs sum to " + std::to_string(q_sum));
  }
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    if (std::abs(mean[j] - 1.0) > kProbTolerance) {
      std::ostringstream os;
      os << "vector_weight: E(V_" << j << ") = " << mean[j] << " (each coordinate needs mean 1)";
      throw input_error(os.str());
    }
  }
  atoms_ = std::move(atoms);
  double c = 0.0;
  for (const VectorWeightAtom& a : atoms_) {
    c += a.prob;
    cdf_.push_back(c);
  }
}

int VectorWeightModel::atom_from_uniform(double u) const {
  for (std::size_t i = 0; i < cdf_.size(); ++i) {
    if (u < cdf_[i] || i + 1 == cdf_.size()) return static_cast<int>(i);
  }
  return static_cast<int>(cdf_.size()) - 1;
}

bool VectorWeightModel::is_unit() const {
  for (const VectorWeightAtom& a : atoms_) {
    if (a.prob <= 0.0) continue;
    for (Eigen::Index j = 0; j < a.values.size(); ++j) {
      if (!near(a.values[j], 1.0)) return false;
    }
  }
  return true;
}

std::string VectorWeightModel::id() const {
  std::ostringstream os;
  os << "vector_discrete(" << atoms_.size() << " atoms, b=" << b_ << ")";
  return os.str();
}

double h_v_nu(const VectorWeightModel& v, const MeasureModel& m) {
  if (v.alphabet_size() != m.symbol_count()) {
    throw input_error("h_v_nu: weight vector length " + std::to_string(v.alphabet_size()) +
                      " does not match alphabet b=" + std::to_string(m.symbol_count()));
  }
  double h = 0.0;
  for (int j = 0; j < v.alphabet_size(); ++j) {
    double e = 0.0;  // E(V_j log V_j)
    for (const VectorWeightAtom& a : v.atoms()) e += a.prob * xlogx(a.values[j]);
    h += e * cylinder_mass(m, Word({static_cast<std::uint8_t>(j)}));
  }
  return h;
}

std::optional<QAlphaVectorInfo> q_alpha_vector_type(const VectorWeightModel& v) {
  double value = -1.0;
  for (const VectorWeightAtom& a : v.atoms()) {
    if (a.prob <= 0.0) continue;
    for (Eigen::Index j = 0; j < a.values.size(); ++j) {
      const double x = a.values[j];
      if (x <= 0.0) continue;
      if (value < 0.0) {
        value = x;
      } else if (!near(value, x)) {
        return std::nullopt;
      }
    }
  }
  if (value <= 1.0) return std::nullopt;  // α would be <= 0

  QAlphaVectorInfo info;
  info.alpha = std::log(value);
  info.degenerate_galton_watson = true;
  const double b = static_cast<double>(v.alphabet_size());
  for (const VectorWeightAtom& a : v.atoms()) {
    if (a.prob <= 0.0) continue;
    int positives = 0;
    for (Eigen::Index j = 0; j < a.values.size(); ++j) {
      if (a.values[j] > 0.0) ++positives;
    }
    if (positives != 1 || !near(value, b)) {
      info.degenerate_galton_watson = false;
      break;
    }
  }
  return info;
}

}  // namespace mcascade
