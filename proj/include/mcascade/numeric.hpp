#pragma once

#include <cmath>
#include <limits>

namespace mcascade {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Streaming log-sum-exp with Kahan compensation. Terms arrive as logs;
/// value() returns log(sum of exp), linear() the plain sum. Rescales against
/// the running maximum so depth-2000 terms neither overflow nor vanish.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      kahan_add(std::exp(log_term - max_));
    } else {
      const double scale = std::isinf(max_) ? 0.0 : std::exp(max_ - log_term);
      sum_ *= scale;
      comp_ *= scale;
      max_ = log_term;
      kahan_add(1.0);
    }
  }

  bool empty() const { return max_ == kNegInf; }

  /// log(Σ exp(x_i)); -inf when no finite term was added.
  double value() const {
    if (empty()) return kNegInf;
    return max_ + std::log(sum_);
  }

  /// Σ exp(x_i) in linear space. Computed as exp(max)·sum so that sums of
  /// exact ones (the critical-spine case) stay integer-valued.
  double linear() const {
    if (empty()) return 0.0;
    return std::exp(max_) * sum_;
  }

 private:
  void kahan_add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }

  double max_ = kNegInf;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Kahan-compensated plain accumulator for order-stable ensemble reductions.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// x·log(x) with the 0·log 0 := 0 convention used in every entropy-like sum.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace mcascade
