#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dcaw/int_vector.hpp"
#include "json.hpp"

namespace dcaw {

struct LossAndSubgradient {
  double loss = 0.0;
  std::vector<double> sub;
};

// ‖p - p*‖∞ with subgradient sign(p_k - p*_k)·e_k at the lowest index k
// attaining the maximum; zero when the loss is zero.
LossAndSubgradient linf_loss_subgradient(const IntVector& p_star, std::span<const double> p);
double linf_loss(const IntVector& p_star, std::span<const double> p);

// ‖p - p*‖∞±, which is √2-Lipschitz. Not used by the acceptance suite.
LossAndSubgradient linf_pm_loss_subgradient(const IntVector& p_star, std::span<const double> p);

enum class StepSchedule {
  FixedHorizon,  // η = C√n / √T
  Anytime,       // η_t = C√n / √t
};

enum class LossKind { Linf, LinfPm };

// Projected online gradient descent on [-C, C]^n starting at the origin.
class OnlineLearner {
 public:
  OnlineLearner(double c, std::size_t n, std::size_t horizon,
                StepSchedule schedule = StepSchedule::FixedHorizon, LossKind loss = LossKind::Linf);

  double radius() const noexcept { return c_; }
  std::size_t dimension() const noexcept { return prediction_.size(); }
  std::size_t round() const noexcept { return t_; }
  // Step size used by the next update.
  double eta() const;
  const std::vector<double>& prediction() const noexcept { return prediction_; }

  // Records the loss of the current prediction against p_star, then moves
  // and clamps. Returns the loss.
  double step(const IntVector& p_star);

  // Predictions p̂_1, ..., p̂_t made before each target was revealed.
  const std::vector<std::vector<double>>& iterates() const noexcept { return iterates_; }
  const std::vector<IntVector>& targets() const noexcept { return targets_; }
  const std::vector<double>& losses() const noexcept { return losses_; }
  std::vector<double> average() const;

  nlohmann::json checkpoint() const;
  static OnlineLearner from_checkpoint(const nlohmann::json& j);

 private:
  double c_;
  std::size_t horizon_;
  StepSchedule schedule_;
  LossKind loss_;
  double fixed_eta_ = 0.0;
  std::size_t t_ = 0;
  std::vector<double> prediction_;
  std::vector<std::vector<double>> iterates_;
  std::vector<IntVector> targets_;
  std::vector<double> losses_;
};

// One update; the learner must have been built with the matching horizon.
double ogd_step(OnlineLearner& learner, const IntVector& p_star);

// Online-to-batch: runs OGD over the samples with horizon T = samples.size()
// and returns the mean of p̂_1..p̂_T.
std::vector<double> learn_batch(const std::vector<IntVector>& samples, double c);

struct RegretReport {
  double max_regret = 0.0;
  std::vector<double> per_comparator;
};

// Σ_t loss(p̂_t) - Σ_t loss(comparator) for each comparator in [-C, C]^n.
RegretReport regret_eval(const OnlineLearner& learner,
                         const std::vector<std::vector<double>>& comparators);

double regret_bound(double c, std::size_t n, std::size_t horizon);  // C√(2nT)

// T = ⌈32 (C/ε)² (n + ln(1/δ))⌉.
std::uint64_t sample_complexity(double c, double epsilon, std::size_t n, double delta);

// Exact E‖p - X‖∞ when X_i is uniform on {a_i, b_i}, independently.
double two_point_risk(std::span<const double> p, const IntVector& a, const IntVector& b);
// min_p of the above: max_i |b_i - a_i| / 2, attained at the midpoint.
double two_point_best_risk(const IntVector& a, const IntVector& b);

}  // namespace dcaw
