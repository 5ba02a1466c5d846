#include "dcaw/learning.hpp"

#include <algorithm>
#include <cmath>

#include "dcaw/errors.hpp"

namespace dcaw {

namespace {

void check_dims(const IntVector& p_star, std::span<const double> p) {
  if (p_star.size() != p.size()) throw DimensionError("loss arguments differ in dimension");
}

}  // namespace

LossAndSubgradient linf_loss_subgradient(const IntVector& p_star, std::span<const double> p) {
  check_dims(p_star, p);
  LossAndSubgradient out{0.0, std::vector<double>(p.size(), 0.0)};
  std::size_t arg = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double gap = std::abs(p[i] - static_cast<double>(p_star[i]));
    if (gap > out.loss) {
      out.loss = gap;
      arg = i;
    }
  }
  if (out.loss > 0) out.sub[arg] = p[arg] > static_cast<double>(p_star[arg]) ? 1.0 : -1.0;
  return out;
}

double linf_loss(const IntVector& p_star, std::span<const double> p) {
  return linf_loss_subgradient(p_star, p).loss;
}

LossAndSubgradient linf_pm_loss_subgradient(const IntVector& p_star, std::span<const double> p) {
  check_dims(p_star, p);
  LossAndSubgradient out{0.0, std::vector<double>(p.size(), 0.0)};
  double plus = 0.0;
  double minus = 0.0;
  std::size_t arg_plus = p.size();
  std::size_t arg_minus = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - static_cast<double>(p_star[i]);
    if (diff > plus) {
      plus = diff;
      arg_plus = i;
    }
    if (-diff > minus) {
      minus = -diff;
      arg_minus = i;
    }
  }
  out.loss = plus + minus;
  if (arg_plus < p.size()) out.sub[arg_plus] += 1.0;
  if (arg_minus < p.size()) out.sub[arg_minus] -= 1.0;
  return out;
}

OnlineLearner::OnlineLearner(double c, std::size_t n, std::size_t horizon, StepSchedule schedule,
                             LossKind loss)
    : c_(c), horizon_(horizon), schedule_(schedule), loss_(loss), prediction_(n, 0.0) {
  if (!(c > 0) || !std::isfinite(c)) throw ContractError("box radius C must be positive");
  if (n == 0) throw DimensionError("learner needs dimension >= 1");
  if (horizon == 0) throw ContractError("horizon must be at least 1");
  fixed_eta_ = c * std::sqrt(static_cast<double>(n)) / std::sqrt(static_cast<double>(horizon));
}

double OnlineLearner::eta() const {
  if (schedule_ == StepSchedule::FixedHorizon) return fixed_eta_;
  return c_ * std::sqrt(static_cast<double>(dimension())) / std::sqrt(static_cast<double>(t_ + 1));
}

double OnlineLearner::step(const IntVector& p_star) {
  for (std::int64_t v : p_star) check_magnitude(v, "target");
  const LossAndSubgradient ls = loss_ == LossKind::Linf
                                    ? linf_loss_subgradient(p_star, prediction_)
                                    : linf_pm_loss_subgradient(p_star, prediction_);
  iterates_.push_back(prediction_);
  targets_.push_back(p_star);
  losses_.push_back(ls.loss);
  const double step_size = eta();
  for (std::size_t i = 0; i < prediction_.size(); ++i) {
    prediction_[i] = std::clamp(prediction_[i] - step_size * ls.sub[i], -c_, c_);
  }
  ++t_;
  return ls.loss;
}

std::vector<double> OnlineLearner::average() const {
  std::vector<double> avg(dimension(), 0.0);
  if (iterates_.empty()) return prediction_;
  for (const auto& it : iterates_) {
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += it[i];
  }
  for (double& x : avg) x /= static_cast<double>(iterates_.size());
  return avg;
}

nlohmann::json OnlineLearner::checkpoint() const {
  return {{"C", c_},
          {"n", dimension()},
          {"p_hat", prediction_},
          {"t", t_},
          {"eta", eta()},
          {"horizon", horizon_},
          {"schedule", schedule_ == StepSchedule::FixedHorizon ? "fixed" : "anytime"}};
}

OnlineLearner OnlineLearner::from_checkpoint(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto schedule = j.value("schedule", std::string("fixed")) == "anytime"
                              ? StepSchedule::Anytime
                              : StepSchedule::FixedHorizon;
    const double c = j.at("C").get<double>();
    std::size_t horizon = j.value("horizon", std::size_t{0});
    if (horizon == 0) {
      // Recover T from η = C√n/√T.
      const double eta = j.at("eta").get<double>();
      horizon = static_cast<std::size_t>(std::llround(c * c * static_cast<double>(n) / (eta * eta)));
    }
    OnlineLearner out(c, n, std::max<std::size_t>(horizon, 1), schedule);
    out.prediction_ = j.at("p_hat").get<std::vector<double>>();
    if (out.prediction_.size() != n) throw ParseError("p_hat has the wrong dimension");
    out.t_ = j.at("t").get<std::size_t>();
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("learner checkpoint: ") + ex.what());
  }
}

double ogd_step(OnlineLearner& learner, const IntVector& p_star) { return learner.step(p_star); }

std::vector<double> learn_batch(const std::vector<IntVector>& samples, double c) {
  if (samples.empty()) throw ContractError("learn_batch needs at least one sample");
  OnlineLearner learner(c, samples.front().size(), samples.size());
  for (const IntVector& s : samples) learner.step(s);
  return learner.average();
}

RegretReport regret_eval(const OnlineLearner& learner,
                         const std::vector<std::vector<double>>& comparators) {
  RegretReport out;
  double learner_loss = 0.0;
  for (double l : learner.losses()) learner_loss += l;
  bool first = true;
  for (const auto& cmp : comparators) {
    if (cmp.size() != learner.dimension()) throw DimensionError("comparator dimension mismatch");
    for (double x : cmp) {
      if (std::abs(x) > learner.radius() + 1e-12) throw ContractError("comparator outside the box");
    }
    double cmp_loss = 0.0;
    for (const IntVector& target : learner.targets()) cmp_loss += linf_loss(target, cmp);
    const double regret = learner_loss - cmp_loss;
    out.per_comparator.push_back(regret);
    if (first || regret > out.max_regret) out.max_regret = regret;
    first = false;
  }
  return out;
}

double regret_bound(double c, std::size_t n, std::size_t horizon) {
  return c * std::sqrt(2.0 * static_cast<double>(n) * static_cast<double>(horizon));
}

std::uint64_t sample_complexity(double c, double epsilon, std::size_t n, double delta) {
  if (!(epsilon > 0) || !(delta > 0) || !(delta < 1) || !(c > 0)) {
    throw ContractError("sample_complexity needs C > 0, eps > 0 and 0 < delta < 1");
  }
  const double ratio = c / epsilon;
  return static_cast<std::uint64_t>(
      std::ceil(32.0 * ratio * ratio * (static_cast<double>(n) + std::log(1.0 / delta))));
}

double two_point_risk(std::span<const double> p, const IntVector& a, const IntVector& b) {
  if (p.size() != a.size() || a.size() != b.size()) throw DimensionError("dimension mismatch");
  std::vector<double> levels;
  for (std::size_t i = 0; i < p.size(); ++i) {
    levels.push_back(std::abs(p[i] - static_cast<double>(a[i])));
    levels.push_back(std::abs(p[i] - static_cast<double>(b[i])));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // E[max] = Σ_x x · (F(x) - F(x⁻)) over the support of the maximum.
  double risk = 0.0;
  double prev_cdf = 0.0;
  for (double x : levels) {
    double cdf = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double pa = std::abs(p[i] - static_cast<double>(a[i])) <= x ? 0.5 : 0.0;
      const double pb = std::abs(p[i] - static_cast<double>(b[i])) <= x ? 0.5 : 0.0;
      cdf *= pa + pb;
    }
    risk += x * (cdf - prev_cdf);
    prev_cdf = cdf;
  }
  return risk;
}

double two_point_best_risk(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("dimension mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, std::abs(static_cast<double>(b[i] - a[i])) / 2.0);
  }
  return best;
}

}  // namespace dcaw
