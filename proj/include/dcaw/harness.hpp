#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dcaw/descent.hpp"
#include "dcaw/energy.hpp"
#include "dcaw/matching.hpp"
#include "dcaw/matroid.hpp"
#include "json.hpp"

namespace dcaw {

// Generic instances use the energy form with the brute-force local oracle.
enum class ProblemKind { Matching, Matroid, Energy, Generic };

ProblemKind parse_problem_kind(const std::string& name);
const char* problem_name(ProblemKind kind);

// mt19937_64 with rejection sampling, so draws do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform on [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  // Uniform on [0, 1) with 53 random bits.
  double unit();
  bool bernoulli(double p) { return unit() < p; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// A perfect matching is planted; other edges appear with probability density.
MatchingInstance random_matching_instance(std::size_t half, double density,
                                          std::int64_t max_weight, Rng& rng);

// Two partition matroids with a planted common base of size rank.
WeightedMIInstance random_matroid_instance(std::size_t n, std::size_t rank,
                                           std::int64_t max_weight, Rng& rng);

// Boxes [0, labels-1], random convex unary tables, abs/quad/table pairwise
// terms on a random sparse graph; with windows, deviation windows that
// contain 0 are drawn too.
EnergyInstance random_energy_instance(std::size_t n, std::size_t labels, double edge_prob,
                                      bool windows, Rng& rng);

struct GenOptions {
  ProblemKind kind = ProblemKind::Matching;
  std::size_t n = 8;
  std::uint64_t seed = 1;
  std::string fixture;       // "tight" (matroid), "toy" (energy), "path" (matching)
  std::int64_t weight = 10;  // W for fixtures, max |w| for random instances
};

nlohmann::json gen_instance(const GenOptions& options);

class ProblemInstance {
 public:
  using Data = std::variant<MatchingInstance, WeightedMIInstance, EnergyInstance>;

  ProblemInstance(ProblemKind kind, Data data);
  static ProblemInstance from_json(const nlohmann::json& j);

  ProblemKind kind() const noexcept { return kind_; }
  std::size_t dimension() const;
  const Data& data() const noexcept { return data_; }
  nlohmann::json to_json() const;

 private:
  ProblemKind kind_;
  Data data_;
};

struct SolveOutcome {
  IntVector point;  // dual for matching/matroid, labels otherwise
  IntVector start;
  std::int64_t value = 0;
  DescentTrace trace;
  bool certified = false;
  nlohmann::json detail;  // per-problem solution object
};

struct SolveOptions {
  StepKind step = StepKind::Long;
  DescentOptions descent;
};

// Projects and rounds p_hat, then descends. For matching, p_hat is (s, t).
// Independence-oracle calls when the problem has them, local-oracle calls
// otherwise.
inline std::uint64_t reported_oracle_calls(const DescentTrace& trace) {
  return trace.oracle_calls != 0 ? trace.oracle_calls : trace.local_oracle_calls;
}

SolveOutcome solve_problem(const ProblemInstance& inst, std::span<const double> p_hat,
                           const SolveOptions& options = {});

// Energy-form objective driven by the exhaustive local oracle.
SolveOutcome solve_generic(const EnergyInstance& inst, std::span<const double> p_hat,
                           const SolveOptions& options = {});

// Independent re-verification of a solve's certificate.
bool verify_certificate(const ProblemInstance& inst, const SolveOutcome& outcome);

// Default prediction-box radius: n·W for matching, r·W for matroids, the
// largest label magnitude otherwise.
double recommended_radius(const ProblemInstance& inst);

struct SweepConfig {
  ProblemKind kind = ProblemKind::Matching;
  std::size_t n = 40;
  std::vector<std::int64_t> ks{0, 1, 2, 4, 8, 16};
  std::size_t trials = 20;
  std::uint64_t seed = 7;
  StepKind step = StepKind::Long;
  // 0 reads DCAWARM_THREADS, defaulting to 1.
  unsigned threads = 0;
};

struct SweepRecord {
  std::string problem;
  std::uint64_t seed = 0;
  std::int64_t k = 0;
  std::size_t trial = 0;
  std::int64_t pred_err_linf = 0;  // ‖p̂ - p*‖∞
  std::int64_t start_dist_pm = 0;  // ‖p° - p*‖∞±
  std::size_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  std::int64_t time_us = 0;
  std::string status = "ok";
};

// One instance per trial, reused across k. p* is the cold solve from the
// zero prediction; p̂ = p* + integer noise uniform on [-k, k]^V. Rows come
// out in (k, trial) order whatever the thread count.
std::vector<SweepRecord> run_warmstart_sweep(const SweepConfig& config);

inline constexpr const char* kSweepCsvHeader =
    "problem,seed,k,trial,pred_err_linf,start_dist_pm,iterations,oracle_calls,time_us,status";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows,
                     bool include_timing = true);

struct LearningConfig {
  ProblemKind kind = ProblemKind::Matching;
  std::size_t n = 8;
  std::size_t rounds = 200;
  double radius = 0.0;  // 0 selects recommended_radius
  std::int64_t shift = 2;  // per-round weight noise magnitude
  std::uint64_t seed = 1;
  std::size_t holdout = 20;
  StepKind step = StepKind::Long;
};

struct LearningRound {
  std::size_t t = 0;
  double loss = 0.0;
  double cumulative = 0.0;
};

struct LearningReport {
  std::vector<LearningRound> rounds;
  double radius = 0.0;
  double regret = 0.0;  // max over the comparator set
  double bound = 0.0;   // C√(2nT)
  std::vector<double> prediction;  // online-to-batch average
  double mean_iterations_learned = 0.0;
  double mean_iterations_zero = 0.0;
};

// Weight-shifted copies of a base instance on a fixed ground set; targets
// are the cold-solve optima. The held-out A/B compares the learned
// prediction against the zero prediction.
LearningReport run_learning_experiment(const LearningConfig& config);

void write_learning_csv(std::ostream& out, const LearningReport& report);
nlohmann::json learning_summary(const LearningReport& report);

}  // namespace dcaw
