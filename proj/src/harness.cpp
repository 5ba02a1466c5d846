#include "dcaw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "dcaw/errors.hpp"
#include "dcaw/learning.hpp"
#include "dcaw/norms.hpp"

namespace dcaw {

namespace {

std::vector<std::int64_t> convex_sequence(std::size_t len, std::int64_t max_slope, Rng& rng) {
  std::vector<std::int64_t> slopes(len > 0 ? len - 1 : 0);
  for (auto& s : slopes) s = rng.uniform(-max_slope, max_slope);
  std::sort(slopes.begin(), slopes.end());
  std::vector<std::int64_t> values{rng.uniform(0, 10)};
  for (std::int64_t s : slopes) values.push_back(values.back() + s);
  return values;
}

MatchingInstance shifted(const MatchingInstance& base, std::int64_t shift, Rng& rng) {
  std::vector<Edge> edges = base.edges();
  for (Edge& e : edges) e.weight += rng.uniform(-shift, shift);
  return MatchingInstance(base.half(), base.half(), std::move(edges));
}

WeightedMIInstance shifted(const WeightedMIInstance& base, std::int64_t shift, Rng& rng) {
  std::vector<std::int64_t> w = base.weights();
  for (auto& x : w) x += rng.uniform(-shift, shift);
  return WeightedMIInstance(matroid_from_json(base.ground_size(), base.m1().to_json()),
                            matroid_from_json(base.ground_size(), base.m2().to_json()), std::move(w));
}

// Tie-broken target: the optimal dual nearest to the origin, found by
// projecting 0 onto the optimal face and rounding.
IntVector canonical_target(const ProblemInstance& inst, const SolveOutcome& cold) {
  const LNatSystem face = [&] {
    if (inst.kind() == ProblemKind::Matching) {
      const auto& m = std::get<MatchingInstance>(inst.data());
      return optimal_dual_face(
          m, cold.detail.at("matching").get<std::vector<std::pair<std::size_t, std::size_t>>>());
    }
    const auto& m = std::get<WeightedMIInstance>(inst.data());
    return matroid_optimal_face(m, cold.detail.at("base").get<ElementSet>());
  }();
  const std::vector<double> zero(face.dimension(), 0.0);
  return round_into(face, project_general(face, zero).point);
}

unsigned thread_count(unsigned requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("DCAWARM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

std::string status_of(const std::exception& ex) {
  std::string msg = ex.what();
  std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n' || c == '"'; }, ' ');
  return "error: " + msg.substr(0, 60);
}

}  // namespace

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "matching") return ProblemKind::Matching;
  if (name == "matroid") return ProblemKind::Matroid;
  if (name == "energy") return ProblemKind::Energy;
  if (name == "generic") return ProblemKind::Generic;
  throw ParseError("unknown problem kind '" + name + "'");
}

const char* problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Matching:
      return "matching";
    case ProblemKind::Matroid:
      return "matroid";
    case ProblemKind::Energy:
      return "energy";
    case ProblemKind::Generic:
      break;
  }
  return "generic";
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ContractError("empty sampling range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a simple combination.
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + a * 0xBF58476D1CE4E5B9ULL + b * 0x94D049BB133111EBULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MatchingInstance random_matching_instance(std::size_t half, double density,
                                          std::int64_t max_weight, Rng& rng) {
  if (half == 0) throw DimensionError("matching needs at least one vertex per side");
  std::vector<std::size_t> perm(half);
  for (std::size_t i = 0; i < half; ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t j = 0; j < half; ++j) {
      if (perm[i] == j || rng.bernoulli(density)) {
        edges.push_back({i, j, rng.uniform(-max_weight, max_weight)});
      }
    }
  }
  return MatchingInstance(half, half, std::move(edges));
}

WeightedMIInstance random_matroid_instance(std::size_t n, std::size_t rank,
                                           std::int64_t max_weight, Rng& rng) {
  if (n == 0 || rank > n) throw DimensionError("matroid instance needs 0 <= rank <= n, n >= 1");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<bool> planted(n, false);
  for (std::size_t k = 0; k < rank; ++k) planted[order[k]] = true;

  auto partition = [&]() {
    const auto block_count = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(n)));
    std::vector<ElementSet> blocks(block_count);
    for (std::size_t e = 0; e < n; ++e) {
      blocks[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(block_count) - 1))]
          .push_back(e);
    }
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const ElementSet& b) { return b.empty(); }),
                 blocks.end());
    std::vector<std::size_t> caps;
    for (const ElementSet& b : blocks) {
      caps.push_back(static_cast<std::size_t>(
          std::count_if(b.begin(), b.end(), [&](std::size_t e) { return planted[e]; })));
    }
    return std::make_shared<PartitionMatroid>(n, std::move(blocks), std::move(caps));
  };
  auto m1 = partition();
  auto m2 = partition();
  std::vector<std::int64_t> w(n);
  for (auto& x : w) x = rng.uniform(-max_weight, max_weight);
  return WeightedMIInstance(std::move(m1), std::move(m2), std::move(w));
}

EnergyInstance random_energy_instance(std::size_t n, std::size_t labels, double edge_prob,
                                      bool windows, Rng& rng) {
  if (n == 0 || labels == 0) throw DimensionError("energy instance needs n >= 1 and labels >= 1");
  const auto top = static_cast<std::int64_t>(labels) - 1;
  std::vector<UnaryTable> unary(n);
  for (auto& t : unary) t = {0, convex_sequence(labels, 6, rng)};
  std::vector<PairwiseTerm> pairwise;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!rng.bernoulli(edge_prob)) continue;
      std::optional<std::pair<std::int64_t, std::int64_t>> window;
      if (windows && rng.bernoulli(0.5)) window = std::pair(-rng.uniform(0, top), rng.uniform(0, top));
      const auto kind = rng.uniform(0, 2);
      if (kind == 2) {
        const auto [lo, hi] = window.value_or(std::pair(-top, top));
        PairwiseTerm t;
        t.i = i;
        t.j = j;
        t.lo = lo;
        t.values = convex_sequence(static_cast<std::size_t>(hi - lo + 1), 4, rng);
        pairwise.push_back(std::move(t));
      } else {
        pairwise.push_back(EnergyInstance::named_term(
            unary, i, j, kind == 0 ? PairwiseKind::Abs : PairwiseKind::Quad, rng.uniform(0, 3), window));
      }
    }
  }
  return EnergyInstance(std::move(unary), std::move(pairwise));
}

nlohmann::json gen_instance(const GenOptions& o) {
  Rng rng(mix_seed(o.seed, static_cast<std::uint64_t>(o.kind) + 1));
  switch (o.kind) {
    case ProblemKind::Matching: {
      if (o.fixture == "path") return path_counterexample_instance(o.n, o.weight).to_json();
      if (!o.fixture.empty()) throw ContractError("unknown matching fixture '" + o.fixture + "'");
      if (o.n < 2 || o.n % 2 != 0) throw DimensionError("matching needs an even vertex count");
      if (o.n > 4096) throw CapacityError("matching generator is capped at 4096 vertices");
      return random_matching_instance(o.n / 2, 0.3, o.weight, rng).to_json();
    }
    case ProblemKind::Matroid: {
      if (o.fixture == "tight") return tight_partition_instance(o.n, o.weight).to_json();
      if (!o.fixture.empty()) throw ContractError("unknown matroid fixture '" + o.fixture + "'");
      if (o.n > 256) throw CapacityError("matroid generator is capped at 256 elements");
      return random_matroid_instance(o.n, std::max<std::size_t>(1, o.n / 2), o.weight, rng).to_json();
    }
    case ProblemKind::Energy: {
      if (o.fixture == "toy") return toy_energy_instance().to_json();
      if (!o.fixture.empty()) throw ContractError("unknown energy fixture '" + o.fixture + "'");
      if (o.n > 1024) throw CapacityError("energy generator is capped at 1024 vertices");
      const double p = o.n > 1 ? std::min(1.0, 2.5 / static_cast<double>(o.n - 1)) : 0.0;
      return random_energy_instance(o.n, 5, p, false, rng).to_json();
    }
    case ProblemKind::Generic: {
      if (o.n > 16) throw CapacityError("generic instances use exhaustive local search; n <= 16");
      const double p = o.n > 1 ? std::min(1.0, 2.5 / static_cast<double>(o.n - 1)) : 0.0;
      nlohmann::json j = random_energy_instance(o.n, 4, p, true, rng).to_json();
      j["type"] = "generic";
      return j;
    }
  }
  throw ContractError("unknown problem kind");
}

ProblemInstance::ProblemInstance(ProblemKind kind, Data data) : kind_(kind), data_(std::move(data)) {
  const bool ok = (kind == ProblemKind::Matching && std::holds_alternative<MatchingInstance>(data_)) ||
                  (kind == ProblemKind::Matroid && std::holds_alternative<WeightedMIInstance>(data_)) ||
                  ((kind == ProblemKind::Energy || kind == ProblemKind::Generic) &&
                   std::holds_alternative<EnergyInstance>(data_));
  if (!ok) throw ContractError("problem kind does not match the instance data");
}

ProblemInstance ProblemInstance::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) throw ParseError("instance needs a \"type\" field");
  const ProblemKind kind = parse_problem_kind(j.at("type").get<std::string>());
  switch (kind) {
    case ProblemKind::Matching:
      return {kind, MatchingInstance::from_json(j)};
    case ProblemKind::Matroid:
      return {kind, WeightedMIInstance::from_json(j)};
    case ProblemKind::Energy:
      return {kind, EnergyInstance::from_json(j)};
    case ProblemKind::Generic: {
      nlohmann::json copy = j;
      copy["type"] = "energy";
      return {kind, EnergyInstance::from_json(copy)};
    }
  }
  throw ParseError("unknown problem kind");
}

std::size_t ProblemInstance::dimension() const {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatchingInstance>) return x.vertex_count();
        if constexpr (std::is_same_v<T, WeightedMIInstance>) return x.ground_size();
        if constexpr (std::is_same_v<T, EnergyInstance>) return x.size();
      },
      data_);
}

nlohmann::json ProblemInstance::to_json() const {
  nlohmann::json j = std::visit([](const auto& x) { return x.to_json(); }, data_);
  if (kind_ == ProblemKind::Generic) j["type"] = "generic";
  return j;
}

SolveOutcome solve_generic(const EnergyInstance& inst, std::span<const double> p_hat,
                           const SolveOptions& options) {
  if (p_hat.size() != inst.size()) throw DimensionError("prediction dimension mismatch");
  if (inst.size() > kMaxBruteForceDimension) throw CapacityError("generic solve needs n <= 22");
  const LNatSystem& s = inst.domain();
  const std::vector<double> q =
      inst.box_only() ? project_box(s.alpha(), s.beta(), p_hat) : project_general(s, p_hat).point;
  SolveOutcome out;
  out.start = round_into(s, q);
  const Objective g = energy_objective(inst);
  const StepRule rule = options.step == StepKind::Unit
                            ? StepRule::unit()
                            : StepRule::long_step(std::max<std::int64_t>(1, inst.max_label_width()));
  DescentResult res = steepest_descent(g, make_brute_force_oracle(g), rule, out.start, options.descent);
  out.point = res.point;
  out.value = res.value.value();
  out.trace = std::move(res.trace);
  out.certified = energy_value(inst, out.point) == Extended(out.value);
  out.detail = {{"labels", out.point.values()}, {"energy", out.value}};
  return out;
}

SolveOutcome solve_problem(const ProblemInstance& inst, std::span<const double> p_hat,
                           const SolveOptions& options) {
  if (p_hat.size() != inst.dimension()) throw DimensionError("prediction dimension mismatch");
  SolveOutcome out;
  switch (inst.kind()) {
    case ProblemKind::Matching: {
      const auto& m = std::get<MatchingInstance>(inst.data());
      const std::size_t h = m.half();
      RealDualPair pred{{p_hat.begin(), p_hat.begin() + static_cast<std::ptrdiff_t>(h)},
                        {p_hat.begin() + static_cast<std::ptrdiff_t>(h), p_hat.end()}};
      MatchingSolution sol = solve_matching(m, pred, {options.step, options.descent});
      out.point = sol.dual.joined();
      out.start = sol.start.joined();
      out.value = sol.weight;
      out.trace = std::move(sol.trace);
      out.certified = sol.certified;
      out.detail = {{"matching", sol.matching},
                    {"weight", sol.weight},
                    {"s", sol.dual.s.values()},
                    {"t", sol.dual.t.values()}};
      return out;
    }
    case ProblemKind::Matroid: {
      const auto& m = std::get<WeightedMIInstance>(inst.data());
      MatroidSolution sol = solve_matroid_intersection(m, p_hat, {options.step, options.descent});
      out.point = sol.dual;
      out.start = sol.start;
      out.value = sol.weight;
      out.trace = std::move(sol.trace);
      out.certified = sol.certified;
      out.detail = {{"base", sol.base}, {"weight", sol.weight}, {"p", sol.dual.values()}};
      return out;
    }
    case ProblemKind::Energy: {
      const auto& e = std::get<EnergyInstance>(inst.data());
      EnergySolution sol = solve_energy(e, p_hat, {options.step, options.descent});
      out.point = sol.labels;
      out.start = sol.start;
      out.value = sol.value;
      out.trace = std::move(sol.trace);
      out.certified = energy_value(e, out.point) == Extended(out.value);
      out.detail = {{"labels", out.point.values()}, {"energy", out.value}};
      return out;
    }
    case ProblemKind::Generic:
      return solve_generic(std::get<EnergyInstance>(inst.data()), p_hat, options);
  }
  throw ContractError("unknown problem kind");
}

bool verify_certificate(const ProblemInstance& inst, const SolveOutcome& outcome) {
  switch (inst.kind()) {
    case ProblemKind::Matching: {
      const auto& m = std::get<MatchingInstance>(inst.data());
      const DualPair p = DualPair::split(outcome.point, m.half());
      const DualValue dv = dual_objective(m, p);
      std::int64_t weight = 0;
      std::vector<bool> left(m.half(), false);
      std::vector<bool> right(m.half(), false);
      for (const auto& pair : outcome.detail.at("matching")) {
        const auto i = pair.at(0).get<std::size_t>();
        const auto j = pair.at(1).get<std::size_t>();
        const auto it = std::find_if(m.edges().begin(), m.edges().end(),
                                     [&](const Edge& e) { return e.left == i && e.right == j; });
        if (it == m.edges().end() || left[i] || right[j]) return false;
        left[i] = right[j] = true;
        weight += it->weight;
      }
      const bool perfect = std::all_of(left.begin(), left.end(), [](bool b) { return b; });
      return perfect && dv.feasible && dv.objective == weight && weight == outcome.value;
    }
    case ProblemKind::Matroid: {
      const auto& m = std::get<WeightedMIInstance>(inst.data());
      const auto base = outcome.detail.at("base").get<ElementSet>();
      std::int64_t weight = 0;
      for (std::size_t e : base) weight += m.weights().at(e);
      return base.size() == m.rank() && m.m1().is_independent_uncounted(base) &&
             m.m2().is_independent_uncounted(base) && dual_value(m, outcome.point) == weight &&
             weight == outcome.value;
    }
    case ProblemKind::Energy:
    case ProblemKind::Generic:
      return energy_value(std::get<EnergyInstance>(inst.data()), outcome.point) ==
             Extended(outcome.value);
  }
  return false;
}

double recommended_radius(const ProblemInstance& inst) {
  switch (inst.kind()) {
    case ProblemKind::Matching: {
      const auto& m = std::get<MatchingInstance>(inst.data());
      return static_cast<double>(std::max<std::int64_t>(1, static_cast<std::int64_t>(m.vertex_count()) *
                                                               m.max_abs_weight()));
    }
    case ProblemKind::Matroid: {
      const auto& m = std::get<WeightedMIInstance>(inst.data());
      return static_cast<double>(
          std::max<std::int64_t>(1, static_cast<std::int64_t>(m.rank()) * m.max_abs_weight()));
    }
    case ProblemKind::Energy:
    case ProblemKind::Generic: {
      const auto& e = std::get<EnergyInstance>(inst.data());
      std::int64_t c = 1;
      for (const UnaryTable& t : e.unary()) c = std::max({c, std::abs(t.lo), std::abs(t.hi())});
      return static_cast<double>(c);
    }
  }
  return 1.0;
}

std::vector<SweepRecord> run_warmstart_sweep(const SweepConfig& config) {
  for (std::int64_t k : config.ks) {
    if (k < 0) throw ContractError("perturbation magnitudes must be non-negative");
  }
  const std::size_t nk = config.ks.size();
  std::vector<std::vector<SweepRecord>> per_trial(config.trials, std::vector<SweepRecord>(nk));
  const std::string problem = problem_name(config.kind);

  auto run_trial = [&](std::size_t trial) {
    auto& rows = per_trial[trial];
    for (std::size_t a = 0; a < nk; ++a) {
      rows[a].problem = problem;
      rows[a].seed = config.seed;
      rows[a].k = config.ks[a];
      rows[a].trial = trial;
    }
    try {
      GenOptions gen;
      gen.kind = config.kind;
      gen.n = config.n;
      gen.seed = mix_seed(config.seed, trial);
      const ProblemInstance inst = ProblemInstance::from_json(gen_instance(gen));
      const std::size_t n = inst.dimension();
      const SolveOptions opts{config.step, {}};
      const std::vector<double> zero(n, 0.0);
      const IntVector p_star = solve_problem(inst, zero, opts).point;
      for (std::size_t a = 0; a < nk; ++a) {
        SweepRecord& row = rows[a];
        try {
          Rng rng(mix_seed(config.seed, trial, static_cast<std::uint64_t>(a) + 1));
          std::vector<double> p_hat(n);
          std::int64_t err = 0;
          for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t noise = rng.uniform(-row.k, row.k);
            err = std::max(err, noise < 0 ? -noise : noise);
            p_hat[i] = static_cast<double>(p_star[i] + noise);
          }
          const SolveOutcome sol = solve_problem(inst, p_hat, opts);
          row.pred_err_linf = err;
          row.start_dist_pm = linf_pm_distance(sol.start, p_star);
          row.iterations = sol.trace.iterations;
          row.oracle_calls = reported_oracle_calls(sol.trace);
          row.time_us = sol.trace.wall_time.count();
        } catch (const std::exception& ex) {
          row.status = status_of(ex);
        }
      }
    } catch (const std::exception& ex) {
      for (auto& row : rows) row.status = status_of(ex);
    }
  };

  const unsigned threads = std::min<unsigned>(thread_count(config.threads),
                                               static_cast<unsigned>(std::max<std::size_t>(1, config.trials)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < config.trials; t += threads) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<SweepRecord> out;
  out.reserve(nk * config.trials);
  for (std::size_t a = 0; a < nk; ++a) {
    for (std::size_t t = 0; t < config.trials; ++t) out.push_back(per_trial[t][a]);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows, bool include_timing) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRecord& r : rows) {
    out << r.problem << ',' << r.seed << ',' << r.k << ',' << r.trial << ',' << r.pred_err_linf << ','
        << r.start_dist_pm << ',' << r.iterations << ',' << r.oracle_calls << ','
        << (include_timing ? r.time_us : 0) << ',' << r.status << '\n';
  }
}

LearningReport run_learning_experiment(const LearningConfig& config) {
  if (config.kind != ProblemKind::Matching && config.kind != ProblemKind::Matroid) {
    throw ContractError("learning experiments support matching and matroid instances");
  }
  if (config.rounds == 0) throw ContractError("learning needs at least one round");
  GenOptions gen;
  gen.kind = config.kind;
  gen.n = config.n;
  gen.seed = config.seed;
  const ProblemInstance base = ProblemInstance::from_json(gen_instance(gen));
  const std::size_t n = base.dimension();
  const SolveOptions opts{config.step, {}};

  Rng rng(mix_seed(config.seed, 0xC0FFEE));
  auto draw = [&]() -> ProblemInstance {
    if (config.kind == ProblemKind::Matching) {
      return {config.kind, shifted(std::get<MatchingInstance>(base.data()), config.shift, rng)};
    }
    return {config.kind, shifted(std::get<WeightedMIInstance>(base.data()), config.shift, rng)};
  };

  LearningReport report;
  report.radius = config.radius > 0 ? config.radius : recommended_radius(base);
  // Shifts can raise ‖w‖∞ by the noise magnitude.
  if (config.radius <= 0) {
    const double scale = config.kind == ProblemKind::Matching
                             ? static_cast<double>(n)
                             : static_cast<double>(std::get<WeightedMIInstance>(base.data()).rank());
    report.radius += scale * static_cast<double>(config.shift);
  }
  OnlineLearner learner(report.radius, n, config.rounds);
  const std::vector<double> zero(n, 0.0);
  double cumulative = 0.0;
  for (std::size_t t = 0; t < config.rounds; ++t) {
    const ProblemInstance inst = draw();
    const IntVector target = canonical_target(inst, solve_problem(inst, zero, opts));
    const double loss = learner.step(target);
    cumulative += loss;
    report.rounds.push_back({t + 1, loss, cumulative});
  }

  auto clamp_box = [&](std::vector<double> v) {
    for (double& x : v) x = std::clamp(x, -report.radius, report.radius);
    return v;
  };
  std::vector<std::vector<double>> comparators{zero};
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  for (const IntVector& target : learner.targets()) {
    comparators.push_back(clamp_box(target.as_reals()));
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], static_cast<double>(target[i]));
      hi[i] = std::max(hi[i], static_cast<double>(target[i]));
    }
  }
  std::vector<double> mid(n);
  for (std::size_t i = 0; i < n; ++i) mid[i] = (lo[i] + hi[i]) / 2;
  comparators.push_back(clamp_box(mid));
  report.prediction = learner.average();
  comparators.push_back(report.prediction);
  report.regret = regret_eval(learner, comparators).max_regret;
  report.bound = regret_bound(report.radius, n, config.rounds);

  double learned = 0.0;
  double cold = 0.0;
  for (std::size_t h = 0; h < config.holdout; ++h) {
    const ProblemInstance inst = draw();
    learned += static_cast<double>(solve_problem(inst, report.prediction, opts).trace.iterations);
    cold += static_cast<double>(solve_problem(inst, zero, opts).trace.iterations);
  }
  if (config.holdout > 0) {
    report.mean_iterations_learned = learned / static_cast<double>(config.holdout);
    report.mean_iterations_zero = cold / static_cast<double>(config.holdout);
  }
  return report;
}

void write_learning_csv(std::ostream& out, const LearningReport& report) {
  out << "round,loss,cumulative_loss\n";
  for (const LearningRound& r : report.rounds) {
    out << r.t << ',' << r.loss << ',' << r.cumulative << '\n';
  }
}

nlohmann::json learning_summary(const LearningReport& report) {
  return {{"C", report.radius},
          {"rounds", report.rounds.size()},
          {"regret", report.regret},
          {"bound", report.bound},
          {"within_bound", report.regret <= report.bound},
          {"prediction", report.prediction},
          {"mean_iterations_learned", report.mean_iterations_learned},
          {"mean_iterations_zero", report.mean_iterations_zero}};
}

}  // namespace dcaw
