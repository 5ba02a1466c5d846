#include "dcaw/energy.hpp"

#include <algorithm>
#include <cmath>

#include "dcaw/errors.hpp"
#include "dcaw/max_flow.hpp"

namespace dcaw {

namespace {

bool discretely_convex(const std::vector<std::int64_t>& v) {
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    if (v[k - 1] + v[k + 1] < 2 * v[k]) return false;
  }
  return true;
}

Extended unary_at(const UnaryTable& t, std::int64_t label) {
  if (label < t.lo || label > t.hi()) return Extended::infinity();
  return Extended(t.values[static_cast<std::size_t>(label - t.lo)]);
}

LNatSystem build_domain(const std::vector<UnaryTable>& unary,
                        const std::vector<PairwiseTerm>& pairwise, bool& box_only) {
  const std::size_t n = unary.size();
  if (n == 0) throw DimensionError("energy needs at least one vertex");
  std::vector<Bound> alpha(n);
  std::vector<Bound> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (unary[i].values.empty()) throw ContractError("empty unary table");
    for (std::int64_t x : unary[i].values) check_magnitude(x, "unary value");
    if (!discretely_convex(unary[i].values)) {
      throw ContractError("unary table of vertex " + std::to_string(i) + " is not convex");
    }
    alpha[i] = unary[i].lo;
    beta[i] = unary[i].hi();
  }
  box_only = true;
  std::vector<DifferenceBound> gamma;
  for (const PairwiseTerm& t : pairwise) {
    if (t.i >= n || t.j >= n || t.i == t.j) throw DimensionError("bad pairwise edge");
    if (t.values.empty()) throw ContractError("empty pairwise window");
    for (std::int64_t x : t.values) check_magnitude(x, "pairwise value");
    if (!discretely_convex(t.values)) {
      throw ContractError("pairwise term (" + std::to_string(t.i) + ", " + std::to_string(t.j) +
                          ") is not convex");
    }
    gamma.push_back({t.i, t.j, t.hi()});
    gamma.push_back({t.j, t.i, -t.lo});
    if (t.hi() < unary[t.j].hi() - unary[t.i].lo || t.lo > unary[t.j].lo - unary[t.i].hi()) {
      box_only = false;
    }
  }
  return LNatSystem(n, std::move(alpha), std::move(beta), std::move(gamma));
}

const char* kind_name(PairwiseKind k) {
  switch (k) {
    case PairwiseKind::Abs:
      return "abs";
    case PairwiseKind::Quad:
      return "quad";
    case PairwiseKind::Table:
      break;
  }
  return "table";
}

}  // namespace

Extended PairwiseTerm::at(std::int64_t delta) const {
  if (delta < lo || delta > hi()) return Extended::infinity();
  return Extended(values[static_cast<std::size_t>(delta - lo)]);
}

EnergyInstance::EnergyInstance(std::vector<UnaryTable> unary, std::vector<PairwiseTerm> pairwise)
    : unary_(std::move(unary)),
      pairwise_(std::move(pairwise)),
      domain_(build_domain(unary_, pairwise_, box_only_)) {}

PairwiseTerm EnergyInstance::named_term(const std::vector<UnaryTable>& unary, std::size_t i,
                                        std::size_t j, PairwiseKind kind, std::int64_t weight,
                                        std::optional<std::pair<std::int64_t, std::int64_t>> window) {
  if (i >= unary.size() || j >= unary.size()) throw DimensionError("bad pairwise edge");
  if (kind == PairwiseKind::Table) throw ContractError("named_term needs abs or quad");
  if (weight < 0) throw ContractError("named pairwise terms need a non-negative weight");
  const auto [lo, hi] = window.value_or(
      std::pair(unary[j].lo - unary[i].hi(), unary[j].hi() - unary[i].lo));
  if (lo > hi) throw ContractError("empty pairwise window");
  PairwiseTerm t;
  t.i = i;
  t.j = j;
  t.lo = lo;
  t.kind = kind;
  t.weight = weight;
  for (std::int64_t d = lo; d <= hi; ++d) {
    t.values.push_back(kind == PairwiseKind::Abs ? weight * (d < 0 ? -d : d) : weight * d * d);
  }
  return t;
}

std::int64_t EnergyInstance::max_label_width() const noexcept {
  std::int64_t w = 0;
  for (const UnaryTable& t : unary_) w = std::max(w, t.hi() - t.lo);
  return w;
}

nlohmann::json EnergyInstance::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json pairwise = nlohmann::json::array();
  for (const PairwiseTerm& t : pairwise_) {
    edges.push_back({t.i, t.j});
    nlohmann::json term = {{"edge", {t.i, t.j}}, {"kind", kind_name(t.kind)}};
    if (t.kind == PairwiseKind::Table) {
      term["lo"] = t.lo;
      term["values"] = t.values;
    } else {
      term["weight"] = t.weight;
      term["window"] = {t.lo, t.hi()};
    }
    pairwise.push_back(term);
  }
  nlohmann::json unary = nlohmann::json::array();
  nlohmann::json box = nlohmann::json::array();
  for (const UnaryTable& t : unary_) {
    unary.push_back(t.values);
    box.push_back({t.lo, t.hi()});
  }
  return {{"type", "energy"}, {"n", unary_.size()}, {"edges", edges},
          {"unary", unary},   {"pairwise", pairwise}, {"box", box}};
}

EnergyInstance EnergyInstance::from_json(const nlohmann::json& j) {
  try {
    if (j.at("type").get<std::string>() != "energy") throw ParseError("not an energy instance");
    const auto n = j.at("n").get<std::size_t>();
    const auto& box = j.at("box");
    const auto& tables = j.at("unary");
    if (box.size() != n || tables.size() != n) throw ParseError("box and unary need n entries");
    std::vector<UnaryTable> unary(n);
    for (std::size_t i = 0; i < n; ++i) {
      unary[i].lo = box[i].at(0).get<std::int64_t>();
      const auto hi = box[i].at(1).get<std::int64_t>();
      unary[i].values = tables[i].get<std::vector<std::int64_t>>();
      if (hi < unary[i].lo || static_cast<std::int64_t>(unary[i].values.size()) != hi - unary[i].lo + 1) {
        throw ParseError("unary table " + std::to_string(i) + " does not match its box");
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    std::vector<PairwiseTerm> pairwise;
    for (const auto& term : j.at("pairwise")) {
      const auto i = term.at("edge").at(0).get<std::size_t>();
      const auto k = term.at("edge").at(1).get<std::size_t>();
      if (std::find(edges.begin(), edges.end(), std::pair(i, k)) == edges.end()) {
        throw ParseError("pairwise term on an unlisted edge");
      }
      const std::string kind = term.at("kind").get<std::string>();
      if (kind == "table") {
        PairwiseTerm t;
        t.i = i;
        t.j = k;
        t.lo = term.at("lo").get<std::int64_t>();
        t.values = term.at("values").get<std::vector<std::int64_t>>();
        pairwise.push_back(std::move(t));
        continue;
      }
      if (kind != "abs" && kind != "quad") throw ParseError("unknown pairwise kind '" + kind + "'");
      std::optional<std::pair<std::int64_t, std::int64_t>> window;
      if (term.contains("window")) {
        window = std::pair(term["window"].at(0).get<std::int64_t>(),
                           term["window"].at(1).get<std::int64_t>());
      }
      pairwise.push_back(named_term(unary, i, k, kind == "abs" ? PairwiseKind::Abs : PairwiseKind::Quad,
                                    term.value("weight", std::int64_t{1}), window));
    }
    return EnergyInstance(std::move(unary), std::move(pairwise));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("energy instance: ") + ex.what());
  }
}

Extended energy_value(const EnergyInstance& inst, const IntVector& p) {
  if (p.size() != inst.size()) throw DimensionError("labeling dimension mismatch");
  Extended total(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    total = total + unary_at(inst.unary()[i], p[i]);
    if (total.is_infinite()) return total;
  }
  for (const PairwiseTerm& t : inst.pairwise()) {
    total = total + t.at(p[t.j] - p[t.i]);
    if (total.is_infinite()) return total;
  }
  return total;
}

Objective energy_objective(const EnergyInstance& inst) {
  return {inst.size(), ConvexityClass::LNatural,
          [&inst](const IntVector& p) { return energy_value(inst, p); }};
}

CutGraph build_cut_graph(const EnergyInstance& inst, const IntVector& p, int sign) {
  if (sign != 1 && sign != -1) throw ContractError("sign must be +1 or -1");
  const std::size_t n = inst.size();
  if (energy_value(inst, p).is_infinite()) throw ContractError("cut graph needs a finite energy at p");

  struct Pair {
    std::size_t i, j;
    Extended a, b, c, d;  // E(0,0), E(0,1), E(1,0), E(1,1) over (d_i, d_j)
  };
  std::vector<Extended> u0(n);
  std::vector<Extended> u1(n);
  std::int64_t magnitude = 0;
  auto absorb = [&](const Extended& x) {
    if (x.is_finite()) magnitude += x.value() < 0 ? -x.value() : x.value();
  };
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = unary_at(inst.unary()[i], p[i]);
    u1[i] = unary_at(inst.unary()[i], p[i] + sign);
    absorb(u0[i]);
    absorb(u1[i]);
  }
  std::vector<Pair> pairs;
  for (const PairwiseTerm& t : inst.pairwise()) {
    const std::int64_t delta = p[t.j] - p[t.i];
    Pair q{t.i, t.j, t.at(delta), t.at(delta + sign), t.at(delta - sign), t.at(delta)};
    for (const Extended* x : {&q.a, &q.b, &q.c, &q.d}) absorb(*x);
    pairs.push_back(q);
  }

  CutGraph g;
  g.node_count = n + 2;
  g.source = n;
  g.sink = n + 1;
  g.big_m = 1 + magnitude;
  auto fin = [&](const Extended& x) { return x.is_finite() ? x.value() : g.big_m; };

  std::vector<std::int64_t> coeff(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    g.constant += fin(u0[i]);
    coeff[i] += fin(u1[i]) - fin(u0[i]);
  }
  std::vector<CutArc> cross;
  for (const Pair& q : pairs) {
    const std::int64_t a = fin(q.a), b = fin(q.b), c = fin(q.c), d = fin(q.d);
    // E = A + (C - A) d_i + (D - C) d_j + (B + C - A - D)(1 - d_i) d_j
    g.constant += a;
    coeff[q.i] += c - a;
    coeff[q.j] += d - c;
    const std::int64_t k = b + c - a - d;
    if (k < 0) throw ContractError("pairwise term is not submodular after reparametrization");
    if (k > 0) cross.push_back({q.j, q.i, k});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (coeff[i] > 0) {
      g.arcs.push_back({i, g.sink, coeff[i]});
    } else if (coeff[i] < 0) {
      g.constant += coeff[i];
      g.arcs.push_back({g.source, i, -coeff[i]});
    }
  }
  g.arcs.insert(g.arcs.end(), cross.begin(), cross.end());
  return g;
}

MinCut dinic_min_cut(const CutGraph& graph) {
  MaxFlow flow(graph.node_count);
  for (const CutArc& a : graph.arcs) flow.add_arc(a.from, a.to, a.capacity);
  MinCut out;
  out.value = flow.run(graph.source, graph.sink);
  out.source_side = flow.source_side();
  return out;
}

EnergyDirection energy_local_direction(const EnergyInstance& inst, const IntVector& p) {
  const Extended current = energy_value(inst, p);
  if (current.is_infinite()) throw ContractError("local direction needs a finite energy at p");
  EnergyDirection best;
  for (int sign : {+1, -1}) {
    const CutGraph g = build_cut_graph(inst, p, sign);
    const MinCut cut = dinic_min_cut(g);
    Direction d;
    d.sign = sign;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (cut.source_side[i]) d.support.push_back(i);
    }
    const Extended next = energy_value(inst, moved(p, d, 1));
    if (next.is_infinite()) throw InvariantViolation("min cut crossed a big-M arc");
    if (next.value() != g.constant + cut.value) {
      throw InvariantViolation("cut value disagrees with the energy");
    }
    const std::int64_t improvement = next.value() - current.value();
    if (improvement < best.improvement) {
      best.improvement = improvement;
      best.direction = std::move(d);
    }
  }
  return best;
}

EnergySolution solve_energy(const EnergyInstance& inst, std::span<const double> p_hat,
                            const EnergyOptions& options) {
  if (p_hat.size() != inst.size()) throw DimensionError("prediction dimension mismatch");
  EnergySolution out;
  const LNatSystem& s = inst.domain();
  const std::vector<double> q =
      inst.box_only() ? project_box(s.alpha(), s.beta(), p_hat) : project_general(s, p_hat).point;
  out.start = round_into(s, q);

  const Objective g = energy_objective(inst);
  LocalOracle local = [&](const IntVector& p, Extended current) -> LocalStep {
    EnergyDirection dir = energy_local_direction(inst, p);
    return {std::move(dir.direction), current + Extended(dir.improvement)};
  };
  const StepRule rule = options.step == StepKind::Unit
                            ? StepRule::unit()
                            : StepRule::long_step(std::max<std::int64_t>(1, inst.max_label_width()));
  DescentResult res = steepest_descent(g, local, rule, out.start, options.descent);
  out.labels = res.point;
  out.value = res.value.value();
  out.trace = std::move(res.trace);
  return out;
}

BruteForceEnergy brute_force_energy(const EnergyInstance& inst) {
  const Minimizer m = lexicographic_minimizer(energy_objective(inst), inst.domain());
  return {m.value.value(), m.point};
}

EnergyInstance toy_energy_instance() {
  std::vector<UnaryTable> unary{{0, {0, 1, 2}}, {0, {2, 1, 0}}};
  std::vector<PairwiseTerm> pairwise{
      EnergyInstance::named_term(unary, 0, 1, PairwiseKind::Abs, 1)};
  return EnergyInstance(std::move(unary), std::move(pairwise));
}

}  // namespace dcaw
