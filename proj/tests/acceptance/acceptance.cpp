// Acceptance run: one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failed criteria.

#include "latdyn/combinatorial_dynamics.hpp"
#include "latdyn/errors.hpp"
#include "latdyn/json_io.hpp"
#include "latdyn/outer_approximation.hpp"
#include "latdyn/realization_lift.hpp"

#include "../common/fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace latdyn;
using latdyn::testing::closed;

namespace {

// Pinned limits and tolerances.
constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kRandomGraphs = 1000;
constexpr std::size_t kMaxRandomVertices = 10;
constexpr double kCorpusSeconds = 60.0;
constexpr std::size_t kSamplesPerSystem = 1000;
constexpr int kSampleIterates = 5;
constexpr double kConvergenceEps = 0.05;
constexpr unsigned kConvergenceK = 3;
constexpr double kConvergenceSeconds = 30.0;
constexpr double kRealizeSeconds = 10.0;
constexpr double kLiftSeconds = 120.0;
constexpr unsigned kReferenceDepth = 14;
constexpr unsigned kMaxLiftDepth = 12;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::set<CellSet> as_set(const std::vector<CellSet>& v) { return {v.begin(), v.end()}; }

// All left-total digraphs on 1..4 vertices, then seeded random ones.
std::vector<MultivaluedMap> corpus() {
  std::vector<MultivaluedMap> out;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    const std::uint32_t bits = n * n;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) {
      bool total = true;
      for (std::uint32_t u = 0; u < n && total; ++u) total = ((m >> (u * n)) & ((1u << n) - 1)) != 0;
      if (!total) continue;
      std::vector<Edge> e;
      for (std::uint32_t k = 0; k < bits; ++k)
        if (m >> k & 1) e.emplace_back(k / n, k % n);
      out.emplace_back(n, e);
    }
  }
  std::mt19937_64 rng(kSeed);
  for (std::size_t t = 0; t < kRandomGraphs; ++t) {
    const std::uint32_t n = 1 + rng() % kMaxRandomVertices;
    const bool left_total = t % 2 == 0;
    const unsigned density = 1 + rng() % 4;
    std::vector<Edge> e;
    for (std::uint32_t u = 0; u < n; ++u) {
      bool any = false;
      for (std::uint32_t v = 0; v < n; ++v)
        if (rng() % (n + 1) < density) e.emplace_back(u, v), any = true;
      if (left_total && !any) e.emplace_back(u, static_cast<std::uint32_t>(rng() % n));
    }
    out.emplace_back(n, e);
  }
  return out;
}

std::string graph_label(const MultivaluedMap& f) { return digraph_to_json(f).dump(); }

Outcome criterion_oracle(const std::vector<MultivaluedMap>& graphs) {
  Outcome o;
  auto t0 = Clock::now();
  for (const auto& f : graphs) {
    o.require(as_set(att_lattice(f).materialize()) == as_set(brute_force_attractors(f)),
              "Att differs from brute force on " + graph_label(f));
    o.require(as_set(rep_lattice(f).materialize()) == as_set(brute_force_repellers(f)),
              "Rep differs from brute force on " + graph_label(f));
    if (!o.pass) break;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << graphs.size() << " digraphs in " << secs << " s (limit " << kCorpusSeconds << " s)";
  o.require(secs < kCorpusSeconds, os.str());
  if (o.pass) o.detail = os.str();
  return o;
}

// Tail containment straight from the definition of an attracting set:
// Fⁿ(U) ⊆ U for every n in a window past the preperiod of the image sequence.
bool tail_inside(const MultivaluedMap& f, const CellSet& u) {
  CellSet s = u;
  for (int n = 0; n < 100; ++n) s = f.image(s);
  for (int n = 0; n < 100; ++n) {
    if (!s.subset_of(u)) return false;
    s = f.image(s);
  }
  return true;
}

Outcome criterion_properties(const std::vector<MultivaluedMap>& graphs) {
  Outcome o;
  std::mt19937_64 rng(kSeed + 1);
  std::size_t checks = 0;
  for (const auto& f : graphs) {
    const std::size_t n = f.size();
    const auto finv = inverse(f);
    const std::string g = graph_label(f);
    std::vector<CellSet> subsets;
    if (n <= 4) {
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        CellSet s(n);
        for (std::size_t i = 0; i < n; ++i)
          if (m >> i & 1) s.set(i);
        subsets.push_back(s);
      }
    } else {
      for (int k = 0; k < 12; ++k) {
        CellSet s(n);
        for (std::size_t i = 0; i < n; ++i)
          if (rng() & 1) s.set(i);
        subsets.push_back(s);
      }
    }
    const bool left_total = totality(f).left_total;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      const CellSet& u = subsets[i];
      const CellSet& v = subsets[(i * 7 + 3) % subsets.size()];
      const CellSet wu = omega(f, u), wv = omega(f, v), au = alpha(f, u);
      o.require(f.image(wu) == wu && omega(f, f.image(u)) == wu, "omega (ii) on " + g);
      o.require(finv.image(au) == au && alpha(f, finv.image(u)) == au, "alpha (ii) on " + g);
      if (left_total && u.any()) o.require(wu.any(), "omega (iii) on " + g);
      if (v.subset_of(u)) o.require(wv.subset_of(wu), "omega (v) on " + g);
      o.require(omega(f, u & v).subset_of(wu & wv), "omega (v) meet on " + g);
      o.require(omega(f, u | v) == (wu | wv), "omega (vi) on " + g);
      o.require(omega(f, wu) == wu && alpha(f, au) == au, "omega (vii) on " + g);
      const bool attracting = wu.subset_of(u);
      if (char_attset(f, u)) o.require(attracting, "omega (iv) on " + g);
      o.require(attracting == tail_inside(f, u), "attracting-set characterization on " + g);
      o.require(au.subset_of(u) == tail_inside(finv, u), "repelling-set characterization on " + g);
      o.require(attracting == char_attset(f, u).has_value(), "char_attset on " + g);
      auto cu = classify(f, u), cc = classify(f, u.complement());
      o.require(cu.forward_invariant == cc.backward_invariant, "Invset+/Invset- complement on " + g);
      o.require(cu.attracting == cc.repelling, "ASet/RSet complement on " + g);
      checks += 12;
    }
    auto atts = att_lattice(f).materialize();
    for (const auto& a : atts) {
      const CellSet as = dual_repeller(f, a);
      o.require(dual_attractor(f, as) == a, "A** != A on " + g);
      o.require(as == alpha(f, a.complement()), "A* != alpha(A^c) on " + g);
    }
    const std::size_t pairs = std::min<std::size_t>(atts.size() * atts.size(), 64);
    for (std::size_t k = 0; k < pairs; ++k) {
      const CellSet& a = atts[k % atts.size()];
      const CellSet& b = atts[(k / atts.size() + k * 5) % atts.size()];
      const CellSet as = dual_repeller(f, a), bs = dual_repeller(f, b);
      o.require(dual_repeller(f, att_join(f, a, b)) == rep_meet(f, as, bs), "(A v A')* on " + g);
      o.require(dual_repeller(f, att_meet(f, a, b)) == rep_join(f, as, bs), "(A ^ A')* on " + g);
      checks += 2;
    }
    if (n <= 10) {
      auto d = check_diagram_six(f, 16, 1u << 12, kSeed);
      o.require(d.ok, "diagram: " + d.failure + " on " + g);
      checks += d.pairs_checked;
    }
    if (!o.pass) break;
  }
  if (o.pass) o.detail = std::to_string(checks) + " checks over " + std::to_string(graphs.size()) + " digraphs";
  return o;
}

Outcome criterion_outer() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::size_t samples = 0, variants = 0;
  for (const char* id : {"quadratic", "logistic:3.2", "cubicwell:0.4"}) {
    auto sys = make_system(id);
    auto seq = build_sequence(sys, sys.domain, {8});
    const Grid& g = seq.levels[0].grid;
    const MultivaluedMap& F = seq.levels[0].map;
    auto fo = minimal_map(g, sys);
    o.require(is_outer_approximation(fo, g, sys), std::string("minimal map not outer for ") + id);
    o.require(encloses(F, fo) && is_outer_approximation(F, g, sys), std::string("sequence map for ") + id);
    auto edges = fo.edges();
    for (int t = 0; t < 40; ++t) {
      auto more = edges;
      for (int k = 0; k < 5; ++k)
        more.emplace_back(static_cast<std::uint32_t>(rng() % g.size()), static_cast<std::uint32_t>(rng() % g.size()));
      MultivaluedMap big(g.size(), more);
      o.require(encloses(big, fo) == is_outer_approximation(big, g, sys), std::string("enclosure law, extra edges, ") + id);
      auto fewer = edges;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(rng() % fewer.size()));
      MultivaluedMap small(g.size(), fewer);
      o.require(encloses(small, fo) == is_outer_approximation(small, g, sys), std::string("enclosure law, missing edge, ") + id);
      variants += 2;
    }
    for (std::size_t s = 0; s < kSamplesPerSystem; ++s) {
      const std::size_t c = rng() % g.size();
      FloatBox b = g.cell_float(c);
      std::vector<double> x{b.lo[0] + u01(rng) * (b.hi[0] - b.lo[0])};
      CellSet img = CellSet::of(g.size(), {c});
      for (int n = 1; n <= kSampleIterates; ++n) {
        x = sys.point(x);
        img = F.image(img);
        if (!g.interior_contains(img, closed(x[0], x[0]))) {
          std::ostringstream os;
          os << id << ": f^" << n << "(x) = " << x[0] << " outside int|F^" << n << "(cell " << c << ")|";
          o.require(false, os.str());
        }
      }
      ++samples;
    }
  }
  if (o.pass)
    o.detail = std::to_string(samples) + " sampled orbits, " + std::to_string(variants) + " perturbed maps";
  return o;
}

Outcome criterion_convergence() {
  Outcome o;
  auto t0 = Clock::now();
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {6, 8, 10});
  double prev = INFINITY;
  std::ostringstream os;
  for (const auto& lv : seq.levels) {
    const unsigned depth = lv.grid.depth()[0];
    o.require(lv.rho == std::ldexp(1.0, -int(depth) - 1), "rho schedule");
    auto r = iterate_enclosure_check(lv.map, lv.grid, sys, kConvergenceK, kConvergenceEps);
    os << "depth " << depth << " excess " << r.max_excess << (r.pass ? " pass" : " fail") << "; ";
    if (depth >= 8) o.require(r.pass && r.certified, "enclosure fails at depth " + std::to_string(depth));
    o.require(r.max_excess <= prev, "excess increases at depth " + std::to_string(depth));
    prev = r.max_excess;
  }
  const double secs = seconds_since(t0);
  os << secs << " s";
  o.require(secs < kConvergenceSeconds, "too slow: " + os.str());
  if (o.pass) o.detail = os.str();
  return o;
}

Outcome criterion_realization() {
  Outcome o;
  auto t0 = Clock::now();
  std::ostringstream os;
  {
    auto sys = make_system("quadratic");
    auto seq = build_sequence(sys, sys.domain, {8});
    auto r = realize_attractor(seq, {closed(0, 0)}, {closed(1, 1)}, 0.1).at(0);
    const BoxUnion ev = seq.levels[0].grid.evaluate(r.attractor);
    o.require(r.pass(), "x^2: " + r.failure);
    o.require(union_contains(BoxUnion{closed(0, 0.1)}, ev), "x^2: |A_n| not inside [0, 0.1]");
    o.require(union_contains(ev, closed(0, 0)), "x^2: 0 not in |A_n|");
    os << "x^2 depth 8: " << r.attractor.count() << " cells; ";
  }
  {
    const double a = 3.2;
    auto orbit = testing::logistic_orbit(a);
    BoxUnion att{closed(orbit[0], orbit[0]), closed(orbit[1], orbit[1])};
    auto sys = make_system("logistic:3.2");
    auto seq = build_sequence(sys, sys.domain, {12});
    auto r = realize_attractor(seq, att, testing::logistic_dual_repeller(a), 0.05).at(0);
    o.require(r.pass(), "logistic: " + r.failure);
    // Two clusters of consecutive cells, one around each orbit point.
    std::vector<CellSet> runs;
    std::size_t prev = CellSet::npos;
    r.attractor.for_each([&](std::size_t i) {
      if (prev == CellSet::npos || i != prev + 1) runs.emplace_back(r.attractor.universe());
      runs.back().set(i);
      prev = i;
    });
    const Grid& g = seq.levels[0].grid;
    o.require(runs.size() == 2, "logistic: " + std::to_string(runs.size()) + " clusters");
    if (runs.size() == 2) {
      o.require(union_contains(g.evaluate(runs[0]), att[0]) && union_contains(g.evaluate(runs[1]), att[1]),
                "logistic: an orbit point lies outside its cluster");
    }
    os << "logistic depth 12: orbit {" << orbit[0] << ", " << orbit[1] << "}, " << runs.size() << " clusters; ";
  }
  const double secs = seconds_since(t0);
  os << secs << " s";
  o.require(secs < kRealizeSeconds, "too slow: " + os.str());
  if (o.pass) o.detail = os.str();
  return o;
}

std::vector<unsigned> lift_depths() { return {6, 8, 10, 12, kReferenceDepth}; }

void require_report(Outcome& o, const LiftReport& r) {
  for (const auto* item : {&r.homomorphism, &r.kind, &r.separation, &r.containment, &r.agreement}) {
    o.require(item->pass, "verify: " + item->detail);
    o.require(!item->skipped, "verify item skipped: " + item->detail);
  }
}

Outcome criterion_lift() {
  Outcome o;
  auto t0 = Clock::now();
  auto target = testing::doublewell_target();
  auto sys = make_system("cubicwell:0.4");
  auto seq = build_sequence(sys, sys.domain, lift_depths());
  LiftResult lift = lift_attractors(seq, target, false);
  const std::size_t ref = seq.levels.size() - 1;
  o.require(lift.o.size() == 5, "lattice has " + std::to_string(lift.o.size()) + " elements");
  o.require(lift.depth.at(0) <= kMaxLiftDepth, "lift needed depth " + std::to_string(lift.depth.at(0)));
  o.require(lift.kind == LiftKind::aset, "kind is " + to_string(lift.kind));
  o.require(lift.certificates.all(), "certificate: " + lift.certificates.failure);
  o.require(as_set(lift.assignment).size() == lift.assignment.size(), "not injective");
  for (const auto& s : lift.assignment) o.require(classify(seq.levels[lift.level].map, s).attracting, "image not in ASet");
  auto rep = verify_lift(lift, seq, &target, ref);
  require_report(o, rep);
  o.require(rep.tolerance == 2.0 * seq.levels[ref].grid.diam(), "tolerance is not 2 diam");
  const double secs = seconds_since(t0);
  std::ostringstream os;
  double worst = 0;
  for (double h : rep.hausdorff) worst = std::max(worst, h);
  os << "depth " << lift.depth.at(0) << ", kind " << to_string(lift.kind) << ", max Hausdorff " << worst
     << " <= " << rep.tolerance << " at depth " << kReferenceDepth << ", " << secs << " s";
  o.require(secs < kLiftSeconds, "too slow: " + os.str());
  if (o.pass) o.detail = os.str();
  return o;
}

Outcome criterion_cofiltration() {
  Outcome o;
  auto target = testing::doublewell_target();
  auto sys = make_system("cubicwell:0.4");
  auto seq = build_sequence(sys, sys.domain, lift_depths(), {}, true);
  o.require(!check_cofiltration(seq), "sequence is not a cofiltration");
  auto repeller = build_lift_cofiltration(seq, dual_target(target));
  o.require(repeller.kind == LiftKind::invset_minus, "repeller kind " + to_string(repeller.kind));
  o.require(repeller.certificates.all(), "certificate: " + repeller.certificates.failure);
  // Every image stays backward invariant under every later refinement.
  std::size_t spot = 0;
  for (const auto& w : repeller.assignment)
    for (std::size_t m = repeller.level + 1; m < seq.levels.size(); ++m) {
      o.require(refinement_spot_check(seq, repeller.level, m, w), "refinement check fails at level " + std::to_string(m));
      ++spot;
    }
  LiftResult lift = dualize_lift(repeller, seq.levels[repeller.level].map);
  o.require(lift.kind == LiftKind::invset_plus, "kind " + to_string(lift.kind));
  o.require(lift.certificates.all(), "certificate: " + lift.certificates.failure);
  for (const auto& s : lift.assignment)
    o.require(classify(seq.levels[lift.level].map, s).forward_invariant, "image not forward invariant");
  require_report(o, verify_lift(lift, seq, &target, seq.levels.size() - 1));
  if (o.pass)
    o.detail = "depth " + std::to_string(lift.depth.at(0)) + ", kind " + to_string(lift.kind) + ", " +
               std::to_string(repeller.certificates.refinement_checks) + " checks during construction, " +
               std::to_string(spot) + " afterwards";
  return o;
}

std::string full_run_bytes() {
  auto target = testing::doublewell_target();
  auto sys = make_system("cubicwell:0.4");
  auto seq = build_sequence(sys, sys.domain, lift_depths());
  auto lift = lift_attractors(seq, target, false);
  json out{{"lift", lift_to_json(lift)},
           {"report", lift_report_to_json(verify_lift(lift, seq, &target, seq.levels.size() - 1))}};
  std::mt19937_64 rng(kSeed);
  for (int t = 0; t < 20; ++t) {
    std::vector<Edge> e;
    const std::uint32_t n = 2 + rng() % 7;
    for (std::uint32_t u = 0; u < n; ++u) e.emplace_back(u, static_cast<std::uint32_t>(rng() % n));
    out["diagrams"].push_back(diagram_report_to_json(check_diagram_six(MultivaluedMap(n, e), 16, 64, kSeed)));
  }
  const auto& lv = seq.levels[lift.level];
  auto back = iterate_enclosure_check(lv.map, lv.grid, sys, 1, 0.1, Direction::backward, kSeed);
  out["backward_excess"] = back.max_excess;
  return out.dump();
}

Outcome criterion_involution() {
  Outcome o;
  auto sys = make_system("cubicwell:0.4");
  for (bool cof : {false, true}) {
    auto seq = build_sequence(sys, sys.domain, lift_depths(), {}, cof);
    auto lift = lift_attractors(seq, testing::doublewell_target(), cof);
    const auto& F = seq.levels[lift.level].map;
    auto twice = dualize_lift(dualize_lift(lift, F), F);
    o.require(lift_to_json(twice).dump() == lift_to_json(lift).dump(), "dualize twice differs from identity");
    o.require(twice.assignment == lift.assignment && twice.blocks == lift.blocks, "bitwise difference");
  }
  const std::string a = full_run_bytes(), b = full_run_bytes();
  o.require(a == b, "two runs differ");
  if (o.pass) o.detail = "identical output of " + std::to_string(a.size()) + " bytes";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto run = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  const auto graphs = corpus();
  run(1, "combinatorial oracle equivalence", [&] { return criterion_oracle(graphs); });
  run(2, "combinatorial property suite", [&] { return criterion_properties(graphs); });
  run(3, "outer approximation laws", criterion_outer);
  run(4, "convergence of iterated enclosures", criterion_convergence);
  run(5, "attractor realization", criterion_realization);
  run(6, "double-well lattice lift", criterion_lift);
  run(7, "cofiltration lift", criterion_cofiltration);
  run(8, "dualization involution and determinism", criterion_involution);
  return failed;
}
