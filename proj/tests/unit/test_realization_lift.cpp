#include "latdyn/errors.hpp"
#include "latdyn/realization_lift.hpp"

#include "../common/fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace latdyn;
using latdyn::testing::closed;

namespace {

TargetLattice repeller_target(std::vector<std::string> ids, std::vector<std::pair<std::string, std::string>> leq,
                              std::vector<BoxUnion> reps, std::vector<std::optional<BoxUnion>> duals) {
  return TargetLattice::from_irreducibles(TargetKind::repeller, closed(0, 1),
                                          Poset::from_id_pairs(std::move(ids), leq), std::move(reps),
                                          std::move(duals));
}

// Clusters of consecutive cell ids in a 1D cell set.
std::vector<CellSet> runs(const CellSet& s) {
  std::vector<CellSet> out;
  std::size_t prev = CellSet::npos;
  s.for_each([&](std::size_t i) {
    if (prev == CellSet::npos || i != prev + 1) out.emplace_back(s.universe());
    out.back().set(i);
    prev = i;
  });
  return out;
}

}  // namespace

TEST_CASE("covers of sets that attract") {
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {2, 3, 4, 5, 6, 7, 8});
  auto first = first_attracting_level(seq, {closed(0, 0.4)});
  REQUIRE(first);
  CHECK(seq.levels[*first].grid.depth()[0] <= 4);
  for (std::size_t n = *first; n < seq.levels.size(); ++n) CHECK(cov_is_attracting(seq, {closed(0, 0.4)}, n).attracting);
  for (std::size_t n = 0; n < seq.levels.size(); ++n) CHECK(cov_is_attracting(seq, {sys.domain}, n).attracting);
  auto hi = cov_is_attracting(seq, {closed(0.6, 1)}, seq.levels.size() - 1);
  CHECK_FALSE(hi.attracting);
  CHECK(hi.repelling);
}

TEST_CASE("realizing the attractor of x squared") {
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {8});
  auto lv = realize_attractor(seq, {closed(0, 0)}, {closed(1, 1)}, 0.1);
  REQUIRE(lv.size() == 1);
  CHECK_MESSAGE(lv[0].pass(), lv[0].failure);
  CHECK(lv[0].attractor.test(0));
  CHECK(union_contains(BoxUnion{closed(0, 0.1)}, seq.levels[0].grid.evaluate(lv[0].attractor)));
  CHECK(lv[0].repeller.test(seq.levels[0].grid.size() - 1));
  CHECK_THROWS_AS(realize_attractor(seq, {closed(0, 0)}, {closed(1, 1)}, 0.0), Error);
  CHECK_THROWS_AS(realize_attractor(seq, {closed(0, 0)}, {closed(1, 1)}, 1.5), Error);
}

TEST_CASE("realizing the period-two orbit of the logistic map") {
  const double a = 3.2;
  auto orbit = testing::logistic_orbit(a);
  CHECK(orbit[0] == doctest::Approx(0.5130).epsilon(1e-3));
  CHECK(orbit[1] == doctest::Approx(0.7995).epsilon(1e-3));
  BoxUnion att{closed(orbit[0], orbit[0]), closed(orbit[1], orbit[1])};
  auto sys = make_system("logistic:3.2");
  auto seq = build_sequence(sys, sys.domain, {12});
  auto lv = realize_attractor(seq, att, testing::logistic_dual_repeller(a), 0.05);
  REQUIRE(lv.size() == 1);
  CHECK_MESSAGE(lv[0].pass(), lv[0].failure);
  const Grid& g = seq.levels[0].grid;
  auto clusters = runs(lv[0].attractor);
  REQUIRE(clusters.size() == 2);
  CHECK(union_contains(g.evaluate(clusters[0]), att[0]));
  CHECK(union_contains(g.evaluate(clusters[1]), att[1]));
}

TEST_CASE("realized attractors converge") {
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {4, 6, 8, 10, 12});
  auto lv = realize_attractor(seq, {closed(0, 0)}, {closed(1, 1)}, 0.1);
  double prev = INFINITY;
  for (const auto& r : lv) {
    CHECK(r.pass());
    double h = hausdorff(seq.levels[r.level].grid.evaluate(r.attractor), {closed(0, 0)});
    CHECK(h <= prev);
    CHECK(h <= seq.levels[r.level].grid.diam() + 1e-12);
    prev = h;
  }
}

TEST_CASE("repeller of x squared at 1") {
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {6, 8, 10});
  // Lifts preserve the top, so {1} alone is not a target.
  auto lone = repeller_target({"r"}, {}, {{closed(1, 1)}}, {BoxUnion{closed(0, 0)}});
  REQUIRE(lone.validate());
  CHECK_THROWS_AS(build_lift_general(seq, lone), Error);

  auto t = repeller_target({"r", "x"}, {{"r", "x"}}, {{closed(1, 1)}, {closed(0, 1)}},
                           {BoxUnion{closed(0, 0)}, BoxUnion{}});
  CHECK_FALSE(t.validate());
  auto lift = build_lift_general(seq, t);
  CHECK(lift.kind == LiftKind::rset);
  CHECK_MESSAGE(lift.certificates.all(), lift.certificates.failure);
  const Grid& g = seq.levels[lift.level].grid;
  const CellSet& around_one = lift.assignment[lift.o.index_of(lift.poset().down(0))];
  CHECK(around_one.test(g.size() - 1));
  CHECK_FALSE(around_one.test(0));
  CHECK(classify(seq.levels[lift.level].map, around_one).repelling);
  CHECK(lift.assignment[lift.o.index_of(lift.poset().all())] == g.all());
  CHECK(lift.assignment[lift.o.index_of(lift.poset().empty_set())].empty());
  auto rep = verify_lift(lift, seq, &t, seq.levels.size() - 1);
  CHECK_MESSAGE(rep.pass(), rep.agreement.detail, rep.separation.detail);
}

TEST_CASE("whole-space repeller maps to every cell") {
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {5});
  auto t = repeller_target({"x"}, {}, {{closed(0, 1)}}, {BoxUnion{}});
  auto lift = build_lift_general(seq, t);
  CHECK(lift.assignment[lift.o.index_of(lift.poset().all())] == seq.levels[0].grid.all());
  CHECK(lift.certificates.all());
}

TEST_CASE("cofiltered lift of a chain of two repellers") {
  auto sys = make_system("quadratic");
  auto seq = build_sequence(sys, sys.domain, {6, 7, 8, 9, 10}, {}, true);
  auto t = repeller_target({"r", "x"}, {{"r", "x"}}, {{closed(1, 1)}, {closed(0, 1)}},
                           {BoxUnion{closed(0, 0)}, BoxUnion{}});
  auto lift = build_lift_cofiltration(seq, t);
  CHECK(lift.kind == LiftKind::invset_minus);
  CHECK_MESSAGE(lift.certificates.all(), lift.certificates.failure);
  const auto& F = seq.levels[lift.level].map;
  for (const auto& s : lift.assignment) CHECK(classify(F, s).backward_invariant);
  CHECK(lift.assignment[lift.o.index_of(lift.poset().all())] == seq.levels[lift.level].grid.all());

  auto plain = build_sequence(sys, sys.domain, {6, 7});
  try {
    build_lift_cofiltration(plain, t);
    FAIL("plain sequence accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::certificate);
  }
}

TEST_CASE("dualization on G1") {
  // Rep(G1) = ∅ ⊂ {3} ⊂ X, with vertices 0,1,2 for 1,2,3.
  MultivaluedMap f(3, {{0, 1}, {1, 0}, {2, 0}, {2, 2}});
  LiftResult r;
  r.o = down_set_lattice(Poset::chain(2));
  r.assignment = {CellSet(3), CellSet::of(3, {2}), CellSet::full(3)};
  r.blocks = atom_decomposition(r.o, r.assignment);
  r.kind = LiftKind::invset_minus;
  r.epsilons = {0.0, 0.0};
  r.order = {0, 1};

  auto d = dualize_lift(r, f);
  CHECK(d.kind == LiftKind::invset_plus);
  CHECK(d.certificates.homomorphism);
  CHECK(d.certificates.kind);
  for (const auto& s : d.assignment) CHECK(classify(f, s).forward_invariant);
  CHECK(d.assignment[d.o.index_of(d.poset().all())] == CellSet::full(3));
  CHECK(d.assignment[d.o.index_of(d.poset().empty_set())].empty());

  auto dd = dualize_lift(d, f);
  CHECK(dd.kind == r.kind);
  CHECK(dd.o.elements == r.o.elements);
  CHECK(dd.assignment == r.assignment);
  CHECK(dd.blocks == r.blocks);

  r.kind = LiftKind::rset;
  CHECK(dualize_lift(r, f).kind == LiftKind::aset);

}

TEST_CASE("combinatorial-only verification") {
  Grid g(closed(0, 4), {2});
  auto id = MultivaluedMap::identity(4);
  ApproxSequence seq;
  seq.levels.push_back({g, id, 0.0, false});
  auto make = [](std::vector<CellSet> blocks) {
    LiftResult r;
    r.o = down_set_lattice(Poset::from_id_pairs({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}));
    for (const auto& al : r.o.elements) {
      CellSet s(4);
      al.for_each([&](std::size_t p) { s |= blocks[p]; });
      r.assignment.push_back(s);
    }
    r.blocks = std::move(blocks);
    r.kind = LiftKind::invset_minus;
    return r;
  };
  auto good = make({CellSet::of(4, {0}), CellSet::of(4, {3}), CellSet::of(4, {1, 2})});
  auto rep = verify_lift(good, seq, nullptr, std::nullopt);
  CHECK(rep.homomorphism.pass);
  CHECK(rep.separation.pass);
  CHECK(rep.agreement.skipped);
  CHECK(rep.containment.skipped);
  CHECK(rep.pass());

  auto touching = make({CellSet::of(4, {0}), CellSet::of(4, {1}), CellSet::of(4, {2, 3})});
  CHECK_FALSE(verify_lift(touching, seq, nullptr, std::nullopt).separation.pass);
}

TEST_CASE("target validation") {
  auto dw = testing::doublewell_target();
  CHECK_FALSE(dw.validate());
  CHECK(dw.o.size() == 5);
  auto rt = dual_target(dw);
  CHECK(rt.kind == TargetKind::repeller);
  CHECK_FALSE(rt.validate());
  auto back = dual_target(rt);
  REQUIRE(back.values.size() == dw.values.size());
  for (std::size_t i = 0; i < dw.values.size(); ++i) {
    CHECK(union_contains(back.values[i], dw.values[i]));
    CHECK(union_contains(dw.values[i], back.values[i]));
  }

  auto bad = TargetLattice::from_irreducibles(TargetKind::attractor, closed(-2, 2),
                                              Poset::from_id_pairs({"m", "g"}, {{"m", "g"}}),
                                              {{closed(-1, -1)}, {closed(-0.5, 0.5)}});
  auto why = bad.validate();
  REQUIRE(why);
  CHECK(why->find("representative not monotone") != std::string::npos);
  auto sys = make_system("cubicwell:0.4");
  auto seq = build_sequence(sys, sys.domain, {6});
  CHECK_THROWS_AS(lift_attractors(seq, bad, false), Error);
  CHECK_THROWS_AS(dual_target(bad), Error);
}

TEST_CASE("double-well lift") {
  auto sys = make_system("cubicwell:0.4");
  auto seq = build_sequence(sys, sys.domain, {6, 8, 10, 14});
  auto target = testing::doublewell_target();
  auto rt = dual_target(target);
  auto rl = build_lift_general(seq, rt);
  CHECK(rl.kind == LiftKind::rset);
  CHECK_MESSAGE(rl.certificates.all(), rl.certificates.failure);
  for (std::size_t p = 0; p < rl.blocks.size(); ++p)
    for (std::size_t q = p + 1; q < rl.blocks.size(); ++q) CHECK_FALSE(rl.blocks[p].intersects(rl.blocks[q]));

  auto lift = dualize_lift(rl, seq.levels[rl.level].map);
  CHECK(lift.kind == LiftKind::aset);
  CHECK(lift.certificates.all());
  const Grid& g = seq.levels[lift.level].grid;
  auto m = *lift.poset().index_of("m");
  // One image holds the cell of -1 but not that of 1, another the reverse.
  const std::size_t lo = g.cov(closed(-1, -1)).first(), hi = g.cov(closed(1, 1)).first();
  bool left = false, right = false;
  for (const auto& s : lift.assignment) {
    left |= s.test(lo) && !s.test(hi);
    right |= s.test(hi) && !s.test(lo);
  }
  CHECK(left);
  CHECK(right);
  CellSet ones = g.cov(BoxUnion{closed(-1, -1), closed(1, 1)});
  CHECK(ones.subset_of(lift.assignment[lift.o.index_of(lift.poset().all())]));

  auto rep = verify_lift(lift, seq, &target, seq.levels.size() - 1);
  CHECK_MESSAGE(rep.pass(), rep.homomorphism.detail, rep.separation.detail, rep.agreement.detail);

  SUBCASE("a corrupted lift is caught") {
    LiftResult bad = lift;
    std::size_t k = bad.o.index_of(bad.poset().down(m));
    REQUIRE(bad.assignment[k].any());
    bad.assignment[k].reset(bad.assignment[k].first());
    auto r = verify_lift(bad, seq, &target, seq.levels.size() - 1);
    CHECK_FALSE(r.pass());
    CHECK((!r.homomorphism.pass || !r.kind.pass || !r.agreement.pass));
  }
  SUBCASE("dualizing twice is the identity") {
    auto twice = dualize_lift(lift, seq.levels[lift.level].map);
    CHECK(twice.assignment == rl.assignment);
    CHECK(twice.kind == rl.kind);
  }
}
