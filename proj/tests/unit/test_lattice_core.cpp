#include "latdyn/errors.hpp"
#include "latdyn/grid.hpp"
#include "latdyn/lattice_core.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace latdyn;

namespace {

Poset v_poset() { return Poset::from_id_pairs({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}); }

CellSet ids(const Poset& p, std::initializer_list<const char*> names) {
  CellSet s(p.size());
  for (const char* n : names) s.set(*p.index_of(n));
  return s;
}

// Down-sets by filtering every subset.
std::set<CellSet> brute_down_sets(const Poset& p) {
  std::set<CellSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << p.size()); ++m) {
    CellSet s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      if (m >> i & 1) s.set(i);
    bool closed = true;
    s.for_each([&](std::size_t x) {
      for (std::size_t y = 0; y < p.size(); ++y)
        if (p.leq(y, x) && !s.test(y)) closed = false;
    });
    if (closed) out.insert(s);
  }
  return out;
}

Poset random_poset(std::mt19937_64& rng, std::size_t n) {
  // Relations only from lower to higher index keep it acyclic.
  std::vector<std::string> names;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j)
      if (rng() % 3 == 0) rel.emplace_back(j, i);
  }
  return Poset(names, rel);
}

FiniteLattice m3() {
  // 0 bottom, 1..3 atoms, 4 top
  std::vector<std::vector<std::size_t>> join(5, std::vector<std::size_t>(5)), meet = join;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      if (a == b) join[a][b] = meet[a][b] = a;
      else if (a == 0 || b == 0) join[a][b] = a + b, meet[a][b] = 0;
      else if (a == 4 || b == 4) join[a][b] = 4, meet[a][b] = a == 4 ? b : a;
      else join[a][b] = 4, meet[a][b] = 0;
    }
  return FiniteLattice::from_tables(join, meet, 0, 4);
}

}  // namespace

TEST_CASE("down-set lattices of small posets") {
  SUBCASE("antichain gives the Boolean square") {
    auto o = down_set_lattice(Poset::antichain(2));
    CHECK(o.size() == 4);
    CHECK(o.lattice.is_distributive());
    CHECK(join_irreducibles(o.lattice).poset.size() == 2);
  }
  SUBCASE("chain gives a chain of prefixes") {
    Poset c = Poset::chain(3);
    auto o = down_set_lattice(c);
    REQUIRE(o.size() == 4);
    for (std::size_t i = 0; i + 1 < o.size(); ++i) CHECK(o.elements[i].subset_of(o.elements[i + 1]));
    CHECK(o.elements[1] == c.down(0));
    CHECK(o.elements[2] == c.down(1));
  }
  SUBCASE("V-poset has five down-sets") {
    Poset v = v_poset();
    auto o = down_set_lattice(v);
    CHECK(o.size() == 5);
    std::set<CellSet> got(o.elements.begin(), o.elements.end());
    CHECK(got == brute_down_sets(v));
    CHECK(got.count(ids(v, {"a", "b"})) == 1);
    CHECK(got.count(ids(v, {"c"})) == 0);
  }
}

TEST_CASE("join-irreducibles") {
  CHECK(join_irreducibles(down_set_lattice(Poset::antichain(2)).lattice).poset.covers().empty());
  auto jc = join_irreducibles(down_set_lattice(Poset::chain(3)).lattice);
  CHECK(jc.poset.size() == 3);
  CHECK(jc.poset.covers().size() == 2);
  auto jv = join_irreducibles(down_set_lattice(v_poset()).lattice);
  REQUIRE(jv.poset.size() == 3);
  // One element above two incomparable ones.
  std::size_t tops = 0;
  for (std::size_t i = 0; i < 3; ++i)
    if (jv.poset.down(i).count() == 3) ++tops;
  CHECK(tops == 1);
  CHECK(jv.poset.covers().size() == 2);
}

TEST_CASE("birkhoff representation") {
  auto chain = down_set_lattice(Poset::chain(3)).lattice;
  auto b = birkhoff_iso(chain);
  CHECK(b.hom.bijective());
  CHECK_FALSE(b.hom.first_failure());

  FiniteLattice diamond = m3();
  CHECK_FALSE(diamond.is_distributive());
  try {
    birkhoff_iso(diamond);
    FAIL("M3 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    CHECK(std::string(e.what()).find("not distributive") != std::string::npos);
  }

  // Att lattice of G1 as sets: ∅ ⊂ {0,1} ⊂ X.
  auto att = FiniteLattice::of_sets({CellSet(3), CellSet::of(3, {0, 1}), CellSet::full(3)});
  auto ba = birkhoff_iso(att);
  CHECK(ba.irreducibles.poset.size() == 2);
  CHECK(ba.irreducibles.poset.covers().size() == 1);
}

TEST_CASE("birkhoff round trip on random posets") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 60; ++t) {
    Poset p = random_poset(rng, 1 + rng() % 7);
    auto o = down_set_lattice(p);
    std::set<CellSet> got(o.elements.begin(), o.elements.end());
    CHECK(got == brute_down_sets(p));
    CHECK(o.lattice.is_distributive());
    auto b = birkhoff_iso(o.lattice);
    CHECK(b.hom.bijective());
    // J(O(P)) consists of the principal down-sets, ordered as P.
    REQUIRE(b.irreducibles.poset.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::size_t pi = b.irreducibles.elements[i];
      const CellSet& s = o.elements[pi];
      std::size_t top = CellSet::npos;
      for (std::size_t x = 0; x < p.size(); ++x)
        if (p.down(x) == s) top = x;
      REQUIRE(top != CellSet::npos);
      for (std::size_t j = 0; j < p.size(); ++j) {
        const CellSet& sj = o.elements[b.irreducibles.elements[j]];
        CHECK(b.irreducibles.poset.leq(i, j) == s.subset_of(sj));
      }
    }
  }
}

TEST_CASE("immediate predecessor") {
  Poset c = Poset::chain(2);
  auto o = down_set_lattice(c);
  CHECK(o.elements[immediate_predecessor(o.lattice, o.index_of(c.all()))] == c.down(0));
  CHECK(immediate_predecessor(o.lattice, o.index_of(c.down(0))) == o.lattice.bottom());

  Poset v = v_poset();
  auto ov = down_set_lattice(v);
  CHECK(ov.elements[immediate_predecessor(ov.lattice, ov.index_of(v.all()))] == ids(v, {"a", "b"}));
  CHECK_THROWS_AS(immediate_predecessor(ov.lattice, ov.index_of(ids(v, {"a", "b"}))), Error);
}

TEST_CASE("atom decomposition") {
  SUBCASE("identity embedding of the antichain") {
    Poset p = Poset::antichain(2);
    auto o = down_set_lattice(p);
    auto v = atom_decomposition(o, o.elements);
    CHECK(v[0] == CellSet::of(2, {0}));
    CHECK(v[1] == CellSet::of(2, {1}));
  }
  SUBCASE("chain with set differences") {
    Poset p = Poset::chain(2);
    auto o = down_set_lattice(p);
    std::vector<CellSet> img(o.size());
    img[o.index_of(p.empty_set())] = CellSet(4);
    img[o.index_of(p.down(0))] = CellSet::of(4, {1, 2});
    img[o.index_of(p.all())] = CellSet::of(4, {1, 2, 3});
    auto v = atom_decomposition(o, img);
    CHECK(v[0] == CellSet::of(4, {1, 2}));
    CHECK(v[1] == CellSet::of(4, {3}));
  }
  SUBCASE("inconsistent differences are rejected") {
    Poset p = Poset::antichain(2);
    auto o = down_set_lattice(p);
    std::vector<CellSet> img(o.size(), CellSet(3));
    img[o.index_of(CellSet::of(2, {0}))] = CellSet::of(3, {0});
    img[o.index_of(CellSet::of(2, {1}))] = CellSet::of(3, {1});
    img[o.index_of(p.all())] = CellSet::of(3, {0, 1, 2});
    CHECK_THROWS_AS(atom_decomposition(o, img), Error);
  }
}

TEST_CASE("well-separation") {
  Grid g(Box({Dyadic::from_int(0)}, {Dyadic::from_int(1)}), {1});
  auto ev = g.evaluation_ops();
  CHECK(is_well_separated(Poset::antichain(1), {CellSet::of(2, {0})}, ev));
  // Adjacent cells share the face at 1/2.
  CHECK_FALSE(is_well_separated(Poset::antichain(2), {CellSet::of(2, {0}), CellSet::of(2, {1})}, ev));
  CHECK(is_well_separated(Poset::chain(2), {CellSet::of(2, {0}), CellSet::of(2, {1})}, ev));

  Grid g2(Box({Dyadic::from_int(0)}, {Dyadic::from_int(1)}), {2});
  CHECK(is_well_separated(Poset::antichain(2), {CellSet::of(4, {0}), CellSet::of(4, {3})}, g2.evaluation_ops()));
}

TEST_CASE("linear extension") {
  Poset a = Poset::antichain(3);
  CHECK(linear_extension(a) == std::vector<std::size_t>{0, 1, 2});
  // Ids out of index order: ties go by id.
  Poset named({"z", "y", "x"}, {});
  CHECK(linear_extension(named) == std::vector<std::size_t>{2, 1, 0});
  Poset c = Poset::chain(4);
  CHECK(linear_extension(c) == std::vector<std::size_t>{0, 1, 2, 3});
  Poset v = v_poset();
  auto e = linear_extension(v);
  CHECK(e.back() == *v.index_of("c"));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    Poset p = random_poset(rng, 1 + rng() % 8);
    auto ord = linear_extension(p);
    std::vector<std::size_t> pos(p.size());
    for (std::size_t i = 0; i < ord.size(); ++i) pos[ord[i]] = i;
    for (std::size_t x = 0; x < p.size(); ++x)
      for (std::size_t y = 0; y < p.size(); ++y)
        if (p.less(x, y)) CHECK(pos[x] < pos[y]);
  }
}

TEST_CASE("lambda top") {
  Poset v = v_poset();
  Poset e = lambda_top(v, v.empty_set());
  CHECK(e.size() == 1);
  CHECK(down_set_lattice(e).size() == 2);

  Poset full = lambda_top(v, v.all());
  CHECK(full.size() == 4);
  std::size_t top = full.size() - 1;
  for (std::size_t i = 0; i < top; ++i) CHECK(full.less(i, top));

  Poset one = lambda_top(v, ids(v, {"a"}));
  CHECK(one.size() == 2);
  CHECK(one.less(0, 1));
  CHECK_THROWS_AS(lambda_top(v, ids(v, {"c"})), Error);
}

TEST_CASE("poset construction rejects cycles") {
  CHECK_THROWS_AS(Poset({"a", "b"}, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Poset({"a", "a"}, {}), Error);
  CHECK_FALSE(v_poset().validate());
  CHECK(v_poset().dual().leq(*v_poset().index_of("c"), *v_poset().index_of("a")));
}
