#include "latdyn/lattice_core.hpp"

#include "latdyn/errors.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace latdyn {

// ---------------------------------------------------------------------------
// Poset

Poset::Poset(std::vector<std::string> ids,
             const std::vector<std::pair<std::size_t, std::size_t>>& leq)
    : ids_(std::move(ids)) {
  const std::size_t n = ids_.size();
  {
    std::vector<std::string> sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorKind::input, "poset: duplicate element id");
  }
  up_.assign(n, CellSet(n));
  for (std::size_t i = 0; i < n; ++i) up_[i].set(i);
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) fail(ErrorKind::input, "poset: relation index out of range");
    up_[a].set(b);
  }
  // Warshall closure on rows
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (i != k && up_[i].test(k)) up_[i] |= up_[k];
  down_.assign(n, CellSet(n));
  for (std::size_t i = 0; i < n; ++i) up_[i].for_each([&](std::size_t j) { down_[j].set(i); });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (this->leq(i, j) && this->leq(j, i))
        fail(ErrorKind::input, "poset: order is not antisymmetric (" + ids_[i] + ", " + ids_[j] + ")");
}

Poset Poset::from_id_pairs(std::vector<std::string> ids,
                           const std::vector<std::pair<std::string, std::string>>& leq) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  auto find = [&](const std::string& s) {
    auto it = std::find(ids.begin(), ids.end(), s);
    if (it == ids.end()) fail(ErrorKind::input, "poset: unknown element id '" + s + "'");
    return static_cast<std::size_t>(it - ids.begin());
  };
  for (const auto& [a, b] : leq) idx.emplace_back(find(a), find(b));
  return Poset(std::move(ids), idx);
}

Poset Poset::chain(std::size_t n) {
  std::vector<std::string> ids;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("c" + std::to_string(i));
    if (i) rel.emplace_back(i - 1, i);
  }
  return Poset(std::move(ids), rel);
}

Poset Poset::antichain(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i));
  return Poset(std::move(ids), {});
}

std::optional<std::size_t> Poset::index_of(const std::string& id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

bool Poset::is_down_set(const CellSet& s) const {
  if (s.universe() != size()) return false;
  bool ok = true;
  s.for_each([&](std::size_t p) {
    if (!down_[p].subset_of(s)) ok = false;
  });
  return ok;
}

std::vector<std::pair<std::size_t, std::size_t>> Poset::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!less(a, b)) continue;
      bool between = false;
      for (std::size_t c = 0; c < n && !between; ++c) between = less(a, c) && less(c, b);
      if (!between) out.emplace_back(a, b);
    }
  return out;
}

Poset Poset::dual() const {
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (auto [a, b] : covers()) rel.emplace_back(b, a);
  return Poset(ids_, rel);
}

std::optional<std::string> Poset::validate() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    if (!leq(i, i)) return "not reflexive at " + ids_[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq(i, j) && leq(j, i)) return "not antisymmetric at " + ids_[i] + ", " + ids_[j];
      for (std::size_t k = 0; k < n; ++k)
        if (leq(i, j) && leq(j, k) && !leq(i, k))
          return "not transitive at " + ids_[i] + ", " + ids_[j] + ", " + ids_[k];
    }
  return std::nullopt;
}

std::string Poset::label(const CellSet& s) const {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t i) {
    if (!first) out += ',';
    out += ids_[i];
    first = false;
  });
  return out + "}";
}

// ---------------------------------------------------------------------------
// FiniteLattice

FiniteLattice::FiniteLattice(std::size_t n, Op join, Op meet, std::size_t bottom, std::size_t top,
                             std::vector<std::string> labels)
    : n_(n), join_(std::move(join)), meet_(std::move(meet)), bottom_(bottom), top_(top),
      labels_(std::move(labels)) {}

FiniteLattice FiniteLattice::from_tables(std::vector<std::vector<std::size_t>> join,
                                         std::vector<std::vector<std::size_t>> meet,
                                         std::size_t bottom, std::size_t top,
                                         std::vector<std::string> labels) {
  const std::size_t n = join.size();
  if (meet.size() != n) fail(ErrorKind::input, "lattice tables differ in size");
  for (std::size_t i = 0; i < n; ++i)
    if (join[i].size() != n || meet[i].size() != n) fail(ErrorKind::input, "lattice table not square");
  auto j = std::make_shared<std::vector<std::vector<std::size_t>>>(std::move(join));
  auto m = std::make_shared<std::vector<std::vector<std::size_t>>>(std::move(meet));
  return FiniteLattice(
      n, [j](std::size_t a, std::size_t b) { return (*j)[a][b]; },
      [m](std::size_t a, std::size_t b) { return (*m)[a][b]; }, bottom, top, std::move(labels));
}

FiniteLattice FiniteLattice::of_sets(std::vector<CellSet> elements,
                                     std::function<CellSet(const CellSet&, const CellSet&)> meet) {
  if (elements.empty()) fail(ErrorKind::input, "lattice of sets: empty family");
  struct Data {
    std::vector<CellSet> sets;
    std::unordered_map<CellSet, std::size_t, CellSetHash> index;
    std::function<CellSet(const CellSet&, const CellSet&)> meet;
  };
  auto d = std::make_shared<Data>();
  d->sets = elements;
  d->meet = std::move(meet);
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (!d->index.emplace(elements[i], i).second) fail(ErrorKind::input, "lattice of sets: duplicate element");
  std::size_t bottom = 0, top = 0;
  for (std::size_t i = 1; i < elements.size(); ++i) {
    if (elements[i].count() < elements[bottom].count()) bottom = i;
    if (elements[i].count() > elements[top].count()) top = i;
  }
  for (const auto& e : elements)
    if (!elements[bottom].subset_of(e) || !e.subset_of(elements[top]))
      fail(ErrorKind::input, "lattice of sets: no least or greatest element");
  auto lookup = [d](const CellSet& s) {
    auto it = d->index.find(s);
    if (it == d->index.end()) fail(ErrorKind::input, "lattice of sets: not closed under operation at " + s.to_string());
    return it->second;
  };
  std::vector<std::string> labels;
  for (const auto& e : elements) labels.push_back(e.to_string());
  FiniteLattice l(
      elements.size(),
      [d, lookup](std::size_t a, std::size_t b) { return lookup(d->sets[a] | d->sets[b]); },
      [d, lookup](std::size_t a, std::size_t b) {
        return lookup(d->meet ? d->meet(d->sets[a], d->sets[b]) : (d->sets[a] & d->sets[b]));
      },
      bottom, top, std::move(labels));
  l.sets_ = std::move(elements);
  return l;
}

std::string FiniteLattice::label(std::size_t i) const {
  if (i < labels_.size()) return labels_[i];
  return std::to_string(i);
}

std::optional<std::string> FiniteLattice::first_axiom_failure(std::size_t triple_cap) const {
  const std::size_t n = n_;
  auto name = [&](std::size_t i) { return label(i); };
  for (std::size_t a = 0; a < n; ++a) {
    if (join(a, a) != a || meet(a, a) != a) return "not idempotent at " + name(a);
    if (join(a, bottom_) != a) return "bottom not neutral for join at " + name(a);
    if (meet(a, top_) != a) return "top not neutral for meet at " + name(a);
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t jab = join(a, b), mab = meet(a, b);
      if (jab >= n || mab >= n) return "not closed at " + name(a) + ", " + name(b);
      if (jab != join(b, a)) return "join not commutative at " + name(a) + ", " + name(b);
      if (mab != meet(b, a)) return "meet not commutative at " + name(a) + ", " + name(b);
      if (join(a, mab) != a || meet(a, jab) != a) return "absorption fails at " + name(a) + ", " + name(b);
    }
  }
  if (n * n * n > triple_cap) return std::nullopt;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        if (join(join(a, b), c) != join(a, join(b, c)))
          return "join not associative at " + name(a) + ", " + name(b) + ", " + name(c);
        if (meet(meet(a, b), c) != meet(a, meet(b, c)))
          return "meet not associative at " + name(a) + ", " + name(b) + ", " + name(c);
      }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (meet(a, join(b, c)) != join(meet(a, b), meet(a, c)))
          return "not distributive: a=" + name(a) + ", b=" + name(b) + ", c=" + name(c);
  return std::nullopt;
}

std::vector<std::size_t> FiniteLattice::lower_covers(std::size_t c) const {
  std::vector<std::size_t> below;
  for (std::size_t a = 0; a < n_; ++a)
    if (a != c && leq(a, c)) below.push_back(a);
  std::vector<std::size_t> out;
  for (std::size_t a : below) {
    bool between = false;
    for (std::size_t b : below)
      if (b != a && leq(a, b)) {
        between = true;
        break;
      }
    if (!between) out.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Down-sets

std::size_t DownSetLattice::index_of(const CellSet& s) const {
  auto it = index.find(s);
  if (it == index.end()) fail(ErrorKind::input, "not a down-set: " + poset.label(s));
  return it->second;
}

DownSetLattice down_set_lattice(const Poset& p, std::size_t cap) {
  const std::size_t n = p.size();
  const auto order = linear_extension(p);
  std::vector<CellSet> out;
  CellSet cur(n);
  // Depth-first over the extension order; an element may join only when
  // everything below it is already in.
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == order.size()) {
      if (out.size() >= cap)
        fail(ErrorKind::cap, "down-set lattice exceeds cap of " + std::to_string(cap) + " elements");
      out.push_back(cur);
      return;
    }
    std::size_t e = order[k];
    rec(k + 1);
    CellSet below = p.down(e);
    below.reset(e);
    if (below.subset_of(cur)) {
      cur.set(e);
      rec(k + 1);
      cur.reset(e);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const CellSet& a, const CellSet& b) {
    std::size_t ca = a.count(), cb = b.count();
    return ca != cb ? ca < cb : a < b;
  });
  DownSetLattice d;
  d.poset = p;
  d.elements = out;
  for (std::size_t i = 0; i < out.size(); ++i) d.index.emplace(out[i], i);
  d.lattice = FiniteLattice::of_sets(out);
  return d;
}

// ---------------------------------------------------------------------------
// Join-irreducibles and Birkhoff

JoinIrreducibles join_irreducibles(const FiniteLattice& l) {
  JoinIrreducibles j;
  std::vector<std::string> ids;
  for (std::size_t c = 0; c < l.size(); ++c) {
    if (c == l.bottom()) continue;
    if (l.lower_covers(c).size() == 1) {
      j.elements.push_back(c);
      ids.push_back(l.label(c));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t a = 0; a < j.elements.size(); ++a)
    for (std::size_t b = 0; b < j.elements.size(); ++b)
      if (a != b && l.leq(j.elements[a], j.elements[b])) rel.emplace_back(a, b);
  j.poset = Poset(std::move(ids), rel);
  return j;
}

std::optional<std::string> LatticeHom::first_failure() const {
  const std::size_t n = source.size();
  if (map.size() != n) return "map size differs from source lattice";
  if (map[source.bottom()] != target.bottom()) return "bottom not preserved";
  if (map[source.top()] != target.top()) return "top not preserved";
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (map[source.join(a, b)] != target.join(map[a], map[b]))
        return "join not preserved at " + source.label(a) + ", " + source.label(b);
      if (map[source.meet(a, b)] != target.meet(map[a], map[b]))
        return "meet not preserved at " + source.label(a) + ", " + source.label(b);
    }
  return std::nullopt;
}

bool LatticeHom::injective() const {
  std::vector<std::size_t> m = map;
  std::sort(m.begin(), m.end());
  return std::adjacent_find(m.begin(), m.end()) == m.end();
}

bool LatticeHom::bijective() const { return injective() && map.size() == target.size(); }

BirkhoffIso birkhoff_iso(const FiniteLattice& l) {
  if (auto why = l.first_axiom_failure()) {
    if (why->rfind("not distributive", 0) == 0) fail(ErrorKind::input, *why);
    fail(ErrorKind::input, "not a lattice: " + *why);
  }
  BirkhoffIso b;
  b.irreducibles = join_irreducibles(l);
  b.target = down_set_lattice(b.irreducibles.poset);
  if (b.target.size() != l.size())
    fail(ErrorKind::input, "not distributive: |L| = " + std::to_string(l.size()) +
                               " but |O(J(L))| = " + std::to_string(b.target.size()));
  b.hom.source = l;
  b.hom.target = b.target.lattice;
  b.hom.map.resize(l.size());
  const auto& je = b.irreducibles.elements;
  for (std::size_t a = 0; a < l.size(); ++a) {
    CellSet s(je.size());
    for (std::size_t i = 0; i < je.size(); ++i)
      if (l.leq(je[i], a)) s.set(i);
    b.hom.map[a] = b.target.index_of(s);
  }
  if (auto why = b.hom.first_failure()) fail(ErrorKind::input, "not distributive: " + *why);
  if (!b.hom.bijective()) fail(ErrorKind::input, "not distributive: representation not bijective");
  return b;
}

std::size_t immediate_predecessor(const FiniteLattice& l, std::size_t c) {
  if (c >= l.size()) fail(ErrorKind::input, "element out of range");
  auto lc = l.lower_covers(c);
  if (c == l.bottom() || lc.size() != 1)
    fail(ErrorKind::input, "element " + l.label(c) + " is not join-irreducible");
  return lc.front();
}

std::vector<CellSet> atom_decomposition(const DownSetLattice& o, const std::vector<CellSet>& images) {
  const Poset& p = o.poset;
  if (images.size() != o.size()) fail(ErrorKind::input, "atom decomposition: image table size mismatch");
  std::vector<CellSet> blocks;
  for (std::size_t q = 0; q < p.size(); ++q) {
    std::optional<CellSet> v;
    for (std::size_t bi = 0; bi < o.size(); ++bi) {
      const CellSet& beta = o.elements[bi];
      if (beta.test(q)) continue;
      CellSet gamma = beta;
      gamma.set(q);
      auto it = o.index.find(gamma);
      if (it == o.index.end()) continue;
      CellSet d = images[it->second] - images[bi];
      if (!v) {
        v = d;
      } else if (*v != d) {
        fail(ErrorKind::input, "atom decomposition: block of " + p.id(q) + " depends on the choice of (beta, gamma): " +
                                   p.label(beta) + " gives " + d.to_string() + ", expected " + v->to_string());
      }
    }
    blocks.push_back(*v);
  }
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t b = a + 1; b < blocks.size(); ++b)
      if (blocks[a].intersects(blocks[b]))
        fail(ErrorKind::input, "atom decomposition: blocks of " + p.id(a) + " and " + p.id(b) + " overlap");
  for (std::size_t i = 0; i < o.size(); ++i) {
    CellSet u(images[i].universe());
    o.elements[i].for_each([&](std::size_t q) { u |= blocks[q]; });
    if (u != images[i]) fail(ErrorKind::input, "atom decomposition: union of blocks differs from image of " + p.label(o.elements[i]));
  }
  return blocks;
}

bool is_well_separated(const Poset& p, const std::vector<CellSet>& blocks, const EvaluationOps& ev,
                       const DownSetLattice* o, const std::vector<CellSet>* images) {
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (!p.comparable(a, b) && ev.meets(blocks[a], blocks[b])) return false;
  if (o && images) {
    for (std::size_t i = 0; i < o->size(); ++i)
      for (std::size_t j = i + 1; j < o->size(); ++j) {
        std::size_t m = o->index_of(o->elements[i] & o->elements[j]);
        if (!ev.meet_within((*images)[i], (*images)[j], (*images)[m]))
          fail(ErrorKind::certificate, "well-separated lift but |l(a)| ∩ |l(b)| exceeds |l(a ∩ b)| for " +
                                           p.label(o->elements[i]) + ", " + p.label(o->elements[j]));
      }
  }
  return true;
}

std::vector<std::size_t> linear_extension(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> out;
  std::vector<bool> placed(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> best;
    for (std::size_t e = 0; e < n; ++e) {
      if (placed[e]) continue;
      bool minimal = true;
      p.down(e).for_each([&](std::size_t d) {
        if (d != e && !placed[d]) minimal = false;
      });
      if (minimal && (!best || p.id(e) < p.id(*best))) best = e;
    }
    placed[*best] = true;
    out.push_back(*best);
  }
  return out;
}

Poset lambda_top(const Poset& p, const CellSet& lambda) {
  if (!p.is_down_set(lambda)) fail(ErrorKind::input, "lambda_top: argument is not a down-set");
  std::vector<std::size_t> keep = std::vector<std::size_t>();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (lambda.test(i)) keep.push_back(i);
  std::vector<std::string> ids;
  for (std::size_t i : keep) ids.push_back(p.id(i));
  std::string top = "top";
  while (std::find(ids.begin(), ids.end(), top) != ids.end()) top += "'";
  ids.push_back(top);
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    rel.emplace_back(a, keep.size());
    for (std::size_t b = 0; b < keep.size(); ++b)
      if (a != b && p.leq(keep[a], keep[b])) rel.emplace_back(a, b);
  }
  return Poset(std::move(ids), rel);
}

std::string hasse_dot(const Poset& p, const std::vector<std::string>& annotations) {
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << "  \"" << p.id(i) << "\"";
    if (i < annotations.size() && !annotations[i].empty())
      os << " [label=\"" << p.id(i) << "\\n" << annotations[i] << "\"]";
    os << ";\n";
  }
  for (auto [a, b] : p.covers()) os << "  \"" << p.id(a) << "\" -> \"" << p.id(b) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace latdyn
