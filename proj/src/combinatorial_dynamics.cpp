#include "latdyn/combinatorial_dynamics.hpp"

#include "latdyn/errors.hpp"

#include <boost/graph/compressed_sparse_row_graph.hpp>
#include <boost/graph/strong_components.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace latdyn {

namespace {

void build_csr(std::size_t n, const std::vector<Edge>& sorted, bool by_target,
               std::vector<std::uint32_t>& off, std::vector<std::uint32_t>& adj) {
  off.assign(n + 1, 0);
  for (const auto& e : sorted) ++off[(by_target ? e.second : e.first) + 1];
  for (std::size_t i = 0; i < n; ++i) off[i + 1] += off[i];
  adj.assign(sorted.size(), 0);
  std::vector<std::uint32_t> pos(off.begin(), off.end() - 1);
  for (const auto& e : sorted) {
    if (by_target)
      adj[pos[e.second]++] = e.first;
    else
      adj[pos[e.first]++] = e.second;
  }
}

using CsrGraph = boost::compressed_sparse_row_graph<boost::directedS>;

CsrGraph to_boost(const MultivaluedMap& f) {
  auto edges = f.edges();
  return CsrGraph(boost::edges_are_sorted, edges.begin(), edges.end(), f.size());
}

void require_same(const MultivaluedMap& f, const CellSet& u) {
  if (u.universe() != f.size())
    fail(ErrorKind::input, "cell set universe " + std::to_string(u.universe()) +
                               " does not match map size " + std::to_string(f.size()));
}

}  // namespace

MultivaluedMap::MultivaluedMap(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (const auto& e : edges)
    if (e.first >= n || e.second >= n)
      fail(ErrorKind::input, "edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) +
                                 ") out of range for " + std::to_string(n) + " vertices");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  build_csr(n, edges, false, fwd_off_, fwd_);
  build_csr(n, edges, true, rev_off_, rev_);
  compute_recurrent();
}

MultivaluedMap MultivaluedMap::identity(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < n; ++i) e.emplace_back(i, i);
  return MultivaluedMap(n, std::move(e));
}

MultivaluedMap MultivaluedMap::from_images(const std::vector<CellSet>& rows) {
  std::vector<Edge> e;
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (rows[v].universe() != rows.size()) fail(ErrorKind::input, "image row universe mismatch");
    rows[v].for_each([&](std::size_t w) {
      e.emplace_back(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w));
    });
  }
  return MultivaluedMap(rows.size(), std::move(e));
}

void MultivaluedMap::compute_recurrent() {
  recurrent_ = CellSet(n_);
  if (n_ == 0) return;
  CsrGraph g = to_boost(*this);
  std::vector<std::size_t> comp(n_);
  std::size_t nc = boost::strong_components(
      g, boost::make_iterator_property_map(comp.begin(), boost::get(boost::vertex_index, g)));
  std::vector<std::size_t> sz(nc, 0);
  for (std::size_t v = 0; v < n_; ++v) ++sz[comp[v]];
  for (std::size_t v = 0; v < n_; ++v) {
    if (sz[comp[v]] > 1) {
      recurrent_.set(v);
      continue;
    }
    for (auto w : successors(v))
      if (w == v) recurrent_.set(v);
  }
}

CellSet MultivaluedMap::image(const CellSet& u) const {
  require_same(*this, u);
  CellSet out(n_);
  u.for_each([&](std::size_t v) {
    for (auto w : successors(v)) out.set(w);
  });
  return out;
}

CellSet MultivaluedMap::preimage(const CellSet& u) const {
  require_same(*this, u);
  CellSet out(n_);
  u.for_each([&](std::size_t v) {
    for (auto w : predecessors(v)) out.set(w);
  });
  return out;
}

CellSet MultivaluedMap::image_of(std::size_t v) const {
  CellSet out(n_);
  for (auto w : successors(v)) out.set(w);
  return out;
}

std::vector<Edge> MultivaluedMap::edges() const {
  std::vector<Edge> out;
  out.reserve(fwd_.size());
  for (std::uint32_t v = 0; v < n_; ++v)
    for (auto w : successors(v)) out.emplace_back(v, w);
  return out;
}

bool MultivaluedMap::consistent() const {
  std::vector<Edge> a = edges(), b;
  for (std::uint32_t v = 0; v < n_; ++v)
    for (auto w : predecessors(v)) b.emplace_back(w, v);
  std::sort(b.begin(), b.end());
  return a == b;
}

MultivaluedMap inverse(const MultivaluedMap& f) {
  MultivaluedMap g;
  g.n_ = f.n_;
  g.fwd_off_ = f.rev_off_;
  g.fwd_ = f.rev_;
  g.rev_off_ = f.fwd_off_;
  g.rev_ = f.fwd_;
  g.recurrent_ = f.recurrent_;
  return g;
}

Totality totality(const MultivaluedMap& f) {
  Totality t{true, true};
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.successors(v).empty()) t.left_total = false;
    if (f.predecessors(v).empty()) t.right_total = false;
  }
  return t;
}

CellSet forward_closure(const MultivaluedMap& f, const CellSet& u) {
  require_same(f, u);
  CellSet seen = u;
  std::vector<std::uint32_t> stack;
  u.for_each([&](std::size_t v) { stack.push_back(static_cast<std::uint32_t>(v)); });
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : f.successors(v))
      if (!seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
  }
  return seen;
}

CellSet backward_closure(const MultivaluedMap& f, const CellSet& u) {
  return forward_closure(inverse(f), u);
}

CellSet omega(const MultivaluedMap& f, const CellSet& u) {
  return forward_closure(f, forward_closure(f, u) & f.recurrent());
}

CellSet alpha(const MultivaluedMap& f, const CellSet& u) { return omega(inverse(f), u); }

CellSet omega_iterative(const MultivaluedMap& f, const CellSet& u, std::size_t* steps) {
  CellSet g = forward_closure(f, u);
  std::size_t k = 0;
  while (true) {
    CellSet next = f.image(g);
    if (next == g) break;
    if (!next.subset_of(g)) throw std::logic_error("omega iteration is not decreasing");
    g = std::move(next);
    if (++k > f.size()) throw std::logic_error("omega iteration did not stabilize");
  }
  if (steps) *steps = k;
  return g;
}

CellSet alpha_iterative(const MultivaluedMap& f, const CellSet& u, std::size_t* steps) {
  return omega_iterative(inverse(f), u, steps);
}

Classification classify(const MultivaluedMap& f, const CellSet& u) {
  Classification c;
  CellSet img = f.image(u), pre = f.preimage(u);
  c.forward_invariant = img.subset_of(u);
  c.backward_invariant = pre.subset_of(u);
  c.attracting = omega(f, u).subset_of(u);
  c.repelling = alpha(f, u).subset_of(u);
  c.attractor = img == u;
  c.repeller = pre == u;
  if ((c.forward_invariant && !c.attracting) || (c.attractor && !c.attracting) ||
      (c.backward_invariant && !c.repelling) || (c.repeller && !c.repelling))
    throw std::logic_error("classification flags inconsistent");
  return c;
}

std::optional<std::size_t> char_attset(const MultivaluedMap& f, const CellSet& u) {
  const std::size_t kmax = f.size() + 1;
  std::vector<bool> inside(2 * kmax + 1);
  CellSet it = u;
  for (std::size_t n = 1; n <= 2 * kmax; ++n) {
    it = f.image(it);
    inside[n] = it.subset_of(u);
  }
  for (std::size_t k = 1; k <= kmax; ++k) {
    bool ok = true;
    for (std::size_t n = k; n <= 2 * k && ok; ++n) ok = inside[n];
    if (ok) return k;
  }
  return std::nullopt;
}

bool is_attractor(const MultivaluedMap& f, const CellSet& a) { return f.image(a) == a; }
bool is_repeller(const MultivaluedMap& f, const CellSet& r) { return f.preimage(r) == r; }

CondensationDag condensation(const MultivaluedMap& f) {
  const std::size_t n = f.size();
  CondensationDag d;
  d.scc_of.assign(n, 0);
  if (n == 0) return d;
  CsrGraph g = to_boost(f);
  std::vector<std::size_t> comp(n);
  std::size_t nc = boost::strong_components(
      g, boost::make_iterator_property_map(comp.begin(), boost::get(boost::vertex_index, g)));
  // Tarjan numbers sinks first; flip to get sources first.
  for (std::size_t v = 0; v < n; ++v) d.scc_of[v] = static_cast<std::uint32_t>(nc - 1 - comp[v]);
  d.components.assign(nc, CellSet(n));
  d.recurrent.assign(nc, false);
  std::vector<std::set<std::uint32_t>> out(nc);
  for (std::uint32_t v = 0; v < n; ++v) {
    d.components[d.scc_of[v]].set(v);
    for (auto w : f.successors(v)) {
      if (d.scc_of[w] == d.scc_of[v])
        d.recurrent[d.scc_of[v]] = true;
      else
        out[d.scc_of[v]].insert(d.scc_of[w]);
    }
  }
  d.dag_edges.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) d.dag_edges[c].assign(out[c].begin(), out[c].end());
  return d;
}

// ---------------------------------------------------------------------------
// Att / Rep

CellSet InvariantLattice::element(const CellSet& down_set) const {
  CellSet u(universe);
  down_set.for_each([&](std::size_t p) { u |= irreducibles[p]; });
  return u;
}

CellSet InvariantLattice::down_set_of(const CellSet& a) const {
  CellSet s(irreducibles.size());
  for (std::size_t p = 0; p < irreducibles.size(); ++p)
    if (irreducibles[p].subset_of(a)) s.set(p);
  return s;
}

std::vector<CellSet> InvariantLattice::materialize(std::size_t cap) const {
  DownSetLattice o = down_set_lattice(poset, cap);
  std::vector<CellSet> out;
  out.reserve(o.size());
  for (const auto& ds : o.elements) out.push_back(element(ds));
  return out;
}

namespace {

InvariantLattice invariant_lattice(const MultivaluedMap& f, InvariantKind kind) {
  const std::size_t n = f.size();
  InvariantLattice l;
  l.kind = kind;
  l.universe = n;
  CondensationDag d = condensation(f);
  std::vector<CellSet> cand;
  for (std::size_t c = 0; c < d.components.size(); ++c)
    if (d.recurrent[c]) cand.push_back(forward_closure(f, d.components[c]));
  auto by_size = [](const CellSet& a, const CellSet& b) {
    std::size_t ca = a.count(), cb = b.count();
    return ca != cb ? ca < cb : a < b;
  };
  std::sort(cand.begin(), cand.end(), by_size);
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (const auto& c : cand) {
    CellSet below(n);
    for (const auto& o : cand)
      if (o != c && o.subset_of(c)) below |= o;
    if (below != c) l.irreducibles.push_back(c);
  }
  const char prefix = kind == InvariantKind::attractor ? 'A' : 'R';
  std::vector<std::string> ids;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < l.irreducibles.size(); ++i) {
    ids.push_back(prefix + std::to_string(i));
    for (std::size_t j = 0; j < l.irreducibles.size(); ++j)
      if (i != j && l.irreducibles[i].subset_of(l.irreducibles[j])) rel.emplace_back(i, j);
  }
  l.poset = Poset(std::move(ids), rel);
  return l;
}

}  // namespace

InvariantLattice att_lattice(const MultivaluedMap& f) {
  return invariant_lattice(f, InvariantKind::attractor);
}

InvariantLattice rep_lattice(const MultivaluedMap& f) {
  return invariant_lattice(inverse(f), InvariantKind::repeller);
}

namespace {
void require_attractor(const MultivaluedMap& f, const CellSet& a) {
  require_same(f, a);
  if (!is_attractor(f, a)) fail(ErrorKind::input, "not an attractor: " + a.to_string());
}
void require_repeller(const MultivaluedMap& f, const CellSet& r) {
  require_same(f, r);
  if (!is_repeller(f, r)) fail(ErrorKind::input, "not a repeller: " + r.to_string());
}
}  // namespace

CellSet att_meet(const MultivaluedMap& f, const CellSet& a, const CellSet& b) {
  require_attractor(f, a);
  require_attractor(f, b);
  return omega(f, a & b);
}

CellSet att_join(const MultivaluedMap& f, const CellSet& a, const CellSet& b) {
  require_attractor(f, a);
  require_attractor(f, b);
  return a | b;
}

CellSet rep_meet(const MultivaluedMap& f, const CellSet& a, const CellSet& b) {
  require_repeller(f, a);
  require_repeller(f, b);
  return alpha(f, a & b);
}

CellSet rep_join(const MultivaluedMap& f, const CellSet& a, const CellSet& b) {
  require_repeller(f, a);
  require_repeller(f, b);
  return a | b;
}

CellSet dual_repeller(const MultivaluedMap& f, const CellSet& a) {
  require_attractor(f, a);
  CellSet r = alpha(f, a.complement());
  if (!is_repeller(f, r)) throw std::logic_error("dual of an attractor is not a repeller");
  if (omega(f, r.complement()) != a) throw std::logic_error("dual is not an involution");
  return r;
}

CellSet dual_attractor(const MultivaluedMap& f, const CellSet& r) {
  require_repeller(f, r);
  CellSet a = omega(f, r.complement());
  if (!is_attractor(f, a)) throw std::logic_error("dual of a repeller is not an attractor");
  if (alpha(f, a.complement()) != r) throw std::logic_error("dual is not an involution");
  return a;
}

// ---------------------------------------------------------------------------
// Exhaustive oracles on bit masks

namespace {

struct MaskMap {
  std::size_t n = 0;
  std::vector<std::uint64_t> succ, pred;

  explicit MaskMap(const MultivaluedMap& f) : n(f.size()), succ(n, 0), pred(n, 0) {
    for (std::uint32_t v = 0; v < n; ++v)
      for (auto w : f.successors(v)) {
        succ[v] |= std::uint64_t{1} << w;
        pred[w] |= std::uint64_t{1} << v;
      }
  }
  static std::uint64_t apply(const std::vector<std::uint64_t>& rows, std::uint64_t u) {
    std::uint64_t out = 0;
    while (u) {
      out |= rows[static_cast<std::size_t>(__builtin_ctzll(u))];
      u &= u - 1;
    }
    return out;
  }
  std::uint64_t full() const { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }
};

CellSet mask_to_set(std::size_t n, std::uint64_t m) {
  CellSet s(n);
  while (m) {
    s.set(static_cast<std::size_t>(__builtin_ctzll(m)));
    m &= m - 1;
  }
  return s;
}

std::uint64_t set_to_mask(const CellSet& s) {
  std::uint64_t m = 0;
  s.for_each([&](std::size_t i) { m |= std::uint64_t{1} << i; });
  return m;
}

std::vector<CellSet> brute_fixed(const MultivaluedMap& f, std::size_t cap, bool backward) {
  if (f.size() > cap || f.size() > 30)
    fail(ErrorKind::cap, "brute-force enumeration limited to " + std::to_string(std::min<std::size_t>(cap, 30)) +
                             " vertices, got " + std::to_string(f.size()));
  MaskMap m(f);
  const auto& rows = backward ? m.pred : m.succ;
  std::vector<CellSet> out;
  const std::uint64_t total = std::uint64_t{1} << f.size();
  for (std::uint64_t u = 0; u < total; ++u)
    if (MaskMap::apply(rows, u) == u) out.push_back(mask_to_set(f.size(), u));
  std::sort(out.begin(), out.end(), [](const CellSet& a, const CellSet& b) {
    std::size_t ca = a.count(), cb = b.count();
    return ca != cb ? ca < cb : a < b;
  });
  return out;
}

}  // namespace

std::vector<CellSet> brute_force_attractors(const MultivaluedMap& f, std::size_t cap) {
  return brute_fixed(f, cap, false);
}

std::vector<CellSet> brute_force_repellers(const MultivaluedMap& f, std::size_t cap) {
  return brute_fixed(f, cap, true);
}

DiagramReport check_diagram_six(const MultivaluedMap& f, std::size_t cap, std::size_t pair_budget,
                                std::uint64_t seed) {
  const std::size_t n = f.size();
  if (n > cap || n > 24)
    fail(ErrorKind::cap, "diagram check limited to " + std::to_string(std::min<std::size_t>(cap, 24)) +
                             " vertices, got " + std::to_string(n));
  DiagramReport r;
  const std::size_t total = std::size_t{1} << n;
  MaskMap m(f);
  const std::uint64_t full = m.full();
  MultivaluedMap finv = inverse(f);

  std::vector<std::uint64_t> om(total), al(total);
  for (std::size_t u = 0; u < total; ++u) {
    CellSet s = mask_to_set(n, u);
    om[u] = set_to_mask(omega(f, s));
    al[u] = set_to_mask(omega(finv, s));
  }

  auto fail_with = [&](const std::string& face, std::uint64_t u) {
    if (r.ok) {
      r.ok = false;
      r.failure = face + " at " + mask_to_set(n, u).to_string();
    }
  };

  std::vector<std::uint64_t> aset, rset;
  std::set<std::uint64_t> att, rep, om_plus, om_aset, al_minus, al_rset;
  for (std::uint64_t u = 0; u < total; ++u) {
    std::uint64_t img = MaskMap::apply(m.succ, u), pre = MaskMap::apply(m.pred, u);
    bool plus = (img & ~u) == 0, minus = (pre & ~u) == 0;
    bool as = (om[u] & ~u) == 0, rs = (al[u] & ~u) == 0;
    std::uint64_t uc = full & ~u;
    bool plus_c = (MaskMap::apply(m.pred, uc) & ~uc) == 0;
    bool rs_c = (al[uc] & ~uc) == 0;
    if (plus != plus_c) fail_with("complement does not exchange forward and backward invariant sets", u);
    if (as != rs_c) fail_with("complement does not exchange attracting and repelling sets", u);
    if (plus && !as) fail_with("forward invariant set is not attracting", u);
    if (minus && !rs) fail_with("backward invariant set is not repelling", u);
    if (img == u) att.insert(u);
    if (pre == u) rep.insert(u);
    if (plus) {
      ++r.invset_plus;
      om_plus.insert(om[u]);
    }
    if (minus) {
      ++r.invset_minus;
      al_minus.insert(al[u]);
    }
    if (as) {
      aset.push_back(u);
      om_aset.insert(om[u]);
    }
    if (rs) {
      rset.push_back(u);
      al_rset.insert(al[u]);
    }
  }
  r.aset = aset.size();
  r.rset = rset.size();
  r.att = att.size();
  r.rep = rep.size();
  if (om_plus != att) fail_with("omega of forward invariant sets differs from Att", 0);
  if (om_aset != att) fail_with("omega of attracting sets differs from Att", 0);
  if (al_minus != rep) fail_with("alpha of backward invariant sets differs from Rep", 0);
  if (al_rset != rep) fail_with("alpha of repelling sets differs from Rep", 0);

  // * ∘ ω = α ∘ ᶜ on ASet, and * : Att → Rep bijective with inverse ω ∘ ᶜ
  for (std::uint64_t u : aset) {
    std::uint64_t star = al[full & ~om[u]];
    if (star != al[full & ~u]) fail_with("star of omega differs from alpha of complement", u);
  }
  std::set<std::uint64_t> stars;
  for (std::uint64_t a : att) {
    std::uint64_t s = al[full & ~a];
    stars.insert(s);
    if (om[full & ~s] != a) fail_with("star is not an involution", a);
  }
  if (stars != rep) fail_with("star does not map Att onto Rep", 0);

  // Homomorphism faces on pairs
  auto check_pairs = [&](const std::vector<std::uint64_t>& fam, const std::vector<std::uint64_t>& lim,
                         const char* what, std::mt19937_64& rng) {
    auto one = [&](std::uint64_t u, std::uint64_t v) {
      ++r.pairs_checked;
      if ((lim[u | v] & ~(u | v)) != 0 || (lim[u & v] & ~(u & v)) != 0)
        fail_with(std::string(what) + " sets not closed under union and intersection", u);
      if (lim[u | v] != (lim[u] | lim[v])) fail_with(std::string(what) + " limit does not preserve union", u);
      if (lim[u & v] != lim[lim[u] & lim[v]]) fail_with(std::string(what) + " limit does not preserve meet", u);
    };
    const std::size_t k = fam.size();
    if (k * k <= pair_budget) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) one(fam[i], fam[j]);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, k - 1);
      for (std::size_t t = 0; t < pair_budget; ++t) one(fam[pick(rng)], fam[pick(rng)]);
    }
  };
  std::mt19937_64 rng(seed);
  check_pairs(aset, om, "attracting", rng);
  check_pairs(rset, al, "repelling", rng);
  return r;
}

std::string to_dot(const MultivaluedMap& f) {
  std::ostringstream os;
  os << "digraph F {\n";
  for (std::size_t v = 0; v < f.size(); ++v) os << "  " << v << ";\n";
  for (auto [a, b] : f.edges()) os << "  " << a << " -> " << b << ";\n";
  os << "}\n";
  return os.str();
}

std::string condensation_dot(const MultivaluedMap& f) {
  CondensationDag d = condensation(f);
  std::ostringstream os;
  os << "digraph condensation {\n";
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    os << "  C" << c << " [label=\"" << d.components[c].to_string() << "\"";
    if (d.recurrent[c]) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (std::size_t c = 0; c < d.dag_edges.size(); ++c)
    for (auto e : d.dag_edges[c]) os << "  C" << c << " -> C" << e << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace latdyn
