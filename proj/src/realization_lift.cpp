#include "latdyn/realization_lift.hpp"

#include "latdyn/errors.hpp"

#include <algorithm>
#include <sstream>

namespace latdyn {

namespace {

BoxUnion meet(const BoxUnion& a, const BoxUnion& b) {
  BoxUnion out;
  for (const Box& x : a)
    for (const Box& y : b)
      if (auto z = intersect(x, y)) out.push_back(*z);
  return out;
}

bool same_set(const BoxUnion& a, const BoxUnion& b) { return union_contains(a, b) && union_contains(b, a); }

Dyadic widest_axis(const Box& d) {
  Dyadic w{};
  for (std::size_t i = 0; i < d.dim(); ++i) w = max(w, d.hi[i] - d.lo[i]);
  return w;
}

Dyadic eps_floor(const ApproxSequence& seq) {
  double finest = seq.levels.back().grid.diam();
  return Dyadic::up(4.0 * finest);
}

CellSet union_of(const std::vector<CellSet>& blocks, const CellSet& alpha, std::size_t universe) {
  CellSet out(universe);
  alpha.for_each([&](std::size_t p) { out |= blocks[p]; });
  return out;
}

bool kind_holds(const MultivaluedMap& f, const CellSet& u, LiftKind k) {
  Classification c = classify(f, u);
  switch (k) {
    case LiftKind::invset_minus: return c.backward_invariant;
    case LiftKind::rset: return c.repelling;
    case LiftKind::invset_plus: return c.forward_invariant;
    case LiftKind::aset: return c.attracting;
  }
  return false;
}

bool attractor_side(LiftKind k) { return k == LiftKind::invset_plus || k == LiftKind::aset; }

std::optional<std::string> homomorphism_failure(const DownSetLattice& o, const std::vector<CellSet>& img,
                                                std::size_t universe) {
  const Poset& P = o.poset;
  if (img[o.index_of(P.empty_set())].any()) return "bottom is not mapped to the empty set";
  if (img[o.index_of(P.all())] != CellSet::full(universe)) return "top is not mapped to all cells";
  for (std::size_t i = 0; i < o.size(); ++i)
    for (std::size_t j = i + 1; j < o.size(); ++j) {
      const CellSet& a = o.elements[i];
      const CellSet& b = o.elements[j];
      if (img[i] == img[j]) return "not injective: " + P.label(a) + ", " + P.label(b);
      if (img[o.index_of(a | b)] != (img[i] | img[j])) return "join not preserved: " + P.label(a) + ", " + P.label(b);
      if (img[o.index_of(a & b)] != (img[i] & img[j])) return "meet not preserved: " + P.label(a) + ", " + P.label(b);
    }
  return std::nullopt;
}

std::optional<std::string> c1_failure(const Poset& P, const std::vector<CellSet>& blocks) {
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = a + 1; b < P.size(); ++b)
      if (blocks[a].intersects(blocks[b])) return "C1 fails: V_" + P.id(a) + " meets V_" + P.id(b);
  return std::nullopt;
}

/// |V_p| ∩ R(α) = ∅ for p ∉ α, over the active elements.
std::optional<std::string> c2_failure(const Grid& g, const TargetLattice& t, const std::vector<CellSet>& blocks,
                                      const CellSet& active) {
  const Poset& P = t.poset();
  std::optional<std::string> out;
  active.for_each([&](std::size_t p) {
    if (out) return;
    BoxUnion vp = g.evaluate(blocks[p]);
    for (std::size_t a = 0; a < t.o.size(); ++a) {
      if (t.o.elements[a].test(p)) continue;
      if (intersects(vp, t.values[a])) {
        out = "C2 fails: |V_" + P.id(p) + "| meets the target at " + P.label(t.o.elements[a]);
        return;
      }
    }
  });
  return out;
}

std::optional<std::string> c3_failure(const Grid& g, const Poset& P, const std::vector<CellSet>& blocks,
                                      const CellSet& active) {
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = a + 1; b < P.size(); ++b)
      if (active.test(a) && active.test(b) && !P.comparable(a, b) && g.evaluations_meet(blocks[a], blocks[b]))
        return "C3 fails: |V_" + P.id(a) + "| meets |V_" + P.id(b) + "|";
  return std::nullopt;
}

void certify(LiftResult& lift, const Grid& g, const MultivaluedMap& f, const TargetLattice* target) {
  LiftCertificates& c = lift.certificates;
  const Poset& P = lift.poset();
  auto note = [&](const std::optional<std::string>& m) {
    if (m && c.failure.empty()) c.failure = *m;
    return !m;
  };
  c.c1 = note(c1_failure(P, lift.blocks));
  c.c2 = target ? note(c2_failure(g, *target, lift.blocks, P.all())) : c.c2;
  c.c3 = note(c3_failure(g, P, lift.blocks, P.all()));
  try {
    c.well_separated = is_well_separated(P, lift.blocks, g.evaluation_ops(), &lift.o, &lift.assignment);
    if (!c.well_separated) note(std::string("not well separated"));
  } catch (const Error& e) {
    c.well_separated = false;
    note(std::string(e.what()));
  }
  c.homomorphism = note(homomorphism_failure(lift.o, lift.assignment, g.size()));
  c.kind = true;
  for (std::size_t i = 0; i < lift.o.size() && c.kind; ++i)
    if (!kind_holds(f, lift.assignment[i], lift.kind)) {
      c.kind = false;
      note("image of " + P.label(lift.o.elements[i]) + " is not in " + to_string(lift.kind));
    }
}

void require_repeller_target(const TargetLattice& t) {
  if (t.kind != TargetKind::repeller)
    fail(ErrorKind::input, "attractor targets are lifted through their dual repeller lattice");
  if (auto why = t.validate()) fail(ErrorKind::certificate, *why);
  for (std::size_t p = 0; p < t.poset().size(); ++p)
    if (!t.dual_values[t.o.index_of(t.poset().down(p))])
      fail(ErrorKind::input, "dual representative missing for " + t.poset().id(p));
}

/// B_ε(R(μ)) ∩ R(α) ⊆ int|U(λ)| for every α ∌ p.
std::optional<std::string> condition_ii(const Grid& g, const TargetLattice& t, std::size_t p, const BoxUnion& ball,
                                        const CellSet& u_lam) {
  for (std::size_t a = 0; a < t.o.size(); ++a) {
    if (t.o.elements[a].test(p)) continue;
    BoxUnion s = meet(ball, t.values[a]);
    if (!s.empty() && !g.interior_contains(u_lam, s))
      return "condition (ii) fails for " + t.poset().label(t.o.elements[a]);
  }
  return std::nullopt;
}

/// |V_q| ∩ B_ε(R(μ)) = ∅ for q ∈ λ ∖ μ.
std::optional<std::string> condition_i(const Grid& g, const Poset& P, const std::vector<CellSet>& blocks,
                                       const CellSet& lam, const CellSet& mu, const BoxUnion& ball) {
  std::optional<std::string> out;
  (lam - mu).for_each([&](std::size_t q) {
    if (!out && intersects(g.evaluate(blocks[q]), ball)) out = "condition (i) fails against " + P.id(q);
  });
  return out;
}

LiftResult empty_result(const TargetLattice& t, std::size_t level, const Grid& g) {
  LiftResult r;
  r.level = level;
  r.depth = g.depth();
  r.o = t.o;
  r.blocks.assign(t.poset().size(), g.empty_set());
  r.epsilons.assign(t.poset().size(), 0.0);
  r.order = linear_extension(t.poset());
  return r;
}

void assemble(LiftResult& r, std::size_t universe) {
  r.assignment.clear();
  for (const CellSet& a : r.o.elements) r.assignment.push_back(union_of(r.blocks, a, universe));
}

std::optional<std::string> try_general(const ApproxSequence& seq, const TargetLattice& t, std::size_t n,
                                       Dyadic floor, LiftResult& out) {
  const Grid& g = seq.levels[n].grid;
  const MultivaluedMap& F = seq.levels[n].map;
  const Poset& P = t.poset();
  const double diam = g.diam();
  LiftResult r = empty_result(t, n, g);
  r.kind = LiftKind::rset;
  CellSet lam = P.empty_set();
  CellSet u_lam = g.empty_set();

  for (std::size_t p : r.order) {
    const CellSet& mu = P.down(p);
    const std::size_t mi = t.o.index_of(mu);
    const BoxUnion& R = t.values[mi];
    const BoxUnion& R_star = *t.dual_values[mi];

    Dyadic e = widest_axis(t.domain);
    while (intersects(inflate(R, e), R_star)) {
      e = e.half_down();
      if (e < floor) return "ε floor reached at " + P.id(p) + ": B_ε(R) meets R*";
    }
    std::string why;
    CellSet nbhd;
    for (;; e = e.half_down()) {
      if (e < floor) return "ε floor reached at " + P.id(p) + ": " + why;
      if (!(diam < e.to_double_down() / 2)) return "level too coarse for " + P.id(p) + " (" + why + ")";
      BoxUnion ball = inflate(R, e);
      if (auto m = condition_i(g, P, r.blocks, lam, mu, ball)) {
        why = *m;
        continue;
      }
      if (auto m = condition_ii(g, t, p, ball, u_lam)) {
        why = *m;
        continue;
      }
      nbhd = g.cov(inflate(R, e.half_down()));
      if (!classify(F, nbhd).repelling) {
        why = "cov(B_ε/2(R)) is not repelling";
        continue;
      }
      break;
    }
    r.blocks[p] = nbhd - u_lam;
    r.epsilons[p] = e.to_double();
    u_lam |= nbhd;
    lam.set(p);
    if (r.blocks[p].empty()) return "empty block for " + P.id(p);
  }
  assemble(r, g.size());
  certify(r, g, F, &t);
  if (!r.certificates.all()) return r.certificates.failure;
  out = std::move(r);
  return std::nullopt;
}

LiftKind dual_kind(LiftKind k) {
  switch (k) {
    case LiftKind::invset_minus: return LiftKind::invset_plus;
    case LiftKind::rset: return LiftKind::aset;
    case LiftKind::invset_plus: return LiftKind::invset_minus;
    case LiftKind::aset: return LiftKind::rset;
  }
  return k;
}

}  // namespace

TargetLattice TargetLattice::from_irreducibles(TargetKind kind, Box domain, Poset p, std::vector<BoxUnion> reps,
                                               std::vector<std::optional<BoxUnion>> duals) {
  if (reps.size() != p.size()) fail(ErrorKind::input, "target: one representative per poset element expected");
  if (!duals.empty() && duals.size() != p.size())
    fail(ErrorKind::input, "target: one dual per poset element expected");
  for (const auto& u : reps)
    for (const Box& b : u)
      if (b.dim() != domain.dim() || !domain.contains(b)) fail(ErrorKind::input, "target: box outside the domain");
  TargetLattice t;
  t.kind = kind;
  t.domain = std::move(domain);
  t.o = down_set_lattice(p);
  t.representatives = reps;
  const bool all_duals =
      !duals.empty() && std::all_of(duals.begin(), duals.end(), [](const auto& d) { return d.has_value(); });
  for (const CellSet& a : t.o.elements) {
    BoxUnion v;
    a.for_each([&](std::size_t i) { v.insert(v.end(), reps[i].begin(), reps[i].end()); });
    t.values.push_back(std::move(v));
    std::optional<BoxUnion> dv;
    if (kind == TargetKind::attractor && all_duals) {
      BoxUnion acc{t.domain};
      a.for_each([&](std::size_t i) { acc = meet(acc, *duals[i]); });
      dv = std::move(acc);
    } else if (!duals.empty()) {
      for (std::size_t i = 0; i < t.o.poset.size(); ++i)
        if (a == t.o.poset.down(i)) dv = duals[i];
      if (a.empty() && kind == TargetKind::repeller) dv = BoxUnion{t.domain};
    }
    t.dual_values.push_back(std::move(dv));
  }
  return t;
}

std::optional<std::string> TargetLattice::validate() const {
  const Poset& P = poset();
  // Lifts preserve the top, and the top of Rep is the whole space.
  if (kind == TargetKind::repeller && !values.empty() && !same_set(values.back(), {domain}))
    return "repeller target top is not the whole domain";
  for (std::size_t a = 0; a < P.size() && a < representatives.size(); ++a)
    for (std::size_t b = 0; b < P.size(); ++b)
      if (a != b && P.leq(a, b) && !union_contains(representatives[b], representatives[a]))
        return "representative not monotone: " + P.id(a) + " <= " + P.id(b);
  for (std::size_t i = 0; i < o.size(); ++i)
    for (std::size_t j = 0; j < o.size(); ++j) {
      if (i == j) continue;
      const CellSet& a = o.elements[i];
      const CellSet& b = o.elements[j];
      if (a.subset_of(b) && !union_contains(values[j], values[i]))
        return "representative not monotone: " + P.label(a) + " ⊆ " + P.label(b);
      if (i < j && same_set(values[i], values[j]))
        return "representative not injective: " + P.label(a) + ", " + P.label(b);
      if (kind == TargetKind::repeller && i < j && !same_set(meet(values[i], values[j]), values[o.index_of(a & b)]))
        return "representative does not preserve meets: " + P.label(a) + ", " + P.label(b);
    }
  return std::nullopt;
}

TargetLattice dual_target(const TargetLattice& t) {
  TargetLattice d;
  d.kind = t.kind == TargetKind::attractor ? TargetKind::repeller : TargetKind::attractor;
  d.domain = t.domain;
  d.o = down_set_lattice(t.poset().dual());
  for (const CellSet& b : d.o.elements) {
    std::size_t src = t.o.index_of(b.complement());
    if (!t.dual_values[src])
      fail(ErrorKind::input, "dual target needs the dual of " + t.poset().label(b.complement()));
    d.values.push_back(*t.dual_values[src]);
    d.dual_values.emplace_back(t.values[src]);
  }
  for (std::size_t p = 0; p < d.poset().size(); ++p) d.representatives.push_back(d.value(d.poset().down(p)));
  return d;
}

std::string to_string(LiftKind k) {
  switch (k) {
    case LiftKind::invset_minus: return "Invset-";
    case LiftKind::rset: return "RSet";
    case LiftKind::invset_plus: return "Invset+";
    case LiftKind::aset: return "ASet";
  }
  return "?";
}

CovAttracting cov_is_attracting(const ApproxSequence& seq, const BoxUnion& u, std::size_t level) {
  if (level >= seq.levels.size()) fail(ErrorKind::input, "level outside the sequence");
  const auto& lv = seq.levels[level];
  CovAttracting out;
  out.cells = lv.grid.cov(u);
  Classification c = classify(lv.map, out.cells);
  out.attracting = c.attracting;
  out.repelling = c.repelling;
  return out;
}

std::optional<std::size_t> first_attracting_level(const ApproxSequence& seq, const BoxUnion& u) {
  for (std::size_t n = 0; n < seq.levels.size(); ++n)
    if (cov_is_attracting(seq, u, n).attracting) return n;
  return std::nullopt;
}

std::vector<RealizedLevel> realize_attractor(const ApproxSequence& seq, const BoxUnion& a, const BoxUnion& a_star,
                                             double d) {
  if (!(d > 0)) fail(ErrorKind::config, "realization radius must be positive");
  if (a.empty()) fail(ErrorKind::input, "attractor representative is empty");
  const Dyadic dd = Dyadic::down(d);
  // B_d(A) must miss A* and B_d(A*) must miss A.
  if (intersects(inflate(a, dd), a_star))
    fail(ErrorKind::config, "radius too large: B_d(A) meets A*");
  std::vector<RealizedLevel> out;
  for (std::size_t n = 0; n < seq.levels.size(); ++n) {
    const Grid& g = seq.levels[n].grid;
    const MultivaluedMap& F = seq.levels[n].map;
    RealizedLevel r;
    r.level = n;
    r.attractor = omega(F, g.cov(inflate(a, dd.half_down())));
    r.repeller = a_star.empty() ? g.empty_set() : alpha(F, g.cov(inflate(a_star, dd.half_down())));
    r.is_attractor = is_attractor(F, r.attractor);
    BoxUnion ev = g.evaluate(r.attractor);
    r.inside = union_contains(inflate(a, dd), ev);
    r.contains = union_contains(ev, a);
    if (!r.is_attractor)
      r.failure = "ω(cov(B_d/2(A))) is not an attractor";
    else if (!r.inside)
      r.failure = "|A_n| is not inside B_d(A)";
    else if (!r.contains)
      r.failure = "A is not inside |A_n|";
    out.push_back(std::move(r));
  }
  return out;
}

LiftResult build_lift_general(const ApproxSequence& seq, const TargetLattice& target) {
  require_repeller_target(target);
  if (seq.levels.empty()) fail(ErrorKind::input, "empty approximation sequence");
  const Dyadic floor = eps_floor(seq);
  std::string last = "no levels";
  for (std::size_t n = 0; n < seq.levels.size(); ++n) {
    LiftResult r;
    auto why = try_general(seq, target, n, floor, r);
    if (!why) return r;
    last = "depth " + std::to_string(seq.levels[n].grid.depth()[0]) + ": " + *why;
  }
  fail(ErrorKind::certificate, "no level admits a lift; " + last);
}

LiftResult build_lift_cofiltration(const ApproxSequence& seq, const TargetLattice& target) {
  require_repeller_target(target);
  if (seq.levels.empty()) fail(ErrorKind::input, "empty approximation sequence");
  if (!seq.cofiltered) fail(ErrorKind::certificate, "sequence is not a cofiltration of maps");
  if (auto why = check_cofiltration(seq)) fail(ErrorKind::certificate, "cofiltration check failed: " + *why);

  const Poset& P = target.poset();
  const Dyadic floor = eps_floor(seq);
  std::size_t L = 0;
  LiftResult r = empty_result(target, 0, seq.levels[0].grid);
  r.kind = LiftKind::invset_minus;
  CellSet lam = P.empty_set();
  CellSet u_lam = seq.levels[0].grid.empty_set();

  for (std::size_t q : r.order) {
    const CellSet& mu = P.down(q);
    const std::size_t mi = target.o.index_of(mu);
    const BoxUnion& R = target.values[mi];
    const BoxUnion& R_star = *target.dual_values[mi];

    Dyadic d = widest_axis(target.domain);
    std::string why = "B_d(R) meets B_d(R*)";
    bool done = false;
    for (; !done; d = d.half_down()) {
      if (d < floor) fail(ErrorKind::certificate, "ε floor reached at " + P.id(q) + ": " + why);
      const BoxUnion ball = inflate(R, d);
      if (intersects(ball, inflate(R_star, d))) continue;
      bool sep = true;
      for (std::size_t a = 0; a < target.o.size() && sep; ++a)
        if (!(target.o.elements[a] & mu).any() && intersects(ball, inflate(target.values[a], d))) {
          why = "B_d(R) meets B_d of the target at " + P.label(target.o.elements[a]);
          sep = false;
        }
      if (!sep) continue;
      const Grid& gL = seq.levels[L].grid;
      if (auto m = condition_i(gL, P, r.blocks, lam, mu, ball)) {
        why = *m;
        continue;
      }
      if (auto m = condition_ii(gL, target, q, ball, u_lam)) {
        why = *m;
        continue;
      }

      // First level n ≥ L where α(cov(B_{d/2}(R))) sits between R and B_d(R).
      std::optional<std::size_t> found;
      CellSet rep;
      for (std::size_t n = L; n < seq.levels.size() && !found; ++n) {
        const Grid& g = seq.levels[n].grid;
        if (!(g.diam() < d.to_double_down() / 2)) continue;
        CellSet cand = alpha(seq.levels[n].map, g.cov(inflate(R, d.half_down())));
        BoxUnion ev = g.evaluate(cand);
        if (union_contains(ev, R) && union_contains(ball, ev)) {
          found = n;
          rep = std::move(cand);
        }
      }
      if (!found) {
        why = "no level realizes R(" + P.id(q) + ") inside B_d";
        continue;
      }
      const std::size_t n = *found;
      const Grid& g = seq.levels[n].grid;

      std::vector<CellSet> blocks = r.blocks;
      CellSet u_n = u_lam;
      if (n > L) {
        for (std::size_t a = 0; a < target.o.size(); ++a) {
          const CellSet& al = target.o.elements[a];
          if (!al.any() || !al.subset_of(lam)) continue;
          ++r.certificates.refinement_checks;
          if (!refinement_spot_check(seq, L, n, union_of(r.blocks, al, gL.size())))
            fail(ErrorKind::certificate, "refinement check failed: image of " + P.label(al) +
                                             " is no longer backward invariant");
        }
        for (auto& b : blocks) b = lift_to(g, gL, b);
        u_n = lift_to(g, gL, u_n);
      }
      blocks[q] = rep - u_n;
      CellSet active = lam;
      active.set(q);
      std::optional<std::string> m;
      if (blocks[q].empty()) m = "empty block for " + P.id(q);
      if (!m) m = c1_failure(P, blocks);
      if (!m) m = c2_failure(g, target, blocks, active);
      if (!m) m = c3_failure(g, P, blocks, active);
      if (m) {
        why = *m;
        continue;
      }
      r.blocks = std::move(blocks);
      r.epsilons[q] = d.to_double();
      u_lam = u_n | rep;
      lam = active;
      L = n;
      done = true;
    }
  }
  const Grid& g = seq.levels[L].grid;
  r.level = L;
  r.depth = g.depth();
  assemble(r, g.size());
  certify(r, g, seq.levels[L].map, &target);
  if (!r.certificates.all()) fail(ErrorKind::certificate, r.certificates.failure);
  return r;
}

LiftResult dualize_lift(const LiftResult& lift, const MultivaluedMap& f) {
  LiftResult d;
  d.level = lift.level;
  d.depth = lift.depth;
  d.o = down_set_lattice(lift.poset().dual());
  for (const CellSet& b : d.o.elements) d.assignment.push_back(lift.assignment[lift.o.index_of(b.complement())].complement());
  // V'_p = ℓ(P∖↑p ∪ {p}) ∖ ℓ(P∖↑p) = V_p, and incomparability is unchanged,
  // so C1, C3 and well-separation carry over.
  d.blocks = lift.blocks;
  d.kind = dual_kind(lift.kind);
  d.epsilons = lift.epsilons;
  d.order = lift.order;
  d.certificates = lift.certificates;
  d.certificates.failure.clear();
  auto hom = homomorphism_failure(d.o, d.assignment, f.size());
  d.certificates.homomorphism = !hom;
  if (hom) d.certificates.failure = *hom;
  d.certificates.kind = true;
  for (std::size_t i = 0; i < d.o.size() && d.certificates.kind; ++i)
    if (!kind_holds(f, d.assignment[i], d.kind)) {
      d.certificates.kind = false;
      if (d.certificates.failure.empty())
        d.certificates.failure = "image of " + d.poset().label(d.o.elements[i]) + " is not in " + to_string(d.kind);
    }
  return d;
}

LiftResult lift_attractors(const ApproxSequence& seq, const TargetLattice& target, bool cofiltered) {
  if (target.kind != TargetKind::attractor) fail(ErrorKind::input, "lift_attractors expects an attractor target");
  if (auto why = target.validate()) fail(ErrorKind::certificate, *why);
  TargetLattice rt = dual_target(target);
  LiftResult r = cofiltered ? build_lift_cofiltration(seq, rt) : build_lift_general(seq, rt);
  return dualize_lift(r, seq.levels[r.level].map);
}

LiftReport verify_lift(const LiftResult& lift, const ApproxSequence& seq, const TargetLattice* target,
                       std::optional<std::size_t> reference_level, std::optional<double> tol) {
  LiftReport rep;
  if (lift.level >= seq.levels.size()) fail(ErrorKind::input, "lift level outside the sequence");
  const Grid& g = seq.levels[lift.level].grid;
  const MultivaluedMap& F = seq.levels[lift.level].map;
  const Poset& P = lift.poset();
  if (lift.assignment.size() != lift.o.size() || lift.blocks.size() != P.size())
    fail(ErrorKind::input, "lift tables do not match its poset");
  for (const CellSet& s : lift.assignment)
    if (s.universe() != g.size()) fail(ErrorKind::input, "lift does not live on the sequence grid");

  if (auto m = homomorphism_failure(lift.o, lift.assignment, g.size())) {
    rep.homomorphism = {false, false, *m};
  } else {
    try {
      auto blocks = atom_decomposition(lift.o, lift.assignment);
      if (blocks != lift.blocks) rep.homomorphism = {false, false, "blocks differ from the atom decomposition"};
    } catch (const Error& e) {
      rep.homomorphism = {false, false, e.what()};
    }
  }

  for (std::size_t i = 0; i < lift.o.size(); ++i)
    if (!kind_holds(F, lift.assignment[i], lift.kind)) {
      rep.kind = {false, false, "image of " + P.label(lift.o.elements[i]) + " is not in " + to_string(lift.kind)};
      break;
    }

  const bool target_ok = target && target->poset() == P &&
                         (target->kind == TargetKind::attractor) == attractor_side(lift.kind);
  {
    std::optional<std::string> m = c1_failure(P, lift.blocks);
    if (!m && target_ok) m = c2_failure(g, *target, lift.blocks, P.all());
    if (!m) m = c3_failure(g, P, lift.blocks, P.all());
    if (!m) {
      try {
        if (!is_well_separated(P, lift.blocks, g.evaluation_ops(), &lift.o, &lift.assignment))
          m = "not well separated";
      } catch (const Error& e) {
        m = e.what();
      }
    }
    if (m) rep.separation = {false, false, *m};
  }

  if (!target) {
    rep.agreement = {true, true, "no target"};
    rep.containment = {true, true, "no target"};
    return rep;
  }
  if (!target_ok) {
    rep.agreement = {false, false, "target does not match the lift's poset or kind"};
    rep.containment = rep.agreement;
    return rep;
  }

  for (std::size_t i = 0; i < lift.o.size(); ++i)
    if (!g.interior_contains(lift.assignment[i], target->values[i])) {
      rep.containment = {false, false, "target at " + P.label(lift.o.elements[i]) + " is not inside int|l|"};
      break;
    }

  if (!reference_level) {
    rep.agreement = {true, true, "no reference level"};
    return rep;
  }
  const std::size_t m = *reference_level;
  if (m >= seq.levels.size() || !seq.levels[m].grid.refines(g)) {
    rep.agreement = {false, false, "reference level does not refine the lift level"};
    return rep;
  }
  const Grid& gm = seq.levels[m].grid;
  const MultivaluedMap& Fm = seq.levels[m].map;
  rep.tolerance = tol.value_or(2.0 * gm.diam());
  const auto parent = m == lift.level ? std::vector<std::uint32_t>{} : parent_map(gm, g);
  for (std::size_t i = 0; i < lift.o.size(); ++i) {
    CellSet u = m == lift.level ? lift.assignment[i] : lift_to(parent, gm.size(), lift.assignment[i]);
    CellSet lim = attractor_side(lift.kind) ? omega(Fm, u) : alpha(Fm, u);
    double h = hausdorff(gm.evaluate(lim), gm.evaluate(gm.cov(target->values[i])));
    rep.hausdorff.push_back(h);
    if (!(h <= rep.tolerance) && rep.agreement.pass) {
      std::ostringstream os;
      os << "Hausdorff distance " << h << " exceeds " << rep.tolerance << " at " << P.label(lift.o.elements[i]);
      rep.agreement = {false, false, os.str()};
    }
  }
  return rep;
}

std::string lift_dot(const LiftResult& lift) {
  std::vector<std::string> ann;
  for (const CellSet& b : lift.blocks) ann.push_back("|V|=" + std::to_string(b.count()));
  return hasse_dot(lift.poset(), ann);
}

}  // namespace latdyn
