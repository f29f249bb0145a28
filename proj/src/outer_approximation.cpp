#include "latdyn/outer_approximation.hpp"

#include "latdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace latdyn {

namespace {

Dyadic domain_slack(const Box& d) {
  double ext = 0;
  for (std::size_t i = 0; i < d.dim(); ++i) ext = std::max(ext, (d.hi[i] - d.lo[i]).to_double());
  return Dyadic::up(1e-9 * ext);
}

/// Oracle images of an arbitrary box, outward and clipped to the grid domain.
BoxUnion image_boxes(const Grid& g, const BoxImageOracle& f, const Box& b, const std::string& what) {
  if (f.dim() != g.dim()) fail(ErrorKind::config, "system dimension does not match grid");
  const Box& dom = g.domain();
  const Dyadic slack = domain_slack(dom);
  BoxUnion out;
  for (const auto& fb : f.image(to_float(b))) {
    for (std::size_t i = 0; i < fb.dim(); ++i)
      if (!std::isfinite(fb.lo[i]) || !std::isfinite(fb.hi[i]))
        fail(ErrorKind::oracle, f.name + ": non-finite image of " + what);
    Box r = outward(fb);
    for (std::size_t i = 0; i < r.dim(); ++i) {
      if (r.lo[i] < dom.lo[i] - slack || r.hi[i] > dom.hi[i] + slack)
        fail(ErrorKind::oracle, f.name + ": image of " + what + " leaves the domain: " + r.to_string());
      r.lo[i] = min(max(r.lo[i], dom.lo[i]), dom.hi[i]);
      r.hi[i] = max(min(r.hi[i], dom.hi[i]), r.lo[i]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> children_of(const std::vector<std::uint32_t>& parent, std::size_t coarse) {
  std::vector<std::vector<std::uint32_t>> ch(coarse);
  for (std::size_t c = 0; c < parent.size(); ++c) ch[parent[c]].push_back(static_cast<std::uint32_t>(c));
  return ch;
}

CellSet lift_fast(const std::vector<std::vector<std::uint32_t>>& ch, std::size_t fine_size, const CellSet& u) {
  CellSet out(fine_size);
  u.for_each([&](std::size_t p) {
    for (auto c : ch[p]) out.set(c);
  });
  return out;
}

}  // namespace

BoxUnion cell_image(const Grid& g, const BoxImageOracle& f, std::size_t cell) {
  return image_boxes(g, f, g.cell(cell), "cell " + std::to_string(cell));
}

MultivaluedMap minimal_map(const Grid& g, const BoxImageOracle& f) { return rho_minimal_map(g, f, 0.0); }

MultivaluedMap rho_minimal_map(const Grid& g, const BoxImageOracle& f, double rho) {
  if (!(rho >= 0) || !std::isfinite(rho)) fail(ErrorKind::config, "rho must be a finite non-negative number");
  const Dyadic r = Dyadic::up(rho);
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < g.size(); ++c) {
    CellSet img = g.cov(inflate(cell_image(g, f, c), r));
    img.for_each([&](std::size_t w) {
      edges.emplace_back(static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(w));
    });
  }
  return MultivaluedMap(g.size(), std::move(edges));
}

bool encloses(const MultivaluedMap& big, const MultivaluedMap& small) {
  if (big.size() != small.size()) fail(ErrorKind::input, "maps on different grids");
  for (std::size_t v = 0; v < big.size(); ++v) {
    auto a = big.successors(v), b = small.successors(v);
    if (!std::includes(a.begin(), a.end(), b.begin(), b.end())) return false;
  }
  return true;
}

bool is_outer_approximation(const MultivaluedMap& f, const Grid& g, const BoxImageOracle& o) {
  if (f.size() != g.size()) fail(ErrorKind::input, "map does not match grid");
  for (std::size_t c = 0; c < g.size(); ++c)
    if (!g.interior_contains(f.image_of(c), cell_image(g, o, c))) return false;
  return true;
}

bool is_weak_outer_approximation(const MultivaluedMap& f, const Grid& g, const BoxImageOracle& o) {
  if (f.size() != g.size()) fail(ErrorKind::input, "map does not match grid");
  for (std::size_t c = 0; c < g.size(); ++c) {
    CellSet start(g.size());
    start.set(c);
    if (!g.interior_contains(forward_closure(f, start), cell_image(g, o, c))) return false;
  }
  return true;
}

EnclosureReport iterate_enclosure_check(const MultivaluedMap& f, const Grid& g, const BoxImageOracle& o, unsigned k,
                                        double eps, Direction dir, std::uint64_t seed) {
  if (k == 0) fail(ErrorKind::config, "iterate check needs k >= 1");
  if (f.size() != g.size()) fail(ErrorKind::input, "map does not match grid");
  EnclosureReport rep;
  auto record = [&](std::size_t c, double ex) {
    rep.max_excess = std::max(rep.max_excess, ex);
    if (!(ex <= eps)) {
      rep.pass = false;
      rep.offending.push_back(static_cast<std::uint32_t>(c));
    }
  };

  if (dir == Direction::forward) {
    rep.certified = o.guaranteed;
    for (std::size_t c = 0; c < g.size(); ++c) {
      CellSet s(g.size());
      s.set(c);
      BoxUnion e{g.cell(c)};
      for (unsigned j = 0; j < k; ++j) {
        s = f.image(s);
        BoxUnion next;
        for (const auto& b : e)
          for (auto& x : image_boxes(g, o, b, "iterate of cell " + std::to_string(c))) next.push_back(std::move(x));
        e = std::move(next);
      }
      record(c, excess(g.evaluate(s), e));
    }
    return rep;
  }

  // Backward: f^{-k}(|ξ|) estimated from a jittered sample lattice.
  rep.certified = false;
  const std::size_t d = g.dim();
  const std::size_t per_axis = std::max<std::size_t>(
      8, static_cast<std::size_t>(std::ceil(std::pow(64.0 * static_cast<double>(g.size()), 1.0 / static_cast<double>(d)))));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const Box& dom = g.domain();
  std::vector<double> spacing(d);
  for (std::size_t i = 0; i < d; ++i) spacing[i] = (dom.hi[i] - dom.lo[i]).to_double() / static_cast<double>(per_axis);
  std::vector<BoxUnion> hits(g.size());
  std::vector<std::size_t> idx(d, 0);
  Dyadic pad = Dyadic::up(*std::max_element(spacing.begin(), spacing.end()));
  while (true) {
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = dom.lo[i].to_double() + (static_cast<double>(idx[i]) + jitter(rng)) * spacing[i];
    std::vector<double> y = x;
    bool inside = true;
    for (unsigned j = 0; j < k && inside; ++j) {
      y = o.point(y);
      for (std::size_t i = 0; i < d && inside; ++i)
        inside = std::isfinite(y[i]) && y[i] >= dom.lo[i].to_double() && y[i] <= dom.hi[i].to_double();
    }
    if (inside) {
      std::vector<Dyadic> px, py;
      for (std::size_t i = 0; i < d; ++i) {
        px.push_back(Dyadic::down(x[i]));
        py.push_back(Dyadic::down(y[i]));
      }
      Box pt = inflate(Box::point(px), pad);
      g.cov(Box::point(py)).for_each([&](std::size_t c) { hits[c].push_back(pt); });
    }
    std::size_t i = 0;
    while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == d) break;
  }
  for (std::size_t c = 0; c < g.size(); ++c) {
    CellSet s(g.size());
    s.set(c);
    for (unsigned j = 0; j < k; ++j) s = f.preimage(s);
    record(c, excess(g.evaluate(s), hits[c]));
  }
  return rep;
}

MultivaluedMap common_refinement_map(const MultivaluedMap& fa, const Grid& ga, const MultivaluedMap& fb,
                                     const Grid& gb) {
  if (fa.size() != ga.size() || fb.size() != gb.size()) fail(ErrorKind::input, "map does not match grid");
  Grid c = common_refinement(ga, gb);
  auto pa = parent_map(c, ga), pb = parent_map(c, gb);
  auto cha = children_of(pa, ga.size()), chb = children_of(pb, gb.size());
  std::vector<Edge> edges;
  for (std::size_t z = 0; z < c.size(); ++z) {
    CellSet img = lift_fast(cha, c.size(), fa.image_of(pa[z]));
    img &= lift_fast(chb, c.size(), fb.image_of(pb[z]));
    img.for_each([&](std::size_t w) {
      edges.emplace_back(static_cast<std::uint32_t>(z), static_cast<std::uint32_t>(w));
    });
  }
  return MultivaluedMap(c.size(), std::move(edges));
}

double default_rho(unsigned depth) { return std::ldexp(1.0, -static_cast<int>(depth) - 1); }

ApproxSequence build_sequence(const BoxImageOracle& system, const Box& domain, const std::vector<unsigned>& depths,
                              const std::vector<double>& rho, bool cofiltered) {
  if (depths.empty()) fail(ErrorKind::config, "no depths given");
  if (!rho.empty() && rho.size() != depths.size()) fail(ErrorKind::config, "rho schedule length differs from depths");
  for (std::size_t n = 1; n < depths.size(); ++n)
    if (depths[n] <= depths[n - 1]) fail(ErrorKind::config, "depths must be strictly increasing");
  ApproxSequence seq;
  seq.system = system;
  seq.cofiltered = cofiltered;
  for (std::size_t n = 0; n < depths.size(); ++n) {
    ApproxLevel lv;
    lv.grid = Grid(domain, std::vector<unsigned>(domain.dim(), depths[n]));
    lv.rho = rho.empty() ? default_rho(depths[n]) : rho[n];
    MultivaluedMap fo = minimal_map(lv.grid, system);
    MultivaluedMap fr = rho_minimal_map(lv.grid, system, lv.rho);
    if (cofiltered && n > 0) {
      const ApproxLevel& prev = seq.levels.back();
      auto par = parent_map(lv.grid, prev.grid);
      auto ch = children_of(par, prev.grid.size());
      std::vector<Edge> edges;
      for (std::size_t c = 0; c < lv.grid.size(); ++c) {
        CellSet img = fr.image_of(c) & lift_fast(ch, lv.grid.size(), prev.map.image_of(par[c]));
        img.for_each([&](std::size_t w) {
          edges.emplace_back(static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(w));
        });
      }
      lv.map = MultivaluedMap(lv.grid.size(), std::move(edges));
      seq.parent.push_back(std::move(par));
    } else {
      lv.map = fr;
    }
    lv.squeezed = encloses(lv.map, fo) && encloses(fr, lv.map);
    seq.levels.push_back(std::move(lv));
  }
  return seq;
}

std::optional<std::string> check_cofiltration(const ApproxSequence& seq) {
  for (std::size_t n = 0; n + 1 < seq.levels.size(); ++n) {
    const auto& coarse = seq.levels[n];
    const auto& fine = seq.levels[n + 1];
    if (!fine.grid.refines(coarse.grid)) return "level " + std::to_string(n + 1) + " does not refine level " + std::to_string(n);
    auto par = parent_map(fine.grid, coarse.grid);
    auto ch = children_of(par, coarse.grid.size());
    for (std::size_t c = 0; c < fine.grid.size(); ++c) {
      CellSet allowed = lift_fast(ch, fine.grid.size(), coarse.map.image_of(par[c]));
      if (!fine.map.image_of(c).subset_of(allowed))
        return "images not nested: |F_" + std::to_string(n + 1) + "(" + std::to_string(c) + ")| is not inside |F_" +
               std::to_string(n) + "(" + std::to_string(par[c]) + ")|";
    }
  }
  return std::nullopt;
}

bool refinement_spot_check(const ApproxSequence& seq, std::size_t n, std::size_t m, const CellSet& w_n) {
  if (!(n < m && m < seq.levels.size())) fail(ErrorKind::input, "spot check needs n < m within the sequence");
  const auto& ln = seq.levels[n];
  const auto& lm = seq.levels[m];
  if (!ln.map.preimage(w_n).subset_of(w_n)) return true;
  CellSet w_m = lift_to(lm.grid, ln.grid, w_n);
  return lm.map.preimage(w_m).subset_of(w_m);
}

}  // namespace latdyn
