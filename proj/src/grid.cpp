#include "latdyn/grid.hpp"

#include "latdyn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace latdyn {

namespace {

using raw = Dyadic::raw_type;

raw floor_div(raw a, raw b) {
  raw q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

raw ceil_div(raw a, raw b) { return -floor_div(-a, b); }

}  // namespace

Grid::Grid(Box domain, std::vector<unsigned> depth) : domain_(std::move(domain)), depth_(std::move(depth)) {
  const std::size_t d = domain_.dim();
  if (d == 0) fail(ErrorKind::config, "grid domain has no axes");
  if (depth_.size() != d)
    fail(ErrorKind::config, "grid depth has " + std::to_string(depth_.size()) + " entries for a " +
                                std::to_string(d) + "-dimensional domain");
  unsigned total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!(domain_.lo[i] < domain_.hi[i])) fail(ErrorKind::config, "grid domain is degenerate");
    total += depth_[i];
  }
  if (total > 31) fail(ErrorKind::config, "grid has more than 2^31 cells (depth overflow)");
  for (std::size_t i = 0; i < d; ++i) width_.push_back((domain_.hi[i] - domain_.lo[i]).shr_exact(depth_[i]));
  stride_.assign(d, 1);
  for (std::size_t i = d - 1; i-- > 0;) stride_[i] = stride_[i + 1] * (std::size_t{1} << depth_[i + 1]);
  size_ = stride_[0] * (std::size_t{1} << depth_[0]);
}

void Grid::check(const CellSet& u) const {
  if (u.universe() != size_)
    fail(ErrorKind::input, "cell set universe " + std::to_string(u.universe()) + " does not match grid size " +
                               std::to_string(size_));
}

std::vector<std::uint64_t> Grid::coords(std::size_t id) const {
  std::vector<std::uint64_t> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    c[i] = id / stride_[i];
    id %= stride_[i];
  }
  return c;
}

std::size_t Grid::id(const std::vector<std::uint64_t>& c) const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < dim(); ++i) r += c[i] * stride_[i];
  return r;
}

Box Grid::cell(std::size_t cid) const {
  auto c = coords(cid);
  Box b;
  for (std::size_t i = 0; i < dim(); ++i) {
    b.lo.push_back(domain_.lo[i] + width_[i] * static_cast<std::int64_t>(c[i]));
    b.hi.push_back(domain_.lo[i] + width_[i] * static_cast<std::int64_t>(c[i] + 1));
  }
  return b;
}

FloatBox Grid::cell_float(std::size_t cid) const { return to_float(cell(cid)); }

double Grid::diam() const {
  double s = 0;
  for (const auto& w : width_) s += w.to_double() * w.to_double();
  return std::sqrt(s);
}

CellSet Grid::cov(const Box& s) const {
  if (s.dim() != dim()) fail(ErrorKind::input, "box dimension does not match grid");
  CellSet out(size_);
  std::vector<std::uint64_t> lo(dim()), hi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (s.hi[i] < domain_.lo[i] || s.lo[i] > domain_.hi[i]) return out;
    const raw w = width_[i].raw();
    const raw n = static_cast<raw>(cells_along(i));
    raw a = ceil_div((s.lo[i] - domain_.lo[i]).raw(), w) - 1;
    raw b = floor_div((s.hi[i] - domain_.lo[i]).raw(), w);
    a = std::clamp<raw>(a, 0, n - 1);
    b = std::clamp<raw>(b, 0, n - 1);
    lo[i] = static_cast<std::uint64_t>(a);
    hi[i] = static_cast<std::uint64_t>(b);
  }
  std::vector<std::uint64_t> c = lo;
  while (true) {
    out.set(id(c));
    std::size_t i = dim();
    while (i-- > 0) {
      if (c[i] < hi[i]) {
        ++c[i];
        break;
      }
      c[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

CellSet Grid::cov(const BoxUnion& s) const {
  CellSet out(size_);
  for (const auto& b : s) out |= cov(b);
  return out;
}

BoxUnion Grid::evaluate(const CellSet& u) const {
  check(u);
  BoxUnion out;
  const std::size_t row = stride_.back() == 1 ? cells_along(dim() - 1) : 1;
  std::size_t start = CellSet::npos, prev = CellSet::npos;
  auto flush = [&] {
    if (start == CellSet::npos) return;
    Box b = cell(start);
    b.hi.back() = cell(prev).hi.back();
    out.push_back(std::move(b));
  };
  u.for_each([&](std::size_t c) {
    if (start != CellSet::npos && c == prev + 1 && c / row == start / row) {
      prev = c;
      return;
    }
    flush();
    start = prev = c;
  });
  flush();
  return out;
}

CellSet Grid::dilate(const CellSet& u) const {
  check(u);
  CellSet out(size_);
  const std::size_t d = dim();
  std::vector<int> off(d, -1);
  u.for_each([&](std::size_t cid) {
    auto c = coords(cid);
    std::fill(off.begin(), off.end(), -1);
    while (true) {
      bool ok = true;
      std::size_t nid = 0;
      for (std::size_t i = 0; i < d && ok; ++i) {
        std::int64_t v = static_cast<std::int64_t>(c[i]) + off[i];
        ok = v >= 0 && v < static_cast<std::int64_t>(cells_along(i));
        nid += static_cast<std::size_t>(v) * stride_[i];
      }
      if (ok) out.set(nid);
      std::size_t i = 0;
      while (i < d && ++off[i] == 2) off[i++] = -1;
      if (i == d) break;
    }
  });
  return out;
}

bool Grid::interior_contains(const CellSet& u, const Box& s) const {
  check(u);
  for (std::size_t c = 0; c < size_; ++c)
    if (!u.test(c) && intersects(cell(c), s)) return false;
  return true;
}

bool Grid::interior_contains(const CellSet& u, const BoxUnion& s) const {
  for (const auto& b : s)
    if (!interior_contains(u, b)) return false;
  return true;
}

bool Grid::evaluations_meet(const CellSet& a, const CellSet& b) const {
  if (a.count() <= b.count()) return dilate(a).intersects(b);
  return dilate(b).intersects(a);
}

bool Grid::meet_within(const CellSet& a, const CellSet& b, const CellSet& c) const {
  check(a);
  check(b);
  check(c);
  const std::size_t d = dim();
  std::vector<int> off(d);
  std::vector<std::uint64_t> opt0(d), opt1(d);
  std::vector<bool> two(d);
  bool ok = true;
  a.for_each([&](std::size_t xid) {
    if (!ok) return;
    auto x = coords(xid);
    std::fill(off.begin(), off.end(), -1);
    while (ok) {
      bool inside = true;
      std::size_t yid = 0;
      for (std::size_t i = 0; i < d && inside; ++i) {
        std::int64_t v = static_cast<std::int64_t>(x[i]) + off[i];
        inside = v >= 0 && v < static_cast<std::int64_t>(cells_along(i));
        yid += static_cast<std::size_t>(v) * stride_[i];
      }
      if (inside && b.test(yid)) {
        // The face x ∩ y lies in |C| iff some cell containing it is in C.
        std::size_t combos = 1;
        for (std::size_t i = 0; i < d; ++i) {
          if (off[i] == 0) {
            opt0[i] = x[i];
            two[i] = false;
          } else {
            std::uint64_t j = off[i] > 0 ? x[i] + 1 : x[i];
            opt0[i] = j - 1;
            opt1[i] = j;
            two[i] = true;
            combos *= 2;
          }
        }
        bool found = false;
        for (std::size_t m = 0; m < combos && !found; ++m) {
          std::size_t cid = 0, bit = 0;
          for (std::size_t i = 0; i < d; ++i) {
            std::uint64_t v = opt0[i];
            if (two[i]) v = ((m >> bit++) & 1) ? opt1[i] : opt0[i];
            cid += v * stride_[i];
          }
          found = c.test(cid);
        }
        if (!found) ok = false;
      }
      std::size_t i = 0;
      while (i < d && ++off[i] == 2) off[i++] = -1;
      if (i == d) break;
    }
  });
  return ok;
}

EvaluationOps Grid::evaluation_ops() const {
  Grid g = *this;
  return EvaluationOps{
      [g](const CellSet& a, const CellSet& b) { return g.evaluations_meet(a, b); },
      [g](const CellSet& a, const CellSet& b, const CellSet& c) { return g.meet_within(a, b, c); }};
}

Grid Grid::refine(const std::vector<std::size_t>& axes) const {
  std::vector<unsigned> nd = depth_;
  if (axes.empty()) {
    for (auto& k : nd) ++k;
  } else {
    for (auto a : axes) {
      if (a >= dim()) fail(ErrorKind::input, "refine: axis out of range");
      ++nd[a];
    }
  }
  return Grid(domain_, nd);
}

bool Grid::refines(const Grid& coarse) const {
  if (!(domain_ == coarse.domain_) || dim() != coarse.dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (depth_[i] < coarse.depth_[i]) return false;
  return true;
}

Grid common_refinement(const Grid& a, const Grid& b) {
  if (!(a.domain() == b.domain())) fail(ErrorKind::input, "common refinement: domain mismatch");
  std::vector<unsigned> d(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) d[i] = std::max(a.depth()[i], b.depth()[i]);
  return Grid(a.domain(), d);
}

std::vector<std::uint32_t> parent_map(const Grid& fine, const Grid& coarse) {
  if (!fine.refines(coarse)) fail(ErrorKind::input, "parent map: grid is not a refinement");
  std::vector<std::uint32_t> p(fine.size());
  std::vector<unsigned> shift(fine.dim());
  for (std::size_t i = 0; i < fine.dim(); ++i) shift[i] = fine.depth()[i] - coarse.depth()[i];
  for (std::size_t c = 0; c < fine.size(); ++c) {
    auto x = fine.coords(c);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] >>= shift[i];
    p[c] = static_cast<std::uint32_t>(coarse.id(x));
  }
  return p;
}

CellSet lift_to(const std::vector<std::uint32_t>& parent, std::size_t fine_size, const CellSet& u) {
  CellSet out(fine_size);
  for (std::size_t c = 0; c < fine_size; ++c)
    if (u.test(parent[c])) out.set(c);
  return out;
}

CellSet lift_to(const Grid& fine, const Grid& coarse, const CellSet& u) {
  if (u.universe() != coarse.size()) fail(ErrorKind::input, "lift: cell set does not match coarse grid");
  return lift_to(parent_map(fine, coarse), fine.size(), u);
}

CellSet project(const std::vector<std::uint32_t>& parent, std::size_t coarse_size, const CellSet& v) {
  CellSet out(coarse_size);
  v.for_each([&](std::size_t c) { out.set(parent[c]); });
  return out;
}

bool Cofiltration::contracting() const {
  for (std::size_t n = 1; n < grids.size(); ++n)
    if (!(grids[n].diam() < grids[n - 1].diam())) return false;
  return true;
}

Cofiltration make_cofiltration(const Box& domain, const std::vector<unsigned>& depths) {
  Cofiltration c;
  for (std::size_t n = 0; n < depths.size(); ++n) {
    if (n && depths[n] <= depths[n - 1]) fail(ErrorKind::config, "cofiltration depths must increase");
    c.grids.emplace_back(domain, std::vector<unsigned>(domain.dim(), depths[n]));
    if (n) c.parent.push_back(parent_map(c.grids[n], c.grids[n - 1]));
  }
  return c;
}

}  // namespace latdyn
