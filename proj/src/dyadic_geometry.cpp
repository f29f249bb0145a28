#include "latdyn/dyadic_geometry.hpp"

#include "latdyn/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace latdyn {

namespace {
constexpr double kRange = 4611686018427387904.0;  // 2^62
}

std::optional<Dyadic> Dyadic::exact(double x) {
  if (!std::isfinite(x) || std::fabs(x) >= kRange) return std::nullopt;
  double y = std::ldexp(x, kFracBits);
  if (y != std::trunc(y)) return std::nullopt;
  return from_raw(static_cast<raw_type>(y));
}

Dyadic Dyadic::down(double x) {
  if (!std::isfinite(x) || std::fabs(x) >= kRange)
    fail(ErrorKind::input, "coordinate not finite or out of range");
  return from_raw(static_cast<raw_type>(std::floor(std::ldexp(x, kFracBits))));
}

Dyadic Dyadic::up(double x) {
  if (!std::isfinite(x) || std::fabs(x) >= kRange)
    fail(ErrorKind::input, "coordinate not finite or out of range");
  return from_raw(static_cast<raw_type>(std::ceil(std::ldexp(x, kFracBits))));
}

Dyadic Dyadic::ldexp(std::int64_t m, int e) {
  if (e <= kFracBits) {
    const int shift = kFracBits - e;
    if (shift > 126) fail(ErrorKind::input, "dyadic exponent out of range");
    const raw_type r = static_cast<raw_type>(static_cast<unsigned __int128>(static_cast<raw_type>(m)) << shift);
    if ((r >> shift) != m) fail(ErrorKind::input, "dyadic exponent out of range");
    return from_raw(r);
  }
  int s = e - kFracBits;
  if (s >= 63 || (m & ((std::int64_t{1} << s) - 1)) != 0)
    fail(ErrorKind::input, "dyadic below 2^-64 resolution");
  return from_raw(static_cast<raw_type>(m >> s));
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(v_), -kFracBits); }

double Dyadic::to_double_down() const {
  double d = to_double();
  auto back = exact(d);
  if (back && *back > *this) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

double Dyadic::to_double_up() const {
  double d = to_double();
  auto back = exact(d);
  if (back && *back < *this) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

std::string Dyadic::to_string() const {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, to_double());
  return std::string(buf, res.ptr);
}

Dyadic Dyadic::shr_exact(unsigned k) const {
  if (k >= 120) fail(ErrorKind::config, "subdivision depth too large");
  raw_type mask = (static_cast<raw_type>(1) << k) - 1;
  if (v_ & mask) fail(ErrorKind::config, "subdivision below dyadic resolution");
  return from_raw(v_ >> k);
}

// ---------------------------------------------------------------------------
// Box

Box::Box(std::vector<Dyadic> l, std::vector<Dyadic> h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size()) fail(ErrorKind::input, "box corner dimensions differ");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) fail(ErrorKind::input, "box has lo > hi on axis " + std::to_string(i));
}

bool Box::degenerate() const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (lo[i] == hi[i]) return true;
  return false;
}

double Box::diam() const {
  double s = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    double w = (hi[i] - lo[i]).to_double();
    s += w * w;
  }
  return std::sqrt(s);
}

bool Box::contains(const Box& b) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (b.lo[i] < lo[i] || hi[i] < b.hi[i]) return false;
  return true;
}

std::string Box::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) s += "x";
    s += "[" + lo[i].to_string() + "," + hi[i].to_string() + "]";
  }
  return s;
}

Box outward(const FloatBox& b) {
  if (b.lo.size() != b.hi.size()) fail(ErrorKind::input, "box corner dimensions differ");
  std::vector<Dyadic> lo, hi;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    lo.push_back(Dyadic::down(b.lo[i]));
    hi.push_back(Dyadic::up(b.hi[i]));
  }
  return Box(std::move(lo), std::move(hi));
}

FloatBox to_float(const Box& b) {
  FloatBox f;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    f.lo.push_back(b.lo[i].to_double_down());
    f.hi.push_back(b.hi[i].to_double_up());
  }
  return f;
}

bool intersects(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (b.hi[i] < a.lo[i] || a.hi[i] < b.lo[i]) return false;
  return true;
}

bool interiors_intersect(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!(a.lo[i] < a.hi[i]) || !(b.lo[i] < b.hi[i])) return false;
    if (!(a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i])) return false;
  }
  return true;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  if (!intersects(a, b)) return std::nullopt;
  Box r;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r.lo.push_back(max(a.lo[i], b.lo[i]));
    r.hi.push_back(min(a.hi[i], b.hi[i]));
  }
  return r;
}

Box hull(const Box& a, const Box& b) {
  Box r;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r.lo.push_back(min(a.lo[i], b.lo[i]));
    r.hi.push_back(max(a.hi[i], b.hi[i]));
  }
  return r;
}

Box inflate(const Box& b, Dyadic r) {
  Box o = b;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    o.lo[i] -= r;
    o.hi[i] += r;
  }
  return o;
}

BoxUnion inflate(const BoxUnion& u, Dyadic r) {
  BoxUnion o;
  o.reserve(u.size());
  for (const auto& b : u) o.push_back(inflate(b, r));
  return o;
}

namespace {

bool contains_1d(const BoxUnion& u, const Box& b) {
  std::vector<std::pair<Dyadic, Dyadic>> iv;
  for (const auto& a : u)
    if (intersects(a, b)) iv.emplace_back(a.lo[0], a.hi[0]);
  if (iv.empty()) return false;
  std::sort(iv.begin(), iv.end());
  Dyadic cur = b.lo[0];
  for (const auto& [l, h] : iv) {
    if (l > cur) return false;
    cur = max(cur, h);
    if (cur >= b.hi[0]) return true;
  }
  return false;
}

bool contains_nd(const BoxUnion& u, const Box& b) {
  const std::size_t d = b.dim();
  BoxUnion rel;
  for (const auto& a : u)
    if (intersects(a, b)) rel.push_back(a);
  if (rel.empty()) return false;
  std::vector<std::vector<std::pair<Dyadic, Dyadic>>> segs(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (b.lo[i] == b.hi[i]) {
      segs[i].emplace_back(b.lo[i], b.hi[i]);
      continue;
    }
    std::vector<Dyadic> cuts{b.lo[i], b.hi[i]};
    for (const auto& a : rel) {
      if (a.lo[i] > b.lo[i] && a.lo[i] < b.hi[i]) cuts.push_back(a.lo[i]);
      if (a.hi[i] > b.lo[i] && a.hi[i] < b.hi[i]) cuts.push_back(a.hi[i]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) segs[i].emplace_back(cuts[k], cuts[k + 1]);
  }
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    bool covered = false;
    for (const auto& a : rel) {
      bool in = true;
      for (std::size_t i = 0; i < d && in; ++i)
        in = a.lo[i] <= segs[i][idx[i]].first && segs[i][idx[i]].second <= a.hi[i];
      if (in) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
    std::size_t i = 0;
    while (i < d && ++idx[i] == segs[i].size()) idx[i++] = 0;
    if (i == d) return true;
  }
}

}  // namespace

bool union_contains(const BoxUnion& u, const Box& b) {
  return b.dim() == 1 ? contains_1d(u, b) : contains_nd(u, b);
}

bool union_contains(const BoxUnion& u, const BoxUnion& v) {
  for (const auto& b : v)
    if (!union_contains(u, b)) return false;
  return true;
}

bool intersects(const BoxUnion& a, const BoxUnion& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (intersects(x, y)) return true;
  return false;
}

bool regularly_disjoint(const BoxUnion& a, const BoxUnion& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (interiors_intersect(x, y)) return false;
  return true;
}

Dyadic distance(const Box& a, const Box& b) {
  Dyadic d{};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    d = max(d, b.lo[i] - a.hi[i]);
    d = max(d, a.lo[i] - b.hi[i]);
  }
  return d;
}

std::optional<Dyadic> distance(const BoxUnion& a, const BoxUnion& b) {
  std::optional<Dyadic> best;
  for (const auto& x : a)
    for (const auto& y : b) {
      Dyadic d = distance(x, y);
      if (!best || d < *best) best = d;
    }
  return best;
}

namespace {

using Interval = std::pair<Dyadic, Dyadic>;

std::vector<Interval> merged_1d(const BoxUnion& u) {
  std::vector<Interval> iv;
  for (const auto& b : u) iv.emplace_back(b.lo[0], b.hi[0]);
  std::sort(iv.begin(), iv.end());
  std::vector<Interval> out;
  for (const auto& x : iv) {
    if (!out.empty() && x.first <= out.back().second)
      out.back().second = max(out.back().second, x.second);
    else
      out.push_back(x);
  }
  return out;
}

Dyadic point_distance_1d(Dyadic x, const std::vector<Interval>& b) {
  // first interval with lo > x
  auto it = std::upper_bound(b.begin(), b.end(), x,
                             [](Dyadic v, const Interval& iv) { return v < iv.first; });
  Dyadic best = Dyadic::from_raw(std::numeric_limits<Dyadic::raw_type>::max());
  if (it != b.end()) best = min(best, it->first - x);
  if (it != b.begin()) {
    auto prev = std::prev(it);
    best = min(best, x <= prev->second ? Dyadic{} : x - prev->second);
  }
  return best;
}

Dyadic directed_1d(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  Dyadic h{};
  for (const auto& [a1, a2] : a) {
    h = max(h, point_distance_1d(a1, b));
    h = max(h, point_distance_1d(a2, b));
    // interior maxima sit at midpoints of gaps of b
    auto first = std::upper_bound(b.begin(), b.end(), a1,
                                  [](Dyadic v, const Interval& iv) { return v < iv.second; });
    if (first != b.begin()) --first;
    for (auto it = first; it != b.end() && std::next(it) != b.end(); ++it) {
      Dyadic g1 = it->second, g2 = std::next(it)->first;
      if (g1 >= a2) break;
      Dyadic two_m = g1 + g2;
      if (a1 + a1 <= two_m && two_m <= a2 + a2) h = max(h, (g2 - g1).half_up());
    }
  }
  return h;
}

Dyadic directed_nd(const BoxUnion& a, const BoxUnion& b) {
  Dyadic h{};
  for (const auto& x : a) {
    std::optional<Dyadic> best;
    for (const auto& y : b) {
      Dyadic s{};
      for (std::size_t i = 0; i < x.dim(); ++i) {
        s = max(s, y.lo[i] - x.lo[i]);
        s = max(s, x.hi[i] - y.hi[i]);
      }
      if (!best || s < *best) best = s;
      if (*best == Dyadic{}) break;
    }
    h = max(h, *best);
  }
  return h;
}

}  // namespace

double hausdorff(const BoxUnion& a, const BoxUnion& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  Dyadic h;
  if (a.front().dim() == 1) {
    auto ma = merged_1d(a), mb = merged_1d(b);
    h = max(directed_1d(ma, mb), directed_1d(mb, ma));
  } else {
    h = max(directed_nd(a, b), directed_nd(b, a));
  }
  return h.to_double_up();
}

double excess(const BoxUnion& a, const BoxUnion& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  if (a.front().dim() == 1) return directed_1d(merged_1d(a), merged_1d(b)).to_double_up();
  return directed_nd(a, b).to_double_up();
}

}  // namespace latdyn
