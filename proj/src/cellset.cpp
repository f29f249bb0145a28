#include "latdyn/cellset.hpp"

#include "latdyn/simd_bitset.hpp"

#include <cassert>
#include <stdexcept>

namespace latdyn {

namespace {
constexpr std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void check_same(const CellSet& a, const CellSet& b) {
  if (a.universe() != b.universe())
    throw std::invalid_argument("CellSet universe mismatch: " + std::to_string(a.universe()) +
                                " vs " + std::to_string(b.universe()));
}
}  // namespace

CellSet::CellSet(std::size_t universe) : n_(universe), w_(words_for(universe), 0) {}

CellSet CellSet::full(std::size_t universe) {
  CellSet s(universe);
  for (auto& w : s.w_) w = ~word_type{0};
  s.trim();
  return s;
}

CellSet CellSet::of(std::size_t universe, std::initializer_list<std::size_t> ids) {
  CellSet s(universe);
  for (std::size_t i : ids) {
    if (i >= universe) throw std::out_of_range("cell id out of range");
    s.set(i);
  }
  return s;
}

CellSet CellSet::from_ids(std::size_t universe, const std::vector<std::uint32_t>& ids) {
  CellSet s(universe);
  for (std::uint32_t i : ids) {
    if (i >= universe) throw std::out_of_range("cell id out of range");
    s.set(i);
  }
  return s;
}

void CellSet::clear() noexcept {
  for (auto& w : w_) w = 0;
}

void CellSet::trim() noexcept {
  if (n_ % 64 && !w_.empty()) w_.back() &= (word_type{1} << (n_ % 64)) - 1;
}

std::size_t CellSet::count() const noexcept {
  if (w_.size() <= 2) {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  return simd::kernels().popcount(w_.data(), w_.size());
}

bool CellSet::empty() const noexcept {
  if (w_.size() <= 2) {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  return simd::kernels().none(w_.data(), w_.size());
}

std::size_t CellSet::next(std::size_t i) const noexcept {
  if (i >= n_) return npos;
  std::size_t k = i >> 6;
  word_type w = w_[k] & (~word_type{0} << (i & 63));
  while (true) {
    if (w) return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
    if (++k >= w_.size()) return npos;
    w = w_[k];
  }
}

std::vector<std::uint32_t> CellSet::ids() const {
  std::vector<std::uint32_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
  return out;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  check_same(*this, o);
  simd::kernels().or_into(w_.data(), o.w_.data(), w_.size());
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  check_same(*this, o);
  simd::kernels().and_into(w_.data(), o.w_.data(), w_.size());
  return *this;
}

CellSet& CellSet::operator-=(const CellSet& o) {
  check_same(*this, o);
  simd::kernels().andnot_into(w_.data(), o.w_.data(), w_.size());
  return *this;
}

CellSet CellSet::complement() const {
  CellSet s(*this);
  for (auto& w : s.w_) w = ~w;
  s.trim();
  return s;
}

bool CellSet::subset_of(const CellSet& o) const {
  check_same(*this, o);
  return simd::kernels().subset(w_.data(), o.w_.data(), w_.size());
}

bool CellSet::intersects(const CellSet& o) const {
  check_same(*this, o);
  return simd::kernels().intersects(w_.data(), o.w_.data(), w_.size());
}

bool operator==(const CellSet& a, const CellSet& b) {
  if (a.n_ != b.n_) return false;
  return simd::kernels().equal(a.w_.data(), b.w_.data(), a.w_.size());
}

bool operator<(const CellSet& a, const CellSet& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t k = a.w_.size(); k-- > 0;) {
    if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k];
  }
  return false;
}

std::size_t CellSet::hash() const noexcept {
  std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
  for (auto w : w_) {
    h ^= static_cast<std::size_t>(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string CellSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for_each([&](std::size_t i) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  });
  s += '}';
  return s;
}

}  // namespace latdyn
