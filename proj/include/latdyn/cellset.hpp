#pragma once

#include <boost/container/small_vector.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace latdyn {

/// Subset of a finite index set {0, ..., universe-1}, stored as a bitset.
/// Bits past the universe are always zero.
class CellSet {
public:
  using word_type = std::uint64_t;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  CellSet() = default;
  explicit CellSet(std::size_t universe);

  static CellSet full(std::size_t universe);
  static CellSet of(std::size_t universe, std::initializer_list<std::size_t> ids);
  static CellSet from_ids(std::size_t universe, const std::vector<std::uint32_t>& ids);

  std::size_t universe() const noexcept { return n_; }
  std::size_t word_count() const noexcept { return w_.size(); }
  const word_type* data() const noexcept { return w_.data(); }
  word_type* data() noexcept { return w_.data(); }

  bool test(std::size_t i) const noexcept { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { w_[i >> 6] |= word_type{1} << (i & 63); }
  void reset(std::size_t i) noexcept { w_[i >> 6] &= ~(word_type{1} << (i & 63)); }
  void clear() noexcept;

  std::size_t count() const noexcept;
  bool empty() const noexcept;
  bool any() const noexcept { return !empty(); }

  /// First member at or after i, or npos.
  std::size_t next(std::size_t i) const noexcept;
  std::size_t first() const noexcept { return next(0); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      word_type w = w_[k];
      while (w) {
        std::size_t b = static_cast<std::size_t>(__builtin_ctzll(w));
        f(k * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::vector<std::uint32_t> ids() const;

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  /// Set difference.
  CellSet& operator-=(const CellSet& o);

  friend CellSet operator|(CellSet a, const CellSet& b) { return a |= b; }
  friend CellSet operator&(CellSet a, const CellSet& b) { return a &= b; }
  friend CellSet operator-(CellSet a, const CellSet& b) { return a -= b; }

  CellSet complement() const;
  bool subset_of(const CellSet& o) const;
  bool intersects(const CellSet& o) const;

  friend bool operator==(const CellSet& a, const CellSet& b);
  friend bool operator!=(const CellSet& a, const CellSet& b) { return !(a == b); }
  /// Total order used for deterministic containers: universe, then words
  /// from the highest index down (so it matches numeric order of masks).
  friend bool operator<(const CellSet& a, const CellSet& b);

  std::size_t hash() const noexcept;

  /// "{0,3,7}"
  std::string to_string() const;

private:
  void trim() noexcept;

  std::size_t n_ = 0;
  boost::container::small_vector<word_type, 2> w_;
};

struct CellSetHash {
  std::size_t operator()(const CellSet& s) const noexcept { return s.hash(); }
};

}  // namespace latdyn
