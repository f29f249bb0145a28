#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace latdyn {

/// Dyadic rational with 64 fractional bits, stored as value·2^64 in a signed
/// 128-bit integer. Sums, differences, halving of even raws and integer
/// multiples are exact; range is about ±2^63.
class Dyadic {
public:
  using raw_type = __int128;
  static constexpr int kFracBits = 64;

  constexpr Dyadic() = default;
  static constexpr Dyadic from_raw(raw_type r) {
    Dyadic d;
    d.v_ = r;
    return d;
  }
  static Dyadic from_int(std::int64_t i) { return from_raw(static_cast<raw_type>(i) << kFracBits); }
  /// Exact when x is a multiple of 2^-64 in range; std::nullopt otherwise.
  static std::optional<Dyadic> exact(double x);
  /// Largest dyadic ≤ x / smallest dyadic ≥ x.
  static Dyadic down(double x);
  static Dyadic up(double x);
  /// m · 2^-e
  static Dyadic ldexp(std::int64_t m, int e);

  raw_type raw() const noexcept { return v_; }

  double to_double() const;       ///< nearest
  double to_double_down() const;  ///< largest double ≤ value
  double to_double_up() const;    ///< smallest double ≥ value
  std::string to_string() const;  ///< decimal rendering of to_double()

  friend Dyadic operator+(Dyadic a, Dyadic b) { return from_raw(a.v_ + b.v_); }
  friend Dyadic operator-(Dyadic a, Dyadic b) { return from_raw(a.v_ - b.v_); }
  friend Dyadic operator-(Dyadic a) { return from_raw(-a.v_); }
  friend Dyadic operator*(Dyadic a, std::int64_t k) { return from_raw(a.v_ * k); }
  Dyadic& operator+=(Dyadic b) {
    v_ += b.v_;
    return *this;
  }
  Dyadic& operator-=(Dyadic b) {
    v_ -= b.v_;
    return *this;
  }
  /// x/2, rounded toward -inf when the last bit is lost.
  Dyadic half_down() const { return from_raw(v_ >> 1); }
  Dyadic half_up() const { return from_raw(-((-v_) >> 1)); }
  /// x·2^-k; Error(config) if bits would be lost.
  Dyadic shr_exact(unsigned k) const;

  friend constexpr bool operator==(Dyadic a, Dyadic b) { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(Dyadic a, Dyadic b) {
    return a.v_ <=> b.v_;
  }

private:
  raw_type v_ = 0;
};

inline Dyadic min(Dyadic a, Dyadic b) { return a < b ? a : b; }
inline Dyadic max(Dyadic a, Dyadic b) { return a < b ? b : a; }
inline Dyadic abs(Dyadic a) { return a < Dyadic{} ? -a : a; }

/// Closed axis-aligned box [lo, hi] with exact endpoints; lo ≤ hi per axis
/// (degenerate boxes allowed for point and face queries).
struct Box {
  std::vector<Dyadic> lo, hi;

  Box() = default;
  Box(std::vector<Dyadic> l, std::vector<Dyadic> h);  ///< Error(input) on lo > hi or size mismatch
  static Box point(const std::vector<Dyadic>& p) { return Box(p, p); }

  std::size_t dim() const noexcept { return lo.size(); }
  bool degenerate() const;  ///< some axis has lo == hi
  double diam() const;      ///< Euclidean
  bool contains(const Box& b) const;
  friend bool operator==(const Box&, const Box&) = default;
  std::string to_string() const;
};

/// Box with double endpoints, as produced by oracles.
struct FloatBox {
  std::vector<double> lo, hi;
  std::size_t dim() const noexcept { return lo.size(); }
};

/// Outward conversion: lo rounded down, hi rounded up.
Box outward(const FloatBox& b);
/// Outward conversion to doubles.
FloatBox to_float(const Box& b);

using BoxUnion = std::vector<Box>;

/// Closed boxes share a point.
bool intersects(const Box& a, const Box& b);
/// Interiors share a point (both must be nondegenerate on every axis).
bool interiors_intersect(const Box& a, const Box& b);
std::optional<Box> intersect(const Box& a, const Box& b);
Box hull(const Box& a, const Box& b);

/// Closed sup-norm r-neighbourhood: every axis widened by r.
Box inflate(const Box& b, Dyadic r);
BoxUnion inflate(const BoxUnion& u, Dyadic r);

/// b ⊆ ⋃u, decided exactly (interval sweep in 1D, coordinate compression
/// otherwise).
bool union_contains(const BoxUnion& u, const Box& b);
bool union_contains(const BoxUnion& u, const BoxUnion& v);

bool intersects(const BoxUnion& a, const BoxUnion& b);

/// A ∩ int(B) = ∅ for regular closed box unions.
bool regularly_disjoint(const BoxUnion& a, const BoxUnion& b);

/// Sup-norm distance between closed boxes.
Dyadic distance(const Box& a, const Box& b);
/// Minimum over pairs; std::nullopt when either side is empty.
std::optional<Dyadic> distance(const BoxUnion& a, const BoxUnion& b);

/// Sup-norm Hausdorff distance. Exact in one dimension, an upper bound in
/// higher dimensions. +inf when exactly one side is empty.
double hausdorff(const BoxUnion& a, const BoxUnion& b);
/// sup_{x ∈ a} d(x, b), with the same exactness as hausdorff.
double excess(const BoxUnion& a, const BoxUnion& b);

}  // namespace latdyn
