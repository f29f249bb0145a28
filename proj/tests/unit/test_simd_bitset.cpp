#include "latdyn/cellset.hpp"
#include "latdyn/simd_bitset.hpp"

#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

using namespace latdyn;

namespace {

std::vector<std::uint64_t> random_words(std::mt19937_64& rng, std::size_t n, int density) {
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) {
    x = rng();
    for (int k = 1; k < density; ++k) x &= rng();
  }
  return w;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree bit for bit") {
  const simd::BitKernels* avx = simd::avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 unavailable, equivalence test skipped");
    return;
  }
  const simd::BitKernels& sc = simd::scalar_kernels();
  std::mt19937_64 rng(42);
  // Lengths around the 4-word vector width exercise both body and tail.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 64u, 129u}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto a = random_words(rng, n, 1 + trial % 3);
      auto b = random_words(rng, n, 1 + trial % 4);
      if (trial % 5 == 0) b = a;
      if (trial % 7 == 0)
        for (std::size_t i = 0; i < n; ++i) b[i] |= a[i];

      for (auto op : {&simd::BitKernels::or_into, &simd::BitKernels::and_into, &simd::BitKernels::andnot_into}) {
        auto x = a, y = a;
        (sc.*op)(x.data(), b.data(), n);
        (avx->*op)(y.data(), b.data(), n);
        CHECK(x == y);
      }
      CHECK(sc.subset(a.data(), b.data(), n) == avx->subset(a.data(), b.data(), n));
      CHECK(sc.intersects(a.data(), b.data(), n) == avx->intersects(a.data(), b.data(), n));
      CHECK(sc.equal(a.data(), b.data(), n) == avx->equal(a.data(), b.data(), n));
      CHECK(sc.none(a.data(), n) == avx->none(a.data(), n));
      CHECK(sc.popcount(a.data(), n) == avx->popcount(a.data(), n));
    }
  }
}

TEST_CASE("cellset algebra is the same under both kernel sets") {
  std::mt19937_64 rng(7);
  auto run = [&](simd::Isa isa) {
    simd::select_isa(isa);
    std::mt19937_64 r(11);
    std::vector<std::size_t> out;
    for (int t = 0; t < 200; ++t) {
      std::size_t n = 1 + r() % 700;
      CellSet a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (r() % 3 == 0) a.set(i);
        if (r() % 2 == 0) b.set(i);
      }
      out.push_back((a | b).count());
      out.push_back((a & b).count());
      out.push_back((a - b).count());
      out.push_back(a.complement().count());
      out.push_back(a.subset_of(a | b));
      out.push_back(a.intersects(b));
      out.push_back((a & b) == (b & a));
    }
    return out;
  };
  const simd::Isa before = simd::active_isa();
  auto s = run(simd::Isa::scalar);
  if (simd::avx2_kernels()) CHECK(run(simd::Isa::avx2) == s);
  simd::select_isa(before);
}

TEST_CASE("cellset keeps bits past the universe clear") {
  for (std::size_t n : {1u, 63u, 64u, 65u, 130u}) {
    CellSet e(n);
    CellSet c = e.complement();
    CHECK(c.count() == n);
    CHECK(c == CellSet::full(n));
    CHECK(c.complement().empty());
    CHECK(c.next(n - 1) == n - 1);
  }
}

TEST_CASE("cellset boolean algebra laws on random sets") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + rng() % 300;
    CellSet a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() & 1) a.set(i);
      if (rng() & 1) b.set(i);
      if (rng() & 1) c.set(i);
    }
    CHECK((a | (b & c)) == ((a | b) & (a | c)));
    CHECK((a & (b | c)) == ((a & b) | (a & c)));
    CHECK((a | b).complement() == (a.complement() & b.complement()));
    CHECK((a - b) == (a & b.complement()));
    CHECK((a & b).subset_of(a));
    CHECK(a.intersects(b) == !(a & b).empty());
    CHECK(CellSet::from_ids(n, a.ids()) == a);
  }
}

TEST_CASE("cellset ordering matches mask order") {
  CHECK(CellSet::of(8, {0}) < CellSet::of(8, {1}));
  CHECK(CellSet::of(8, {1}) < CellSet::of(8, {0, 1}));
  CHECK(CellSet::of(100, {70}) < CellSet::of(100, {71}));
  CHECK(CellSet::of(100, {5, 6}) < CellSet::of(100, {70}));
  CHECK(CellSet::of(8, {0, 3}).to_string() == "{0,3}");
}
