#include "latdyn/simd_bitset.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define LATDYN_HAVE_X86 1
#else
#define LATDYN_HAVE_X86 0
#endif

namespace latdyn::simd {
namespace {

// ---------------------------------------------------------------------------
// Scalar reference

void or_scalar(std::uint64_t* d, const std::uint64_t* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] |= s[i];
}
void and_scalar(std::uint64_t* d, const std::uint64_t* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] &= s[i];
}
void andnot_scalar(std::uint64_t* d, const std::uint64_t* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] &= ~s[i];
}
bool subset_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}
bool intersects_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] & b[i]) return true;
  return false;
}
bool equal_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}
bool none_scalar(const std::uint64_t* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i]) return false;
  return true;
}
std::size_t popcount_scalar(const std::uint64_t* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(std::popcount(a[i]));
  return c;
}

constexpr BitKernels kScalar{Isa::scalar,  or_scalar,     and_scalar,
                             andnot_scalar, subset_scalar, intersects_scalar,
                             equal_scalar,  none_scalar,   popcount_scalar};

// ---------------------------------------------------------------------------
// AVX2: 4 words per step, scalar tail

#if LATDYN_HAVE_X86
#define LATDYN_AVX2 __attribute__((target("avx2")))

LATDYN_AVX2 inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}
LATDYN_AVX2 inline void store(std::uint64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

LATDYN_AVX2 void or_avx2(std::uint64_t* d, const std::uint64_t* s, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, _mm256_or_si256(load(d + i), load(s + i)));
  for (; i < n; ++i) d[i] |= s[i];
}
LATDYN_AVX2 void and_avx2(std::uint64_t* d, const std::uint64_t* s, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, _mm256_and_si256(load(d + i), load(s + i)));
  for (; i < n; ++i) d[i] &= s[i];
}
LATDYN_AVX2 void andnot_avx2(std::uint64_t* d, const std::uint64_t* s, std::size_t n) {
  std::size_t i = 0;
  // _mm256_andnot_si256(a, b) computes ~a & b
  for (; i + 4 <= n; i += 4) store(d + i, _mm256_andnot_si256(load(s + i), load(d + i)));
  for (; i < n; ++i) d[i] &= ~s[i];
}
LATDYN_AVX2 bool subset_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i extra = _mm256_andnot_si256(load(b + i), load(a + i));
    if (!_mm256_testz_si256(extra, extra)) return false;
  }
  for (; i < n; ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}
LATDYN_AVX2 bool intersects_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    if (!_mm256_testz_si256(load(a + i), load(b + i))) return true;
  for (; i < n; ++i)
    if (a[i] & b[i]) return true;
  return false;
}
LATDYN_AVX2 bool equal_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i diff = _mm256_xor_si256(load(a + i), load(b + i));
    if (!_mm256_testz_si256(diff, diff)) return false;
  }
  for (; i < n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}
LATDYN_AVX2 bool none_avx2(const std::uint64_t* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = load(a + i);
    if (!_mm256_testz_si256(v, v)) return false;
  }
  for (; i < n; ++i)
    if (a[i]) return false;
  return true;
}

/// Nibble-table popcount (vpshufb lookup, horizontal sum via vpsadbw).
LATDYN_AVX2 std::size_t popcount_avx2(const std::uint64_t* a, std::size_t n) {
  const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = load(a + i);
    __m256i lo = _mm256_and_si256(v, low);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(table, lo), _mm256_shuffle_epi8(table, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t c = static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
  for (; i < n; ++i) c += static_cast<std::size_t>(std::popcount(a[i]));
  return c;
}

constexpr BitKernels kAvx2{Isa::avx2,  or_avx2,     and_avx2,   andnot_avx2, subset_avx2,
                           intersects_avx2, equal_avx2, none_avx2, popcount_avx2};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#else
bool cpu_has_avx2() noexcept { return false; }
#endif

const BitKernels* initial_kernels() noexcept {
  const char* env = std::getenv("LATDYN_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return &kScalar;
  if (const BitKernels* k = avx2_kernels()) return k;
  return &kScalar;
}

std::atomic<const BitKernels*>& active_slot() noexcept {
  static std::atomic<const BitKernels*> slot{initial_kernels()};
  return slot;
}

}  // namespace

const BitKernels& scalar_kernels() noexcept { return kScalar; }

const BitKernels* avx2_kernels() noexcept {
#if LATDYN_HAVE_X86
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const BitKernels& kernels() noexcept { return *active_slot().load(std::memory_order_relaxed); }

Isa active_isa() noexcept { return kernels().isa; }

void select_isa(Isa isa) {
  if (isa == Isa::scalar) {
    active_slot().store(&kScalar);
    return;
  }
  const BitKernels* k = avx2_kernels();
  if (!k) throw std::invalid_argument("AVX2 kernels unavailable on this CPU");
  active_slot().store(k);
}

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace latdyn::simd
