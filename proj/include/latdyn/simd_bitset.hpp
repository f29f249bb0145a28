#pragma once

#include <cstddef>
#include <cstdint>

namespace latdyn::simd {

enum class Isa { scalar, avx2 };

/// Word-array kernels behind CellSet. Every variant must agree bit-for-bit
/// with the scalar reference.
struct BitKernels {
  Isa isa;
  void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
  void (*and_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
  /// dst &= ~src
  void (*andnot_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
  /// a ⊆ b
  bool (*subset)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  bool (*intersects)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  bool (*equal)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  bool (*none)(const std::uint64_t* a, std::size_t n);
  std::size_t (*popcount)(const std::uint64_t* a, std::size_t n);
};

const BitKernels& scalar_kernels() noexcept;

/// nullptr when the build or the running CPU lacks AVX2.
const BitKernels* avx2_kernels() noexcept;

/// Kernels in use. Chosen once at startup: AVX2 when the CPU supports it,
/// unless LATDYN_SIMD=scalar is set in the environment.
const BitKernels& kernels() noexcept;

Isa active_isa() noexcept;

/// Switches the active kernels. Throws std::invalid_argument if unavailable.
void select_isa(Isa isa);

const char* isa_name(Isa isa) noexcept;

}  // namespace latdyn::simd
