#pragma once

#include "latdyn/cellset.hpp"
#include "latdyn/dyadic_geometry.hpp"
#include "latdyn/lattice_core.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace latdyn {

/// Uniform dyadic grid on a box: axis i is cut into 2^depth[i] equal closed
/// cells. Cell ids are row-major (last axis fastest).
class Grid {
public:
  Grid() = default;
  /// Error(config) when the domain is degenerate, the cell count exceeds
  /// 2^31, or cell widths fall below dyadic resolution.
  Grid(Box domain, std::vector<unsigned> depth);

  std::size_t dim() const noexcept { return depth_.size(); }
  const Box& domain() const noexcept { return domain_; }
  const std::vector<unsigned>& depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return size_; }
  std::uint64_t cells_along(std::size_t axis) const { return std::uint64_t{1} << depth_[axis]; }
  Dyadic width(std::size_t axis) const { return width_[axis]; }

  std::vector<std::uint64_t> coords(std::size_t id) const;
  std::size_t id(const std::vector<std::uint64_t>& c) const;

  Box cell(std::size_t id) const;
  /// Outward-rounded double box.
  FloatBox cell_float(std::size_t id) const;

  /// Largest Euclidean cell diameter.
  double diam() const;

  /// Cells whose closed support meets the set.
  CellSet cov(const Box& s) const;
  CellSet cov(const BoxUnion& s) const;
  CellSet cov(const FloatBox& s) const { return cov(outward(s)); }

  /// |U| as boxes; runs along the last axis are merged.
  BoxUnion evaluate(const CellSet& u) const;

  /// Cells touching some cell of U (closed neighbourhood, U included).
  CellSet dilate(const CellSet& u) const;

  /// S ⊆ int_X |U|, decided cell by cell against the complement of U.
  bool interior_contains(const CellSet& u, const Box& s) const;
  bool interior_contains(const CellSet& u, const BoxUnion& s) const;

  /// |A| ∩ |B| ≠ ∅
  bool evaluations_meet(const CellSet& a, const CellSet& b) const;
  /// |A| ∩ |B| ⊆ |C|
  bool meet_within(const CellSet& a, const CellSet& b, const CellSet& c) const;
  EvaluationOps evaluation_ops() const;

  /// Bisects the listed axes (all when empty).
  Grid refine(const std::vector<std::size_t>& axes = {}) const;

  /// True when every cell of *this lies in exactly one cell of `coarse`.
  bool refines(const Grid& coarse) const;

  CellSet empty_set() const { return CellSet(size_); }
  CellSet all() const { return CellSet::full(size_); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.domain_ == b.domain_ && a.depth_ == b.depth_;
  }

private:
  void check(const CellSet& u) const;

  Box domain_;
  std::vector<unsigned> depth_;
  std::vector<Dyadic> width_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

/// Per-axis maximum depth; Error(input) on domain mismatch.
Grid common_refinement(const Grid& a, const Grid& b);

/// parent[child id] = id of the coarse cell containing it. Error(input)
/// unless `fine` refines `coarse`.
std::vector<std::uint32_t> parent_map(const Grid& fine, const Grid& coarse);

/// Cells of `fine` lying in |U| for U over `coarse`.
CellSet lift_to(const Grid& fine, const Grid& coarse, const CellSet& u);
CellSet lift_to(const std::vector<std::uint32_t>& parent, std::size_t fine_size, const CellSet& u);

/// Coarse cells containing some cell of V.
CellSet project(const std::vector<std::uint32_t>& parent, std::size_t coarse_size, const CellSet& v);

struct Cofiltration {
  std::vector<Grid> grids;
  std::vector<std::vector<std::uint32_t>> parent;  ///< parent[n] maps level n+1 → n

  std::size_t levels() const noexcept { return grids.size(); }
  /// diam strictly decreasing along the sequence.
  bool contracting() const;
};

/// Levels at the given depths (one depth per level, all axes). Error(config)
/// when depths are not strictly increasing.
Cofiltration make_cofiltration(const Box& domain, const std::vector<unsigned>& depths);

}  // namespace latdyn
