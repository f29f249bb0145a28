#pragma once

#include "latdyn/cellset.hpp"
#include "latdyn/lattice_core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace latdyn {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Combinatorial multivalued map F: X ⇉ X on vertices 0..n-1, stored as
/// forward and reverse CSR adjacency. Immutable after construction.
class MultivaluedMap {
public:
  MultivaluedMap() = default;
  /// Duplicate edges are dropped. Throws Error(input) on out-of-range ids.
  MultivaluedMap(std::size_t n, std::vector<Edge> edges);

  static MultivaluedMap identity(std::size_t n);
  /// rows[v] = F(v).
  static MultivaluedMap from_images(const std::vector<CellSet>& rows);

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return fwd_.size(); }

  std::span<const std::uint32_t> successors(std::size_t v) const {
    return {fwd_.data() + fwd_off_[v], fwd_.data() + fwd_off_[v + 1]};
  }
  std::span<const std::uint32_t> predecessors(std::size_t v) const {
    return {rev_.data() + rev_off_[v], rev_.data() + rev_off_[v + 1]};
  }

  /// F(U)
  CellSet image(const CellSet& u) const;
  /// F⁻¹(U) = { v : F(v) ∩ U ≠ ∅ }
  CellSet preimage(const CellSet& u) const;
  CellSet image_of(std::size_t v) const;

  /// Vertices lying on a cycle (including self-loops).
  const CellSet& recurrent() const noexcept { return recurrent_; }

  /// Sorted (from, to) pairs.
  std::vector<Edge> edges() const;

  /// Reverse adjacency is the exact transpose of the forward one.
  bool consistent() const;

  friend bool operator==(const MultivaluedMap& a, const MultivaluedMap& b) {
    return a.n_ == b.n_ && a.fwd_off_ == b.fwd_off_ && a.fwd_ == b.fwd_;
  }

private:
  friend MultivaluedMap inverse(const MultivaluedMap& f);
  void compute_recurrent();

  std::size_t n_ = 0;
  std::vector<std::uint32_t> fwd_off_{0}, fwd_, rev_off_{0}, rev_;
  CellSet recurrent_;
};

MultivaluedMap inverse(const MultivaluedMap& f);

struct Totality {
  bool left_total = false;
  bool right_total = false;
};
Totality totality(const MultivaluedMap& f);

/// ⋃_{n≥0} Fⁿ(U)
CellSet forward_closure(const MultivaluedMap& f, const CellSet& u);
CellSet backward_closure(const MultivaluedMap& f, const CellSet& u);

/// ω(U) = ⋂_k ⋃_{n≥k} Fⁿ(U), computed as the forward closure of the
/// recurrent vertices reachable from U.
CellSet omega(const MultivaluedMap& f, const CellSet& u);
CellSet alpha(const MultivaluedMap& f, const CellSet& u);

/// Reference: G₀ = forward closure, G_{k+1} = F(G_k) until fixed. `steps`
/// receives the number of contractions (at most |X|).
CellSet omega_iterative(const MultivaluedMap& f, const CellSet& u, std::size_t* steps = nullptr);
CellSet alpha_iterative(const MultivaluedMap& f, const CellSet& u, std::size_t* steps = nullptr);

struct Classification {
  bool forward_invariant = false;   ///< F(U) ⊆ U
  bool backward_invariant = false;  ///< F⁻¹(U) ⊆ U
  bool attracting = false;          ///< ω(U) ⊆ U
  bool repelling = false;           ///< α(U) ⊆ U
  bool attractor = false;           ///< F(U) = U
  bool repeller = false;            ///< F⁻¹(U) = U
};
Classification classify(const MultivaluedMap& f, const CellSet& u);

/// Smallest k ≥ 1 with Fⁿ(U) ⊆ U for all k ≤ n ≤ 2k, searching k ≤ |X|+1.
std::optional<std::size_t> char_attset(const MultivaluedMap& f, const CellSet& u);

bool is_attractor(const MultivaluedMap& f, const CellSet& a);
bool is_repeller(const MultivaluedMap& f, const CellSet& r);

struct CondensationDag {
  std::vector<std::uint32_t> scc_of;
  std::vector<CellSet> components;  ///< topological order: edges go from lower to higher index
  std::vector<bool> recurrent;
  std::vector<std::vector<std::uint32_t>> dag_edges;
};
CondensationDag condensation(const MultivaluedMap& f);

enum class InvariantKind { attractor, repeller };

/// Att or Rep represented by the poset of its join-irreducibles.
struct InvariantLattice {
  InvariantKind kind = InvariantKind::attractor;
  std::size_t universe = 0;
  Poset poset;                       ///< ids "A0".. / "R0".., ordered by inclusion
  std::vector<CellSet> irreducibles; ///< aligned with poset indices

  /// Union of the irreducibles in a down-set.
  CellSet element(const CellSet& down_set) const;
  /// {p : irreducible p ⊆ a}
  CellSet down_set_of(const CellSet& a) const;
  /// Every element, aligned with down_set_lattice(poset).elements.
  std::vector<CellSet> materialize(std::size_t cap = kDefaultLatticeCap) const;
};

InvariantLattice att_lattice(const MultivaluedMap& f);
InvariantLattice rep_lattice(const MultivaluedMap& f);

/// Lattice operations; throw Error(input) when an argument is not of the class.
CellSet att_meet(const MultivaluedMap& f, const CellSet& a, const CellSet& b);
CellSet att_join(const MultivaluedMap& f, const CellSet& a, const CellSet& b);
CellSet rep_meet(const MultivaluedMap& f, const CellSet& a, const CellSet& b);
CellSet rep_join(const MultivaluedMap& f, const CellSet& a, const CellSet& b);

/// A* = α(Aᶜ)
CellSet dual_repeller(const MultivaluedMap& f, const CellSet& a);
/// R* = ω(Rᶜ)
CellSet dual_attractor(const MultivaluedMap& f, const CellSet& r);

/// Exhaustive scans over all 2^n subsets; Error(cap) when n > cap.
std::vector<CellSet> brute_force_attractors(const MultivaluedMap& f, std::size_t cap = 16);
std::vector<CellSet> brute_force_repellers(const MultivaluedMap& f, std::size_t cap = 16);

struct DiagramReport {
  bool ok = true;
  std::string failure;  ///< first failing face with a counterexample
  std::size_t invset_plus = 0, invset_minus = 0, aset = 0, rset = 0, att = 0, rep = 0;
  std::size_t pairs_checked = 0;
};

/// Checks every face of the Invset/ASet/Att diagram by enumerating subsets.
/// Pairs for the homomorphism faces are exhaustive when they fit in
/// `pair_budget`, otherwise sampled with `seed`.
DiagramReport check_diagram_six(const MultivaluedMap& f, std::size_t cap = 16,
                                std::size_t pair_budget = 1u << 16, std::uint64_t seed = 42);

std::string to_dot(const MultivaluedMap& f);
std::string condensation_dot(const MultivaluedMap& f);

}  // namespace latdyn
