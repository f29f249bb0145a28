#pragma once

#include "latdyn/cellset.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace latdyn {

inline constexpr std::size_t kDefaultLatticeCap = std::size_t{1} << 20;

/// Finite poset with its order stored as bit rows. Sets of elements
/// (down-sets in particular) are CellSets over the element indices.
class Poset {
public:
  Poset() = default;

  /// `leq` lists pairs (a, b) meaning a <= b; cover pairs suffice, the
  /// reflexive-transitive closure is computed. Throws Error(input) when the
  /// closure is not antisymmetric or ids repeat.
  Poset(std::vector<std::string> ids, const std::vector<std::pair<std::size_t, std::size_t>>& leq);

  static Poset from_id_pairs(std::vector<std::string> ids,
                             const std::vector<std::pair<std::string, std::string>>& leq);
  static Poset chain(std::size_t n);
  static Poset antichain(std::size_t n);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::optional<std::size_t> index_of(const std::string& id) const;

  bool leq(std::size_t a, std::size_t b) const { return down_[b].test(a); }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }
  bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }

  /// ↓p
  const CellSet& down(std::size_t p) const { return down_[p]; }
  /// ↑p
  const CellSet& up(std::size_t p) const { return up_[p]; }

  bool is_down_set(const CellSet& s) const;
  CellSet empty_set() const { return CellSet(size()); }
  CellSet all() const { return CellSet::full(size()); }

  /// Cover pairs (a, b): a < b with nothing strictly between. Sorted.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;

  /// Reverse order, same ids.
  Poset dual() const;

  /// Checks reflexivity, antisymmetry and transitivity of the stored matrix.
  std::optional<std::string> validate() const;

  /// "{a,b}" using element ids in index order.
  std::string label(const CellSet& s) const;

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.ids_ == b.ids_ && a.down_ == b.down_;
  }

private:
  std::vector<std::string> ids_;
  std::vector<CellSet> down_;
  std::vector<CellSet> up_;
};

/// Finite bounded lattice over element indices 0..size-1 with pluggable
/// operations (tables or callbacks).
class FiniteLattice {
public:
  using Op = std::function<std::size_t(std::size_t, std::size_t)>;

  FiniteLattice() = default;
  FiniteLattice(std::size_t n, Op join, Op meet, std::size_t bottom, std::size_t top,
                std::vector<std::string> labels = {});

  static FiniteLattice from_tables(std::vector<std::vector<std::size_t>> join,
                                   std::vector<std::vector<std::size_t>> meet, std::size_t bottom,
                                   std::size_t top, std::vector<std::string> labels = {});

  /// Lattice of sets closed under union and the given meet (default ∩).
  /// Throws Error(input) if an operation leaves the family.
  static FiniteLattice of_sets(std::vector<CellSet> elements,
                               std::function<CellSet(const CellSet&, const CellSet&)> meet = {});

  std::size_t size() const noexcept { return n_; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_(a, b); }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_(a, b); }
  std::size_t bottom() const noexcept { return bottom_; }
  std::size_t top() const noexcept { return top_; }
  bool leq(std::size_t a, std::size_t b) const { return join_(a, b) == b; }
  std::string label(std::size_t i) const;

  /// Exhaustive axiom scan; returns the first failing law, e.g.
  /// "not distributive: ...". Triples are scanned only when size^3 <= triple_cap.
  std::optional<std::string> first_axiom_failure(std::size_t triple_cap = std::size_t{1} << 24) const;
  bool is_distributive() const { return !first_axiom_failure().has_value(); }

  /// Elements strictly below c with nothing strictly between.
  std::vector<std::size_t> lower_covers(std::size_t c) const;

  /// Present for lattices built by of_sets.
  const std::vector<CellSet>& sets() const noexcept { return sets_; }

private:
  std::size_t n_ = 0;
  Op join_, meet_;
  std::size_t bottom_ = 0, top_ = 0;
  std::vector<std::string> labels_;
  std::vector<CellSet> sets_;
};

/// O(P): down-sets of P ordered by inclusion.
struct DownSetLattice {
  Poset poset;
  std::vector<CellSet> elements;  ///< enumeration order: sorted by (size, mask)
  FiniteLattice lattice;
  std::unordered_map<CellSet, std::size_t, CellSetHash> index;

  std::size_t index_of(const CellSet& s) const;
  std::size_t size() const noexcept { return elements.size(); }
};

DownSetLattice down_set_lattice(const Poset& p, std::size_t cap = kDefaultLatticeCap);

struct JoinIrreducibles {
  Poset poset;                        ///< J(L) with the order inherited from L
  std::vector<std::size_t> elements;  ///< element of L for each poset index
};

JoinIrreducibles join_irreducibles(const FiniteLattice& l);

/// Homomorphism between finite lattices given by an element table.
struct LatticeHom {
  FiniteLattice source;
  FiniteLattice target;
  std::vector<std::size_t> map;

  /// First violated law (join, meet, bounds), if any.
  std::optional<std::string> first_failure() const;
  bool injective() const;
  bool bijective() const;
};

struct BirkhoffIso {
  JoinIrreducibles irreducibles;
  DownSetLattice target;  ///< O(J(L))
  LatticeHom hom;         ///< a ↦ {c ∈ J(L) : c ≤ a}
};

/// Throws Error(input) "not distributive: ..." for non-distributive input.
BirkhoffIso birkhoff_iso(const FiniteLattice& l);

/// Unique lower cover of a join-irreducible. Throws Error(input) otherwise.
std::size_t immediate_predecessor(const FiniteLattice& l, std::size_t c);

/// V_p = l(γ) \ l(β) for γ \ β = {p}, for a map O(P) → Set given by
/// `images` aligned with `o.elements`. Throws Error(input) when choices of
/// (β, γ) disagree, blocks overlap, or the union reconstruction fails.
std::vector<CellSet> atom_decomposition(const DownSetLattice& o, const std::vector<CellSet>& images);

/// Geometric predicates on evaluations of cell sets.
struct EvaluationOps {
  /// |a| ∩ |b| ≠ ∅
  std::function<bool(const CellSet&, const CellSet&)> meets;
  /// |a| ∩ |b| ⊆ |c|
  std::function<bool(const CellSet&, const CellSet&, const CellSet&)> meet_within;
};

/// True iff |V_p| ∩ |V_p'| = ∅ for all incomparable p, p'. When true and
/// `images` is given, also asserts |l(γ)| ∩ |l(α)| = |l(γ ∩ α)| for all pairs
/// (Error(certificate) on failure).
bool is_well_separated(const Poset& p, const std::vector<CellSet>& blocks, const EvaluationOps& ev,
                       const DownSetLattice* o = nullptr,
                       const std::vector<CellSet>* images = nullptr);

/// Element indices in extension order: stable topological sort, ties by
/// ascending id.
std::vector<std::size_t> linear_extension(const Poset& p);

/// λ^⊤: the elements of λ plus a new top above all of them.
Poset lambda_top(const Poset& p, const CellSet& lambda);

/// Hasse diagram (cover relation only).
std::string hasse_dot(const Poset& p, const std::vector<std::string>& annotations = {});

}  // namespace latdyn
