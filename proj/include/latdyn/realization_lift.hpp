#pragma once

#include "latdyn/lattice_core.hpp"
#include "latdyn/outer_approximation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace latdyn {

enum class TargetKind { attractor, repeller };

/// Finite sublattice of Att(X,f) or Rep(X,f) given through its Birkhoff
/// poset: value(α) is the geometric set R(α) (or A(α)) for α ∈ O(P).
struct TargetLattice {
  TargetKind kind = TargetKind::repeller;
  Box domain;
  DownSetLattice o;
  std::vector<BoxUnion> representatives;             ///< R(↓p) as given, per poset index
  std::vector<BoxUnion> values;                      ///< aligned with o.elements
  std::vector<std::optional<BoxUnion>> dual_values;  ///< R(α)*, where known

  const Poset& poset() const { return o.poset; }
  const BoxUnion& value(const CellSet& down_set) const { return values[o.index_of(down_set)]; }

  /// Values from representatives of the join-irreducibles: R(α) = ⋃_{p∈α} R(↓p).
  /// Attractor targets with all duals get A(α)* = ⋂_{p∈α} A(↓p)* (X for α = ∅);
  /// otherwise duals are known on the principal down-sets only.
  static TargetLattice from_irreducibles(TargetKind kind, Box domain, Poset p, std::vector<BoxUnion> reps,
                                         std::vector<std::optional<BoxUnion>> duals = {});

  /// "representative not monotone: ...", "representative not injective: ...",
  /// "representative does not preserve meets: ..." (repeller targets, where ∧ = ∩).
  std::optional<std::string> validate() const;
};

/// A ↦ A* with P reversed: the dual lattice indexed by O(P^op), β ↦ A(P∖β)*.
/// Error(input) when a needed dual value is missing.
TargetLattice dual_target(const TargetLattice& t);

enum class LiftKind { invset_minus, rset, invset_plus, aset };
std::string to_string(LiftKind k);

struct LiftCertificates {
  bool c1 = false, c2 = false, c3 = false;
  bool well_separated = false;
  bool homomorphism = false;
  bool kind = false;
  std::size_t refinement_checks = 0;
  std::string failure;  ///< first failed item, empty when all pass

  bool all() const { return c1 && c2 && c3 && well_separated && homomorphism && kind; }
};

struct LiftResult {
  std::size_t level = 0;  ///< index into the sequence
  std::vector<unsigned> depth;
  DownSetLattice o;                 ///< O(P)
  std::vector<CellSet> assignment;  ///< ℓ(α), aligned with o.elements
  std::vector<CellSet> blocks;      ///< V_p, aligned with poset indices
  LiftKind kind = LiftKind::rset;
  LiftCertificates certificates;
  std::vector<double> epsilons;  ///< per poset index
  std::vector<std::size_t> order;

  const Poset& poset() const { return o.poset; }
};

struct CovAttracting {
  CellSet cells;
  bool attracting = false;
  bool repelling = false;
};

/// cov_{X_n}(U) and its classification under F_n.
CovAttracting cov_is_attracting(const ApproxSequence& seq, const BoxUnion& u, std::size_t level);
/// First level whose cover of U is attracting, if any.
std::optional<std::size_t> first_attracting_level(const ApproxSequence& seq, const BoxUnion& u);

struct RealizedLevel {
  std::size_t level = 0;
  CellSet attractor;  ///< ω(cov(B_{d/2}(A)))
  CellSet repeller;   ///< α(cov(B_{d/2}(A*)))
  bool is_attractor = false;
  bool inside = false;    ///< |𝒜| ⊆ B_d(A)
  bool contains = false;  ///< A ⊆ |𝒜|
  std::string failure;
  bool pass() const { return is_attractor && inside && contains; }
};

/// Error(config) unless d > 0 and B_d(A) misses A*.
std::vector<RealizedLevel> realize_attractor(const ApproxSequence& seq, const BoxUnion& a, const BoxUnion& a_star,
                                             double d);

/// ε-search lift into RSet at the first level where every certificate holds.
/// Error(input) for attractor targets or missing duals, Error(certificate)
/// when no level of the sequence admits a lift.
LiftResult build_lift_general(const ApproxSequence& seq, const TargetLattice& target);

/// Inductive partial lifts into Invset⁻ along a cofiltration. Error(certificate)
/// when the sequence is not a cofiltration, a transported image fails the
/// refinement check, or the levels run out.
LiftResult build_lift_cofiltration(const ApproxSequence& seq, const TargetLattice& target);

/// 𝒰 ↦ 𝒰ᶜ over O(P^op); repeller kinds become attractor kinds and back.
/// The homomorphism and kind certificates are recomputed under F.
LiftResult dualize_lift(const LiftResult& lift, const MultivaluedMap& f);

/// Attractor target: dual target, repeller lift, dualization.
LiftResult lift_attractors(const ApproxSequence& seq, const TargetLattice& target, bool cofiltered);

struct VerifyItem {
  bool pass = true;
  bool skipped = false;
  std::string detail;
};

struct LiftReport {
  VerifyItem homomorphism;  ///< (a)
  VerifyItem kind;          ///< (b)
  VerifyItem separation;    ///< (c) C1 to C3 and well-separation
  VerifyItem agreement;     ///< (d) ω/α at the reference level
  VerifyItem containment;   ///< (e) R(β) ⊆ int|ℓ(β)|
  double tolerance = 0.0;
  std::vector<double> hausdorff;  ///< per element of O(P), item (d)

  bool pass() const {
    return homomorphism.pass && kind.pass && separation.pass && agreement.pass && containment.pass;
  }
};

/// Checks (a) to (e). Without a target or reference level the geometric items
/// are skipped. `tol` defaults to 2·diam of the reference level.
LiftReport verify_lift(const LiftResult& lift, const ApproxSequence& seq, const TargetLattice* target,
                       std::optional<std::size_t> reference_level, std::optional<double> tol = {});

/// Hasse diagram of P with block sizes.
std::string lift_dot(const LiftResult& lift);

}  // namespace latdyn
