#pragma once

#include "latdyn/combinatorial_dynamics.hpp"
#include "latdyn/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace latdyn {

/// Box-image oracle for a map f: X → X.
struct BoxImageOracle {
  std::string name;
  Box domain;                   ///< natural phase space X
  bool guaranteed = true;       ///< image boxes are rigorous enclosures
  std::optional<double> lipschitz_hint;
  /// Boxes covering f(B).
  std::function<std::vector<FloatBox>(const FloatBox&)> image;
  /// f(x), used for sampling checks and reference orbits.
  std::function<std::vector<double>(const std::vector<double>&)> point;

  std::size_t dim() const { return domain.dim(); }
};

struct FlowConfig {
  std::function<std::vector<double>(const std::vector<double>&)> field;
  double tau = 1.0;
  double step = 0.01;     ///< RK4 step (shortened to divide tau)
  double padding = 1e-3;  ///< added to every image box
};

/// Time-τ map of the flow by RK4 on corners and centre, padded; never
/// guaranteed.
BoxImageOracle time_tau_oracle(const FlowConfig& flow, Box domain, std::string name);

/// Registry: "quadratic", "logistic:a", "cubicwell:λ", "henon:a,b",
/// "flow:doublewell:τ,pad". Error(config) on unknown ids or bad parameters.
BoxImageOracle make_system(const std::string& id);
std::vector<std::string> system_ids();

/// Image boxes for one cell, converted outward and clipped to the grid
/// domain. Error(oracle) when an image leaves the domain by more than
/// rounding slack.
BoxUnion cell_image(const Grid& g, const BoxImageOracle& f, std::size_t cell);

/// F_o(ξ) = cov f(|ξ|)
MultivaluedMap minimal_map(const Grid& g, const BoxImageOracle& f);
/// F_ρ(ξ) = cov B_ρ(f(|ξ|))
MultivaluedMap rho_minimal_map(const Grid& g, const BoxImageOracle& f, double rho);

/// small(ξ) ⊆ big(ξ) for all ξ. Error(input) on size mismatch.
bool encloses(const MultivaluedMap& big, const MultivaluedMap& small);

/// f(|ξ|) ⊆ int_X |F(ξ)| for every cell, tested geometrically.
bool is_outer_approximation(const MultivaluedMap& f, const Grid& g, const BoxImageOracle& o);
/// f(|ξ|) ⊆ int_X |⋃_{n≥0} Fⁿ(ξ)| for every cell.
bool is_weak_outer_approximation(const MultivaluedMap& f, const Grid& g, const BoxImageOracle& o);

enum class Direction { forward, backward };

struct EnclosureReport {
  bool pass = true;
  bool certified = true;
  double max_excess = 0.0;  ///< max over cells of sup_{x ∈ |Fᵏ(ξ)|} d(x, fᵏ(|ξ|))
  std::vector<std::uint32_t> offending;
};

/// |F^{±k}(ξ)| ⊆ B_ε(f^{±k}(|ξ|)) per cell. Forward images use the iterated
/// oracle; backward images are sampled and the report is not certified.
EnclosureReport iterate_enclosure_check(const MultivaluedMap& f, const Grid& g, const BoxImageOracle& o,
                                        unsigned k, double eps, Direction dir = Direction::forward,
                                        std::uint64_t seed = 42);

/// (F ∧ F')(ξ ∧ ξ') on the common refinement.
MultivaluedMap common_refinement_map(const MultivaluedMap& fa, const Grid& ga, const MultivaluedMap& fb,
                                     const Grid& gb);

struct ApproxLevel {
  Grid grid;
  MultivaluedMap map;
  double rho = 0.0;
  bool squeezed = false;  ///< F_o ≤ F ≤ F_ρ verified
};

struct ApproxSequence {
  BoxImageOracle system;
  std::vector<ApproxLevel> levels;
  bool cofiltered = false;
  /// parent[n] maps cells of level n+1 to level n (cofiltered sequences).
  std::vector<std::vector<std::uint32_t>> parent;

  bool certified() const { return system.guaranteed; }
};

/// ρ_n = 2^{-n-1} for a level of depth n.
double default_rho(unsigned depth);

/// One level per depth (same depth on every axis). `rho` gives ρ per level;
/// when empty the default schedule is used. Cofiltered sequences meet each
/// level with the lifted parent map.
ApproxSequence build_sequence(const BoxImageOracle& system, const Box& domain, const std::vector<unsigned>& depths,
                              const std::vector<double>& rho = {}, bool cofiltered = false);

/// First violation of |F_{n+1}(ξ')| ⊆ |F_n(ξ)| for ξ' ⊆ ξ, if any.
std::optional<std::string> check_cofiltration(const ApproxSequence& seq);

/// W_n ∈ Invset⁻ at level n implies its refinement W_m ∈ Invset⁻ at level m.
/// Returns false when the premise holds but the conclusion fails.
bool refinement_spot_check(const ApproxSequence& seq, std::size_t n, std::size_t m, const CellSet& w_n);

}  // namespace latdyn
