#pragma once

#include "latdyn/realization_lift.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace latdyn::testing {

inline Box closed(double lo, double hi) { return Box({Dyadic::down(lo)}, {Dyadic::up(hi)}); }

/// Double-well map x + 0.4x(1-x²) on [-2,2]: fixed points -1, 0, 1 and the
/// escape points ±sqrt(3.5) of the boundary. Attractors {-1}, {1} below [-1,1].
inline TargetLattice doublewell_target() {
  const double r_lo = 1.87082869, r_hi = 1.8708287;  // sqrt(3.5), bracketed
  Poset p = Poset::from_id_pairs({"m", "p", "g"}, {{"m", "g"}, {"p", "g"}});
  std::vector<BoxUnion> reps{{closed(-1, -1)}, {closed(1, 1)}, {closed(-1, 1)}};
  std::vector<std::optional<BoxUnion>> duals{
      BoxUnion{closed(-2, -r_lo), closed(0, r_hi)},
      BoxUnion{closed(-r_hi, 0), closed(r_lo, 2)},
      BoxUnion{},
  };
  return TargetLattice::from_irreducibles(TargetKind::attractor, closed(-2, 2), p, reps, duals);
}

/// Period-2 orbit of the logistic map with parameter a, from 10³ iterations.
inline std::vector<double> logistic_orbit(double a, double x = 0.3) {
  for (int i = 0; i < 1000; ++i) x = a * x * (1 - x);
  double y = a * x * (1 - x);
  return {std::min(x, y), std::max(x, y)};
}

/// Dual repeller of the period-2 attractor of the logistic map with a in
/// (3, 1+sqrt 6): the closure of all preimages of 0 and of the interior
/// fixed point. Preimages within `tail` of 0 or 1 are absorbed into two end
/// intervals, which are themselves closed under preimages.
inline BoxUnion logistic_dual_repeller(double a, double tail = 0.01) {
  BoxUnion out{closed(0, tail), closed(1 - tail, 1)};
  std::vector<double> todo{1 - 1 / a};
  std::set<double> seen;
  while (!todo.empty()) {
    double y = todo.back();
    todo.pop_back();
    if (y <= tail || y >= 1 - tail || !seen.insert(y).second) continue;
    out.push_back(closed(y, y));
    double disc = 1 - 4 * y / a;
    if (disc < 0) continue;
    double s = std::sqrt(disc);
    todo.push_back((1 - s) / 2);
    todo.push_back((1 + s) / 2);
  }
  return out;
}

}  // namespace latdyn::testing
