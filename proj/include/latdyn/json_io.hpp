#pragma once

#include "latdyn/combinatorial_dynamics.hpp"
#include "latdyn/outer_approximation.hpp"
#include "latdyn/realization_lift.hpp"

#include <json.hpp>

#include <string>

namespace latdyn {

using json = nlohmann::ordered_json;

/// {"n": N, "edges": [[u, v], ...]} with edges sorted.
json digraph_to_json(const MultivaluedMap& f);
MultivaluedMap digraph_from_json(const json& j);

/// [[lo, hi], ...] per axis; parsing rounds outward.
json box_to_json(const Box& b);
Box box_from_json(const json& j);
json box_union_to_json(const BoxUnion& u);
BoxUnion box_union_from_json(const json& j);

/// {"domain": box, "depth": [...]}
json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);

/// Sorted member ids.
json cellset_to_json(const CellSet& s);
CellSet cellset_from_json(const json& j, std::size_t universe);

/// {"elements": [ids], "covers": [[a, b], ...]} meaning a < b.
json poset_to_json(const Poset& p);
Poset poset_from_json(const json& j);

/// {"poset", "kind", "domain", "representatives": {p: box union}, "duals": {p: box union}}
/// with one representative per element of the poset (standing for ↓p).
TargetLattice target_from_json(const json& j);
json target_to_json(const TargetLattice& t);

json lift_to_json(const LiftResult& lift);
LiftResult lift_from_json(const json& j);

json lift_report_to_json(const LiftReport& r);
json diagram_report_to_json(const DiagramReport& r);
json invariant_lattice_to_json(const InvariantLattice& l);

/// Reads a JSON file; Error(input) on I/O or parse failure.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace latdyn
