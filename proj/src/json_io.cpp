#include "latdyn/json_io.hpp"

#include "latdyn/errors.hpp"

#include <fstream>
#include <sstream>

namespace latdyn {

namespace {

template <class F>
auto guarded(const char* what, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::input, std::string(what) + ": " + e.what());
  }
}

std::string kind_name(TargetKind k) { return k == TargetKind::attractor ? "attractor" : "repeller"; }

LiftKind lift_kind_from(const std::string& s) {
  for (LiftKind k : {LiftKind::invset_minus, LiftKind::rset, LiftKind::invset_plus, LiftKind::aset})
    if (to_string(k) == s) return k;
  fail(ErrorKind::input, "unknown lift kind '" + s + "'");
}

CellSet down_set_from_ids(const Poset& p, const json& ids) {
  CellSet s = p.empty_set();
  for (const auto& id : ids) {
    auto i = p.index_of(id.get<std::string>());
    if (!i) fail(ErrorKind::input, "unknown poset element '" + id.get<std::string>() + "'");
    s.set(*i);
  }
  return s;
}

json ids_of(const Poset& p, const CellSet& s) {
  json a = json::array();
  s.for_each([&](std::size_t i) { a.push_back(p.id(i)); });
  return a;
}

json item_to_json(const VerifyItem& v) {
  return json{{"pass", v.pass}, {"skipped", v.skipped}, {"detail", v.detail}};
}

}  // namespace

json digraph_to_json(const MultivaluedMap& f) {
  json edges = json::array();
  for (auto [u, v] : f.edges()) edges.push_back({u, v});
  return json{{"n", f.size()}, {"edges", edges}};
}

MultivaluedMap digraph_from_json(const json& j) {
  return guarded("digraph", [&] {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) fail(ErrorKind::input, "digraph: edges must be [from, to] pairs");
      edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
    }
    return MultivaluedMap(j.at("n").get<std::size_t>(), std::move(edges));
  });
}

json box_to_json(const Box& b) {
  json a = json::array();
  for (std::size_t i = 0; i < b.dim(); ++i) a.push_back({b.lo[i].to_double(), b.hi[i].to_double()});
  return a;
}

Box box_from_json(const json& j) {
  return guarded("box", [&] {
    std::vector<Dyadic> lo, hi;
    for (const auto& ax : j) {
      if (!ax.is_array() || ax.size() != 2) fail(ErrorKind::input, "box: each axis must be [lo, hi]");
      lo.push_back(Dyadic::down(ax[0].get<double>()));
      hi.push_back(Dyadic::up(ax[1].get<double>()));
    }
    return Box(std::move(lo), std::move(hi));
  });
}

json box_union_to_json(const BoxUnion& u) {
  json a = json::array();
  for (const Box& b : u) a.push_back(box_to_json(b));
  return a;
}

BoxUnion box_union_from_json(const json& j) {
  BoxUnion u;
  if (!j.is_array()) fail(ErrorKind::input, "box union must be an array of boxes");
  for (const auto& b : j) u.push_back(box_from_json(b));
  return u;
}

json grid_to_json(const Grid& g) { return json{{"domain", box_to_json(g.domain())}, {"depth", g.depth()}}; }

Grid grid_from_json(const json& j) {
  return guarded("grid", [&] { return Grid(box_from_json(j.at("domain")), j.at("depth").get<std::vector<unsigned>>()); });
}

json cellset_to_json(const CellSet& s) { return json(s.ids()); }

CellSet cellset_from_json(const json& j, std::size_t universe) {
  return guarded("cell set", [&] {
    CellSet s(universe);
    for (const auto& v : j) {
      auto i = v.get<std::size_t>();
      if (i >= universe) fail(ErrorKind::input, "cell id " + std::to_string(i) + " out of range");
      s.set(i);
    }
    return s;
  });
}

json poset_to_json(const Poset& p) {
  json covers = json::array();
  for (auto [a, b] : p.covers()) covers.push_back({p.id(a), p.id(b)});
  return json{{"elements", p.ids()}, {"covers", covers}};
}

Poset poset_from_json(const json& j) {
  return guarded("poset", [&] {
    std::vector<std::pair<std::string, std::string>> leq;
    for (const auto& c : j.at("covers")) {
      if (!c.is_array() || c.size() != 2) fail(ErrorKind::input, "poset: covers must be [lower, upper] pairs");
      leq.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
    }
    return Poset::from_id_pairs(j.at("elements").get<std::vector<std::string>>(), leq);
  });
}

TargetLattice target_from_json(const json& j) {
  return guarded("target", [&] {
    Poset p = poset_from_json(j.at("poset"));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "attractor" && kind != "repeller") fail(ErrorKind::input, "target kind must be attractor or repeller");
    Box domain = box_from_json(j.at("domain"));
    const json& reps = j.at("representatives");
    std::vector<BoxUnion> r;
    std::vector<std::optional<BoxUnion>> d;
    const bool has_duals = j.contains("duals");
    for (const auto& id : p.ids()) {
      if (!reps.contains(id)) fail(ErrorKind::input, "target: no representative for '" + id + "'");
      r.push_back(box_union_from_json(reps.at(id)));
      if (has_duals && j.at("duals").contains(id))
        d.emplace_back(box_union_from_json(j.at("duals").at(id)));
      else
        d.emplace_back(std::nullopt);
    }
    for (auto it = reps.begin(); it != reps.end(); ++it)
      if (!p.index_of(it.key())) fail(ErrorKind::input, "target: representative for unknown element '" + it.key() + "'");
    return TargetLattice::from_irreducibles(kind == "attractor" ? TargetKind::attractor : TargetKind::repeller,
                                            std::move(domain), std::move(p), std::move(r),
                                            has_duals ? std::move(d) : std::vector<std::optional<BoxUnion>>{});
  });
}

json target_to_json(const TargetLattice& t) {
  const Poset& p = t.poset();
  json reps = json::object(), duals = json::object();
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t k = t.o.index_of(p.down(i));
    reps[p.id(i)] = box_union_to_json(i < t.representatives.size() ? t.representatives[i] : t.values[k]);
    if (t.dual_values[k]) duals[p.id(i)] = box_union_to_json(*t.dual_values[k]);
  }
  json j{{"poset", poset_to_json(p)}, {"kind", kind_name(t.kind)}, {"domain", box_to_json(t.domain)},
         {"representatives", reps}};
  if (!duals.empty()) j["duals"] = duals;
  return j;
}

json lift_to_json(const LiftResult& lift) {
  const Poset& p = lift.poset();
  json assignment = json::array();
  for (std::size_t i = 0; i < lift.o.size(); ++i)
    assignment.push_back(json{{"down_set", ids_of(p, lift.o.elements[i])}, {"cells", cellset_to_json(lift.assignment[i])}});
  json blocks = json::object(), eps = json::object();
  for (std::size_t i = 0; i < p.size(); ++i) {
    blocks[p.id(i)] = cellset_to_json(lift.blocks[i]);
    eps[p.id(i)] = lift.epsilons[i];
  }
  json order = json::array();
  for (std::size_t i : lift.order) order.push_back(p.id(i));
  const auto& c = lift.certificates;
  json cert{{"C1", c.c1},
            {"C2", c.c2},
            {"C3", c.c3},
            {"well_separated", c.well_separated},
            {"homomorphism", c.homomorphism},
            {"kind", c.kind},
            {"refinement_checks", c.refinement_checks},
            {"failure", c.failure}};
  return json{{"level", lift.level},     {"depth", lift.depth},   {"cells", lift.assignment.empty() ? 0 : lift.assignment[0].universe()},
              {"kind", to_string(lift.kind)}, {"poset", poset_to_json(p)}, {"order", order},
              {"epsilons", eps},         {"blocks", blocks},      {"assignment", assignment},
              {"certificates", cert}};
}

LiftResult lift_from_json(const json& j) {
  return guarded("lift", [&] {
    LiftResult r;
    r.level = j.at("level").get<std::size_t>();
    r.depth = j.at("depth").get<std::vector<unsigned>>();
    const std::size_t cells = j.at("cells").get<std::size_t>();
    r.kind = lift_kind_from(j.at("kind").get<std::string>());
    r.o = down_set_lattice(poset_from_json(j.at("poset")));
    const Poset& p = r.poset();
    for (const auto& id : j.at("order")) {
      auto i = p.index_of(id.get<std::string>());
      if (!i) fail(ErrorKind::input, "lift: unknown element in order");
      r.order.push_back(*i);
    }
    r.blocks.assign(p.size(), CellSet(cells));
    r.epsilons.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      r.blocks[i] = cellset_from_json(j.at("blocks").at(p.id(i)), cells);
      r.epsilons[i] = j.at("epsilons").at(p.id(i)).get<double>();
    }
    r.assignment.assign(r.o.size(), CellSet(cells));
    std::vector<bool> seen(r.o.size(), false);
    for (const auto& e : j.at("assignment")) {
      CellSet ds = down_set_from_ids(p, e.at("down_set"));
      if (!p.is_down_set(ds)) fail(ErrorKind::input, "lift: " + p.label(ds) + " is not a down-set");
      std::size_t k = r.o.index_of(ds);
      r.assignment[k] = cellset_from_json(e.at("cells"), cells);
      seen[k] = true;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) fail(ErrorKind::input, "lift: no image for " + p.label(r.o.elements[k]));
    const json& c = j.at("certificates");
    r.certificates.c1 = c.at("C1").get<bool>();
    r.certificates.c2 = c.at("C2").get<bool>();
    r.certificates.c3 = c.at("C3").get<bool>();
    r.certificates.well_separated = c.at("well_separated").get<bool>();
    r.certificates.homomorphism = c.at("homomorphism").get<bool>();
    r.certificates.kind = c.at("kind").get<bool>();
    r.certificates.refinement_checks = c.at("refinement_checks").get<std::size_t>();
    r.certificates.failure = c.at("failure").get<std::string>();
    return r;
  });
}

json lift_report_to_json(const LiftReport& r) {
  return json{{"pass", r.pass()},
              {"homomorphism", item_to_json(r.homomorphism)},
              {"kind", item_to_json(r.kind)},
              {"separation", item_to_json(r.separation)},
              {"agreement", item_to_json(r.agreement)},
              {"containment", item_to_json(r.containment)},
              {"tolerance", r.tolerance},
              {"hausdorff", r.hausdorff}};
}

json diagram_report_to_json(const DiagramReport& r) {
  return json{{"pass", r.ok},
              {"failure", r.failure},
              {"counts",
               {{"Invset+", r.invset_plus},
                {"Invset-", r.invset_minus},
                {"ASet", r.aset},
                {"RSet", r.rset},
                {"Att", r.att},
                {"Rep", r.rep}}},
              {"pairs_checked", r.pairs_checked}};
}

json invariant_lattice_to_json(const InvariantLattice& l) {
  json irr = json::object();
  for (std::size_t i = 0; i < l.poset.size(); ++i) irr[l.poset.id(i)] = cellset_to_json(l.irreducibles[i]);
  return json{{"kind", l.kind == InvariantKind::attractor ? "attractor" : "repeller"},
              {"poset", poset_to_json(l.poset)},
              {"irreducibles", irr}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::input, "'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::input, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::input, "write to '" + path + "' failed");
}

}  // namespace latdyn
