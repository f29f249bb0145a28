// latdyn: approximations, lattices, lifts and their verification from the
// command line. Exit codes: 0 ok, 1 bad input data, 2 config, 3 oracle,
// 4 cap exceeded, 5 certificate failure.

#include "latdyn/combinatorial_dynamics.hpp"
#include "latdyn/errors.hpp"
#include "latdyn/json_io.hpp"
#include "latdyn/outer_approximation.hpp"
#include "latdyn/realization_lift.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

using namespace latdyn;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string system;
  std::string domain;
  std::vector<unsigned> depths;
  std::vector<double> rho;
  bool cofiltered = false;
  std::string target;
  std::optional<unsigned> reference_depth;
  std::optional<double> tol;
  std::string out = "out";
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string input;
  std::string lift;
  std::size_t cap = 1u << 16;
  std::size_t random = 0;
  std::size_t max_vertices = 8;
};

Box parse_domain(const std::string& text) {
  std::vector<Dyadic> lo, hi;
  std::stringstream axes(text);
  std::string axis;
  while (std::getline(axes, axis, ';')) {
    auto comma = axis.find(',');
    if (comma == std::string::npos) fail(ErrorKind::config, "domain axis must be lo,hi: '" + axis + "'");
    try {
      lo.push_back(Dyadic::down(std::stod(axis.substr(0, comma))));
      hi.push_back(Dyadic::up(std::stod(axis.substr(comma + 1))));
    } catch (const std::logic_error&) {
      fail(ErrorKind::config, "bad domain axis '" + axis + "'");
    }
  }
  if (lo.empty()) fail(ErrorKind::config, "empty domain");
  try {
    return Box(lo, hi);
  } catch (const Error& e) {
    fail(ErrorKind::config, e.what());
  }
}

struct Built {
  ApproxSequence seq;
  Box domain;
  std::vector<unsigned> depths;
  std::vector<double> rho;
};

Built build(const Options& o, std::optional<unsigned> extra_depth = {}) {
  if (o.system.empty()) fail(ErrorKind::config, "--system is required");
  if (o.depths.empty()) fail(ErrorKind::config, "--depths is required");
  BoxImageOracle sys = make_system(o.system);
  Built b;
  b.domain = o.domain.empty() ? sys.domain : parse_domain(o.domain);
  if (b.domain.dim() != sys.dim()) fail(ErrorKind::config, "domain dimension does not match the system");
  b.depths = o.depths;
  if (!std::is_sorted(b.depths.begin(), b.depths.end()) ||
      std::adjacent_find(b.depths.begin(), b.depths.end()) != b.depths.end())
    fail(ErrorKind::config, "depths must be strictly increasing");
  if (o.rho.size() > 1 && o.rho.size() != o.depths.size())
    fail(ErrorKind::config, "--rho takes one value or one per depth");
  for (double r : o.rho)
    if (!(r > 0)) fail(ErrorKind::config, "rho must be positive");
  for (std::size_t i = 0; i < b.depths.size() && !o.rho.empty(); ++i)
    b.rho.push_back(o.rho.size() == 1 ? o.rho[0] : o.rho[i]);
  if (extra_depth && std::find(b.depths.begin(), b.depths.end(), *extra_depth) == b.depths.end()) {
    if (*extra_depth < b.depths.back()) fail(ErrorKind::config, "--reference-depth must be at least the finest depth");
    b.depths.push_back(*extra_depth);
    if (!b.rho.empty()) b.rho.push_back(default_rho(*extra_depth));
  }
  b.seq = build_sequence(sys, b.domain, b.depths, b.rho, o.cofiltered);
  return b;
}

json provenance(const Options& o, const Built& b) {
  std::vector<double> rho;
  for (const auto& lv : b.seq.levels) rho.push_back(lv.rho);
  json p{{"system", o.system},     {"domain", box_to_json(b.domain)}, {"depths", b.depths},
         {"rho", rho},             {"cofiltered", o.cofiltered},      {"guaranteed", b.seq.certified()},
         {"seed", o.seed}};
  if (o.reference_depth) p["reference_depth"] = *o.reference_depth;
  if (o.tol) p["tol"] = *o.tol;
  return p;
}

void emit(const Options& o, const std::string& name, const std::string& text) {
  fs::create_directories(o.out);
  write_text_file((fs::path(o.out) / name).string(), text);
}

std::string dumps(const json& j) { return j.dump(2) + "\n"; }

int cmd_approx(const Options& o) {
  Built b = build(o);
  std::size_t squeezed = 0;
  for (const auto& lv : b.seq.levels) {
    const std::string stem = "level_" + std::to_string(lv.grid.depth()[0]);
    squeezed += lv.squeezed;
    if (o.format == "dot") {
      emit(o, stem + ".dot", to_dot(lv.map));
      continue;
    }
    json j{{"system", o.system},
           {"grid", grid_to_json(lv.grid)},
           {"rho", lv.rho},
           {"guaranteed", b.seq.certified()},
           {"squeezed", lv.squeezed},
           {"left_total", totality(lv.map).left_total},
           {"map", digraph_to_json(lv.map)}};
    emit(o, stem + ".json", dumps(j));
  }
  if (o.cofiltered) {
    if (auto why = check_cofiltration(b.seq)) fail(ErrorKind::certificate, "cofiltration check failed: " + *why);
  }
  std::cout << "approx: system=" << o.system << " levels=" << b.seq.levels.size()
            << " cells=" << b.seq.levels.back().grid.size() << " squeezed=" << squeezed << "/"
            << b.seq.levels.size() << (b.seq.certified() ? "" : " (heuristic oracle)") << "\n";
  return 0;
}

MultivaluedMap load_map(const Options& o, std::string& source) {
  if (!o.input.empty()) {
    source = o.input;
    return digraph_from_json(read_json_file(o.input));
  }
  Built b = build(o);
  source = o.system + "@" + std::to_string(b.depths.back());
  return b.seq.levels.back().map;
}

int cmd_attractors(const Options& o) {
  std::string source;
  MultivaluedMap f = load_map(o, source);
  InvariantLattice att = att_lattice(f);
  InvariantLattice rep = rep_lattice(f);
  std::vector<CellSet> elems = att.materialize(o.cap);
  json pairs = json::array();
  for (const CellSet& a : elems)
    pairs.push_back(json{{"attractor", cellset_to_json(a)}, {"dual_repeller", cellset_to_json(dual_repeller(f, a))}});
  if (o.format == "dot") {
    emit(o, "att.dot", hasse_dot(att.poset));
    emit(o, "rep.dot", hasse_dot(rep.poset));
  } else {
    json j{{"source", source},
           {"vertices", f.size()},
           {"att", invariant_lattice_to_json(att)},
           {"rep", invariant_lattice_to_json(rep)},
           {"duals", pairs}};
    emit(o, "attractors.json", dumps(j));
  }
  std::cout << "attractors: source=" << source << " att_irreducibles=" << att.poset.size()
            << " rep_irreducibles=" << rep.poset.size() << " lattice_size=" << elems.size() << "\n";
  return 0;
}

std::optional<std::size_t> level_of(const ApproxSequence& seq, std::optional<unsigned> depth) {
  if (!depth) return std::nullopt;
  for (std::size_t i = 0; i < seq.levels.size(); ++i)
    if (seq.levels[i].grid.depth()[0] == *depth) return i;
  return std::nullopt;
}

int cmd_lift(const Options& o) {
  if (o.target.empty()) fail(ErrorKind::config, "--target is required");
  TargetLattice target = target_from_json(read_json_file(o.target));
  Built b = build(o, o.reference_depth);
  if (!(target.domain == b.domain)) fail(ErrorKind::config, "target domain differs from the grid domain");
  LiftResult lift = target.kind == TargetKind::attractor
                        ? lift_attractors(b.seq, target, o.cofiltered)
                        : (o.cofiltered ? build_lift_cofiltration(b.seq, target) : build_lift_general(b.seq, target));
  LiftReport rep = verify_lift(lift, b.seq, &target, level_of(b.seq, o.reference_depth), o.tol);
  if (o.format == "dot") {
    emit(o, "lift.dot", lift_dot(lift));
  } else {
    json j = lift_to_json(lift);
    j["provenance"] = provenance(o, b);
    j["report"] = lift_report_to_json(rep);
    emit(o, "lift.json", dumps(j));
  }
  const bool ok = lift.certificates.all() && rep.pass();
  std::cout << "lift: kind=" << to_string(lift.kind) << " depth=" << lift.depth[0]
            << " elements=" << lift.o.size() << " certificates=" << (lift.certificates.all() ? "pass" : "fail")
            << " verify=" << (rep.pass() ? "pass" : "fail") << "\n";
  if (!ok) {
    std::string why = !lift.certificates.failure.empty() ? lift.certificates.failure : "verification failed";
    for (const VerifyItem* it : {&rep.homomorphism, &rep.kind, &rep.separation, &rep.agreement, &rep.containment})
      if (!it->pass) {
        why = it->detail;
        break;
      }
    fail(ErrorKind::certificate, why);
  }
  return 0;
}

MultivaluedMap random_digraph(std::mt19937_64& rng, std::size_t n) {
  std::vector<Edge> edges;
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  std::bernoulli_distribution coin(0.3);
  for (std::uint32_t u = 0; u < n; ++u) {
    edges.emplace_back(u, pick(rng));
    for (std::uint32_t v = 0; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  }
  return MultivaluedMap(n, std::move(edges));
}

int cmd_verify(const Options& o) {
  if (!o.lift.empty()) {
    json j = read_json_file(o.lift);
    LiftResult lift = lift_from_json(j);
    if (!j.contains("provenance")) fail(ErrorKind::input, "lift file has no provenance");
    const json& p = j.at("provenance");
    Options q = o;
    try {
      q.system = p.at("system").get<std::string>();
      q.depths = p.at("depths").get<std::vector<unsigned>>();
      q.rho = p.at("rho").get<std::vector<double>>();
      q.cofiltered = p.at("cofiltered").get<bool>();
      if (p.contains("reference_depth")) q.reference_depth = p.at("reference_depth").get<unsigned>();
      if (p.contains("tol") && !o.tol) q.tol = p.at("tol").get<double>();
      Box d = box_from_json(p.at("domain"));
      std::ostringstream dom;
      dom.precision(17);
      for (std::size_t i = 0; i < d.dim(); ++i)
        dom << (i ? ";" : "") << d.lo[i].to_double() << "," << d.hi[i].to_double();
      q.domain = dom.str();
    } catch (const json::exception& e) {
      fail(ErrorKind::input, std::string("provenance: ") + e.what());
    }
    if (o.reference_depth) q.reference_depth = o.reference_depth;
    Built b = build(q, q.reference_depth);
    std::optional<TargetLattice> target;
    if (!o.target.empty()) {
      target = target_from_json(read_json_file(o.target));
      const bool lift_attr = lift.kind == LiftKind::aset || lift.kind == LiftKind::invset_plus;
      if (lift_attr != (target->kind == TargetKind::attractor)) target = dual_target(*target);
    }
    LiftReport rep = verify_lift(lift, b.seq, target ? &*target : nullptr, level_of(b.seq, q.reference_depth), q.tol);
    json out = lift_report_to_json(rep);
    emit(o, "verify.json", dumps(out));
    std::vector<std::string> failed;
    const std::pair<const char*, const VerifyItem*> items[] = {{"homomorphism", &rep.homomorphism},
                                                               {"kind", &rep.kind},
                                                               {"separation", &rep.separation},
                                                               {"agreement", &rep.agreement},
                                                               {"containment", &rep.containment}};
    for (auto [name, it] : items)
      if (!it->pass) failed.push_back(std::string(name) + " (" + it->detail + ")");
    std::cout << "verify: lift=" << o.lift << " " << (failed.empty() ? "pass" : "fail");
    for (const auto& f : failed) std::cout << " " << f;
    std::cout << "\n";
    return failed.empty() ? 0 : static_cast<int>(ErrorKind::certificate);
  }

  std::vector<std::pair<std::string, MultivaluedMap>> maps;
  if (!o.input.empty()) maps.emplace_back(o.input, digraph_from_json(read_json_file(o.input)));
  if (o.random > 0) {
    if (o.max_vertices == 0) fail(ErrorKind::config, "--max-vertices must be positive");
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<std::size_t> size(1, o.max_vertices);
    for (std::size_t i = 0; i < o.random; ++i) maps.emplace_back("random#" + std::to_string(i), random_digraph(rng, size(rng)));
  }
  if (maps.empty()) fail(ErrorKind::config, "verify needs --input, --random or --lift");
  json reports = json::array();
  std::size_t failed = 0;
  std::string first;
  for (const auto& [name, f] : maps) {
    DiagramReport r = check_diagram_six(f, 16, 1u << 16, o.seed);
    std::vector<CellSet> att = att_lattice(f).materialize(o.cap);
    std::vector<CellSet> brute = brute_force_attractors(f);
    std::sort(att.begin(), att.end());
    std::sort(brute.begin(), brute.end());
    bool ok = r.ok && att == brute;
    if (!ok) {
      ++failed;
      if (first.empty()) first = name + ": " + (r.ok ? std::string("att_lattice differs from brute force") : r.failure);
    }
    json j = diagram_report_to_json(r);
    j["source"] = name;
    j["att_matches_brute_force"] = att == brute;
    j["pass"] = ok;
    if (name.rfind("random#", 0) == 0) j["map"] = digraph_to_json(f);
    reports.push_back(j);
  }
  emit(o, "verify.json", dumps(json{{"pass", failed == 0}, {"seed", o.seed}, {"reports", reports}}));
  std::cout << "verify: digraphs=" << maps.size() << " " << (failed == 0 ? "pass" : "fail");
  if (failed) std::cout << " failures=" << failed << " first=" << first;
  std::cout << "\n";
  return failed == 0 ? 0 : static_cast<int>(ErrorKind::certificate);
}

void add_common(CLI::App* c, Options& o) {
  c->add_option("--system", o.system, "System id: quadratic, logistic:a, cubicwell:lambda, henon:a,b, "
                                      "flow:doublewell:tau,pad");
  c->add_option("--domain", o.domain, "Phase space as lo,hi[;lo,hi...] (default: the system's)");
  c->add_option("--depths", o.depths, "Grid depths, strictly increasing")->delimiter(',');
  c->add_option("--rho", o.rho, "Inflation radius, one value or one per depth")->delimiter(',');
  c->add_flag("--cofiltered", o.cofiltered, "Build a cofiltration of maps");
  c->add_option("--out", o.out, "Output directory")->capture_default_str();
  c->add_option("--seed", o.seed, "Seed for sampled checks")->capture_default_str();
  c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice structures of attractors and repellers at finite resolution"};
  app.require_subcommand(1);
  Options o;

  auto* approx = app.add_subcommand("approx", "Outer approximations per level");
  add_common(approx, o);

  auto* attractors = app.add_subcommand("attractors", "Attractor and repeller lattices");
  add_common(attractors, o);
  attractors->add_option("--input", o.input, "Digraph JSON instead of a system");
  attractors->add_option("--cap", o.cap, "Maximum lattice size")->capture_default_str();

  auto* lift = app.add_subcommand("lift", "Lift a target lattice to a grid");
  add_common(lift, o);
  lift->add_option("--target", o.target, "Target lattice JSON")->required();
  lift->add_option("--reference-depth", o.reference_depth, "Depth of the reference level for agreement checks");
  lift->add_option("--tol", o.tol, "Hausdorff tolerance (default 2*diam of the reference level)");

  auto* verify = app.add_subcommand("verify", "Check a digraph or a lift");
  add_common(verify, o);
  verify->add_option("--input", o.input, "Digraph JSON");
  verify->add_option("--lift", o.lift, "Lift JSON written by 'lift'");
  verify->add_option("--target", o.target, "Target lattice JSON for the geometric checks");
  verify->add_option("--reference-depth", o.reference_depth, "Override the reference depth");
  verify->add_option("--tol", o.tol, "Hausdorff tolerance");
  verify->add_option("--random", o.random, "Also check this many seeded random digraphs");
  verify->add_option("--max-vertices", o.max_vertices, "Vertex bound for random digraphs")->capture_default_str();
  verify->add_option("--cap", o.cap, "Maximum lattice size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  try {
    if (*approx) return cmd_approx(o);
    if (*attractors) return cmd_attractors(o);
    if (*lift) return cmd_lift(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
