#include "amodes/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "amodes/homotopy.hpp"
#include "amodes/mixed_volume.hpp"
#include "amodes/optimizer.hpp"
#include "amodes/realization.hpp"

namespace amodes {

namespace {

Edge parse_edge_label(const std::string& label) {
  const auto dash = label.find('-');
  if (dash == std::string::npos) throw std::invalid_argument("bad edge label '" + label + "' (expected e.g. 1-2)");
  try {
    std::size_t p1 = 0, p2 = 0;
    const int a = std::stoi(label.substr(0, dash), &p1);
    const int b = std::stoi(label.substr(dash + 1), &p2);
    if (p1 != dash || p2 != label.size() - dash - 1 || a == b) throw std::invalid_argument("");
    return Edge(a, b);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad edge label '" + label + "'");
  }
}

double positive_length(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw std::invalid_argument("length for " + where + " is not a number");
  const double x = v.get<double>();
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("length for " + where + " must be positive");
  return x;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join(const std::vector<std::string>& args) {
  std::string s = "amodes";
  for (const auto& a : args) s += " " + a;
  return s;
}

// Everything a command needs to describe how its output came about.
struct Manifest {
  std::string command;
  std::string started = utc_now();
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs, outputs;

  nlohmann::json json() const {
    nlohmann::json j{{"command", command},
                     {"version", kVersion},
                     {"config", config},
                     {"inputs", inputs},
                     {"outputs", outputs},
                     {"started", started},
                     {"finished", utc_now()}};
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given, std::ostream& err) {
  if (given) return *given;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << s << "\n";
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << content;
  if (!f) throw std::invalid_argument("failed writing " + path);
}

std::string construction_note(TopologyId id) {
  const char* third = id == TopologyId::V17 ? "1" : id == TopologyId::V37 ? "3" : "6";
  return std::string("Desargues graph + H2: remove 4-5, add vertex 7 joined to 4, 5, ") + third;
}

Integer system_mixed_volume(const MinorSystem& s) {
  std::vector<NewtonPolytope> polys;
  for (const auto& p : s.polynomials) polys.push_back(newton_polytope_leading(p, s.variables.size()));
  return mixed_volume(polys).mv;
}

// Degrees in the unknown distances only; the knowns count as coefficients.
std::vector<int> variable_degrees(const MinorSystem& s) {
  std::vector<int> out;
  for (const auto& p : s.polynomials) {
    int d = -1;
    for (const auto& [head, rest] : p.split_leading(s.variables.size()))
      d = std::max(d, std::accumulate(head.begin(), head.end(), 0));
    out.push_back(d);
  }
  return out;
}

unsigned long variable_bezout(const MinorSystem& s) {
  unsigned long b = 1;
  for (int d : variable_degrees(s)) b *= static_cast<unsigned long>(std::max(d, 0));
  return b;
}

nlohmann::json rescaled_solutions(const SolutionSet& s, double scale, const std::vector<std::string>& names) {
  SolutionSet copy = s;
  for (auto& sol : copy.solutions)
    for (auto& v : sol.x) v *= scale;
  return to_json(copy, names);
}

struct CountResult {
  AssemblyCount count;
  std::vector<Embedding> embeddings;   // in original units
  std::vector<std::string> infeasible;
};

CountResult count_and_realize(const MinorSystem& sys, const DistanceAssignment& lengths, const TrackerConfig& tc,
                              std::uint64_t seed) {
  CountResult r;
  r.count = count_assembly(sys, lengths, tc, seed);
  if (r.count.solutions.paths.tracked > 0 && r.count.solutions.paths.failed == r.count.solutions.paths.tracked)
    throw std::runtime_error("all homotopy paths failed");
  const double unit = std::sqrt(r.count.scale);
  for (const auto& sol : r.count.solutions.solutions) {
    if (!sol.real_positive) continue;
    std::vector<double> x;
    for (auto& v : sol.x) x.push_back(v.real());
    auto res = reconstruct_embedding(sys, r.count.scaled_lengths, x);
    if (auto* e = std::get_if<Embedding>(&res)) {
      for (auto& p : e->points) p = {p[0] * unit, p[1] * unit};
      r.embeddings.push_back(*e);
    } else {
      r.infeasible.push_back(std::get<Infeasible>(res).reason);
    }
  }
  return r;
}

TrackerConfig tracker_for(int threads) {
  TrackerConfig tc;
  tc.threads = threads;
  return tc;
}

}  // namespace

DistanceAssignment parse_lengths(const nlohmann::json& j, const LinkageGraph& g) {
  std::map<Edge, Rational> sq;
  auto from_vector = [&](const nlohmann::json& arr, LengthUnits units) {
    if (!arr.is_array()) throw std::invalid_argument("length vector must be an array");
    const auto& edges = g.edges();
    if (arr.size() != edges.size())
      throw std::invalid_argument("length vector has " + std::to_string(arr.size()) + " entries, graph has " +
                                  std::to_string(edges.size()) + " edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double x = positive_length(arr[i], "l_" + std::to_string(i));
      const Rational q = exact_rational(x);
      sq[edges[i]] = units == LengthUnits::Squared ? q : q * q;
    }
  };
  if (j.is_array()) {
    from_vector(j, LengthUnits::Squared);
  } else if (j.is_object() && j.contains("vector")) {
    const auto units = j.contains("units") ? parse_units(j.at("units").get<std::string>()) : LengthUnits::Squared;
    from_vector(j.at("vector"), units);
  } else if (j.is_object() && (j.contains("edges") || j.contains("squared"))) {
    if (j.contains("edges")) {
      if (!j.at("edges").is_object()) throw std::invalid_argument("\"edges\" must be an object");
      for (const auto& [label, v] : j.at("edges").items()) {
        const Edge e = parse_edge_label(label);
        const Rational q = exact_rational(positive_length(v, label));
        sq[e] = q * q;
      }
    }
    if (j.contains("squared")) {
      if (!j.at("squared").is_object()) throw std::invalid_argument("\"squared\" must be an object");
      for (const auto& [label, v] : j.at("squared").items()) {
        const Edge e = parse_edge_label(label);
        Rational q = v.is_string() ? parse_rational(v.get<std::string>()) : exact_rational(positive_length(v, label));
        if (q <= 0) throw std::invalid_argument("squared length for " + label + " must be positive");
        sq[e] = q;
      }
    }
  } else {
    throw std::invalid_argument("lengths must be an array or an object with \"edges\" or \"vector\"");
  }
  for (const auto& [e, q] : sq)
    if (!g.has_edge(e)) throw std::invalid_argument("edge " + e.label() + " is not a bar of the linkage");
  DistanceAssignment d = DistanceAssignment::from_squared(std::move(sq));
  d.check_covers(g);
  return d;
}

DistanceAssignment read_lengths(const std::string& path, const LinkageGraph& g) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read lengths file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return parse_lengths(j, g);
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Assembly modes of planar bar linkages", "amodes"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool json = false;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_flag("--json", json, "machine-readable JSON on stdout");
  app.add_option("--threads", threads, "worker threads for path tracking")->check(CLI::PositiveNumber);

  Manifest manifest;
  manifest.command = join(args);
  std::string topology_name = "v17";
  std::string lengths_path;
  std::optional<std::uint64_t> seed;

  auto add_topology = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--topology", topology_name, "v17, v37 or v67");
    if (required) o->required();
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "random seed"); };

  // topology show <id>
  auto* topo = app.add_subcommand("topology", "inspect a built-in linkage");
  topo->require_subcommand(1);
  auto* show = topo->add_subcommand("show", "edges and Laman check");
  std::string show_id;
  show->add_option("id", show_id, "v17, v37 or v67")->required();

  auto* bounds = app.add_subcommand("bounds", "closed-form bounds on assembly modes");
  int bounds_n = 7;
  bounds->add_option("--n", bounds_n, "vertex count")->required()->check(CLI::Range(3, 60));

  auto* system = app.add_subcommand("system", "distance-matrix minor systems");
  system->require_subcommand(1);
  auto* build = system->add_subcommand("build", "build or enumerate the minor system");
  add_topology(build, true);
  bool enumerate = false;
  int build_k = 5, build_top = 5;
  build->add_flag("--enumerate", enumerate, "enumerate all certified candidate systems");
  build->add_option("--k", build_k, "number of variables")->check(CLI::Range(1, 5));
  build->add_option("--top", build_top, "candidates listed with --enumerate")->check(CLI::NonNegativeNumber);
  std::uint64_t build_seed = SelectionOptions{}.seed;
  build->add_option("--seed", build_seed, "certificate seed");

  auto* mv = app.add_subcommand("mixed-volume", "mixed volume of the minor system");
  add_topology(mv, true);

  auto* count = app.add_subcommand("count", "number N of real positive solutions");
  add_topology(count, true);
  count->add_option("--lengths", lengths_path, "lengths JSON file")->required();
  add_seed(count);

  auto* oracle = app.add_subcommand("oracle", "solve the point-coordinate formulation");
  add_topology(oracle, true);
  oracle->add_option("--lengths", lengths_path, "lengths JSON file")->required();
  add_seed(oracle);

  auto* realize = app.add_subcommand("realize", "reconstruct and draw assembly modes");
  add_topology(realize, true);
  realize->add_option("--lengths", lengths_path, "lengths JSON file")->required();
  std::string svg_path;
  bool mirror = false;
  realize->add_option("--out", svg_path, "SVG output path")->required();
  realize->add_flag("--mirror", mirror, "also draw each mode's reflection");
  add_seed(realize);

  auto* optimize = app.add_subcommand("optimize", "search lengths maximizing N");
  std::string method = "ce", units = "squared", csv_path, trajectory_path;
  int budget = 600, runs = 10;
  std::uint64_t solver_seed = 1;
  optimize->add_option("--method", method, "random, sa or ce")->check(CLI::IsMember({"random", "sa", "ce"}));
  optimize->add_option("--budget", budget, "evaluations of N per run")->check(CLI::PositiveNumber);
  optimize->add_option("--runs", runs, "independent runs (seeds S, S+1, ...)")->check(CLI::PositiveNumber);
  optimize->add_option("--out", csv_path, "CSV output path");
  optimize->add_option("--trajectory", trajectory_path, "full trajectories as JSON");
  optimize->add_option("--solver-seed", solver_seed, "homotopy seed used inside N");
  optimize->add_option("--units", units, "l_i as squared distances (squared) or bar lengths (plain)")
      ->check(CLI::IsMember({"squared", "plain"}));
  add_seed(optimize);

  std::vector<const char*> argv{"amodes"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    nlohmann::json result;
    std::ostringstream text;
    manifest.config["threads"] = threads;

    if (show->parsed()) {
      const TopologyId id = parse_topology(show_id);
      const LinkageGraph g = builtin_topology(id);
      result = {{"topology", to_string(id)},
                {"graph", to_json(g)},
                {"laman", is_laman(g)},
                {"laman_pebble", is_laman_pebble(g)},
                {"construction", construction_note(id)}};
      text << "topology " << to_string(id) << "\nvertices " << g.vertex_count() << "\nedges";
      for (const Edge& e : g.edges()) text << ' ' << e.label();
      text << "\nlaman " << (is_laman(g) ? "yes" : "no") << "\n" << construction_note(id) << "\n";
    } else if (bounds->parsed()) {
      const ClosedFormBounds b = closed_form_bounds(bounds_n);
      const double constant = std::pow(28.0, 0.25);
      result = {{"n", b.n},
                {"bezout", b.bezout},
                {"general_upper", b.general_upper},
                {"fan_lower", b.fan_lower},
                {"fan_constant", constant},
                {"table_upper", b.table_upper ? nlohmann::json(*b.table_upper) : nlohmann::json(nullptr)},
                {"table_lower", b.table_lower ? nlohmann::json(*b.table_lower) : nlohmann::json(nullptr)}};
      text << std::setprecision(10) << "n " << b.n << "\nbezout " << b.bezout << "\ngeneral_upper "
           << b.general_upper << "\nfan_lower " << b.fan_lower << "\nfan_constant " << std::setprecision(6)
           << constant << "\n";
      if (b.table_upper) text << "table_upper " << *b.table_upper << "\ntable_lower " << *b.table_lower << "\n";
    } else if (build->parsed()) {
      const TopologyId id = parse_topology(topology_name);
      manifest.config["topology"] = to_string(id);
      if (!enumerate) {
        const MinorSystem& s = counting_system(id);
        const std::vector<int> degrees = variable_degrees(s);
        const Integer m = system_mixed_volume(s);
        result = to_json(s);
        result["degrees"] = degrees;
        result["bezout"] = variable_bezout(s);
        result["mixed_volume"] = m.get_ui();
        text << "topology " << to_string(id) << "\nvariables";
        for (const auto& v : s.variable_names()) text << ' ' << v;
        text << "\nminors";
        for (const auto& q : s.minors) text << " D(" << q[0] << q[1] << q[2] << q[3] << ")";
        text << "\ndegrees";
        for (int d : degrees) text << ' ' << d;
        text << "\nbezout " << variable_bezout(s) << "\nmixed_volume " << m.get_str() << "\n";
      } else {
        manifest.seed = build_seed;
        manifest.config["k"] = build_k;
        SelectionOptions opts;
        opts.seed = build_seed;
        const auto ranked = select_minor_system(builtin_topology(id), build_k, opts);
        std::map<unsigned long, int> hist;
        for (const auto& r : ranked) ++hist[r.mixed_volume.get_ui()];
        nlohmann::json h = nlohmann::json::object();
        for (const auto& [v, c] : hist) h[std::to_string(v)] = c;
        nlohmann::json best = nlohmann::json::array();
        for (int i = 0; i < std::min<int>(build_top, static_cast<int>(ranked.size())); ++i) {
          nlohmann::json sj = to_json(ranked[i].system);
          sj.erase("polynomials");
          sj.erase("graph");
          sj["mixed_volume"] = ranked[i].mixed_volume.get_ui();
          best.push_back(sj);
        }
        result = {{"topology", to_string(id)},
                  {"candidates", ranked.size()},
                  {"minimum_mixed_volume", ranked.front().mixed_volume.get_ui()},
                  {"histogram", h},
                  {"best", best}};
        text << "topology " << to_string(id) << "\ncandidates " << ranked.size() << "\nminimum_mixed_volume "
             << ranked.front().mixed_volume.get_str() << "\nhistogram";
        for (const auto& [v, c] : hist) text << ' ' << v << 'x' << c;
        text << "\n";
        for (const auto& b : best) text << "  " << b["variables"].dump() << ' ' << b["minors"].dump() << " mv "
                                        << b["mixed_volume"] << "\n";
      }
    } else if (mv->parsed()) {
      const TopologyId id = parse_topology(topology_name);
      manifest.config["topology"] = to_string(id);
      const MinorSystem& s = counting_system(id);
      const Integer m = system_mixed_volume(s);
      result = {{"topology", to_string(id)},
                {"mixed_volume", m.get_ui()},
                {"bezout", variable_bezout(s)},
                {"variables", s.variable_names()}};
      text << m.get_str() << "\n";
    } else if (count->parsed() || oracle->parsed() || realize->parsed()) {
      const TopologyId id = parse_topology(topology_name);
      const MinorSystem& s = counting_system(id);
      const DistanceAssignment lengths = read_lengths(lengths_path, s.graph);
      const std::uint64_t sd = resolve_seed(seed, err);
      manifest.seed = sd;
      manifest.config["topology"] = to_string(id);
      manifest.inputs.push_back(lengths_path);
      TrackerConfig tc = tracker_for(threads);
      manifest.config["tracker"] = to_json(tc);
      const CountResult cr = count_and_realize(s, lengths, tc, sd);
      const auto& ac = cr.count;
      nlohmann::json base{{"topology", to_string(id)},
                          {"N", ac.n},
                          {"ok", ac.ok},
                          {"embeddable", cr.embeddings.size()},
                          {"real", ac.solutions.real},
                          {"finite", ac.solutions.solutions.size()},
                          {"borderline", ac.solutions.borderline}};
      if (!ac.ok) base["reason"] = ac.reason;
      if (count->parsed()) {
        result = base;
        result["solver"] = rescaled_solutions(ac.solutions, ac.scale, s.variable_names());
        text << "N " << ac.n << "\nembeddable " << cr.embeddings.size() << "\nreal " << ac.solutions.real
             << "\nfinite " << ac.solutions.solutions.size() << "\nborderline " << ac.solutions.borderline << "\n";
        if (!ac.ok) text << "warning: " << ac.reason << " (N set to 0)\n";
      } else if (oracle->parsed()) {
        const OracleCount oc = oracle_coordinate_count(s.graph, lengths, tc, sd);
        result = base;
        result["oracle"] = {{"complex", oc.complex},
                            {"real", oc.real},
                            {"congruence_classes", oc.congruence_classes},
                            {"odd_real", oc.odd_real},
                            {"paths",
                             {{"tracked", oc.solutions.paths.tracked},
                              {"finite", oc.solutions.paths.finite},
                              {"diverged", oc.solutions.paths.diverged},
                              {"failed", oc.solutions.paths.failed}}}};
        text << "N " << ac.n << "\nembeddable " << cr.embeddings.size() << "\noracle_complex " << oc.complex
             << "\noracle_real " << oc.real << "\ncongruence_classes " << oc.congruence_classes << "\n";
        if (oc.odd_real) text << "warning: odd real count, degenerate configuration\n";
      } else {
        manifest.outputs.push_back(svg_path);
        nlohmann::json embs = nlohmann::json::array();
        for (const auto& e : cr.embeddings) embs.push_back(to_json(e));
        result = base;
        result["embeddings"] = embs;
        result["infeasible"] = cr.infeasible;
        result["svg"] = svg_path;
        result["mirror"] = mirror;
        if (cr.embeddings.empty()) throw std::invalid_argument("no embeddable assembly mode to draw");
        SvgOptions so;
        so.mirror = mirror;
        so.title = to_string(id) + ": " + std::to_string(cr.embeddings.size()) + " assembly modes" +
                   (mirror ? " and mirror images" : "");
        std::string svg = export_svg(cr.embeddings, so);
        svg.insert(svg.find("<svg"), "<!-- " + manifest.command + " | version " + kVersion + " | seed " +
                                         std::to_string(sd) + " -->\n");
        write_file(svg_path, svg);
        text << "N " << ac.n << "\nembeddable " << cr.embeddings.size() << "\ncells "
             << cr.embeddings.size() * (mirror ? 2 : 1) << "\nwrote " << svg_path << "\n";
      }
    } else if (optimize->parsed()) {
      const std::uint64_t sd = resolve_seed(seed, err);
      manifest.seed = sd;
      OptimizerConfig oc;
      oc.method = parse_method(method);
      oc.budget = budget;
      TrackerConfig tc = tracker_for(threads);
      oc.units = parse_units(units);
      const Objective obj = assembly_objective(tc, solver_seed, oc.fixed_value, oc.units);
      std::vector<OptimizerRun> all;
      std::ostringstream csv;
      csv << csv_header() << "\n";
      for (int r = 0; r < runs; ++r) {
        oc.seed = sd + static_cast<std::uint64_t>(r);
        all.push_back(run_optimizer(oc, obj));
        csv << csv_row(all.back()) << "\n";
      }
      oc.seed = sd;
      manifest.config["optimizer"] = to_json(oc);
      manifest.config["runs"] = runs;
      manifest.config["solver_seed"] = solver_seed;
      manifest.config["tracker"] = to_json(tc);
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : all)
        rows.push_back({{"method", to_string(r.config.method)},
                        {"seed", r.config.seed},
                        {"best_N", r.best_value},
                        {"evals_to_best", r.evals_to_best},
                        {"wall_ms", r.wall_ms},
                        {"display", table_cell(r)},
                        {"best", r.best}});
      if (!csv_path.empty()) {
        manifest.outputs.push_back(csv_path);
        manifest.outputs.push_back(csv_path + ".manifest.json");
        write_file(csv_path, csv.str());
      }
      if (!trajectory_path.empty()) {
        manifest.outputs.push_back(trajectory_path);
        nlohmann::json tj = nlohmann::json::array();
        for (const auto& r : all) tj.push_back(to_json(r));
        write_file(trajectory_path, nlohmann::json{{"manifest", manifest.json()}, {"runs", tj}}.dump(1) + "\n");
      }
      if (!csv_path.empty()) write_file(csv_path + ".manifest.json", manifest.json().dump(2) + "\n");
      result = {{"runs", rows}};
      text << csv.str();
    }

    if (json) {
      result["manifest"] = manifest.json();
      out << result.dump(2) << "\n";
    } else {
      out << text.str();
    }
    return kExitOk;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace amodes
