// lag-geoflow: command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "lag_geoflow/errors.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/geodesic.hpp"
#include "lag_geoflow/io.hpp"
#include "lag_geoflow/parallel.hpp"

using namespace lag_geoflow;
using io::json;

namespace {

struct Options {
  std::string fiber, cycle0, cycle1, cycle2, path_file, arc, h_values, h_cos;
  std::string out, csv, svg;
  int N = 128;
  int threads = 0;
  int count = 16;
  int every = 1;
  int tau_nodes = 32;
  double length = 2.0;
  double T = 1.0;
  double dt = 1.0 / 200;
  std::vector<double> t_samples{0.0, 0.25, 0.5, 0.75, 1.0};
  ToleranceProfile tol;
};

// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
json load(const std::string& arg, const char* what) {
  if (arg.empty()) throw GeoflowError(ErrorKind::InvalidInput, std::string("missing ") + what);
  const auto first = arg.find_first_not_of(" \t\n");
  try {
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw GeoflowError(ErrorKind::InvalidInput, std::string(what) + " file not found: " + arg);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw GeoflowError(ErrorKind::InvalidInput, std::string("cannot parse ") + what + ": " + e.what());
  }
}

FiberPtr fiber_opt(const Options& o) { return o.fiber.empty() ? nullptr : io::fiber_from_json(load(o.fiber, "fiber"), o.tol); }

SymmetricCircle cycle_opt(const Options& o, const std::string& arg, const char* what) {
  return io::cycle_from_json(load(arg, what), fiber_opt(o), o.tol);
}

InvariantFunction velocity(const Options& o, const SymmetricCircle& c) {
  if (!o.h_values.empty()) {
    const json j = load(o.h_values, "velocity");
    InvariantFunction h{(j.is_object() ? j.at("h") : j).get<std::vector<double>>(), false};
    if (h.half_size() != c.half_size()) throw GeoflowError(ErrorKind::InvalidInput, "velocity has the wrong length");
    return h;
  }
  std::vector<double> a;
  std::stringstream ss(o.h_cos);
  for (std::string tok; std::getline(ss, tok, ',');) a.push_back(std::stod(tok));
  if (a.empty()) throw GeoflowError(ErrorKind::InvalidInput, "give --velocity or --velocity-cos");
  return InvariantFunction::from(c, [&](double u) {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) s += a[m] * std::cos((m + 1) * u);
    return s;
  });
}

void emit(const Options& o, json result) {
  result["meta"] = {{"tolerances", io::tolerances_to_json(o.tol)}, {"threads", thread_count()}};
  const std::string text = io::dump(result);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    f << text;
  }
}

template <class Fn>
void to_file(const std::string& path, Fn&& fn) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw GeoflowError(ErrorKind::InvalidInput, "cannot write " + path);
  fn(f);
}

int run(const std::string& cmd, Options& o) {
  if (cmd == "roots") {
    const auto F = fiber_opt(o);
    if (!F) throw GeoflowError(ErrorKind::InvalidInput, "missing fiber");
    json r = io::roots_to_json(*F);
    r["fiber"] = io::fiber_to_json(*F);
    emit(o, r);
  } else if (cmd == "cycle") {
    const auto F = fiber_opt(o);
    if (!F) throw GeoflowError(ErrorKind::InvalidInput, "missing fiber");
    const auto c = cycle_from_arc(F, io::arc_from_json(o.arc.empty() ? json::object() : load(o.arc, "arc"), *F), o.N, o.tol);
    to_file(o.csv, [&](std::ostream& f) { io::write_cycle_csv(f, c, o.tol); });
    to_file(o.svg, [&](std::ostream& f) {
      io::SvgPlot p;
      p.add_roots(c.fiber());
      p.add_cycle(c);
      p.write(f);
    });
    emit(o, io::cycle_to_json(c));
  } else if (cmd == "positivity") {
    const auto c = cycle_opt(o, o.cycle0, "cycle");
    const auto rep = check_positive(c, o.tol);
    json r = io::positivity_to_json(rep);
    r["is_special"] = rep.is_positive && is_special(c, o.tol.special_tol, o.tol);
    emit(o, r);
  } else if (cmd == "leaves") {
    const auto c = cycle_opt(o, o.cycle0, "cycle");
    std::vector<LeafTrace> traces;
    json arr = json::array();
    const int N = c.half_size();
    for (int i = 1; i <= o.count; ++i) {
      const int k = static_cast<int>(std::lround(static_cast<double>(i) * N / (o.count + 1)));
      if (k <= 0 || k >= N) continue;
      for (int sign : {1, -1}) {
        traces.push_back(trace_leaf(c.fiber(), ChartPoint::zeta_chart(c.zeta()[k], c.z()[k]), sign,
                                    StopRule::max_arclength(o.length), o.tol));
        json t = io::trace_to_json(traces.back());
        t["u"] = c.u(k);
        arr.push_back(std::move(t));
      }
    }
    to_file(o.csv, [&](std::ostream& f) { io::write_leaf_csv(f, traces); });
    to_file(o.svg, [&](std::ostream& f) {
      io::SvgPlot p;
      p.add_roots(c.fiber());
      for (const auto& t : traces) p.add_leaf(t);
      p.add_cycle(c);
      p.write(f);
    });
    emit(o, {{"leaves", arr}});
  } else if (cmd == "match") {
    const auto c0 = cycle_opt(o, o.cycle0, "cycle0"), c1 = cycle_opt(o, o.cycle1, "cycle1");
    emit(o, io::match_to_json(horizontal_match(c0, c1, o.tol)));
  } else if (cmd == "ivp") {
    const auto c0 = cycle_opt(o, o.cycle0, "cycle0");
    const auto path = ivp_solve(c0, velocity(o, c0), o.T, o.dt, o.tol);
    to_file(o.csv, [&](std::ostream& f) { io::write_cycle_csv(f, path.snapshots.back(), o.tol); });
    to_file(o.svg, [&](std::ostream& f) {
      io::SvgPlot p;
      p.add_roots(c0.fiber());
      p.add_path(path);
      p.write(f);
    });
    emit(o, io::geodesic_to_json(path, o.every));
  } else if (cmd == "bvp") {
    const auto c0 = cycle_opt(o, o.cycle0, "cycle0"), c1 = cycle_opt(o, o.cycle1, "cycle1");
    BvpOptions bo;
    bo.tau_nodes = o.tau_nodes;
    const auto path = bvp_solve(c0, c1, o.t_samples, o.tol, bo);
    to_file(o.csv, [&](std::ostream& f) {
      for (std::size_t j = 0; j < path.snapshots.size(); ++j) {
        f << "# t = " << path.times[j] << '\n';
        io::write_cycle_csv(f, path.snapshots[j], o.tol);
      }
    });
    to_file(o.svg, [&](std::ostream& f) {
      io::SvgPlot p;
      p.add_roots(c0.fiber());
      p.add_path(path);
      p.write(f);
    });
    emit(o, io::geodesic_to_json(path, o.every));
  } else if (cmd == "distance") {
    const auto c0 = cycle_opt(o, o.cycle0, "cycle0"), c1 = cycle_opt(o, o.cycle1, "cycle1");
    emit(o, {{"distance", distance(c0, c1, o.tol)}});
  } else if (cmd == "verify") {
    const auto path = io::geodesic_from_json(load(o.path_file, "path"), o.tol);
    json r = io::report_to_json(verify_geodesic(path, o.tol));
    r["horizontal_residual"] = check_horizontal_family(path.snapshots);
    emit(o, r);
  } else if (cmd == "triangle") {
    const auto c0 = cycle_opt(o, o.cycle0, "cycle0"), c1 = cycle_opt(o, o.cycle1, "cycle1"),
               c2 = cycle_opt(o, o.cycle2, "cycle2");
    emit(o, {{"residual", triangle_identity(c0, c1, c2, o.tol)}});
  }
  return 0;
}

void add_tolerance_flags(CLI::App& app, ToleranceProfile& t) {
  const std::map<std::string, double*> fields = {
      {"root-simplicity-rel", &t.root_simplicity_rel}, {"root-simplicity-floor", &t.root_simplicity_floor},
      {"root-residual", &t.root_residual},             {"branch-delta", &t.branch_delta},
      {"branch-residual", &t.branch_residual},         {"arc-endpoint", &t.arc_endpoint},
      {"on-fiber", &t.on_fiber},                       {"positivity-floor", &t.positivity_floor},
      {"special-tol", &t.special_tol},                 {"leaf-tol", &t.leaf_tol},
      {"leaf-rtol", &t.leaf_rtol},                     {"leaf-max-step", &t.leaf_max_step},
      {"min-step", &t.min_step},                       {"sing-radius", &t.sing_radius},
      {"chart-radius-factor", &t.chart_radius_factor}, {"local-inverse-tol", &t.local_inverse_tol},
      {"hit-tol", &t.hit_tol},                         {"sheet-match-rel", &t.sheet_match_rel},
      {"audit-extra", &t.audit_extra},                 {"max-leaf-length", &t.max_leaf_length},
      {"cross-tol", &t.cross_tol}};
  for (const auto& [name, ptr] : fields)
    app.add_option("--tol-" + name, *ptr, "tolerance override")->group("Tolerances")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesics of positive matching cycles in A_m Milnor fibers"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--threads", o.threads, "worker threads (default: LAG_GEOFLOW_THREADS or hardware)");
  app.add_option("-o,--out", o.out, "write the JSON result here instead of stdout");
  add_tolerance_flags(app, o.tol);

  const auto fiber = [&](CLI::App* s) { s->add_option("--fiber", o.fiber, "fiber JSON (inline or file)"); };
  const auto cycle = [&](CLI::App* s, const char* flag, std::string& dst) {
    s->add_option(flag, dst, "cycle JSON (inline or file)");
  };
  const auto outputs = [&](CLI::App* s) {
    s->add_option("--csv", o.csv, "CSV output file");
    s->add_option("--svg", o.svg, "SVG output file");
  };

  auto* roots = app.add_subcommand("roots", "roots of f");
  fiber(roots);
  auto* cyc = app.add_subcommand("cycle", "build a symmetric circle from an arc");
  fiber(cyc);
  cyc->add_option("--arc", o.arc, "arc JSON: segment | parabolic(a) | bezier(points)");
  cyc->add_option("--N", o.N, "half-grid size")->check(CLI::PositiveNumber);
  outputs(cyc);
  auto* pos = app.add_subcommand("positivity", "positivity margin of a cycle");
  fiber(pos);
  cycle(pos, "--cycle", o.cycle0);
  auto* leaves = app.add_subcommand("leaves", "trace leaves through markers of a cycle");
  fiber(leaves);
  cycle(leaves, "--cycle", o.cycle0);
  leaves->add_option("--count", o.count, "number of markers")->check(CLI::PositiveNumber);
  leaves->add_option("--length", o.length, "arclength per direction")->check(CLI::PositiveNumber);
  outputs(leaves);
  auto* match = app.add_subcommand("match", "leafwise matching of two cycles");
  fiber(match);
  cycle(match, "--cycle0", o.cycle0);
  cycle(match, "--cycle1", o.cycle1);
  auto* ivp = app.add_subcommand("ivp", "geodesic from an initial velocity");
  fiber(ivp);
  cycle(ivp, "--cycle0", o.cycle0);
  ivp->add_option("--velocity", o.h_values, "velocity values on the half grid (JSON array, or object with \"h\")");
  ivp->add_option("--velocity-cos", o.h_cos, "velocity as cosine coefficients a1,a2,... of sum a_m cos(m u)");
  ivp->add_option("--T", o.T, "final time");
  ivp->add_option("--dt", o.dt, "time step");
  ivp->add_option("--every", o.every, "keep every k-th snapshot in the output");
  outputs(ivp);
  auto* bvp = app.add_subcommand("bvp", "geodesic between two cycles");
  fiber(bvp);
  cycle(bvp, "--cycle0", o.cycle0);
  cycle(bvp, "--cycle1", o.cycle1);
  bvp->add_option("--t", o.t_samples, "snapshot times in [0, 1]")->delimiter(',');
  bvp->add_option("--tau-nodes", o.tau_nodes, "Chebyshev degree along leaf segments");
  outputs(bvp);
  auto* dist = app.add_subcommand("distance", "distance between two cycles");
  fiber(dist);
  cycle(dist, "--cycle0", o.cycle0);
  cycle(dist, "--cycle1", o.cycle1);
  auto* ver = app.add_subcommand("verify", "check a geodesic JSON");
  ver->add_option("--path", o.path_file, "geodesic JSON (ivp or bvp output)")->required();
  auto* tri = app.add_subcommand("triangle", "triangle identity residual");
  fiber(tri);
  cycle(tri, "--cycle0", o.cycle0);
  cycle(tri, "--cycle1", o.cycle1);
  cycle(tri, "--cycle2", o.cycle2);

  CLI11_PARSE(app, argc, argv);

  if (o.threads == 0)
    if (const char* env = std::getenv("LAG_GEOFLOW_THREADS")) o.threads = std::atoi(env);
  set_thread_count(std::max(0, o.threads));

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, o);
  } catch (const GeoflowError& e) {
    std::cout << io::dump({{"error", {{"kind", std::string(to_string(e.kind()))}, {"detail", e.detail()}}}});
    return is_domain_error(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cout << io::dump({{"error", {{"kind", "InvalidInput"}, {"detail", e.what()}}}});
    return 2;
  }
}
