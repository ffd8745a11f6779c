#include "lag_geoflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "lag_geoflow/errors.hpp"

namespace lag_geoflow::io {

namespace {

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_flat(const json& j) {
  return std::all_of(j.begin(), j.end(), [](const json& e) {
    return e.is_number() || (e.is_array() && e.size() <= 2 &&
                             std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_number(); }));
  });
}

void write(std::string& out, const json& j, int depth, bool compact) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::number_float:
      out += num(j.get<double>());
      return;
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        write(out, it.value(), depth + 1, false);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = compact || is_flat(j);
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write(out, e, depth + 1, flat);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

std::vector<double> to_vector(const json& j) { return j.get<std::vector<double>>(); }

cplx parse_complex(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2) throw GeoflowError(ErrorKind::InvalidInput, "complex numbers are [re, im] pairs");
  return {e[0].get<double>(), e[1].get<double>()};
}

cplx endpoint(const json& j, const MilnorFiber& fiber, int fallback) {
  if (j.is_null()) {
    if (fallback >= static_cast<int>(fiber.roots().size()))
      throw GeoflowError(ErrorKind::InvalidInput, "fiber has too few roots for the default arc");
    return fiber.roots()[fallback];
  }
  if (j.is_number_integer()) {
    const int i = j.get<int>();
    if (i < 0 || i >= static_cast<int>(fiber.roots().size()))
      throw GeoflowError(ErrorKind::InvalidInput, "root index out of range");
    return fiber.roots()[i];
  }
  return parse_complex(j);
}

}  // namespace

std::string dump(const json& j) {
  std::string out;
  write(out, j, 0, false);
  out += "\n";
  return out;
}

json complex_array(const std::vector<cplx>& v) {
  json a = json::array();
  for (auto c : v) a.push_back(json::array({c.real(), c.imag()}));
  return a;
}

std::vector<cplx> parse_complex_array(const json& j) {
  if (!j.is_array()) throw GeoflowError(ErrorKind::InvalidInput, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(parse_complex(e));
  return out;
}

json fiber_to_json(const MilnorFiber& fiber) {
  return {{"coeffs", complex_array(fiber.coeffs())}, {"n", fiber.dimension()}};
}

FiberPtr fiber_from_json(const json& j, const ToleranceProfile& tol) {
  if (!j.is_object() || !j.contains("coeffs") || !j.contains("n"))
    throw GeoflowError(ErrorKind::InvalidInput, "fiber needs \"coeffs\" and \"n\"");
  return std::make_shared<const MilnorFiber>(parse_complex_array(j.at("coeffs")), j.at("n").get<int>(), tol);
}

json roots_to_json(const MilnorFiber& fiber) { return {{"roots", complex_array(fiber.roots())}}; }

Arc arc_from_json(const json& j, const MilnorFiber& fiber) {
  const std::string type = j.value("type", std::string("segment"));
  if (type == "bezier") return Arc::bezier(parse_complex_array(j.at("points")));
  const cplx from = endpoint(j.contains("from") ? j.at("from") : json(), fiber, 0);
  const cplx to = endpoint(j.contains("to") ? j.at("to") : json(), fiber, 1);
  if (type == "segment") return Arc::segment(from, to);
  if (type == "parabolic") return Arc::parabolic(from, to, j.at("a").get<double>());
  throw GeoflowError(ErrorKind::InvalidInput, "unknown arc type \"" + type + "\"");
}

json cycle_to_json(const SymmetricCircle& circle) {
  return {{"fiber", fiber_to_json(circle.fiber())},
          {"N", circle.half_size()},
          {"zeta", complex_array(circle.zeta())},
          {"z", complex_array(circle.z())}};
}

SymmetricCircle cycle_from_json(const json& j, FiberPtr fiber, const ToleranceProfile& tol) {
  if (!j.is_object()) throw GeoflowError(ErrorKind::InvalidInput, "cycle must be a JSON object");
  if (j.contains("fiber")) fiber = fiber_from_json(j.at("fiber"), tol);
  if (!fiber) throw GeoflowError(ErrorKind::InvalidInput, "cycle has no fiber");
  if (j.contains("arc")) return cycle_from_arc(fiber, arc_from_json(j.at("arc"), *fiber), j.value("N", 128), tol);
  if (!j.contains("zeta") || !j.contains("z"))
    throw GeoflowError(ErrorKind::InvalidInput, "cycle needs \"zeta\" and \"z\" or an \"arc\"");
  return SymmetricCircle(fiber, parse_complex_array(j.at("zeta")), parse_complex_array(j.at("z")), tol);
}

json positivity_to_json(const PositivityReport& rep) {
  return {{"is_positive", rep.is_positive}, {"margin", rep.margin}, {"worst_u", rep.worst_u}};
}

json match_to_json(const MatchResult& m) {
  json beta = json::array();
  for (const auto& p : m.beta1) {
    json e = {{"chart", p.chart == ChartKind::Zeta ? "zeta" : "polar"},
              {"zeta", {p.zeta.real(), p.zeta.imag()}},
              {"z", {p.z.real(), p.z.imag()}}};
    if (p.chart == ChartKind::Polar) {
      e["root"] = p.root;
      e["r"] = p.r;
      e["theta"] = p.theta;
    }
    beta.push_back(std::move(e));
  }
  return {{"v", m.v}, {"s_arclength", m.s_arclength}, {"sheet", m.sheet}, {"beta1", std::move(beta)}};
}

json trace_to_json(const LeafTrace& trace) {
  static const char* names[] = {"arclength", "hit_curve", "near_singularity", "left_domain"};
  std::vector<cplx> zeta, z;
  for (const auto& p : trace.points) {
    zeta.push_back(p.zeta);
    z.push_back(p.z);
  }
  json out = {{"direction", trace.direction_sign},
              {"termination", names[static_cast<int>(trace.termination)]},
              {"arclength", trace.arclength},
              {"zeta", complex_array(zeta)},
              {"z", complex_array(z)},
              {"max_step_error", trace.max_step_error}};
  if (trace.hit)
    out["hit"] = {{"segment", trace.hit->segment},
                  {"param", trace.hit->segment_param},
                  {"zeta", {trace.hit->zeta.real(), trace.hit->zeta.imag()}},
                  {"arclength", trace.hit->arclength}};
  return out;
}

json geodesic_to_json(const GeodesicPath& path, int snapshot_stride) {
  snapshot_stride = std::max(1, snapshot_stride);
  json times = json::array(), snaps = json::array();
  json margins = json::array();
  const std::size_t J = path.snapshots.size();
  for (std::size_t j = 0; j < J; ++j) {
    if (j % snapshot_stride != 0 && j + 1 != J) continue;
    times.push_back(path.times[j]);
    snaps.push_back(cycle_to_json(path.snapshots[j]));
    margins.push_back(path.diagnostics.positivity_margin[j]);
  }
  const auto& d = path.diagnostics;
  json diag = {{"positivity_margin", margins},
               {"horizon_reached", d.horizon_reached},
               {"horizon_reason", d.horizon_reason}};
  if (path.kind == GeodesicPath::Kind::Bvp) {
    diag["cross_check"] = d.cross_check;
    diag["tau_nodes"] = d.tau_nodes;
  } else {
    diag["max_leaf_drift"] = d.leaf_drift.empty() ? 0.0 : *std::max_element(d.leaf_drift.begin(), d.leaf_drift.end());
    diag["endpoint_theta0"] = d.endpoint_theta0.back();
    diag["endpoint_thetapi"] = d.endpoint_thetapi.back();
  }
  json out = {{"kind", path.kind == GeodesicPath::Kind::Bvp ? "bvp" : "ivp"},
              {"times", times},
              {"snapshots", snaps},
              {"s", path.s},
              {"h", path.h.values},
              {"ell", path.ell},
              {"distance", path.distance},
              {"diagnostics", diag}};
  if (path.match) out["match"] = {{"v", path.match->v}, {"sheet", path.match->sheet}};
  return out;
}

GeodesicPath geodesic_from_json(const json& j, const ToleranceProfile& tol) {
  GeodesicPath path;
  path.kind = j.value("kind", std::string("ivp")) == "bvp" ? GeodesicPath::Kind::Bvp : GeodesicPath::Kind::Ivp;
  path.times = to_vector(j.at("times"));
  for (const auto& s : j.at("snapshots")) path.snapshots.push_back(cycle_from_json(s, nullptr, tol));
  path.h.values = to_vector(j.at("h"));
  path.h.mean_zero = true;
  if (j.contains("s")) path.s = to_vector(j.at("s"));
  path.distance = j.value("distance", 0.0);
  if (path.times.size() != path.snapshots.size())
    throw GeoflowError(ErrorKind::InvalidInput, "times and snapshots differ in length");
  return path;
}

json report_to_json(const GeodesicReport& rep) {
  return {{"residual", rep.residual},
          {"residual_per_time", rep.residual_per_time},
          {"speed", rep.speed},
          {"speed_variation", rep.speed_variation}};
}

json tolerances_to_json(const ToleranceProfile& t) {
  return {{"root_simplicity_rel", t.root_simplicity_rel},
          {"root_simplicity_floor", t.root_simplicity_floor},
          {"root_residual", t.root_residual},
          {"branch_delta", t.branch_delta},
          {"branch_residual", t.branch_residual},
          {"arc_endpoint", t.arc_endpoint},
          {"on_fiber", t.on_fiber},
          {"positivity_floor", t.positivity_floor},
          {"special_tol", t.special_tol},
          {"leaf_tol", t.leaf_tol},
          {"leaf_rtol", t.leaf_rtol},
          {"leaf_max_step", t.leaf_max_step},
          {"min_step", t.min_step},
          {"sing_radius", t.sing_radius},
          {"chart_radius_factor", t.chart_radius_factor},
          {"local_inverse_tol", t.local_inverse_tol},
          {"hit_tol", t.hit_tol},
          {"sheet_match_rel", t.sheet_match_rel},
          {"audit_extra", t.audit_extra},
          {"max_leaf_length", t.max_leaf_length},
          {"cross_tol", t.cross_tol}};
}

// ---------------------------------------------------------------------------

void write_cycle_csv(std::ostream& os, const SymmetricCircle& circle, const ToleranceProfile& tol) {
  std::vector<double> mu;
  try {
    mu = measure_density(circle, tol);
  } catch (const GeoflowError&) {
    mu.assign(circle.half_size() + 1, std::numeric_limits<double>::quiet_NaN());
  }
  os << "u,re_zeta,im_zeta,re_z,im_z,mu\n";
  for (int k = 0; k <= circle.half_size(); ++k)
    os << num(circle.u(k)) << ',' << num(circle.zeta()[k].real()) << ',' << num(circle.zeta()[k].imag()) << ','
       << num(circle.z()[k].real()) << ',' << num(circle.z()[k].imag()) << ',' << num(mu[k]) << '\n';
}

void write_leaf_csv(std::ostream& os, const std::vector<LeafTrace>& traces) {
  os << "chart_tag,re_zeta,im_zeta,re_z,im_z,r,theta,arclength\n";
  for (const auto& tr : traces)
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      const auto& p = tr.points[i];
      const bool polar = p.chart == ChartKind::Polar;
      const std::string tag = polar ? "polar" + std::to_string(p.root) : "zeta";
      const double r = polar ? p.r : std::abs(p.z), theta = polar ? p.theta : std::arg(p.z);
      os << tag << ',' << num(p.zeta.real()) << ',' << num(p.zeta.imag()) << ',' << num(p.z.real()) << ','
         << num(p.z.imag()) << ',' << num(r) << ',' << num(theta) << ',' << num(tr.arclength[i]) << '\n';
    }
}

// ---------------------------------------------------------------------------

void SvgPlot::add_roots(const MilnorFiber& fiber) {
  roots_.insert(roots_.end(), fiber.roots().begin(), fiber.roots().end());
}

void SvgPlot::add_cycle(const SymmetricCircle& circle, const std::string& color, double width) {
  polys_.push_back({circle.zeta(), color, width, false});
}

void SvgPlot::add_leaf(const LeafTrace& trace) {
  std::vector<cplx> pts;
  for (const auto& p : trace.points) pts.push_back(p.zeta);
  polys_.push_back({std::move(pts), "#8a8a8a", 0.6, false});
}

void SvgPlot::add_path(const GeodesicPath& path) {
  const double t1 = path.times.empty() || path.times.back() <= 0.0 ? 1.0 : path.times.back();
  for (std::size_t j = 0; j < path.snapshots.size(); ++j) {
    const double s = std::clamp(path.times[j] / t1, 0.0, 1.0);
    char color[16];
    std::snprintf(color, sizeof color, "#%02x%02x%02x", static_cast<int>(30 + 200 * s), 60,
                  static_cast<int>(230 - 200 * s));
    polys_.push_back({path.snapshots[j].zeta(), color, 1.2, false});
  }
}

void SvgPlot::write(std::ostream& os, int size) const {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  const auto grow = [&](cplx p) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  };
  for (const auto& p : polys_)
    for (auto q : p.pts) grow(q);
  for (auto r : roots_) grow(r);
  if (x0 > x1) x0 = y0 = -1, x1 = y1 = 1;
  const double span = std::max({x1 - x0, y1 - y0, 1e-9}) * 1.1;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const auto X = [&](cplx p) { return size * (0.5 + (p.real() - cx) / span); };
  const auto Y = [&](cplx p) { return size * (0.5 - (p.imag() - cy) / span); };
  char buf[96];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << ' ' << size << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& p : polys_) {
    os << "<polyline fill=\"none\" stroke=\"" << p.color << "\" stroke-width=\"" << p.width << "\" points=\"";
    for (auto q : p.pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(q), Y(q));
      os << buf;
    }
    os << "\"/>\n";
  }
  for (auto r : roots_) {
    const double x = X(r), y = Y(r), d = 5.0;
    std::snprintf(buf, sizeof buf, "M%.2f %.2fL%.2f %.2fM%.2f %.2fL%.2f %.2f", x - d, y - d, x + d, y + d, x - d, y + d,
                  x + d, y - d);
    os << "<path stroke=\"black\" stroke-width=\"1.5\" d=\"" << buf << "\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace lag_geoflow::io
