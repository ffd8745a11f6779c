#pragma once

// JSON / CSV / SVG emission. JSON doubles are printed with 17 significant
// digits so every value reads back bit-identical.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "lag_geoflow/cycle.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/geodesic.hpp"
#include "lag_geoflow/tolerance.hpp"

namespace lag_geoflow::io {

using json = nlohmann::json;

std::string dump(const json& j);

json complex_array(const std::vector<cplx>& v);
std::vector<cplx> parse_complex_array(const json& j);

// {"coeffs": [[re, im], ...], "n": int}
json fiber_to_json(const MilnorFiber& fiber);
FiberPtr fiber_from_json(const json& j, const ToleranceProfile& tol = {});
// {"roots": [[re, im], ...]}
json roots_to_json(const MilnorFiber& fiber);

// {"type": "segment"} | {"type": "parabolic", "a": x} | {"type": "bezier", "points": [[re, im], ...]}.
// Segment and parabolic arcs join root `from` to root `to` (indices into the sorted roots).
Arc arc_from_json(const json& j, const MilnorFiber& fiber);

// {"fiber", "N", "zeta", "z"}
json cycle_to_json(const SymmetricCircle& circle);
// Accepts the cycle schema, or {"fiber", "N", "arc"}; `fiber` fills a missing "fiber" key.
SymmetricCircle cycle_from_json(const json& j, FiberPtr fiber, const ToleranceProfile& tol = {});

json positivity_to_json(const PositivityReport& rep);
json match_to_json(const MatchResult& m);
json trace_to_json(const LeafTrace& trace);
json geodesic_to_json(const GeodesicPath& path, int snapshot_stride = 1);
// Reads times, snapshots and h back from geodesic_to_json output.
GeodesicPath geodesic_from_json(const json& j, const ToleranceProfile& tol = {});
json report_to_json(const GeodesicReport& rep);
json tolerances_to_json(const ToleranceProfile& tol);

// u, re_zeta, im_zeta, re_z, im_z, mu
void write_cycle_csv(std::ostream& os, const SymmetricCircle& circle, const ToleranceProfile& tol = {});
// chart_tag, re_zeta, im_zeta, re_z, im_z, r, theta, arclength
void write_leaf_csv(std::ostream& os, const std::vector<LeafTrace>& traces);

// Static picture of the zeta-plane.
class SvgPlot {
 public:
  void add_roots(const MilnorFiber& fiber);
  void add_cycle(const SymmetricCircle& circle, const std::string& color = "#1f4e9c", double width = 1.6);
  void add_leaf(const LeafTrace& trace);
  // Snapshots graded from blue (t = 0) to red (t = 1).
  void add_path(const GeodesicPath& path);
  void write(std::ostream& os, int size = 640) const;

 private:
  struct Poly {
    std::vector<cplx> pts;
    std::string color;
    double width;
    bool closed;
  };
  std::vector<Poly> polys_;
  std::vector<cplx> roots_;
};

}  // namespace lag_geoflow::io
