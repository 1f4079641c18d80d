#include "homext/report_io.hpp"

#include <cstdio>
#include <sstream>

namespace homext {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string svg9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

nlohmann::json map_json(const AffineMap& m) {
  return {{"linear", {m.m00, m.m01, m.m10, m.m11}}, {"offset", {m.offset.x, m.offset.y}}};
}

}  // namespace

nlohmann::json mesh_to_json(const ExtensionMesh& mesh) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& row : mesh.generations()) {
    for (const PentagonCell& c : row) {
      nlohmann::json jc;
      jc["j"] = c.interval.j;
      jc["k"] = c.interval.k;
      jc["last"] = c.is_last;
      nlohmann::json src{{"X", point_json(c.X)}, {"y", point_json(c.y)}, {"x", point_json(c.x)}};
      nlohmann::json img{{"X", point_json(c.Xp)}, {"y", point_json(c.yp)}, {"x", point_json(c.xp)}};
      if (!c.is_last) {
        src["Y"] = point_json(c.Y);
        src["z"] = point_json(c.z);
        img["Y"] = point_json(c.Yp);
        img["z"] = point_json(c.zp);
      }
      jc["source"] = std::move(src);
      jc["image"] = std::move(img);
      nlohmann::json tris = nlohmann::json::array();
      for (int t = 0; t < c.triangle_count; ++t) tris.push_back(map_json(c.maps[size_t(t)]));
      jc["triangles"] = std::move(tris);
      cells.push_back(std::move(jc));
    }
  }
  return {{"depth", mesh.depth()},
          {"boundary_map", mesh.boundary_map().to_json()},
          {"cell_count", mesh.cell_count()},
          {"cells", std::move(cells)}};
}

nlohmann::json energy_report_to_json(const EnergyReport& r) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : r.per_generation)
    gens.push_back({{"j", g.j},
                    {"cells", g.cells},
                    {"exact_sum", g.exact_sum},
                    {"bound_term", g.bound_term}});
  return {{"p", r.params.p},
          {"beta", r.params.beta},
          {"depth", r.depth},
          {"partial_total", r.partial_total},
          {"tail_estimate", r.tail_estimate},
          {"total", r.total},
          {"per_generation", std::move(gens)},
          {"quadrature_check_max_rel", r.quadrature_check_max_rel},
          {"quadrature_cells_checked", r.quadrature_cells_checked},
          {"series_bound_partial", r.series_bound_partial},
          {"regime", r.regime}};
}

nlohmann::json series_bound_to_json(const SeriesBound& b) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : b.terms)
    terms.push_back(
        {{"j", t.j}, {"term", t.term}, {"majorant", t.majorant}, {"partial", t.partial}});
  return {{"regime", b.regime}, {"q", b.q}, {"terms", std::move(terms)}};
}

nlohmann::json homeo_report_to_json(const HomeoReport& r) {
  auto leg = [](const LegTraceDiagnostics& l) {
    return nlohmann::json{{"min_segment_ratio", l.min_segment_ratio},
                          {"max_segment_ratio", l.max_segment_ratio},
                          {"max_displacement", l.max_displacement}};
  };
  return {{"min_determinant", r.min_determinant},
          {"max_operator_norm", r.max_operator_norm},
          {"max_edge_vertex_mismatch", r.max_edge_vertex_mismatch},
          {"source_area_defect", r.source_area_defect},
          {"image_area_defect", r.image_area_defect},
          {"overlap_violations", r.overlap_violations},
          {"pairs_tested", r.pairs_tested},
          {"left_leg", leg(r.left_leg)},
          {"right_leg", leg(r.right_leg)},
          {"orientation_ok", r.orientation_ok},
          {"edges_consistent", r.edges_consistent},
          {"tilings_ok", r.tilings_ok},
          {"passed", r.passed()}};
}

nlohmann::json snowflake_to_json(const SnowflakeState& state) {
  const auto& e = state.exponents();
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& row : state.levels()) {
    nlohmann::json lvl = nlohmann::json::array();
    for (const SnowNode& n : row)
      lvl.push_back({{"p0", point_json(n.p0)},
                     {"p1", point_json(n.p1)},
                     {"t0", n.t0},
                     {"t1", n.t1},
                     {"word", n.word}});
    levels.push_back(std::move(lvl));
  }
  return {{"p", state.config().p},
          {"alpha", e.alpha},
          {"x", e.x},
          {"eta", e.eta},
          {"oracle", state.config().oracle.to_json()},
          {"choice2_letters", state.config().choice2_letters},
          {"bump_side", state.config().bump_side == BumpSide::outward ? "outward" : "inward"},
          {"generation", state.generation()},
          {"levels", std::move(levels)}};
}

std::string mesh_to_svg(const ExtensionMesh& mesh, bool image_side) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.02 -1.02 2.04 1.04\">\n"
      << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"#1f5fa8\" "
         "stroke-width=\"0.0015\">\n";
  for (const auto& row : mesh.generations()) {
    for (const PentagonCell& c : row) {
      for (int t = 0; t < c.triangle_count; ++t) {
        const Triangle tri = image_side ? c.image_triangle(t) : c.source_triangle(t);
        out << "<polygon points=\"";
        for (int v = 0; v < 3; ++v)
          out << svg9(tri.v(v).x) << ',' << svg9(tri.v(v).y) << (v < 2 ? " " : "");
        out << "\"/>\n";
      }
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string snowflake_to_svg(const SnowflakeState& state) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.6 -0.6 2.2 2.2\">\n"
      << "<g transform=\"translate(0,1) scale(1,-1)\" fill=\"none\" stroke=\"#a83f1f\" "
         "stroke-width=\"0.002\">\n<polygon points=\"";
  const auto& leaves = state.leaves();
  for (size_t i = 0; i < leaves.size(); ++i)
    out << svg9(leaves[i].p0.x) << ',' << svg9(leaves[i].p0.y)
        << (i + 1 < leaves.size() ? " " : "");
  out << "\"/>\n</g>\n</svg>\n";
  return out.str();
}

std::string energy_per_generation_csv(const EnergyReport& r) {
  std::ostringstream out;
  out << "j,cells,exact_sum,bound_term\n";
  for (const auto& g : r.per_generation)
    out << g.j << ',' << g.cells << ',' << format_double(g.exact_sum) << ','
        << format_double(g.bound_term) << '\n';
  return out.str();
}

std::string series_bound_csv(const SeriesBound& b) {
  std::ostringstream out;
  out << "j,term,majorant,partial\n";
  for (const auto& t : b.terms)
    out << t.j << ',' << format_double(t.term) << ',' << format_double(t.majorant) << ','
        << format_double(t.partial) << '\n';
  return out.str();
}

std::string snowflake_samples_csv(const SnowflakeState& state, int samples) {
  std::ostringstream out;
  out << "t,x,y\n";
  for (int i = 0; i < samples; ++i) {
    const double t = 4.0 * i / samples;
    const Point p = state.eval_g(t);
    out << format_double(t) << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
  return out.str();
}

}  // namespace homext
