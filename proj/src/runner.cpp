#include "homext/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "homext/report_io.hpp"

namespace homext {

namespace {

const char* kCommands[] = {"extend", "energy", "snowflake", "verify", "bound"};

void validate(const RunConfig& c) {
  bool known = false;
  for (const char* cmd : kCommands) known = known || c.command == cmd;
  if (!known)
    fail(errc::invalid_parameter,
         "command must be one of extend|energy|snowflake|verify|bound, got \"" + c.command + "\"");
  if (c.command == "energy" || c.command == "bound" || c.command == "extend")
    (void)EnergyParams(c.p, c.beta);  // range check
  if (c.command == "snowflake") (void)derive_exponents(c.snow_p);
  if (c.depth < 0 || c.depth > 16) fail(errc::invalid_parameter, "depth must be in 0..16");
  if (c.snow_generation < 0 || c.snow_generation > 9)
    fail(errc::invalid_parameter, "snowflake generation must be in 0..9");
  if (c.out_dir.empty()) fail(errc::invalid_parameter, "output directory must not be empty");
}

void write_file(const std::filesystem::path& path, const std::string& contents,
                nlohmann::json* manifest_artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::invalid_parameter, "cannot open output file " + path.string());
  out << contents;
  manifest_artifacts->push_back(path.filename().string());
}

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& s) { return double(splitmix(s) >> 11) * 0x1.0p-53; }

MonotoneMap random_pwl(std::uint64_t seed, int knot_count) {
  std::uint64_t s = seed ^ 0x8f3c1a2b4d5e6f70ULL;
  std::vector<double> inc(static_cast<size_t>(knot_count));
  double total = 0.0;
  for (double& r : inc) {
    r = 0.05 + uniform01(s);
    total += r;
  }
  std::vector<double> knots{-1.0}, values{-1.0};
  double acc = -1.0;
  for (int i = 1; i < knot_count; ++i) {
    knots.push_back(-1.0 + 2.0 * double(i) / knot_count);
    acc += 2.0 * inc[size_t(i - 1)] / total;
    values.push_back(acc);
  }
  knots.push_back(1.0);
  values.push_back(1.0);
  return MonotoneMap::piecewise_linear(std::move(knots), std::move(values));
}

ChoiceOracle oracle_from_config(const RunConfig& c) {
  nlohmann::json spec = c.snow_oracle;
  if (spec.value("kind", "") == "seeded" && spec.value("seed", std::uint64_t{0}) == 0)
    spec["seed"] = c.seed;
  return ChoiceOracle::from_json(spec);
}

SnowConfig snow_config(const RunConfig& c) {
  SnowConfig sc;
  sc.p = c.snow_p;
  sc.oracle = oracle_from_config(c);
  sc.choice2_letters = c.choice2_letters;
  if (c.bump_side == "outward") sc.bump_side = BumpSide::outward;
  else if (c.bump_side == "inward") sc.bump_side = BumpSide::inward;
  else fail(errc::invalid_parameter, "bump_side must be outward or inward");
  return sc;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  return {{"command", command},
          {"boundary_map", boundary_map},
          {"p", p},
          {"beta", beta},
          {"depth", depth},
          {"snowflake",
           {{"p", snow_p},
            {"oracle", snow_oracle},
            {"generation", snow_generation},
            {"choice2_letters", choice2_letters},
            {"bump_side", bump_side}}},
          {"out", out_dir},
          {"seed", seed},
          {"json_logs", json_logs}};
}

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  RunConfig c;
  c.command = doc.value("command", "");
  if (doc.contains("boundary_map")) c.boundary_map = doc.at("boundary_map");
  c.p = doc.value("p", c.p);
  c.beta = doc.value("beta", c.beta);
  c.depth = doc.value("depth", c.depth);
  if (doc.contains("snowflake")) {
    const auto& s = doc.at("snowflake");
    c.snow_p = s.value("p", c.snow_p);
    if (s.contains("oracle")) c.snow_oracle = s.at("oracle");
    c.snow_generation = s.value("generation", c.snow_generation);
    c.choice2_letters = s.value("choice2_letters", c.choice2_letters);
    c.bump_side = s.value("bump_side", c.bump_side);
  }
  c.out_dir = doc.value("out", c.out_dir);
  c.seed = doc.value("seed", std::uint64_t{0});
  c.json_logs = doc.value("json_logs", false);
  return c;
}

nlohmann::json verify_all(std::uint64_t seed) {
  nlohmann::json suites = nlohmann::json::array();
  auto add = [&](const std::string& name, bool passed, nlohmann::json details) {
    suites.push_back({{"name", name}, {"passed", passed}, {"details", std::move(details)}});
  };

  {  // Source tiling is exact in double precision.
    bool ok = true;
    nlohmann::json det;
    for (const auto& [name, map] :
         {std::pair<std::string, MonotoneMap>{"identity", MonotoneMap::identity()},
          {"cantor(0.3)", MonotoneMap::cantor(0.3)}}) {
      ExtensionMesh mesh(map, 8);
      const HomeoReport rep = check_homeomorphism(mesh, 200, seed);
      det[name] = rep.source_area_defect;
      ok = ok && rep.source_area_defect == 0.0;
    }
    add("tiling-exactness", ok, det);
  }

  {  // Homeomorphism battery over the three map families.
    bool ok = true;
    nlohmann::json det;
    const MonotoneMap maps[] = {MonotoneMap::power(3.0), MonotoneMap::cantor(0.25),
                                random_pwl(seed + 1, 13)};
    const char* names[] = {"power(3)", "cantor(0.25)", "pwl"};
    for (int i = 0; i < 3; ++i) {
      ExtensionMesh mesh(maps[i], 8);
      const HomeoReport rep = check_homeomorphism(mesh, 500, seed + std::uint64_t(i));
      det[names[i]] = {{"min_det", rep.min_determinant},
                       {"mismatch", rep.max_edge_vertex_mismatch},
                       {"overlaps", rep.overlap_violations}};
      ok = ok && rep.min_determinant > 0.0 && rep.max_edge_vertex_mismatch <= 1e-12 &&
           rep.overlap_violations == 0;
    }
    add("homeomorphism", ok, det);
  }

  {  // Identity energy calibration against the closed form.
    const ExtensionMesh mesh(MonotoneMap::identity(), 12);
    const EnergyParams half(1.0, 0.5), flat(1.0, 0.0);
    const EnergyReport rh = mesh_energy(mesh, half, 0.0);
    const EnergyReport rf = mesh_energy(mesh, flat, 0.0);
    const double err_h = std::abs(rh.total - identity_energy_limit(half));
    const double err_f = std::abs(rf.total - identity_energy_limit(flat));
    add("energy-identity-calibration", err_h <= 1e-4 && err_f <= 1e-6,
        {{"err_p1_beta05", err_h}, {"err_p1_beta0", err_f}});
  }

  {  // Both regime majorants hold term by term.
    bool ok = true;
    nlohmann::json det;
    const MonotoneMap phi = MonotoneMap::cantor(0.3);
    for (const auto& [label, params] :
         {std::pair<std::string, EnergyParams>{"q>=1", EnergyParams(1.5, 0.1)},
          {"q<1", EnergyParams(1.5, 0.5)}}) {
      const SeriesBound sb = series_bound(phi, params, 10);
      double worst = 0.0;
      for (const auto& t : sb.terms) worst = std::max(worst, t.term - t.majorant * (1.0 + 1e-12));
      det[label] = worst;
      ok = ok && worst <= 0.0;
    }
    add("series-regimes", ok, det);
  }

  {  // Snowflake exactness for the all-bump curve.
    SnowConfig sc;
    sc.p = 1.0 / 3.0;
    SnowflakeState st(sc);
    st.refine_to(5);
    double max_rel = 0.0;
    for (const SnowNode& n : st.leaves()) {
      const double f = st.formula_segment_length(n.counts);
      max_rel = std::max(max_rel, std::abs(n.segment_length() - f) / f);
    }
    const bool count_ok = st.leaves().size() == 4096;
    add("snowflake-exactness", count_ok && max_rel <= 1e-12,
        {{"segments", st.leaves().size()}, {"max_rel_len_err", max_rel}});
  }

  {  // Eta identity under a seeded oracle.
    SnowConfig sc;
    sc.p = 1.0 / 3.0;
    sc.oracle = ChoiceOracle::seeded(seed + 11);
    SnowflakeState st(sc);
    st.refine_to(6);
    const EtaCheck ec = eta_identity_check(st);
    add("eta-identity", ec.max_residual <= 1e-10 && ec.length_bound_ok,
        {{"max_residual", ec.max_residual}, {"length_bound_ok", ec.length_bound_ok}});
  }

  {  // Claim comparability on sampled conforming pairs.
    SnowConfig sc;
    sc.p = 1.0 / 3.0;
    sc.oracle = ChoiceOracle::seeded(seed + 19);
    SnowflakeState st(sc);
    st.refine_to(6);
    const auto pairs = sample_conforming_pairs(st, 4.0, 100, seed + 23);
    bool ok = !pairs.empty();
    int max_n = 0;
    int cap = 0;
    for (const auto& pr : pairs) {
      const ClaimDiag d = claim_check(st, pr.first, pr.second, 4.0);
      ok = ok && d.within_bounds && d.n_value <= d.n_cap;
      max_n = std::max(max_n, d.n_value);
      cap = d.n_cap;
    }
    add("claim-comparability", ok, {{"pairs", pairs.size()}, {"max_N", max_n}, {"N_cap", cap}});
  }

  {  // Flat snowflake quasisymmetry is exactly 1 within one side.
    SnowConfig sc;
    sc.p = 0.25;
    sc.oracle = ChoiceOracle::all_straight();
    SnowflakeState st(sc);
    st.refine_to(4);
    const QsProbe qs = quasisymmetry_probe(st, 500, seed + 31, 1e-3, 0.4, true, true);
    add("flat-quasisymmetry", qs.max_ratio == 1.0 && qs.min_ratio == 1.0,
        {{"max_ratio", qs.max_ratio}, {"min_ratio", qs.min_ratio}});
  }

  bool all = true;
  for (const auto& s : suites) all = all && s.at("passed").get<bool>();
  return {{"all_passed", all}, {"suites", std::move(suites)}};
}

int run(const RunConfig& config) {
  validate(config);
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path out(config.out_dir);
  nlohmann::json artifacts = nlohmann::json::array();
  int exit_code = 0;

  if (config.command == "extend") {
    const ExtensionMesh mesh(MonotoneMap::from_json(config.boundary_map), config.depth);
    write_file(out / "mesh.json", mesh_to_json(mesh).dump(1) + "\n", &artifacts);
    write_file(out / "source_mesh.svg", mesh_to_svg(mesh, false), &artifacts);
    write_file(out / "image_mesh.svg", mesh_to_svg(mesh, true), &artifacts);
    const HomeoReport rep = check_homeomorphism(mesh, 1000, config.seed);
    write_file(out / "homeo_report.json", homeo_report_to_json(rep).dump(1) + "\n", &artifacts);
    if (!rep.passed()) exit_code = 3;
  } else if (config.command == "energy") {
    const ExtensionMesh mesh(MonotoneMap::from_json(config.boundary_map), config.depth);
    const EnergyParams params(config.p, config.beta);
    const EnergyReport rep = mesh_energy(mesh, params, 0.01, config.seed);
    write_file(out / "energy_report.json", energy_report_to_json(rep).dump(1) + "\n", &artifacts);
    write_file(out / "energy_per_generation.csv", energy_per_generation_csv(rep), &artifacts);
  } else if (config.command == "bound") {
    const MonotoneMap phi = MonotoneMap::from_json(config.boundary_map);
    const SeriesBound sb = series_bound(phi, EnergyParams(config.p, config.beta), config.depth);
    write_file(out / "series_bound.csv", series_bound_csv(sb), &artifacts);
    write_file(out / "series_bound.json", series_bound_to_json(sb).dump(1) + "\n", &artifacts);
  } else if (config.command == "snowflake") {
    SnowflakeState state(snow_config(config));
    std::ostringstream csv;
    csv << "generation,holder_interval_C,holder_arc_C,cover_max,qs_max,qs_min\n";
    for (int g = 1; g <= config.snow_generation; ++g) {
      state.refine();
      const HolderEstimate he = holder_estimate(state, 100, config.seed + std::uint64_t(g));
      const QsProbe qs = quasisymmetry_probe(state, 2000, config.seed + std::uint64_t(g));
      csv << g << ',' << format_double(he.interval_constant) << ','
          << format_double(he.arc_constant) << ',' << he.max_cover_count << ','
          << format_double(qs.max_ratio) << ',' << format_double(qs.min_ratio) << '\n';
    }
    write_file(out / "curve.svg", snowflake_to_svg(state), &artifacts);
    write_file(out / "state.json", snowflake_to_json(state).dump(1) + "\n", &artifacts);
    write_file(out / "holder_qs.csv", csv.str(), &artifacts);
  } else if (config.command == "verify") {
    const nlohmann::json results = verify_all(config.seed);
    write_file(out / "verify.json", results.dump(1) + "\n", &artifacts);
    if (!results.at("all_passed").get<bool>()) exit_code = 3;
  }

  nlohmann::json manifest{{"tool", "homext"},
                          {"config", config.to_json()},
                          {"artifacts", artifacts}};
  std::ofstream mf(out / "manifest.json", std::ios::binary);
  mf << manifest.dump(1) << "\n";
  return exit_code;
}

}  // namespace homext
