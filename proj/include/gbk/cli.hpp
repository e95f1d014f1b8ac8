#pragma once

// Command-line front end. run_cli parses arguments, dispatches a subcommand
// and writes a JSON or CSV report. Exit codes: 0 pass, 1 violation, 2 input
// error, 3 numeric failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gbk/cones.hpp"
#include "gbk/error.hpp"
#include "gbk/expression.hpp"
#include "gbk/graph.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/io.hpp"
#include "gbk/multivector.hpp"
#include "gbk/region.hpp"
#include "gbk/registry.hpp"
#include "gbk/sampling.hpp"

namespace gbk::cli {

using Json = nlohmann::json;

enum ExitCode : int { kPass = 0, kViolation = 1, kInputError = 2, kNumericFailure = 3 };

struct RunConfig {
  std::string command;
  std::string identity;
  std::string p_path;
  std::string q_path;
  std::string spec_path;
  std::string csv_path;
  std::string frame_out;
  std::vector<std::string> s_paths;
  std::string graph;
  std::string expression;
  std::string immersion;
  std::string variant = "general";
  std::vector<std::string> witness_points;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> at;
  double exclusion = 0.0;
  double c = 0.4;
  double delta = 0.05;
  double theta_lo = -std::numbers::pi / 2.0;
  double theta_hi = std::numbers::pi / 2.0;
  double beta0 = 10.0;
  double beta1 = 2.99;
  double mu0 = 1.0;
  double h = 1e-3;
  int alpha = 1;  // 1-based
  int index = 1;  // 1-based
  int n = 0;
  int samples = 200;
  int points = 20;
  int curve = 0;
  bool rank_le_2 = false;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output;
};

struct Report {
  Json summary = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  int exit_code = kPass;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_cell(const Json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "nan";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return quoted + "\"";
  }
  return s;
}

inline void write_report(const Report& report, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "csv") {
    for (std::size_t c = 0; c < report.columns.size(); ++c) out << (c ? "," : "") << report.columns[c];
    out << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
      out << '\n';
    }
    return;
  }
  Json j = report.summary;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[report.columns[c]] = row[c];
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

namespace detail {

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json to_json(const std::vector<double>& v) { return Json(v); }

inline Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad coordinate '" + item + "' in point '" + text + "'");
    }
    if (used != item.size()) throw InvalidInput("bad coordinate '" + item + "' in point '" + text + "'");
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline GrassmannPoint load_plane(const std::string& path, const char* what) {
  if (path.empty()) throw InvalidInput(std::string("missing --") + what + " frame file");
  return io::load_frame(path);
}

inline bool is_cone_graph(const std::string& key) {
  const std::string name = parse_registry_key(key).name;
  return name == "lawson-osserman" || name == "coassociative";
}

// Random points in the natural domain of a registry graph.
inline std::vector<Vector> sample_graph_domain(const std::string& key, const GraphMap& f, Rng& rng, int count) {
  std::vector<Vector> out;
  const std::string name = parse_registry_key(key).name;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    Vector x;
    if (is_cone_graph(key)) {
      x = random_in_shell(rng, f.n(), 0.2, 5.0);
    } else if (name == "clifford-cone") {
      x = random_in_shell(rng, 3, 0.5, 2.0);
      if (x(0) * x(0) + x(1) * x(1) - x(2) * x(2) < 0.2 * x.squaredNorm()) continue;
    } else {
      x.resize(f.n());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unit(rng);
    }
    out.push_back(std::move(x));
  }
  return out;
}

inline GraphMap resolve_graph(const RunConfig& cfg, const std::string& fallback) {
  if (!cfg.expression.empty()) {
    if (cfg.n < 1) throw InvalidInput("--expr needs --n");
    return expression_graph(cfg.expression, cfg.n);
  }
  return registry_graph(cfg.graph.empty() ? fallback : cfg.graph);
}

}  // namespace detail

inline Report cmd_jordan(const RunConfig& cfg) {
  const GrassmannPoint p = detail::load_plane(cfg.p_path, "p");
  const GrassmannPoint q =
      cfg.q_path.empty() ? GrassmannPoint::coordinate_plane(p.n(), p.m()) : io::load_frame(cfg.q_path);
  require_same_shape(p, q);
  const JordanData jd = jordan_angles(p, q);
  const SOrthogonality so = s_orthogonality(p, q);
  Report r;
  r.summary = {{"command", "jordan"},
               {"n", p.n()},
               {"m", p.m()},
               {"angles", detail::to_json(jd.angles)},
               {"cosines", detail::to_json(jd.cosines)},
               {"w", w_function(p, q)},
               {"distance", distance(p, q)},
               {"s_orthogonal", so.s_orthogonal},
               {"right_angles", so.right_angles},
               {"intersection_dim", so.intersection_dim}};
  r.columns = {"index", "angle", "cosine"};
  for (std::size_t i = 0; i < jd.angles.size(); ++i) r.rows.push_back({i + 1, jd.angles[i], jd.cosines[i]});
  return r;
}

inline Report cmd_smap(const RunConfig& cfg) {
  const GrassmannPoint p = detail::load_plane(cfg.p_path, "p");
  const GrassmannPoint q = detail::load_plane(cfg.q_path, "q");
  const SOrthogonalPair pair(p, q);
  Report r;
  r.columns = {"label", "x1", "x2", "r", "theta"};
  auto add = [&](const std::string& label, const GrassmannPoint& s) {
    const SMapValue x = s_map(s, pair);
    const double radius = std::hypot(x.x1, x.x2);
    double theta = std::numeric_limits<double>::quiet_NaN();
    try {
      theta = polar(x).theta;
    } catch (const DomainError&) {
    }
    r.rows.push_back({label, x.x1, x.x2, radius, theta});
  };
  for (const std::string& path : cfg.s_paths) add(path, io::load_frame(path));
  for (int k = 0; k < cfg.curve; ++k) {
    const double t = -std::numbers::pi + 2.0 * std::numbers::pi * k / cfg.curve;
    add("P_t=" + format_number(t), pair.at(t));
  }
  r.summary = {{"command", "smap"}, {"n", p.n()}, {"m", p.m()}, {"count", r.rows.size()}};
  return r;
}

inline RegionSpec region_spec(const RunConfig& cfg) {
  if (!cfg.spec_path.empty()) return io::load_region_spec(cfg.spec_path);
  return RegionSpec::make(detail::load_plane(cfg.p_path, "p"), detail::load_plane(cfg.q_path, "q"), cfg.c, cfg.delta,
                          cfg.theta_lo, cfg.theta_hi);
}

inline Report cmd_region_check(const RunConfig& cfg) {
  const RegionSpec spec = region_spec(cfg);
  const PhiVariant variant = cfg.variant == "rank-two" ? PhiVariant::rank_two : PhiVariant::general;
  if (cfg.variant != "general" && cfg.variant != "rank-two") throw InvalidInput("--variant must be general or rank-two");
  const PhiFunction phi = build_phi(spec.c, variant);
  Rng rng(cfg.seed);
  const auto samples = sample_region(rng, spec, cfg.samples, spec.c + 2.0 * spec.delta);
  std::uniform_real_distribution<double> angle(spec.theta_lo, spec.theta_hi);
  Report r;
  r.columns = {"index", "r", "theta", "F", "level_residual", "collinearity", "t", "w_t", "H", "consistent"};
  double worst_level = 0.0;
  double worst_cos = 1.0;
  int inconsistent = 0;
  const double margin = 1e-6;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const GrassmannPoint& s = samples[k];
    const Polar pol = polar(s, spec.pair);
    const LevelCheck lc = check_level(s, spec);
    const double cosine = gradient_collinearity(s, spec);
    const double t = angle(rng);
    const double wt = w_function(s, spec.pair.at(t));
    const double hv = H_value(s, t, spec, phi, cfg.mu0);
    bool consistent = true;
    if (wt >= phi.threshold() + margin) consistent = hv <= 1.0;
    else if (wt <= phi.threshold() - margin) consistent = hv > 1.0;
    worst_level = std::max(worst_level, lc.residual);
    worst_cos = std::min(worst_cos, cosine);
    if (!consistent) ++inconsistent;
    r.rows.push_back({static_cast<int>(k), pol.r, pol.theta, lc.t, lc.residual, cosine, t, wt, hv, consistent});
  }
  const bool pass = worst_level <= 1e-10 && worst_cos >= 1.0 - 1e-6 && inconsistent == 0;
  r.summary = {{"command", "region-check"},
               {"c", spec.c},
               {"delta", spec.delta},
               {"theta", {spec.theta_lo, spec.theta_hi}},
               {"variant", cfg.variant},
               {"mu0", cfg.mu0},
               {"threshold", phi.threshold()},
               {"samples", samples.size()},
               {"max_level_residual", worst_level},
               {"min_collinearity", worst_cos},
               {"sublevel_misclassified", inconsistent},
               {"pass", pass}};
  r.exit_code = pass ? kPass : kViolation;
  return r;
}

inline Report cmd_graph_check(const RunConfig& cfg) {
  const int alpha = cfg.alpha - 1;
  const int i = cfg.index - 1;
  BernsteinReport br;
  std::string source;
  int n = 0;
  if (!cfg.csv_path.empty()) {
    const io::TabulatedGraph tab = io::load_tabulated_csv(cfg.csv_path);
    br = check_bernstein_hypotheses(tab.interior_points, tab.interior_jacobians, cfg.beta0, cfg.beta1, alpha, i);
    source = cfg.csv_path;
    n = tab.n;
  } else {
    const GraphMap f = detail::resolve_graph(cfg, "affine");
    n = f.n();
    std::vector<double> lo = cfg.lower, hi = cfg.upper;
    if (lo.empty()) lo.assign(n, -1.0);
    if (hi.empty()) hi.assign(n, 1.0);
    if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
      throw InvalidInput("--lower/--upper need " + std::to_string(n) + " values");
    BoxSampler box(Eigen::Map<const Vector>(lo.data(), n), Eigen::Map<const Vector>(hi.data(), n), cfg.exclusion);
    for (const std::string& w : cfg.witness_points) {
      const Vector x = detail::parse_point(w);
      if (x.size() != n) throw InvalidInput("witness point '" + w + "' has the wrong dimension");
      box.add_point(x);
    }
    const std::vector<Vector> pts = box.samples(cfg.samples);
    br = check_bernstein_hypotheses(f, pts, cfg.beta0, cfg.beta1, alpha, i);
    source = f.name();
  }
  Report r;
  r.columns.clear();
  for (int k = 0; k < n; ++k) r.columns.push_back("x" + std::to_string(k + 1));
  for (const char* c : {"delta_f", "slope", "slope_factor", "margin_be2", "margin_slope", "ok"}) r.columns.push_back(c);
  for (const BernsteinSample& s : br.samples) {
    std::vector<Json> row;
    for (Eigen::Index k = 0; k < s.x.size(); ++k) row.push_back(s.x(k));
    for (double v : {s.delta_f, s.slope, s.slope_factor, s.margin_be2, s.margin_slope}) row.push_back(v);
    row.push_back(s.ok);
    r.rows.push_back(std::move(row));
  }
  Json witnesses = Json::array();
  for (std::size_t v : br.violations) witnesses.push_back(detail::to_json(br.samples[v].x));
  r.summary = {{"command", "graph-check"},
               {"source", source},
               {"mode", cfg.csv_path.empty() ? (cfg.expression.empty() ? "registry" : "expression") : "tabulated"},
               {"beta0", br.beta0},
               {"beta1", br.beta1},
               {"alpha", cfg.alpha},
               {"i", cfg.index},
               {"samples", br.samples.size()},
               {"max_delta_f", br.max_delta_f},
               {"min_margin_be2", br.min_margin_be2},
               {"min_margin_slope", br.min_margin_slope},
               {"min_admissible_beta1", br.min_admissible_beta1},
               {"beta1_below_three", br.beta1_below_three},
               {"hypotheses_hold", br.hypotheses_hold},
               {"violations", witnesses},
               {"pass", br.pass}};
  r.exit_code = br.pass ? kPass : kViolation;
  return r;
}

namespace detail {

inline Report verify_graph_identity(const RunConfig& cfg) {
  const std::string key =
      !cfg.graph.empty() ? cfg.graph : (cfg.identity == "subhar3" ? "holomorphic-sq(0.25)" : "holomorphic-sq");
  const GraphMap f = resolve_graph(cfg, key);
  Rng rng(cfg.seed);
  const auto pts = sample_graph_domain(cfg.expression.empty() ? key : "", f, rng, cfg.points);
  Report r;
  for (int k = 0; k < f.n(); ++k) r.columns.push_back("x" + std::to_string(k + 1));
  double worst = 0.0;
  bool pass = true;
  double tol = 0.0;
  if (cfg.identity == "dw") {
    tol = 1e-6;
    r.columns.insert(r.columns.end(), {"residual", "ok"});
    for (const Vector& x : pts) {
      const DwCheck chk = verify_dw(f, x);
      std::vector<Json> row(x.data(), x.data() + x.size());
      row.insert(row.end(), {chk.residual, chk.residual <= tol});
      r.rows.push_back(std::move(row));
      worst = std::max(worst, chk.residual);
    }
    pass = worst <= tol;
  } else if (cfg.identity == "delta-w") {
    tol = 1e-3;
    r.columns.insert(r.columns.end(), {"lhs", "rhs", "residual", "ok"});
    for (const Vector& x : pts) {
      const DeltaWCheck chk = verify_delta_w(f, x, cfg.h);
      std::vector<Json> row(x.data(), x.data() + x.size());
      row.insert(row.end(), {chk.lhs, chk.rhs, chk.residual, chk.residual <= tol});
      r.rows.push_back(std::move(row));
      worst = std::max(worst, chk.residual);
    }
    pass = worst <= tol;
  } else if (cfg.identity == "rank") {
    tol = 1e-3;
    r.columns.insert(r.columns.end(), {"lhs", "rhs", "rank", "ok"});
    for (const Vector& x : pts) {
      const RankInequality chk = verify_rank_inequality(f, x, cfg.h);
      std::vector<Json> row(x.data(), x.data() + x.size());
      row.insert(row.end(), {chk.lhs, chk.rhs, chk.rank, chk.ok});
      r.rows.push_back(std::move(row));
      worst = std::max(worst, (chk.lhs - chk.rhs) / (1.0 + std::abs(chk.rhs)));
      pass = pass && chk.ok;
    }
  } else {
    worst = -std::numeric_limits<double>::infinity();
    r.columns.insert(r.columns.end(), {"lhs", "B_norm2", "w", "c1_estimate", "ok"});
    for (const Vector& x : pts) {
      const Subhar3Check chk = verify_subhar3(f, x, cfg.delta, cfg.h);
      std::vector<Json> row(x.data(), x.data() + x.size());
      row.insert(row.end(), {chk.lhs, chk.B_norm2, chk.w, chk.c1_estimate, chk.ok});
      r.rows.push_back(std::move(row));
      worst = std::max(worst, chk.lhs);
      pass = pass && chk.ok;
    }
  }
  r.summary = {{"command", "verify"}, {"identity", cfg.identity}, {"graph", f.name()}, {"points", pts.size()},
               {"worst", worst}, {"tolerance", tol}, {"pass", pass}};
  r.exit_code = pass ? kPass : kViolation;
  return r;
}

inline Report verify_pluck(const RunConfig& cfg) {
  constexpr int n = 4, m = 3;
  constexpr double tol = 1e-10;
  Rng rng(cfg.seed);
  std::uniform_int_distribution<int> pick_n(0, n - 1), pick_m(0, m - 1);
  Report r;
  r.columns = {"index", "j", "k", "alpha", "beta", "residual", "ok"};
  double worst = 0.0;
  for (int s = 0; s < cfg.points; ++s) {
    const Matrix basis = random_orthonormal(rng, n + m, n + m);
    const Matrix tangent = basis.leftCols(n);
    const Matrix normal = basis.rightCols(m);
    const Multivector a = random_point(rng, n, m).plucker();
    int j = pick_n(rng), k = pick_n(rng);
    while (k == j) k = pick_n(rng);
    int al = pick_m(rng), be = pick_m(rng);
    while (be == al) be = pick_m(rng);
    const double res = std::abs(plucker_three_term(tangent, normal, a, j, k, al, be));
    worst = std::max(worst, res);
    r.rows.push_back({s, j + 1, k + 1, al + 1, be + 1, res, res <= tol});
  }
  r.summary = {{"command", "verify"}, {"identity", "pluck"}, {"points", cfg.points}, {"worst", worst},
               {"tolerance", tol}, {"pass", worst <= tol}};
  r.exit_code = worst <= tol ? kPass : kViolation;
  return r;
}

inline Report verify_level_set(const RunConfig& cfg) {
  constexpr double tol = 1e-10;
  RegionSpec spec = [&] {
    if (!cfg.spec_path.empty() || !cfg.p_path.empty()) return region_spec(cfg);
    return RegionSpec::make(GrassmannPoint::coordinate_plane(2, 2, {0, 1}), GrassmannPoint::coordinate_plane(2, 2, {2, 1}),
                            cfg.c, cfg.delta, cfg.theta_lo, cfg.theta_hi);
  }();
  Rng rng(cfg.seed);
  const auto samples = sample_region(rng, spec, cfg.points, spec.c + 2.0 * spec.delta);
  Report r;
  r.columns = {"index", "t", "w", "residual", "ok"};
  double worst = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const LevelCheck lc = check_level(samples[k], spec);
    worst = std::max(worst, lc.residual);
    r.rows.push_back({static_cast<int>(k), lc.t, lc.w, lc.residual, lc.residual <= tol});
  }
  r.summary = {{"command", "verify"}, {"identity", "level-set"}, {"c", spec.c}, {"delta", spec.delta},
               {"level", spec.c + spec.delta}, {"points", samples.size()}, {"worst", worst},
               {"tolerance", tol}, {"pass", worst <= tol}};
  r.exit_code = worst <= tol ? kPass : kViolation;
  return r;
}

}  // namespace detail

inline Report cmd_lo_cone(const RunConfig& cfg) {
  static const double kAngles[4] = {std::acos(std::sqrt(6.0) / 6.0), std::acos(std::sqrt(6.0) / 6.0),
                                    std::acos(2.0 / 3.0), 0.0};
  Rng rng(cfg.seed);
  std::vector<Vector> pts;
  if (!cfg.at.empty()) pts.push_back(Eigen::Map<const Vector>(cfg.at.data(), static_cast<Eigen::Index>(cfg.at.size())));
  while (static_cast<int>(pts.size()) < cfg.points) pts.push_back(random_in_shell(rng, 4, 0.2, 5.0));
  for (const Vector& x : pts)
    if (x.size() != 4) throw InvalidInput("LO cone points live in R^4");
  Report r;
  r.columns = {"x1", "x2", "x3", "x4", "w", "delta_f", "theta1", "theta2", "theta3", "theta4", "ok"};
  double dw = 0.0, dv = 0.0, da = 0.0;
  for (const Vector& x : pts) {
    const LOConeFrames fr = lo_cone_frames(x);
    const ProfileGraphValue g = lo_graph(x);
    const Matrix df = g.jacobian;
    const double v = std::sqrt((Matrix::Identity(4, 4) + df * df.transpose()).determinant());
    double a = 0.0;
    for (int k = 0; k < 4; ++k) a = std::max(a, std::abs(fr.sorted_angles[k] - kAngles[k]));
    const double ew = std::abs(fr.w - 1.0 / 9.0);
    const double ev = std::abs(v - 9.0);
    dw = std::max(dw, ew);
    dv = std::max(dv, ev);
    da = std::max(da, a);
    r.rows.push_back({x(0), x(1), x(2), x(3), fr.w, v, fr.sorted_angles[0], fr.sorted_angles[1], fr.sorted_angles[2],
                      fr.sorted_angles[3], ew <= 1e-8 && ev <= 1e-7 && a <= 1e-8});
  }
  if (!cfg.frame_out.empty()) {
    std::ofstream f(cfg.frame_out);
    if (!f) throw InvalidInput("cannot write '" + cfg.frame_out + "'");
    f << io::frame_to_json(lo_cone_frames(pts.front()).tangent_basis()).dump(2) << '\n';
  }
  const double slope = lo_graph((Vector(4) << 0.0, 0.0, 1.0, 0.0).finished()).jacobian(0, 1);
  const bool pass = dw <= 1e-8 && dv <= 1e-7 && da <= 1e-8;
  r.summary = {{"command", "lo-cone"},
               {"points", pts.size()},
               {"expected_w", 1.0 / 9.0},
               {"expected_delta_f", 9.0},
               {"expected_angles", {kAngles[0], kAngles[1], kAngles[2], kAngles[3]}},
               {"max_w_error", dw},
               {"max_delta_f_error", dv},
               {"max_angle_error", da},
               {"slope_f2_x1_at_e3", slope},
               {"pass", pass}};
  r.exit_code = pass ? kPass : kViolation;
  return r;
}

inline Report cmd_verify(const RunConfig& cfg) {
  const std::string& id = cfg.identity;
  if (id == "dw" || id == "delta-w" || id == "rank" || id == "subhar3") return detail::verify_graph_identity(cfg);
  if (id == "pluck") return detail::verify_pluck(cfg);
  if (id == "level-set") return detail::verify_level_set(cfg);
  if (id == "lo-constants") {
    Report r = cmd_lo_cone(cfg);
    r.summary["command"] = "verify";
    r.summary["identity"] = "lo-constants";
    return r;
  }
  throw InvalidInput("unknown identity '" + id + "' (dw, delta-w, rank, subhar3, pluck, level-set, lo-constants)");
}

inline Report cmd_rigidity(const RunConfig& cfg) {
  if (cfg.immersion.empty()) throw InvalidInput("missing --immersion");
  const SphereImmersion imm = registry_immersion(cfg.immersion);
  const GrassmannPoint p = detail::load_plane(cfg.p_path, "p");
  const GrassmannPoint q = detail::load_plane(cfg.q_path, "q");
  Rng rng(cfg.seed);
  const bool periodic = imm.name != "equator";
  std::uniform_real_distribution<double> coord(periodic ? 0.0 : -2.0, periodic ? 2.0 * std::numbers::pi : 2.0);
  std::vector<Vector> params;
  for (int s = 0; s < cfg.samples; ++s) {
    Vector u(imm.k);
    for (int a = 0; a < imm.k; ++a) u(a) = coord(rng);
    params.push_back(std::move(u));
  }
  const RigidityReport rep = check_rigidity_hypothesis(imm, p, q, params, cfg.rank_le_2);
  Report r;
  for (int a = 0; a < imm.k; ++a) r.columns.push_back("u" + std::to_string(a + 1));
  r.columns.insert(r.columns.end(), {"w_P", "w_Q", "value", "ok"});
  double min_value = std::numeric_limits<double>::infinity();
  for (const RigiditySample& s : rep.samples) {
    std::vector<Json> row(s.param.data(), s.param.data() + s.param.size());
    row.insert(row.end(), {s.w_P, s.w_Q, s.value, !(s.below_threshold || s.excluded_ray)});
    r.rows.push_back(std::move(row));
    min_value = std::min(min_value, s.value);
  }
  r.summary = {{"command", "rigidity"}, {"immersion", cfg.immersion}, {"threshold", rep.threshold},
               {"samples", rep.samples.size()}, {"min_value", min_value}, {"violations", rep.violations.size()},
               {"pass", rep.pass}};
  r.exit_code = rep.pass ? kPass : kViolation;
  return r;
}

inline Report dispatch(const RunConfig& cfg) {
  if (cfg.command == "jordan") return cmd_jordan(cfg);
  if (cfg.command == "smap") return cmd_smap(cfg);
  if (cfg.command == "region-check") return cmd_region_check(cfg);
  if (cfg.command == "graph-check") return cmd_graph_check(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "lo-cone") return cmd_lo_cone(cfg);
  if (cfg.command == "rigidity") return cmd_rigidity(cfg);
  throw InvalidInput("no subcommand given");
}

// Parses argv (including the program name) into cfg. Returns an exit code if
// parsing ends the run (help or error), otherwise nullopt.
inline std::optional<int> parse_args(const std::vector<std::string>& args, RunConfig& cfg, std::ostream& out,
                                     std::ostream& err) {
  CLI::App app{"Grassmannian geometry and Bernstein-type hypothesis checks", "gbk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML config file with option defaults");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--seed", cfg.seed, "random seed (GBK_SEED overrides)");
  app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output,-o", cfg.output, "report path (default stdout)");

  auto planes = [&](CLI::App* sub, bool required) {
    auto* p = sub->add_option("--p", cfg.p_path, "frame file for P");
    auto* q = sub->add_option("--q", cfg.q_path, "frame file for Q");
    if (required) {
      p->required();
      q->required();
    }
  };
  auto region_opts = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "region spec JSON");
    sub->add_option("--c", cfg.c);
    sub->add_option("--delta", cfg.delta);
    sub->add_option("--theta-lo", cfg.theta_lo);
    sub->add_option("--theta-hi", cfg.theta_hi);
  };
  auto graph_opts = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph, "registry key");
    sub->add_option("--expr", cfg.expression, "components of f separated by ';'");
    sub->add_option("--n", cfg.n, "number of variables for --expr");
  };

  auto* jordan = app.add_subcommand("jordan", "Jordan angles between two planes");
  jordan->add_option("--p", cfg.p_path, "frame file for P")->required();
  jordan->add_option("--q", cfg.q_path, "frame file for Q (default: coordinate plane)");

  auto* smap = app.add_subcommand("smap", "S-map coordinates of planes and of the geodesic");
  planes(smap, true);
  smap->add_option("--s", cfg.s_paths, "frame files to map");
  smap->add_option("--curve", cfg.curve, "number of geodesic samples")->check(CLI::NonNegativeNumber);

  auto* region = app.add_subcommand("region-check", "level sets of F and sublevel sets of H");
  planes(region, false);
  region_opts(region);
  region->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  region->add_option("--mu0", cfg.mu0)->check(CLI::PositiveNumber);
  region->add_option("--variant", cfg.variant)->check(CLI::IsMember({"general", "rank-two"}));

  auto* graph = app.add_subcommand("graph-check", "Bernstein slope and Delta_f hypotheses");
  graph_opts(graph);
  graph->add_option("--csv", cfg.csv_path, "tabulated graph on a tensor grid");
  graph->add_option("--lower", cfg.lower)->delimiter(',');
  graph->add_option("--upper", cfg.upper)->delimiter(',');
  graph->add_option("--exclusion", cfg.exclusion, "radius of the excluded ball around 0");
  graph->add_option("--point", cfg.witness_points, "extra sample point x1,..,xn");
  graph->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  graph->add_option("--beta0", cfg.beta0);
  graph->add_option("--beta1", cfg.beta1);
  graph->add_option("--alpha", cfg.alpha, "component of f (1-based)")->check(CLI::PositiveNumber);
  graph->add_option("--i", cfg.index, "coordinate x^i (1-based)")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "numerical identity checks");
  verify->add_option("identity", cfg.identity, "dw, delta-w, rank, subhar3, pluck, level-set, lo-constants")
      ->required();
  graph_opts(verify);
  planes(verify, false);
  region_opts(verify);
  verify->add_option("--points", cfg.points)->check(CLI::PositiveNumber);
  verify->add_option("--step", cfg.h, "finite-difference step")->check(CLI::PositiveNumber);

  auto* lo = app.add_subcommand("lo-cone", "Lawson-Osserman cone constants");
  lo->add_option("--points", cfg.points)->check(CLI::PositiveNumber);
  lo->add_option("--at", cfg.at, "first point x1,..,x4")->delimiter(',');
  lo->add_option("--frame-out", cfg.frame_out, "write the tangent plane at the first point");

  auto* rig = app.add_subcommand("rigidity", "w_P^2 + w_Q^2 along the normal Gauss map of a cone");
  rig->add_option("--immersion", cfg.immersion)->required();
  planes(rig, true);
  rig->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  rig->add_flag("--rank-le-2", cfg.rank_le_2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (const char* env = std::getenv("GBK_SEED")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: GBK_SEED must be an unsigned integer\n";
      return kInputError;
    }
  }
  return std::nullopt;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  if (auto code = parse_args(args, cfg, out, err)) return *code;
  try {
    const Report report = dispatch(cfg);
    if (cfg.output.empty()) {
      write_report(report, cfg, out);
    } else {
      std::ofstream file(cfg.output);
      if (!file) throw InvalidInput("cannot write '" + cfg.output + "'");
      write_report(report, cfg, file);
    }
    return report.exit_code;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace gbk::cli
