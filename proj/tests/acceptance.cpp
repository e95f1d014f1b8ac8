// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gbk/gbk.hpp"
#include "support.hpp"

using namespace gbk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome lo_constants() {
  const auto start = std::chrono::steady_clock::now();
  const GraphMap f = lawson_osserman_graph();
  const GrassmannPoint plane = GrassmannPoint::coordinate_plane(4, 3);
  const double expected[4] = {std::acos(std::sqrt(6.0) / 6.0), std::acos(std::sqrt(6.0) / 6.0),
                              std::acos(2.0 / 3.0), 0.0};
  Rng rng(101);
  double ew = 0.0, ev = 0.0, ea = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const Vector x = random_in_shell(rng, 4, 0.2, 5.0);
    const GrassmannPoint g = gauss_map(f, x);
    ew = std::max(ew, std::abs(w_function(g, plane) - 1.0 / 9.0));
    const Matrix df = f.jacobian(x);
    ev = std::max(ev, std::abs(std::sqrt((Matrix::Identity(4, 4) + df * df.transpose()).determinant()) - 9.0));
    std::vector<double> angles = jordan_angles(g, plane).angles;
    std::sort(angles.begin(), angles.end(), std::greater<>());
    for (int k = 0; k < 4; ++k) ea = std::max(ea, std::abs(angles[k] - expected[k]));
  }
  const double t = seconds_since(start);
  return {ew <= 1e-8 && ev <= 1e-7 && ea <= 1e-8 && t < 5.0,
          fmt("max|w-1/9|=%.2e max|Delta_f-9|=%.2e max angle err=%.2e", ew, ev, ea) + fmt(" (%.2fs)", t)};
}

Outcome lo_slope() {
  const Vector x = (Vector(4) << 0.0, 0.0, 1.0, 0.0).finished();
  const double slope = lawson_osserman_graph().jacobian(x)(0, 1);
  const double factor = std::sqrt(1.0 + slope * slope);
  const double e1 = std::abs(slope - std::sqrt(5.0));
  const double e2 = std::abs(factor - std::sqrt(6.0));
  return {e1 <= 1e-10 && e2 <= 1e-10, fmt("df2/dx1=%.15f |err|=%.2e, sqrt(1+s^2) err=%.2e", slope, e1, e2)};
}

Outcome lo_minimal() {
  const GraphMap f = lawson_osserman_graph();
  Rng rng(103);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) worst = std::max(worst, geometry_at(f, random_in_shell(rng, 4, 0.2, 5.0)).mean_curvature_norm());
  return {f.mode() == DerivativeMode::analytic && worst <= 1e-6, fmt("max|H|=%.2e (analytic)", worst)};
}

Outcome plucker_identity() {
  const auto start = std::chrono::steady_clock::now();
  constexpr int n = 4, m = 3;
  Rng rng(104);
  std::uniform_int_distribution<int> pick_n(0, n - 1), pick_m(0, m - 1);
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Matrix basis = support::random_rotation(rng, n + m);
    const Multivector a = random_point(rng, n, m).plucker();
    int j = pick_n(rng), k = pick_n(rng);
    while (k == j) k = pick_n(rng);
    int al = pick_m(rng), be = pick_m(rng);
    while (be == al) be = pick_m(rng);
    worst = std::max(worst, std::abs(plucker_three_term(basis.leftCols(n), basis.rightCols(m), a, j, k, al, be)));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-10 && t < 10.0, fmt("max three-term residual=%.2e (%.2fs)", worst, t)};
}

Outcome jordan_oracle() {
  Rng rng(105);
  double worst = 0.0;
  for (const auto [n, m] : {std::pair{2, 2}, std::pair{3, 2}}) {
    for (int s = 0; s < 100; ++s) {
      const GrassmannPoint p = random_point(rng, n, m);
      const GrassmannPoint q = random_point(rng, n, m);
      std::vector<double> svd = jordan_angles(p, q).angles;
      std::sort(svd.begin(), svd.end());
      const std::vector<double> brute = support::brute_force_angles(p.frame(), q.frame());
      for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(svd[k] - brute[k]));
    }
  }
  return {worst <= 1e-5, fmt("max |SVD - brute force|=%.2e over 200 pairs", worst)};
}

Outcome geodesic_smap() {
  Rng rng(106);
  const auto [p, q] = support::random_s_orthogonal_pair(rng, 3, 2);
  const SOrthogonalPair pair(p, q);
  double es = 0.0;
  std::vector<double> ts;
  for (int k = 0; k < 100; ++k) ts.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * (k + 0.5) / 100.0);
  std::vector<GrassmannPoint> pts;
  for (double t : ts) {
    pts.push_back(pair.at(t));
    const SMapValue x = s_map(pts.back(), pair);
    es = std::max(es, std::max(std::abs(x.x1 - std::cos(t)), std::abs(x.x2 - std::sin(t))));
  }
  double ed = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < ts.size(); ++a)
    for (std::size_t b = 0; b < ts.size(); ++b) {
      if (std::abs(ts[a] - ts[b]) >= std::numbers::pi / 2.0) continue;
      ed = std::max(ed, std::abs(distance(pts[a], pts[b]) - std::abs(ts[a] - ts[b])));
      ++pairs;
    }
  return {es <= 1e-12 && ed <= 1e-10, fmt("max S-map err=%.2e, max distance err=%.2e over %.0f pairs", es, ed, pairs)};
}

RegionSpec ac_region(Rng& rng) {
  const auto [p, q] = support::random_s_orthogonal_pair(rng, 2, 2);
  return RegionSpec::make(p, q, 0.4, 0.05, -std::numbers::pi / 2.0, std::numbers::pi / 2.0);
}

Outcome level_sets() {
  Rng rng(107);
  const RegionSpec spec = ac_region(rng);
  const auto samples = sample_region(rng, spec, 200, spec.c + 2.0 * spec.delta);
  double worst = 0.0, min_cos = 1.0;
  for (const GrassmannPoint& s : samples) {
    const double t = F_value(s, spec);
    worst = std::max(worst, std::abs(w_function(s, spec.pair.at(t)) - 0.45));
    min_cos = std::min(min_cos, gradient_collinearity(s, spec));
  }
  return {worst <= 1e-10 && min_cos > 1.0 - 1e-6,
          fmt("max|w(S,P_t)-0.45|=%.2e, min cosine=1-%.2e", worst, 1.0 - min_cos)};
}

Outcome h_contracts() {
  Rng rng(108);
  const RegionSpec spec = ac_region(rng);
  const PhiFunction phi = build_phi(spec.c);
  std::vector<double> ts;
  for (int k = 0; k < 50; ++k) ts.push_back(spec.theta_lo + (spec.theta_hi - spec.theta_lo) * (k + 0.5) / 50.0);
  std::vector<GrassmannPoint> ss;
  for (int k = 0; k < 10; ++k) ss.push_back(spec.pair.at(ts[5 * k]));
  for (const GrassmannPoint& s : sample_region(rng, spec, 40, spec.c + 1e-3)) ss.push_back(s);
  const double tau = 0.75 * spec.c + 1.0 / 12.0;
  int zero_errors = 0, sublevel_errors = 0, on_geodesic = 0, checked = 0;
  for (const GrassmannPoint& s : ss)
    for (double t : ts) {
      const GrassmannPoint pt = spec.pair.at(t);
      const double h = H_value(s, t, spec, phi);
      const bool at_pt = distance(s, pt) <= 1e-9;
      on_geodesic += at_pt;
      if ((std::abs(h) <= 1e-14) != at_pt) ++zero_errors;
      const double w = w_function(s, pt);
      if (std::abs(w - tau) > 1e-6) {
        ++checked;
        if ((h <= 1.0) != (w >= tau)) ++sublevel_errors;
      }
    }
  return {zero_errors == 0 && sublevel_errors == 0 && on_geodesic > 0,
          fmt("zero-set mismatches=%.0f (%.0f geodesic hits), sublevel mismatches=%.0f", zero_errors, on_geodesic,
              sublevel_errors) +
              fmt(" of %.0f", checked)};
}

Outcome delta_w_identity() {
  Rng rng(109);
  double worst = 0.0, min_order = 1e300;
  const GraphMap holo = examples::holomorphic_square();
  const Matrix plane4 = coordinate_plane_frame(2, 2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    const Vector x = (Vector(2) << unit(rng), unit(rng)).finished();
    worst = std::max(worst, verify_delta_w(holo, x).residual);
    const OrderEstimate ord = laplacian_order(holo.parametrization(), w_field(holo.parametrization(), plane4), x);
    min_order = std::min(min_order, ord.at_noise_floor ? 0.0 : ord.order);
  }
  const GraphMap lo = lawson_osserman_graph();
  for (int s = 0; s < 20; ++s) {
    const Vector x = random_in_shell(rng, 4, 0.5, 2.0);
    worst = std::max(worst, verify_delta_w(lo, x).residual);
    const ScalarField f2 = [&lo](const Vector& y) { return lo.value(y)(1); };
    const OrderEstimate ord = laplacian_order(lo.parametrization(), f2, x, 2e-2);
    min_order = std::min(min_order, ord.at_noise_floor ? 0.0 : ord.order);
  }
  return {worst <= 1e-3 && min_order >= 1.8, fmt("max relative residual=%.2e, min observed order=%.3f", worst, min_order)};
}

Outcome rank_inequality() {
  Rng rng(110);
  const GraphMap holo = examples::holomorphic_square();
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = -1e300;
  for (int s = 0; s < 20; ++s) {
    const Vector x = (Vector(2) << unit(rng), unit(rng)).finished();
    const RankInequality r = verify_rank_inequality(holo, x);
    const double b2 = -r.rhs;
    worst = std::max(worst, (r.lhs + b2) / (1.0 + b2));
  }
  return {worst <= 1e-3, fmt("max (Delta log w + |B|^2)/(1+|B|^2)=%.2e", worst)};
}

Outcome hodge_isometry() {
  Rng rng(111);
  double worst = 0.0;
  int preserved = 0;
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 2, m = 2 + (s / 2) % 2;
    const GrassmannPoint p = random_point(rng, n, m);
    const GrassmannPoint q = random_point(rng, n, m);
    worst = std::max(worst, std::abs(w_function(p, q) - w_function(normal_complement(p), normal_complement(q))));
    const auto [sp, sq] = support::random_s_orthogonal_pair(rng, n, m);
    preserved += is_s_orthogonal(normal_complement(sp), normal_complement(sq));
  }
  return {worst <= 1e-12 && preserved == 100,
          fmt("max |w - w(complements)|=%.2e, S-orthogonal complements %.0f/100", worst, preserved)};
}

Outcome bernstein_checker() {
  const GraphMap lo = lawson_osserman_graph();
  std::vector<Vector> witnesses;
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) witnesses.push_back((Vector(4) << 0.0, 0.0, t, 0.0).finished());
  bool all_fail = true;
  double beta_err = 0.0;
  for (double beta1 : {0.5, 1.0, 2.0, 2.5, 2.9, 2.999999}) {
    const BernsteinReport r = check_bernstein_hypotheses(lo, witnesses, 10.0, beta1, 1, 0);
    all_fail = all_fail && !r.pass && !r.violations.empty();
    beta_err = std::max(beta_err, std::abs(r.min_admissible_beta1 - 9.0 / std::sqrt(6.0)));
  }
  BoxSampler box(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0), 0.0);
  const BernsteinReport affine = check_bernstein_hypotheses(registry_graph("affine"), box.samples(256), 10.0, 2.99, 0, 0);
  return {all_fail && beta_err <= 1e-6 && affine.pass,
          fmt("LO fails for all beta1<3: %.0f, |min beta1 - 9/sqrt6|=%.2e, affine passes: %.0f", all_fail, beta_err,
              affine.pass)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC-01 LO cone constants", lo_constants},
      {"AC-02 LO cone slope", lo_slope},
      {"AC-03 LO cone minimality", lo_minimal},
      {"AC-04 Plucker three-term identity", plucker_identity},
      {"AC-05 Jordan angles vs brute force", jordan_oracle},
      {"AC-06 geodesic S-map and distance", geodesic_smap},
      {"AC-07 level sets of F", level_sets},
      {"AC-08 zero and sublevel sets of H", h_contracts},
      {"AC-09 Laplacian of w identity", delta_w_identity},
      {"AC-10 rank two inequality", rank_inequality},
      {"AC-11 complement isometry", hodge_isometry},
      {"AC-12 Bernstein checker", bernstein_checker},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
