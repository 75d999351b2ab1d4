#include "sectorial/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "sectorial/calculus.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/rademacher.hpp"
#include "sectorial/serialize.hpp"
#include "sectorial/sums.hpp"

namespace sectorial::cli {

namespace {

class Stopwatch {
 public:
  template <class F>
  auto time(const std::string& part, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto out = f();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    times_[part] += dt.count();
    return out;
  }
  json to_json() const { return times_; }

 private:
  std::map<std::string, double> times_;
};

json quadrature_json(const QuadratureReport& q) {
  return {{"angle", q.angle},
          {"r_min", q.r_min},
          {"r_max", q.r_max},
          {"nodes", q.nodes},
          {"truncation_bound", real_to_json(q.truncation_bound)},
          {"discretization_estimate", real_to_json(q.discretization_estimate)}};
}

json estimate_json(const BoundEstimate& b) {
  json j;
  to_json(j, b);
  return j;
}

bool has(const json& body, const std::string& key) { return body.contains(key) && !body.at(key).is_null(); }

const json& section(const json& body, const std::string& key) {
  static const json empty = json::object();
  if (!has(body, key)) return empty;
  const json& s = body.at(key);
  if (!s.is_object()) throw ConfigError("\"" + key + "\" must be an object");
  return s;
}

std::vector<Matrix> operator_list(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.empty()) throw ConfigError("\"" + key + "\" must be a nonempty array of operators");
  std::vector<Matrix> out;
  for (const json& op : v) out.push_back(operator_from_config(op));
  for (const Matrix& m : out)
    if (m.rows() != out.front().rows()) throw ConfigError("\"" + key + "\" members must share a dimension");
  return out;
}

std::vector<Matrix> family_from_config(const json& spec) {
  if (spec.is_array()) {
    json wrapped = {{"family", spec}};
    return operator_list(wrapped, "family");
  }
  if (!spec.is_object() || !spec.contains("scalars"))
    throw ConfigError("\"family\" must be an array of operators or {\"scalars\": [..], \"dim\": d}");
  const int d = integer_or(spec, "dim", 0);
  if (d < 1) throw ConfigError("scalar family needs a positive \"dim\"");
  std::vector<Matrix> out;
  for (const json& c : spec.at("scalars")) {
    if (!c.is_number() && !c.is_array()) throw ConfigError("family scalars must be numbers or [re, im]");
    out.push_back(complex_from_json(c) * Matrix::Identity(d, d));
  }
  if (out.empty()) throw ConfigError("scalar family is empty");
  return out;
}

SignConfig sign_from_config(const json& s, std::uint64_t seed) {
  SignConfig c;
  c.seed = seed;
  if (s.is_null()) return c;
  const std::string mode = s.value("mode", std::string("exhaustive"));
  if (mode != "exhaustive" && mode != "randomized") throw ConfigError("sign \"mode\" must be exhaustive or randomized");
  c.mode = mode == "exhaustive" ? SearchMode::Exhaustive : SearchMode::Randomized;
  c.n_max = integer_or(s, "n_max", c.n_max);
  c.samples = integer_or(s, "samples", c.samples);
  return c;
}

SearchConfig search_from_config(const json& s, SearchConfig c, std::uint64_t seed) {
  c.seed = seed;
  if (s.is_null()) return c;
  c.starts = integer_or(s, "starts", c.starts);
  c.steps = integer_or(s, "steps", c.steps);
  c.selection_cap = integer_or(s, "selection_cap", c.selection_cap);
  if (c.starts < 1 || c.steps < 1 || c.selection_cap < 1) throw ConfigError("search settings must be positive");
  return c;
}

OperatorNormOptions norm_options(const json& s, std::uint64_t seed) {
  OperatorNormOptions o;
  o.seed = seed;
  o.starts = integer_or(s, "starts", o.starts);
  o.max_iterations = integer_or(s, "max_iterations", o.max_iterations);
  if (o.starts < 1 || o.max_iterations < 1) throw ConfigError("search settings must be positive");
  return o;
}

json get_or_null(const json& body, const std::string& key) { return has(body, key) ? body.at(key) : json(); }

int scaled_nodes(int npd, int refine) { return npd << std::min(refine, 6); }

ContourSpec contour_for(const json& body, const std::string& key, const OperatorMatrix& A, double domain_angle,
                        int refine) {
  ContourSpec c;
  if (has(body, key)) {
    c = contour_from_config(body.at(key));
  } else {
    c = ContourSpec::between(spectral_angle(A).angle(), domain_angle);
  }
  c.nodes_per_decade = scaled_nodes(c.nodes_per_decade, refine);
  return c;
}

// ---- fcalc ---------------------------------------------------------------

Report run_fcalc(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  const OperatorMatrix A(operator_from_config(field(b, "operator")));
  const std::string method = b.value("method", std::string("contour"));
  json results;
  if (method == "contour") {
    const ScalarFunction f = function_from_config(field(b, "function"));
    const ContourSpec c = contour_for(b, "contour", A, f.domain_angle, cfg.refine);
    const FcalcResult r = sw.time("fcalc", [&] { return contour_fcalc(A, f, c); });
    results = {{"value", matrix_to_json(r.value)}, {"quadrature", quadrature_json(r.report)}};
  } else if (method == "regularized") {
    const ScalarFunction f = function_from_config(field(b, "function"));
    const ContourSpec c = contour_for(b, "contour", A, f.domain_angle, cfg.refine);
    RegularizedOptions o;
    const json& ro = section(b, "regularized");
    o.n_max = number_or(ro, "n_max", o.n_max);
    o.tolerance = number_or(ro, "tolerance", o.tolerance);
    o.ceiling = number_or(ro, "ceiling", o.ceiling);
    const RegularizedResult r = sw.time("fcalc", [&] { return regularized_fcalc(A, f, c, o); });
    results = {{"value", matrix_to_json(r.value)},   {"n_values", r.n_values},
               {"sup_trace", r.sup_trace},           {"sup", r.sup},
               {"converged", r.converged},           {"quadrature", quadrature_json(r.report)}};
  } else if (method == "operator") {
    const ScalarFunction f = function_from_config(field(b, "function"));
    const double s = number_or(b, "s", 0.5);
    OperatorFunction F;
    F.domain_angle = f.domain_angle;
    const Eigen::Index d = A.dim();
    if (has(b, "commutant")) {
      const Matrix M = operator_from_config(b.at("commutant"));
      if (M.rows() != d) throw ConfigError("\"commutant\" must match the operator dimension");
      F.evaluator = [f, M](cplx z) -> Matrix { return f(z) * M; };
    } else {
      F.evaluator = [f, d](cplx z) -> Matrix { return f(z) * Matrix::Identity(d, d); };
    }
    const ContourSpec c = contour_for(b, "contour", A, f.domain_angle, cfg.refine);
    const FcalcResult r = sw.time("fcalc", [&] { return operator_fcalc(A, F, s, c); });
    results = {{"value", matrix_to_json(r.value)}, {"s", s}, {"quadrature", quadrature_json(r.report)}};
  } else if (method == "joint") {
    const OperatorMatrix B(operator_from_config(field(b, "B")));
    if (B.dim() != A.dim()) throw ConfigError("\"B\" must match the operator dimension");
    BivariateFunction g;
    const json& spec = field(b, "bivariate");
    if (spec == "w_over_w_plus_z") {
      g.evaluator = [](cplx w, cplx z) { return w / (w + z); };
      g.domain_angle_a = g.domain_angle_b = pi / 2;
    } else if (spec.is_object() && spec.contains("product")) {
      const json& fs = spec.at("product");
      if (!fs.is_array() || fs.size() != 2) throw ConfigError("bivariate product needs two functions");
      const ScalarFunction f1 = function_from_config(fs[0]);
      const ScalarFunction f2 = function_from_config(fs[1]);
      g.evaluator = [f1, f2](cplx w, cplx z) { return f1(w) * f2(z); };
      g.domain_angle_a = f1.domain_angle;
      g.domain_angle_b = f2.domain_angle;
      if (f1.decay && f2.decay)
        g.decay = DecayCertificate{f1.decay->C * f2.decay->C, std::min(f1.decay->epsilon, f2.decay->epsilon)};
    } else {
      throw ConfigError("\"bivariate\" must be \"w_over_w_plus_z\" or {\"product\": [f, g]}");
    }
    const ContourSpec ca = contour_for(b, "contour", A, g.domain_angle_a, cfg.refine);
    const ContourSpec cb = contour_for(b, "contour_b", B, g.domain_angle_b, cfg.refine);
    JointOptions o;
    const std::string route = b.value("route", std::string("automatic"));
    if (route == "automatic") o.route = JointRoute::Automatic;
    else if (route == "direct") o.route = JointRoute::Direct;
    else if (route == "regularized") o.route = JointRoute::Regularized;
    else throw ConfigError("\"route\" must be automatic, direct or regularized");
    const JointResult r = sw.time("fcalc", [&] { return joint_fcalc(A, B, g, ca, cb, o); });
    results = {{"value", matrix_to_json(r.value)},
               {"regularized", r.regularized},
               {"quadrature_a", quadrature_json(r.report_a)},
               {"quadrature_b", quadrature_json(r.report_b)}};
  } else {
    throw ConfigError("\"method\" must be contour, regularized, operator or joint");
  }
  return {{{"results", results}}, ""};
}

// ---- rbound --------------------------------------------------------------

Report run_rbound(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  const std::uint64_t seed = cfg.require_seed("rbound");
  const SignConfig sign = sign_from_config(get_or_null(b, "sign"), seed);
  const SearchConfig search = search_from_config(get_or_null(b, "search"), SearchConfig{}, seed);
  json results = json::object();
  bool any = false;

  if (has(b, "family")) {
    any = true;
    const std::vector<Matrix> members = family_from_config(b.at("family"));
    const NormSpec norm = norm_from_config(get_or_null(b, "norm"), members.front().rows());
    const OperatorFamily family(members, norm);
    const int n = integer_or(b, "n", static_cast<int>(std::min<std::size_t>(members.size(), 3)));
    if (n < 1) throw ConfigError("\"n\" must be positive");
    std::vector<std::string> which{"r", "wr", "u"};
    if (has(b, "estimators")) which = b.at("estimators").get<std::vector<std::string>>();
    results["uniform_bound"] = family.uniform_bound();
    for (const std::string& e : which) {
      BoundEstimate est;
      if (e == "r") est = sw.time("r", [&] { return r_bound(family, n, sign, search); });
      else if (e == "wr") est = sw.time("wr", [&] { return wr_bound(family, n, sign, search); });
      else if (e == "u") est = sw.time("u", [&] { return u_bound(family, n, sign, search); });
      else throw ConfigError("unknown estimator \"" + e + "\"");
      results[e] = estimate_json(est);
    }
    if (results.contains("r")) results["value"] = results["r"]["value"];
  }
  if (has(b, "properties")) {
    any = true;
    const json& p = section(b, "properties");
    const NormSpec norm = norm_from_config(field(p, "norm"), integer_or(field(p, "norm"), "dim", 0));
    const int n = integer_or(p, "n", 2);
    if (n < 1) throw ConfigError("properties \"n\" must be positive");
    const SearchConfig ps = search_from_config(get_or_null(p, "search"), SearchConfig{16, 100, seed, 16}, seed);
    const PropertyConstants pc = sw.time("properties", [&] { return property_constants(norm, n, sign, ps); });
    results["properties"] = {{"alpha", estimate_json(pc.alpha)}, {"A", estimate_json(pc.A)}, {"Delta", estimate_json(pc.Delta)}};
  }
  if (has(b, "ray_extension")) {
    any = true;
    const json& r = section(b, "ray_extension");
    const ScalarFunction f = function_from_config(field(r, "function"));
    const int d = integer_or(r, "dim", 1);
    if (d < 1) throw ConfigError("ray_extension \"dim\" must be positive");
    OperatorFunction F;
    F.domain_angle = f.domain_angle;
    F.evaluator = [f, d](cplx z) -> Matrix { return f(z) * Matrix::Identity(d, d); };
    const NormSpec norm = norm_from_config(get_or_null(r, "norm"), d);
    RayExtensionConfig rc;
    rc.K = integer_or(r, "K", rc.K);
    rc.sector_angles = integer_or(r, "sector_angles", rc.sector_angles);
    rc.selection = integer_or(r, "selection", rc.selection);
    rc.search = search_from_config(get_or_null(r, "search"), rc.search, seed);
    const std::vector<double> t = default_t_grid(integer_or(r, "t_points", 4));
    const BoundEstimate e = sw.time("ray_extension", [&] {
      return ray_ubound_extension(F, number(r, "nu"), number_or(r, "a", 2.0), number(r, "sigma0"), t, norm, rc);
    });
    results["ray_extension"] = estimate_json(e);
  }
  if (has(b, "uncseries")) {
    any = true;
    const json& u = section(b, "uncseries");
    const std::vector<Matrix> U = operator_list(u, "U");
    const std::vector<Matrix> V = operator_list(u, "V");
    if (U.size() != V.size() || U.front().rows() != V.front().rows())
      throw ConfigError("uncseries \"U\" and \"V\" must have equal length and dimension");
    const NormSpec norm = norm_from_config(get_or_null(u, "norm"), U.front().rows());
    const int K = integer_or(u, "K", static_cast<int>(U.size()));
    const BoundEstimate e = sw.time("uncseries", [&] { return uncseries_partial_sums(U, V, norm, K, sign, search); });
    results["uncseries"] = estimate_json(e);
  }
  if (!any) throw ConfigError("rbound needs one of \"family\", \"properties\", \"ray_extension\", \"uncseries\"");
  return {{{"results", results}}, ""};
}

// ---- angles --------------------------------------------------------------

Report run_angles(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  const OperatorMatrix A(operator_from_config(field(b, "operator")));
  const NormSpec norm = norm_from_config(get_or_null(b, "norm"), A.dim());
  const std::vector<double> angles = numbers(b, "angles");
  if (angles.empty()) throw ConfigError("\"angles\" must be nonempty");
  std::vector<std::string> which{"sectorial_constant", "curve"};
  if (has(b, "estimators")) which = b.at("estimators").get<std::vector<std::string>>();
  json results = json::object();
  std::vector<double> sc(angles.size(), std::nan(""));
  std::optional<AngleCurve> curve;
  for (const std::string& e : which) {
    if (e == "sectorial_constant") {
      const json& g = section(b, "grid");
      SectorialGrid grid;
      grid.radii_per_decade = scaled_nodes(integer_or(g, "radii_per_decade", grid.radii_per_decade), cfg.refine);
      grid.angles = integer_or(g, "angles", grid.angles);
      grid.margin_decades = number_or(g, "margin_decades", grid.margin_decades);
      json list = json::array();
      for (std::size_t i = 0; i < angles.size(); ++i) {
        const BoundEstimate est = sw.time("sectorial_constant", [&] {
          return sectorial_constant(A, Sector(angles[i]), norm, grid);
        });
        sc[i] = est.value;
        list.push_back(estimate_json(est));
      }
      results["sectorial_constant"] = list;
    } else if (e == "curve") {
      const std::uint64_t seed = cfg.require_seed("the R-sectoriality curve");
      const json& c = section(b, "curve");
      AngleFamilyConfig ac;
      const std::string kind = c.value("kind", std::string("R"));
      if (kind == "R") ac.kind = BoundKind::R;
      else if (kind == "WR") ac.kind = BoundKind::WR;
      else if (kind == "U") ac.kind = BoundKind::U;
      else throw ConfigError("curve \"kind\" must be R, WR or U");
      ac.radii_per_decade = integer_or(c, "radii_per_decade", ac.radii_per_decade);
      ac.angles = integer_or(c, "angles", ac.angles);
      ac.margin_decades = number_or(c, "margin_decades", ac.margin_decades);
      ac.selection = integer_or(c, "selection", ac.selection);
      ac.ceiling = number_or(c, "ceiling", ac.ceiling);
      ac.refine_levels = integer_or(c, "refine_levels", ac.refine_levels) + cfg.refine;
      ac.sign = sign_from_config(get_or_null(c, "sign"), seed);
      ac.search = search_from_config(get_or_null(c, "search"), ac.search, seed);
      curve = sw.time("curve", [&] { return r_sectorial_angle(A, norm, angles, ac); });
      results["curve"] = sectorial::to_json(*curve);
    } else {
      throw ConfigError("unknown estimator \"" + e + "\"");
    }
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "sigma,sectorial_constant,bound,refined_bound,members\n";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    csv << angles[i] << ',' << sc[i];
    if (curve) {
      const AnglePoint& p = curve->points[i];
      csv << ',' << p.bound.value << ',' << p.refined_value << ',' << p.members;
    } else {
      csv << ",nan,nan,0";
    }
    csv << '\n';
  }
  return {{{"results", results}}, csv.str()};
}

// ---- hinf ----------------------------------------------------------------

SignSearchOptions sign_search_from_config(const json& s, const ExperimentConfig& cfg) {
  SignSearchOptions o;
  const std::string mode = s.value("mode", std::string("exhaustive"));
  if (mode == "randomized") {
    o.mode = SearchMode::Randomized;
    o.seed = cfg.require_seed("randomized sign search");
  } else if (mode == "exhaustive") {
    o.mode = SearchMode::Exhaustive;
    if (cfg.seed) o.seed = *cfg.seed;
  } else {
    throw ConfigError("sign search \"mode\" must be exhaustive or randomized");
  }
  o.starts = integer_or(s, "starts", o.starts);
  o.sweeps = integer_or(s, "sweeps", o.sweeps);
  return o;
}

Report run_hinf(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  const OperatorMatrix A(operator_from_config(field(b, "operator")));
  const NormSpec norm = norm_from_config(get_or_null(b, "norm"), A.dim());
  json results = json::object();
  bool any = false;
  if (has(b, "criterion")) {
    any = true;
    const json& c = section(b, "criterion");
    const SignSearchOptions o = sign_search_from_config(c, cfg);
    const std::vector<double> t = default_t_grid(integer_or(c, "t_points", 8));
    const int K = integer_or(c, "K", 8) << std::min(cfg.refine, 4);
    const BoundEstimate e = sw.time("criterion", [&] {
      return hinfty_criterion(A, number(c, "nu"), number_or(c, "s", 0.5), t, K, norm, o);
    });
    results["criterion"] = estimate_json(e);
  }
  if (has(b, "constant")) {
    any = true;
    const json& c = section(b, "constant");
    HinftyFamilyConfig hc;
    hc.seed = cfg.require_seed("hinfty_constant");
    hc.samples = integer_or(c, "samples", hc.samples);
    hc.max_degree = integer_or(c, "max_degree", hc.max_degree);
    hc.rational_samples = integer_or(c, "rational_samples", hc.rational_samples);
    hc.nodes_per_decade = scaled_nodes(integer_or(c, "nodes_per_decade", hc.nodes_per_decade), cfg.refine);
    const BoundEstimate e = sw.time("constant", [&] { return hinfty_constant(A, Sector(number(c, "sigma")), norm, hc); });
    results["constant"] = estimate_json(e);
  }
  if (has(b, "dyadic")) {
    any = true;
    const json& c = section(b, "dyadic");
    const ScalarFunction f = function_from_config(field(c, "function"));
    const SignSearchOptions o = sign_search_from_config(c, cfg);
    const BoundEstimate e = sw.time("dyadic", [&] {
      return unconditional_dyadic_bound(A, f, number_or(c, "t", 1.0), integer_or(c, "K", 8), norm, o);
    });
    results["dyadic"] = estimate_json(e);
  }
  if (!any) throw ConfigError("hinf needs one of \"criterion\", \"constant\", \"dyadic\"");
  return {{{"results", results}}, ""};
}

// ---- sum -----------------------------------------------------------------

Report run_sum(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  auto [Am, Bm] = pair_from_config(field(b, "pair"));
  if (Am.rows() != Bm.rows()) throw ConfigError("pair operators must share a dimension");
  const NormSpec norm = norm_from_config(get_or_null(b, "norm"), Am.rows());
  const CommutingPair pair{OperatorMatrix(Am), OperatorMatrix(Bm)};
  json results = {{"A", matrix_to_json(Am)},
                  {"B", matrix_to_json(Bm)},
                  {"commutator_norm", pair.commutator_norm()},
                  {"angle_a", pair.angle_a()},
                  {"angle_b", pair.angle_b()}};
  pair.require_angle_sum();
  if (b.value("inverse_sum", true)) {
    const Matrix f = sw.time("inverse_sum", [&] { return inverse_sum_operator(pair); });
    const Matrix S = Am + Bm;
    results["inverse_sum"] = {{"value", matrix_to_json(f)},
                              {"identity_residual", spectral_norm(f * S - Am) / std::max(spectral_norm(Am), 1e-300)}};
  }
  if (b.value("closedness", true)) {
    const OperatorNormOptions o = norm_options(section(b, "search"), cfg.require_seed("sum_closedness_constant"));
    results["closedness"] = estimate_json(sw.time("closedness", [&] { return sum_closedness_constant(pair, norm, o); }));
  }
  if (has(b, "r_sectoriality")) {
    const json& r = section(b, "r_sectoriality");
    const std::uint64_t seed = cfg.require_seed("sum_r_sectoriality");
    SumSampleConfig sc;
    sc.radii_per_decade = integer_or(r, "radii_per_decade", sc.radii_per_decade) << std::min(cfg.refine, 4);
    sc.angles = integer_or(r, "angles", sc.angles);
    sc.margin_decades = number_or(r, "margin_decades", sc.margin_decades);
    sc.selection = integer_or(r, "selection", sc.selection);
    sc.sign = sign_from_config(get_or_null(r, "sign"), seed);
    sc.search = search_from_config(get_or_null(r, "search"), sc.search, seed);
    const BoundEstimate e = sw.time("r_sectoriality", [&] {
      return sum_r_sectoriality(pair, Sector(number(r, "rho")), norm, sc);
    });
    results["r_sectoriality"] = estimate_json(e);
  }
  return {{{"results", results}}, ""};
}

// ---- maxreg --------------------------------------------------------------

Report run_maxreg(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  CauchyProblem problem;
  problem.A = operator_from_config(field(b, "operator"));
  problem.T = number_or(b, "T", problem.T);
  problem.m = integer_or(b, "m", problem.m);
  problem.p = number_or(b, "p", problem.p);
  problem.q = number_or(b, "q", problem.q);
  const int levels = integer_or(b, "levels", 1) + cfg.refine;
  MaxregOptions mo;
  const bool hilbert = problem.p == 2.0 && problem.q == 2.0;
  const std::uint64_t seed = hilbert ? cfg.seed.value_or(mo.search.seed) : cfg.require_seed("maxreg with p or q != 2");
  mo.search = norm_options(section(b, "search"), seed);
  json results = json::object();
  const RegularityReport r = sw.time("maxreg", [&] { return maximal_regularity_constant(problem, levels, mo); });
  json rj;
  to_json(rj, r);
  results["maxreg"] = rj;
  results["value"] = r.constant;
  if (has(b, "s_delta")) {
    const json& s = section(b, "s_delta");
    const TimeGrid grid{problem.T, problem.m, problem.q};
    const std::vector<double> deltas = numbers(s, "deltas");
    const auto sweep = sw.time("s_delta", [&] {
      return s_delta_sweep(OperatorMatrix(problem.A), deltas, problem.p, grid, mo.search);
    });
    json list = json::array();
    for (const BoundEstimate& e : sweep) list.push_back(estimate_json(e));
    results["s_delta"] = list;
  }
  return {{{"results", results}}, trace_csv(r)};
}

// ---- gt ------------------------------------------------------------------

Report run_gt(const ExperimentConfig& cfg, Stopwatch& sw) {
  const json& b = cfg.body;
  const OperatorMatrix A(operator_from_config(field(b, "operator")));
  const NormSpec norm = norm_from_config(has(b, "norm") ? b.at("norm") : json{{"p", 1}}, A.dim());
  const double s = number_or(b, "s", 0.5);
  const double nu = number(b, "nu");
  const int npd = integer_or(b, "nodes_per_decade", 40);
  const int levels = 1 + std::max(cfg.refine, 1);
  std::vector<Vector> xs;
  if (has(b, "x")) {
    const Vector x = vector_from_json(b.at("x"));
    if (x.size() != A.dim()) throw ConfigError("\"x\" must match the operator dimension");
    xs.push_back(x);
  }
  if (has(b, "random_vectors")) {
    const int count = integer_or(b, "random_vectors", 0);
    if (count < 1) throw ConfigError("\"random_vectors\" must be positive");
    const std::uint64_t seed = cfg.require_seed("gt with random vectors");
    for (int i = 0; i < count; ++i) {
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
      Vector x = complex_gaussian(A.dim(), rng);
      xs.push_back(x / norm.norm(x));
    }
  }
  if (xs.empty()) throw ConfigError("gt needs \"x\" or \"random_vectors\"");

  json lv = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "nodes_per_decade,vector,value,ratio\n";
  for (int l = 0; l < levels; ++l) {
    const int n = npd << l;
    std::vector<GtResult> res(xs.size());
    sw.time("gt", [&] {
      for (std::size_t i = 0; i < xs.size(); ++i) res[i] = gt_absolute_integral(A, s, nu, xs[i], norm, n);
      return 0;
    });
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    json vals = json::array();
    for (std::size_t i = 0; i < res.size(); ++i) {
      lo = std::min(lo, res[i].ratio);
      hi = std::max(hi, res[i].ratio);
      vals.push_back({{"value", res[i].value}, {"ratio", res[i].ratio}, {"nodes", res[i].nodes}});
      csv << n << ',' << i << ',' << res[i].value << ',' << res[i].ratio << '\n';
    }
    lv.push_back({{"nodes_per_decade", n}, {"interval", {lo, hi}}, {"vectors", vals}});
  }
  const auto& first = lv.front()["interval"];
  const auto& last = lv.back()["interval"];
  auto change = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  json results = {{"levels", lv},
                  {"interval", last},
                  {"endpoint_change",
                   std::max(change(first[0].get<double>(), last[0].get<double>()),
                            change(first[1].get<double>(), last[1].get<double>()))}};
  return {{{"results", results}}, csv.str()};
}

}  // namespace

const char* library_version() { return SECTORIAL_VERSION; }

Report run(const ExperimentConfig& config) {
  static const std::map<std::string, std::function<Report(const ExperimentConfig&, Stopwatch&)>> table{
      {"fcalc", run_fcalc}, {"rbound", run_rbound}, {"angles", run_angles}, {"hinf", run_hinf},
      {"sum", run_sum},     {"maxreg", run_maxreg}, {"gt", run_gt}};
  const auto it = table.find(config.command);
  if (it == table.end()) throw ConfigError("unknown command \"" + config.command + "\"");
  Stopwatch sw;
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  try {
    r = it->second(config, sw);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  json times = sw.to_json();
  times["total"] = dt.count();
  r.document["command"] = config.command;
  r.document["version"] = library_version();
  r.document["config"] = config.body;
  r.document["wall_times"] = times;
  return r;
}

json numerical_part(const json& report) {
  json out = report;
  out.erase("wall_times");
  return out;
}

}  // namespace sectorial::cli
