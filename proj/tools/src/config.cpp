#include "sectorial/cli/config.hpp"

#include <cmath>

#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/serialize.hpp"

namespace sectorial::cli {

namespace {

template <class F>
auto schema(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Vector complex_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = schema(where, [&] { return complex_from_json(j[i]); });
  return v;
}

Matrix rows_matrix(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0 || !rows[0].is_array()) throw ConfigError("matrix must be a nonempty array of rows");
  const auto m = static_cast<Eigen::Index>(rows[0].size());
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& r = rows[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != m)
      throw ConfigError("matrix rows must have equal length");
    for (Eigen::Index k = 0; k < m; ++k)
      out(i, k) = schema("matrix entry", [&] { return complex_from_json(r[static_cast<std::size_t>(k)]); });
  }
  return out;
}

Matrix jordan_block(cplx lambda, Eigen::Index size) {
  Matrix J = lambda * Matrix::Identity(size, size);
  for (Eigen::Index i = 0; i + 1 < size; ++i) J(i, i + 1) = 1.0;
  return J;
}

Vector sample_spectrum(Eigen::Index d, double angle, Rng& rng) {
  std::uniform_real_distribution<double> lr(-1.0, 1.0);
  std::uniform_real_distribution<double> th(-angle, angle);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = std::polar(std::pow(10.0, lr(rng)), th(rng));
  return v;
}

}  // namespace

std::uint64_t ExperimentConfig::require_seed(const std::string& what) const {
  if (!seed) throw ConfigError(what + " is randomized and needs a \"seed\" (or --seed)");
  return *seed;
}

ExperimentConfig parse_config(const std::string& text, const std::string& command,
                              std::optional<std::uint64_t> seed_override, int refine) {
  ExperimentConfig c;
  try {
    c.body = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!c.body.is_object()) throw ConfigError("config must be a JSON object");
  if (c.body.contains("command")) {
    const json& cmd = c.body.at("command");
    if (!cmd.is_string()) throw ConfigError("\"command\" must be a string");
    if (cmd.get<std::string>() != command)
      throw ConfigError("config is for \"" + cmd.get<std::string>() + "\", not \"" + command + "\"");
  }
  c.command = command;
  c.body["command"] = command;
  if (seed_override) c.body["seed"] = *seed_override;
  if (c.body.contains("seed")) {
    const json& s = c.body.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("\"seed\" must be a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (refine < 0) throw ConfigError("--refine must be nonnegative");
  c.refine = refine;
  if (refine > 0) c.body["refine"] = refine;
  return c;
}

const json& field(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ConfigError("field \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.is_object() && j.contains(key) ? number(j, key) : fallback;
}

int integer_or(const json& j, const std::string& key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError("field \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_array()) throw ConfigError("field \"" + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError("field \"" + key + "\" must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix operator_from_config(const json& spec) {
  if (!spec.is_object()) throw ConfigError("operator spec must be an object");
  if (spec.contains("matrix")) {
    const json& m = spec.at("matrix");
    Matrix out = m.is_array() ? rows_matrix(m) : schema("matrix", [&] { return matrix_from_json(m); });
    if (out.rows() != out.cols()) throw ConfigError("operator matrix must be square");
    return out;
  }
  if (spec.contains("diagonal")) return complex_list(spec.at("diagonal"), "diagonal").asDiagonal();
  if (spec.contains("jordan")) {
    json blocks = spec.at("jordan");
    if (blocks.is_object()) blocks = json::array({blocks});
    if (!blocks.is_array() || blocks.empty()) throw ConfigError("jordan must be a block or a list of blocks");
    Eigen::Index d = 0;
    std::vector<Matrix> parts;
    for (const json& b : blocks) {
      const cplx lambda = schema("jordan eigenvalue", [&] { return complex_from_json(field(b, "eigenvalue")); });
      const int size = integer_or(b, "size", 0);
      if (size < 1) throw ConfigError("jordan block \"size\" must be a positive integer");
      parts.push_back(jordan_block(lambda, size));
      d += size;
    }
    Matrix out = Matrix::Zero(d, d);
    Eigen::Index at = 0;
    for (const Matrix& p : parts) {
      out.block(at, at, p.rows(), p.cols()) = p;
      at += p.rows();
    }
    return out;
  }
  throw ConfigError("operator spec needs one of \"matrix\", \"diagonal\", \"jordan\"");
}

std::pair<Matrix, Matrix> pair_from_config(const json& spec) {
  if (!spec.is_object()) throw ConfigError("pair spec must be an object");
  if (spec.contains("A") || spec.contains("B"))
    return {operator_from_config(field(spec, "A")), operator_from_config(field(spec, "B"))};
  const json& g = field(spec, "random_commuting_pair");
  const json& seed = field(g, "seed");
  if (!seed.is_number_unsigned()) throw ConfigError("pair \"seed\" must be a nonnegative integer");
  const std::uint64_t s = seed.get<std::uint64_t>();
  Vector a;
  Vector b;
  if (g.contains("a")) a = complex_list(g.at("a"), "a");
  if (g.contains("b")) b = complex_list(g.at("b"), "b");
  Eigen::Index d = integer_or(g, "dim", static_cast<int>(std::max(a.size(), b.size())));
  if (d < 1) throw ConfigError("pair needs \"dim\" or eigenvalue lists");
  if ((a.size() && a.size() != d) || (b.size() && b.size() != d))
    throw ConfigError("pair eigenvalue lists must have length dim");
  const double condition = number_or(g, "condition", 10.0);
  if (!(condition >= 1.0)) throw ConfigError("pair \"condition\" must be >= 1");
  Rng spectrum = make_stream(s, 2);
  if (!a.size()) a = sample_spectrum(d, number_or(g, "angle_a", pi / 6), spectrum);
  if (!b.size()) b = sample_spectrum(d, number_or(g, "angle_b", pi / 3), spectrum);
  Rng r0 = make_stream(s, 0);
  Rng r1 = make_stream(s, 1);
  RealVector sv(d);
  for (Eigen::Index i = 0; i < d; ++i) sv(i) = d > 1 ? std::pow(condition, double(i) / double(d - 1)) : 1.0;
  const Matrix V = random_unitary(d, r0) * sv.cast<cplx>().asDiagonal() * random_unitary(d, r1);
  const Matrix Vinv = V.partialPivLu().inverse();
  return {V * a.asDiagonal() * Vinv, V * b.asDiagonal() * Vinv};
}

NormSpec norm_from_config(const json& spec, Eigen::Index dim) {
  if (spec.is_null()) return NormSpec::lp(dim, 2.0);
  if (!spec.is_object()) throw ConfigError("norm spec must be an object");
  json full = spec;
  if (full.value("kind", std::string("lp")) == "lp") {
    full["kind"] = "lp";
    if (!full.contains("dim")) full["dim"] = dim;
  }
  NormSpec n = schema("norm", [&] { return norm_from_json(full); });
  if (n.dim() != dim) throw ConfigError("norm dimension does not match the operators");
  return n;
}

ContourSpec contour_from_config(const json& spec) {
  ContourSpec c;
  if (spec.is_null()) return c;
  c.angle = number_or(spec, "angle", c.angle);
  c.nodes_per_decade = integer_or(spec, "nodes_per_decade", c.nodes_per_decade);
  c.r_min = number_or(spec, "r_min", c.r_min);
  c.r_max = number_or(spec, "r_max", c.r_max);
  c.tail_tolerance = number_or(spec, "tail_tolerance", c.tail_tolerance);
  schema("contour", [&] {
    c.validate();
    return 0;
  });
  return c;
}

ScalarFunction function_from_config(const json& spec) {
  return schema("function", [&] { return fn::from_json(spec); });
}

}  // namespace sectorial::cli
