#include "sectorial/functions.hpp"

#include <algorithm>
#include <cmath>

#include "sectorial/error.hpp"
#include "sectorial/serialize.hpp"

namespace sectorial {

double decay_weight(cplx z, double epsilon) {
  const double r = std::abs(z);
  return std::pow(r / (1.0 + r * r), epsilon);
}

cplx phi_n(double n, cplx z) { return n / (n + z) - 1.0 / (1.0 + n * z); }

cplx h_s_rho(cplx z, double s, double rho) {
  const cplx pole = std::polar(1.0, rho);
  require(std::abs(z - pole) > 1e-12, Errc::PoleHit, "h_s_rho evaluated at its pole e^{i rho}");
  return principal_pow(z, s) / (pole - z);
}

namespace fn {

namespace {

double sector_margin_factor(double angle) { return std::min(1.0, 1.0 + std::cos(angle)); }

void check_domain(double angle) {
  require(angle > 0.0 && angle < pi, Errc::InvalidArgument, "domain angle must lie in (0, pi)");
}

void check_exponent(double s) {
  require(s > 0.0 && s < 1.0, Errc::InvalidArgument, "fractional exponent must lie in (0, 1)");
}

}  // namespace

ScalarFunction z_over_one_plus_z_squared(double domain_angle) {
  check_domain(domain_angle);
  ScalarFunction f;
  f.evaluator = [](cplx z) { return z / ((1.0 + z) * (1.0 + z)); };
  f.domain_angle = domain_angle;
  f.decay = DecayCertificate{1.0 / sector_margin_factor(domain_angle), 1.0};
  f.spec = {{"fn", "z_div_1pz_sq"}, {"domain_angle", domain_angle}};
  return f;
}

ScalarFunction phi(double n, double domain_angle) {
  check_domain(domain_angle);
  require(n >= 1.0, Errc::InvalidArgument, "phi_n needs n >= 1");
  ScalarFunction f;
  f.evaluator = [n](cplx z) { return (n * n - 1.0) * z / ((n + z) * (1.0 + n * z)); };
  f.domain_angle = domain_angle;
  f.decay = DecayCertificate{std::max((n - 1.0 / n) / sector_margin_factor(domain_angle), 1e-300), 1.0};
  f.spec = {{"fn", "phi_n"}, {"n", n}, {"domain_angle", domain_angle}};
  return f;
}

ScalarFunction h_s_rho(double s, double rho) {
  check_exponent(s);
  require(std::abs(rho) > 0.0 && std::abs(rho) <= pi, Errc::InvalidArgument,
          "rho must satisfy 0 < |rho| <= pi");
  const double margin = std::min(0.1, std::abs(rho) / 4.0);
  ScalarFunction f;
  f.evaluator = [s, rho](cplx z) { return sectorial::h_s_rho(z, s, rho); };
  f.domain_angle = std::abs(rho) - margin;
  f.decay = DecayCertificate{1.0 / std::sqrt(1.0 - std::cos(margin)), std::min(s, 1.0 - s)};
  f.spec = {{"fn", "h_s_rho"}, {"s", s}, {"rho", rho}};
  return f;
}

ScalarFunction power_over_shift(double s, double domain_angle) {
  check_exponent(s);
  check_domain(domain_angle);
  ScalarFunction f;
  f.evaluator = [s](cplx z) { return principal_pow(z, s) / (1.0 + z); };
  f.domain_angle = domain_angle;
  // |z^s/(1+z)| <= r^s / sqrt((1+r^2) m) <= (r/(1+r^2))^eps / sqrt(m).
  f.decay = DecayCertificate{1.0 / std::sqrt(sector_margin_factor(domain_angle)), std::min(s, 1.0 - s)};
  f.spec = {{"fn", "power_over_shift"}, {"s", s}, {"domain_angle", domain_angle}};
  return f;
}

ScalarFunction rational(std::vector<cplx> poles, std::vector<cplx> coeffs) {
  require(!poles.empty() && poles.size() == coeffs.size(), Errc::InvalidArgument,
          "rational function needs matching nonempty poles and coeffs");
  double angle = pi;
  for (const cplx p : poles) {
    require(std::abs(p) > 0.0, Errc::InvalidArgument, "rational pole at 0 is not allowed");
    angle = std::min(angle, std::abs(std::arg(p)));
  }
  require(angle > 0.0, Errc::PoleHit, "rational pole on the positive real axis");
  ScalarFunction f;
  f.evaluator = [poles, coeffs](cplx z) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < poles.size(); ++k) acc += coeffs[k] / (z - poles[k]);
    return acc;
  };
  // Keep the nearest pole strictly outside the closed sector.
  f.domain_angle = 0.9 * angle;
  json pj = json::array();
  json cj = json::array();
  for (std::size_t k = 0; k < poles.size(); ++k) {
    pj.push_back(complex_to_json(poles[k]));
    cj.push_back(complex_to_json(coeffs[k]));
  }
  f.spec = {{"fn", "rational"}, {"poles", pj}, {"coeffs", cj}};
  return f;
}

ScalarFunction resolvent(cplx lambda) {
  ScalarFunction f = rational({lambda}, {cplx{-1.0, 0.0}});
  f.spec = {{"fn", "resolvent"}, {"lambda", complex_to_json(lambda)}};
  return f;
}

ScalarFunction one(double domain_angle) {
  check_domain(domain_angle);
  ScalarFunction f;
  f.evaluator = [](cplx) { return cplx{1.0, 0.0}; };
  f.domain_angle = domain_angle;
  f.spec = {{"fn", "one"}, {"domain_angle", domain_angle}};
  return f;
}

ScalarFunction imaginary_power(double tau, double domain_angle) {
  check_domain(domain_angle);
  ScalarFunction f;
  f.evaluator = [tau](cplx z) { return principal_pow(z, cplx{0.0, tau}); };
  f.domain_angle = domain_angle;
  f.spec = {{"fn", "imag_power"}, {"tau", tau}, {"domain_angle", domain_angle}};
  return f;
}

ScalarFunction product(const ScalarFunction& f, const ScalarFunction& g) {
  ScalarFunction h;
  h.evaluator = [fe = f.evaluator, ge = g.evaluator](cplx z) { return fe(z) * ge(z); };
  h.domain_angle = std::min(f.domain_angle, g.domain_angle);
  if (f.decay && g.decay) {
    const double sum = f.decay->epsilon + g.decay->epsilon;
    const double eps = std::min(1.0, sum);
    h.decay = DecayCertificate{f.decay->C * g.decay->C * std::pow(0.5, sum - eps), eps};
  } else if (f.decay || g.decay) {
    const ScalarFunction& bounded = f.decay ? g : f;
    const DecayCertificate d = f.decay ? *f.decay : *g.decay;
    const double sup = sampled_sup(bounded.evaluator, h.domain_angle);
    h.decay = DecayCertificate{1.05 * sup * d.C, d.epsilon};
  }
  h.spec = {{"fn", "product"}, {"factors", json::array({f.spec, g.spec})}};
  return h;
}

ScalarFunction dilate(const ScalarFunction& f, double t) {
  require(t > 0.0, Errc::InvalidArgument, "dilation factor must be positive");
  ScalarFunction h;
  h.evaluator = [fe = f.evaluator, t](cplx z) { return fe(t * z); };
  h.domain_angle = f.domain_angle;
  if (f.decay) h.decay = DecayCertificate{f.decay->C * std::pow(std::max(t, 1.0 / t), f.decay->epsilon), f.decay->epsilon};
  h.spec = {{"fn", "dilate"}, {"t", t}, {"of", f.spec}};
  return h;
}

ScalarFunction from_json(const json& spec) {
  require(spec.is_object() && spec.contains("fn"), Errc::InvalidArgument, "function spec needs \"fn\"");
  const std::string name = spec.at("fn").get<std::string>();
  const double domain = spec.value("domain_angle", default_domain);
  if (name == "z_div_1pz_sq") return z_over_one_plus_z_squared(domain);
  if (name == "phi_n") return phi(spec.at("n").get<double>(), domain);
  if (name == "h_s_rho") return h_s_rho(spec.at("s").get<double>(), spec.at("rho").get<double>());
  if (name == "power_over_shift") return power_over_shift(spec.at("s").get<double>(), domain);
  if (name == "one") return one(domain);
  if (name == "imag_power") return imaginary_power(spec.at("tau").get<double>(), domain);
  if (name == "resolvent") return resolvent(complex_from_json(spec.at("lambda")));
  if (name == "rational") {
    std::vector<cplx> poles;
    std::vector<cplx> coeffs;
    for (const auto& p : spec.at("poles")) poles.push_back(complex_from_json(p));
    for (const auto& c : spec.at("coeffs")) coeffs.push_back(complex_from_json(c));
    return rational(std::move(poles), std::move(coeffs));
  }
  if (name == "product") {
    const auto& factors = spec.at("factors");
    require(factors.is_array() && factors.size() == 2, Errc::InvalidArgument, "product needs two factors");
    return product(from_json(factors[0]), from_json(factors[1]));
  }
  if (name == "dilate") return dilate(from_json(spec.at("of")), spec.at("t").get<double>());
  fail(Errc::InvalidArgument, "unknown function \"" + name + "\"");
}

}  // namespace fn

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (i > 0) {
    result += f * static_cast<double>(i % base);
    i /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

}  // namespace

std::vector<cplx> sector_samples(double angle, const SupSampleOptions& options) {
  std::vector<cplx> pts;
  const double umax = options.log10_radius * std::log(10.0);
  pts.reserve(static_cast<std::size_t>(options.interior_points + 2 * options.boundary_points_per_ray));
  for (int i = 1; i <= options.interior_points; ++i) {
    const double u = -umax + 2.0 * umax * radical_inverse(static_cast<std::uint64_t>(i), 2);
    const double th = -angle + 2.0 * angle * radical_inverse(static_cast<std::uint64_t>(i), 3);
    pts.push_back(std::polar(std::exp(u), th));
  }
  const int nb = options.boundary_points_per_ray;
  for (int i = 0; i < nb; ++i) {
    const double u = nb > 1 ? -umax + 2.0 * umax * i / (nb - 1) : 0.0;
    pts.push_back(std::polar(std::exp(u), angle));
    pts.push_back(std::polar(std::exp(u), -angle));
  }
  return pts;
}

double sampled_sup(const std::function<cplx(cplx)>& f, double angle, const SupSampleOptions& options) {
  double sup = 0.0;
  for (const cplx z : sector_samples(angle, options)) {
    const double v = std::abs(f(z));
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, v);
  }
  return sup;
}

double sampled_decay_ratio(const ScalarFunction& f, double angle, double epsilon,
                           const SupSampleOptions& options) {
  double sup = 0.0;
  for (const cplx z : sector_samples(angle, options)) {
    const double v = std::abs(f(z)) / decay_weight(z, epsilon);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, v);
  }
  return sup;
}

bool validate_certificate(const ScalarFunction& f, const SupSampleOptions& options) {
  if (!f.decay) return std::isfinite(sampled_sup(f.evaluator, f.domain_angle, options));
  return sampled_decay_ratio(f, f.domain_angle, f.decay->epsilon, options) <= 1.05 * f.decay->C;
}

}  // namespace sectorial
