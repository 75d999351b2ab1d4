#include "sectorial/serialize.hpp"

#include <cmath>

#include "sectorial/error.hpp"

namespace sectorial {

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json complex_to_json(cplx z) { return json::array({real_to_json(z.real()), real_to_json(z.imag())}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          Errc::InvalidArgument, "complex number must be a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ir = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rr.push_back(real_to_json(m(i, k).real()));
      ir.push_back(real_to_json(m(i, k).imag()));
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  json out;
  if (m.rows() == m.cols()) {
    out["dim"] = m.rows();
  } else {
    out["rows"] = m.rows();
    out["cols"] = m.cols();
  }
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

Matrix matrix_from_json(const json& j) {
  require(j.is_object() && j.contains("re"), Errc::InvalidArgument, "matrix needs a \"re\" field");
  const json& re = j.at("re");
  require(re.is_array() && !re.empty() && re[0].is_array(), Errc::InvalidArgument,
          "matrix \"re\" must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = static_cast<Eigen::Index>(re[0].size());
  if (j.contains("dim")) {
    const auto d = j.at("dim").get<Eigen::Index>();
    require(d == rows && d == cols, Errc::InvalidArgument, "matrix \"dim\" does not match data");
  }
  const json* im = j.contains("im") ? &j.at("im") : nullptr;
  if (im) require(im->is_array() && static_cast<Eigen::Index>(im->size()) == rows, Errc::InvalidArgument,
                  "matrix \"im\" shape does not match \"re\"");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& rr = re[static_cast<std::size_t>(i)];
    require(rr.is_array() && static_cast<Eigen::Index>(rr.size()) == cols, Errc::InvalidArgument,
            "matrix rows must have equal length");
    for (Eigen::Index k = 0; k < cols; ++k) {
      double imag = 0.0;
      if (im) {
        const json& ir = (*im)[static_cast<std::size_t>(i)];
        require(ir.is_array() && static_cast<Eigen::Index>(ir.size()) == cols, Errc::InvalidArgument,
                "matrix \"im\" shape does not match \"re\"");
        imag = ir[static_cast<std::size_t>(k)].get<double>();
      }
      m(i, k) = cplx(rr[static_cast<std::size_t>(k)].get<double>(), imag);
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(real_to_json(v(i).real()));
    im.push_back(real_to_json(v(i).imag()));
  }
  return json{{"re", re}, {"im", im}};
}

Vector vector_from_json(const json& j) {
  if (j.is_array()) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
  }
  require(j.is_object() && j.contains("re"), Errc::InvalidArgument, "vector needs \"re\"");
  const json& re = j.at("re");
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double imag = j.contains("im") ? j.at("im").at(i).get<double>() : 0.0;
    v(static_cast<Eigen::Index>(i)) = cplx(re[i].get<double>(), imag);
  }
  return v;
}

json exponent_to_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

double exponent_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    require(s == "inf" || s == "infinity", Errc::InvalidArgument, "exponent string must be \"inf\"");
    return inf_exponent;
  }
  require(j.is_number(), Errc::InvalidArgument, "exponent must be a number or \"inf\"");
  return j.get<double>();
}

json norm_to_json(const NormSpec& n) {
  if (n.kind() == NormSpec::Kind::Lp) return {{"kind", "lp"}, {"dim", n.dim()}, {"p", exponent_to_json(n.p())}};
  return {{"kind", "grid"},
          {"points", n.points()},
          {"block", n.block()},
          {"p", exponent_to_json(n.p())},
          {"q", exponent_to_json(n.q())},
          {"scale", n.scale()}};
}

NormSpec norm_from_json(const json& j) {
  require(j.is_object(), Errc::InvalidArgument, "norm spec must be an object");
  const std::string kind = j.value("kind", "lp");
  if (kind == "lp") {
    return NormSpec::lp(j.at("dim").get<Eigen::Index>(), exponent_from_json(j.value("p", json(2.0))));
  }
  require(kind == "grid", Errc::InvalidArgument, "norm kind must be \"lp\" or \"grid\"");
  return NormSpec::grid(j.at("points").get<Eigen::Index>(), j.at("block").get<Eigen::Index>(),
                        exponent_from_json(j.value("p", json(2.0))),
                        exponent_from_json(j.value("q", json(2.0))), j.value("scale", 1.0));
}

void to_json(json& j, const BoundEstimate& b) {
  j = json{{"value", real_to_json(b.value)},
           {"is_lower_bound", b.is_lower_bound},
           {"method", b.method},
           {"mode", to_string(b.mode)},
           {"seed", b.seed},
           {"samples", b.samples},
           {"witness", b.witness},
           {"details", b.details}};
}

}  // namespace sectorial
