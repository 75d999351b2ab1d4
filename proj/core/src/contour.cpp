#include "sectorial/contour.hpp"

#include <cmath>

#include "sectorial/error.hpp"

namespace sectorial {

ContourSpec ContourSpec::between(double spectral_angle, double domain_angle, int nodes_per_decade) {
  require(domain_angle > spectral_angle, Errc::NotSectorial,
          "function domain angle must exceed the spectral angle");
  ContourSpec c;
  c.angle = 0.5 * (spectral_angle + domain_angle);
  c.nodes_per_decade = nodes_per_decade;
  return c;
}

double ContourSpec::step() const { return std::log(10.0) / nodes_per_decade; }

void ContourSpec::validate() const {
  require(angle > 0.0 && angle < pi, Errc::InvalidArgument, "contour angle must lie in (0, pi)");
  require(nodes_per_decade > 0, Errc::InvalidArgument, "nodes_per_decade must be positive");
  require(tail_tolerance > 0.0, Errc::InvalidArgument, "tail tolerance must be positive");
  if (r_min != 0.0 || r_max != 0.0)
    require(r_min > 0.0 && r_max > r_min, Errc::InvalidArgument, "contour window must satisfy 0 < r_min < r_max");
}

RadialNodes make_radial_nodes(const ContourSpec& spec, int stride) {
  spec.validate();
  require(spec.has_window(), Errc::InvalidArgument, "contour window not set");
  RadialNodes n;
  const double h = spec.step();
  const double u0 = std::log(spec.r_min);
  const double span = std::log(spec.r_max) - u0;
  auto count = static_cast<long>(std::ceil(span / h - 1e-9));
  if (count < 2) count = 2;
  // Even interval count so the stride-2 companion rule shares both end points.
  if (count % 2 != 0) ++count;
  require(stride == 1 || stride == 2, Errc::InvalidArgument, "stride must be 1 or 2");
  n.step = h * stride;
  n.r_min = spec.r_min;
  n.r_max = std::exp(u0 + static_cast<double>(count) * h);
  const double scale = 1.0 + spec.weight_perturbation;
  for (long k = 0; k <= count; k += stride) {
    n.r.push_back(std::exp(u0 + static_cast<double>(k) * h));
    const bool end = k == 0 || k == count;
    n.weight.push_back((end ? 0.5 : 1.0) * n.step * scale);
  }
  return n;
}

}  // namespace sectorial
