#include "glmdp/link.hpp"

#include <array>
#include <cmath>

#include "glmdp/errors.hpp"

namespace glmdp {

double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

namespace {

double softplus(double u) { return u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

}  // namespace

LinkFunction LinkFunction::identity() { return LinkFunction(LinkKind::identity, "identity"); }

LinkFunction LinkFunction::logit() { return LinkFunction(LinkKind::logit, "logit"); }

LinkFunction LinkFunction::custom(Fn g, Fn derivative, Fn antiderivative, std::string name) {
  if (!g || !derivative || !antiderivative) throw ConfigError("custom link: all of g, g', G must be supplied");
  LinkFunction link(LinkKind::custom, std::move(name));
  link.g_ = std::move(g);
  link.dg_ = std::move(derivative);
  link.big_g_ = std::move(antiderivative);

  if (link.big_g_(0.0) != 0.0) throw ConfigError("custom link: G(0) must be exactly 0");
  for (int i = -50; i <= 50; ++i) {
    const double u = 0.1 * i;
    const double dg = link.dg_(u);
    if (!(dg >= 0.0)) throw ConfigError("custom link: derivative must be nonnegative (u=" + std::to_string(u) + ")");
    const double quad = integrate(link.g_, 0.0, u);
    if (std::abs(quad - link.big_g_(u)) > 1e-6) {
      throw ConfigError("custom link: antiderivative disagrees with quadrature of g at u=" + std::to_string(u));
    }
  }
  return link;
}

double LinkFunction::eval(double u) const {
  switch (kind_) {
    case LinkKind::identity: return u;
    case LinkKind::logit: return sigmoid(u);
    case LinkKind::custom: return g_(u);
  }
  return 0.0;
}

double LinkFunction::deriv(double u) const {
  switch (kind_) {
    case LinkKind::identity: return 1.0;
    case LinkKind::logit: {
      const double s = sigmoid(u);
      return s * (1.0 - s);
    }
    case LinkKind::custom: return dg_(u);
  }
  return 0.0;
}

double LinkFunction::antideriv(double u) const {
  switch (kind_) {
    case LinkKind::identity: return 0.5 * u * u;
    // log(1 + e^u) - log 2 so that G(0) = 0 exactly
    case LinkKind::logit: return u == 0.0 ? 0.0 : softplus(u) - std::log(2.0);
    case LinkKind::custom: return big_g_(u);
  }
  return 0.0;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  // 5-point Gauss-Legendre per panel
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                           0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                           0.2369268850561891, 0.2369268850561891};
  if (a == b) return 0.0;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
    total += 0.5 * h * s;
  }
  return total;
}

LinkFunction link_from_name(const std::string& name) {
  if (name == "identity") return LinkFunction::identity();
  if (name == "logit") return LinkFunction::logit();
  throw ConfigError("unknown link function: " + name);
}

}  // namespace glmdp
