#include <cmath>

#include "doctest.h"
#include "glmdp/errors.hpp"
#include "glmdp/link.hpp"

using namespace glmdp;

TEST_CASE("built-in links: G(0) = 0 exactly and G' = g") {
  for (const LinkFunction& link : {LinkFunction::identity(), LinkFunction::logit()}) {
    CAPTURE(link.name());
    CHECK(link.antideriv(0.0) == 0.0);
    for (double u = -6.0; u <= 6.0; u += 0.25) {
      const double h = 1e-5;
      const double numeric = (link.antideriv(u + h) - link.antideriv(u - h)) / (2 * h);
      CHECK(numeric == doctest::Approx(link.eval(u)).epsilon(1e-7));
      CHECK(link.deriv(u) >= 0.0);
      CHECK(link.antideriv(u) == doctest::Approx(integrate([&](double t) { return link.eval(t); }, 0.0, u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("logit values and derivative Lipschitz bound") {
  const LinkFunction logit = LinkFunction::logit();
  CHECK(logit.eval(0.0) == 0.5);
  CHECK(logit.deriv(0.0) == 0.25);
  CHECK(logit.eval(800.0) == 1.0);
  CHECK(logit.eval(-800.0) == 0.0);
  CHECK(std::isfinite(logit.antideriv(800.0)));
  CHECK(std::isfinite(logit.antideriv(-800.0)));
  double prev = logit.deriv(-10.0);
  for (double u = -10.0 + 0.01; u <= 10.0; u += 0.01) {
    const double cur = logit.deriv(u);
    CHECK(std::abs(cur - prev) <= 0.25 * 0.01 + 1e-15);
    prev = cur;
  }
  const LinkFunction id = LinkFunction::identity();
  CHECK(id.eval(1.7) == 1.7);
  CHECK(id.deriv(-3.0) == 1.0);
  CHECK(id.antideriv(2.0) == 2.0);
}

TEST_CASE("custom links are validated against quadrature") {
  auto g = [](double u) { return std::exp(u); };
  auto dg = [](double u) { return std::exp(u); };
  auto big = [](double u) { return std::exp(u) - 1.0; };
  const LinkFunction ok = LinkFunction::custom(g, dg, big, "exp");
  CHECK(ok.kind() == LinkKind::custom);
  CHECK(ok.eval(1.0) == doctest::Approx(std::exp(1.0)));

  // G(0) != 0
  CHECK_THROWS_AS(LinkFunction::custom(g, dg, [](double u) { return std::exp(u); }), ConfigError);
  // G does not integrate g
  CHECK_THROWS_AS(LinkFunction::custom(g, dg, [](double u) { return std::exp(u) - 1.0 + 1e-3 * u; }), ConfigError);
  // decreasing link
  CHECK_THROWS_AS(LinkFunction::custom([](double u) { return -u; }, [](double) { return -1.0; },
                                       [](double u) { return -0.5 * u * u; }),
                  ConfigError);
}

TEST_CASE("links by name") {
  CHECK(link_from_name("logit").kind() == LinkKind::logit);
  CHECK(link_from_name("identity").kind() == LinkKind::identity);
  CHECK_THROWS_AS(link_from_name("probit"), ConfigError);
}
