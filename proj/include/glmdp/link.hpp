#pragma once

#include <functional>
#include <string>

namespace glmdp {

enum class LinkKind { identity, logit, custom };

// A canonical link g together with its derivative and its antiderivative
// G(a) = integral of g from 0 to a. The GLM loss is written in terms of G.
class LinkFunction {
 public:
  using Fn = std::function<double(double)>;

  static LinkFunction identity();
  static LinkFunction logit();

  // Validates the triple: G(0) == 0, derivative nonnegative, and G matches
  // quadrature of g to 1e-6 on [-5, 5]. Throws ConfigError otherwise.
  static LinkFunction custom(Fn g, Fn derivative, Fn antiderivative, std::string name = "custom");

  LinkKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double eval(double u) const;
  double deriv(double u) const;
  double antideriv(double u) const;

 private:
  LinkFunction(LinkKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  LinkKind kind_;
  std::string name_;
  Fn g_, dg_, big_g_;
};

double sigmoid(double u);

// Adaptive-free composite Gauss-Legendre integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 64);

LinkFunction link_from_name(const std::string& name);

}  // namespace glmdp
