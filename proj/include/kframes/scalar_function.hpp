#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kframes/numkit.hpp"

namespace kframes {

enum class FunctionId { Square, Power, XLogX, NegativeSqrt, Affine, CustomTable };

/// A continuous scalar function on an interval together with its known
/// convexity status. Only the named constructors produce values, so operator
/// convexity is never inferred numerically.
class ScalarFunction {
 public:
  static ScalarFunction square();
  /// x^r on [0, ∞), r ∈ [1, 2].
  static ScalarFunction power(double r);
  /// x·log x on [0, ∞), 0 at the origin.
  static ScalarFunction xlogx();
  /// −√x on [0, ∞).
  static ScalarFunction negative_sqrt();
  /// a·x + b on ℝ.
  static ScalarFunction affine(double a, double b);
  /// Piecewise-linear interpolant through (xs[k], ys[k]); xs strictly
  /// increasing, at least two knots. Convex iff slopes are nondecreasing;
  /// operator convex only when the table is affine.
  static ScalarFunction custom_table(std::vector<double> xs, std::vector<double> ys);

  /// Parses "square", "power:R", "xlogx", "negative_sqrt", "affine:A,B".
  static ScalarFunction parse(std::string_view text);

  double operator()(double x) const;

  FunctionId id() const { return id_; }
  const Interval& domain() const { return domain_; }
  bool convex() const { return convex_; }
  bool operator_convex() const { return operator_convex_; }
  std::string_view citation() const { return citation_; }
  std::string name() const;

 private:
  ScalarFunction() = default;

  FunctionId id_ = FunctionId::Square;
  Interval domain_;
  bool convex_ = false;
  bool operator_convex_ = false;
  std::string citation_;
  double p0_ = 0.0;  // r for Power, a for Affine
  double p1_ = 0.0;  // b for Affine
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// The vetted operator-convex entries (square, x^1.5, x log x, −√x, an affine map).
std::vector<ScalarFunction> operator_convex_catalog();

/// Convex entries: the operator-convex catalog plus convex-only tables built
/// over [lo, hi].
std::vector<ScalarFunction> convex_catalog(double lo, double hi);

CMat matfunc(const ScalarFunction& h, const CMat& a, double tol = kDefaultTol);

}  // namespace kframes
