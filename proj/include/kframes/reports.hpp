#pragma once

#include "kframes/numkit.hpp"

namespace kframes {

/// Verdict for a claimed equality lhs = rhs.
struct IdentityReport {
  Complex lhs{};
  Complex rhs{};
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / (1 + |lhs| + |rhs|)
  /// Relative disagreement between the coefficient-sum and operator-algebra
  /// evaluations of the two sides. Not part of `pass`.
  double path_err = 0.0;
  bool pass = false;  // rel_err ≤ tol
};

IdentityReport make_identity_report(Complex lhs, Complex rhs, double tol, double path_err = 0.0);

/// Verdict for a claimed inequality lesser ≤ greater.
struct InequalityReport {
  double lesser = 0.0;
  double greater = 0.0;
  double margin = 0.0;  // greater − lesser
  double scale = 1.0;   // 1 + |lesser| + |greater|
  bool pass = false;    // margin ≥ −tol·scale
};

InequalityReport make_inequality_report(double lesser, double greater, double tol);

/// max(|a−a'|, |b−b'|) / (1 + |a| + |b|).
double path_gap(Complex a, Complex a_alt, Complex b, Complex b_alt);

}  // namespace kframes
