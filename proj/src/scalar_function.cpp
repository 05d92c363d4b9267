#include "kframes/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

namespace kframes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kBhatia = "Bhatia, Matrix Analysis (Springer GTM 169), ch. V";

double parse_double(std::string_view text, std::string_view context) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "bad number '" + s + "' in " + std::string(context));
  }
  return v;
}

}  // namespace

ScalarFunction ScalarFunction::square() {
  ScalarFunction f;
  f.id_ = FunctionId::Square;
  f.domain_ = {-kInf, kInf};
  f.convex_ = true;
  f.operator_convex_ = true;
  f.citation_ = std::string("x^2 is operator convex on R; ") + kBhatia;
  return f;
}

ScalarFunction ScalarFunction::power(double r) {
  if (!(r >= 1.0 && r <= 2.0)) {
    throw Error(ErrorCode::BadConfig, "power exponent must lie in [1, 2], got " + std::to_string(r));
  }
  ScalarFunction f;
  f.id_ = FunctionId::Power;
  f.domain_ = {0.0, kInf};
  f.convex_ = true;
  f.operator_convex_ = true;
  f.p0_ = r;
  f.citation_ = std::string("x^r, r in [1,2], is operator convex on [0,inf) (Loewner-Heinz/Ando); ") +
                kBhatia;
  return f;
}

ScalarFunction ScalarFunction::xlogx() {
  ScalarFunction f;
  f.id_ = FunctionId::XLogX;
  f.domain_ = {0.0, kInf};
  f.convex_ = true;
  f.operator_convex_ = true;
  f.citation_ = std::string("x log x is operator convex on [0,inf); ") + kBhatia;
  return f;
}

ScalarFunction ScalarFunction::negative_sqrt() {
  ScalarFunction f;
  f.id_ = FunctionId::NegativeSqrt;
  f.domain_ = {0.0, kInf};
  f.convex_ = true;
  f.operator_convex_ = true;
  f.citation_ = std::string("sqrt is operator monotone, hence operator concave, on [0,inf); ") +
                kBhatia;
  return f;
}

ScalarFunction ScalarFunction::affine(double a, double b) {
  ScalarFunction f;
  f.id_ = FunctionId::Affine;
  f.domain_ = {-kInf, kInf};
  f.convex_ = true;
  f.operator_convex_ = true;
  f.p0_ = a;
  f.p1_ = b;
  f.citation_ = "affine maps commute with the functional calculus";
  return f;
}

ScalarFunction ScalarFunction::custom_table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw Error(ErrorCode::BadConfig, "custom table needs >= 2 knots with matching value count");
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) {
      throw Error(ErrorCode::NonFinite, "custom table knot is not finite");
    }
    if (k > 0 && !(xs[k] > xs[k - 1])) {
      throw Error(ErrorCode::BadConfig, "custom table abscissae must be strictly increasing");
    }
  }
  ScalarFunction f;
  f.id_ = FunctionId::CustomTable;
  f.domain_ = {xs.front(), xs.back()};
  bool convex = true;
  bool affine = true;
  double prev_slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  for (std::size_t k = 2; k < xs.size(); ++k) {
    const double slope = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
    const double slack = 1e-12 * (1.0 + std::abs(slope) + std::abs(prev_slope));
    if (slope < prev_slope - slack) convex = false;
    if (std::abs(slope - prev_slope) > slack) affine = false;
    prev_slope = slope;
  }
  f.convex_ = convex;
  f.operator_convex_ = affine;
  f.citation_ = affine ? "collinear table is affine" : "piecewise-linear table; convexity from slopes";
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

ScalarFunction ScalarFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "square") return square();
  if (head == "xlogx") return xlogx();
  if (head == "negative_sqrt") return negative_sqrt();
  if (head == "power") return power(parse_double(args, text));
  if (head == "affine") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorCode::ParseError, "affine needs 'affine:A,B'");
    return affine(parse_double(args.substr(0, comma), text), parse_double(args.substr(comma + 1), text));
  }
  throw Error(ErrorCode::ParseError, "unknown function '" + std::string(text) + "'");
}

double ScalarFunction::operator()(double x) const {
  switch (id_) {
    case FunctionId::Square: return x * x;
    case FunctionId::Power: return x <= 0.0 ? 0.0 : std::pow(x, p0_);
    case FunctionId::XLogX: return x <= 0.0 ? 0.0 : x * std::log(x);
    case FunctionId::NegativeSqrt: return x <= 0.0 ? 0.0 : -std::sqrt(x);
    case FunctionId::Affine: return p0_ * x + p1_;
    case FunctionId::CustomTable: {
      const double xc = std::clamp(x, xs_.front(), xs_.back());
      auto it = std::upper_bound(xs_.begin(), xs_.end(), xc);
      std::size_t k = static_cast<std::size_t>(it - xs_.begin());
      if (k == xs_.size()) k = xs_.size() - 1;
      if (k == 0) k = 1;
      const double t = (xc - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
    }
  }
  return 0.0;
}

std::string ScalarFunction::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (id_) {
    case FunctionId::Square: return "square";
    case FunctionId::Power: os << "power:" << p0_; return os.str();
    case FunctionId::XLogX: return "xlogx";
    case FunctionId::NegativeSqrt: return "negative_sqrt";
    case FunctionId::Affine: os << "affine:" << p0_ << "," << p1_; return os.str();
    case FunctionId::CustomTable: os << "table[" << xs_.size() << "]"; return os.str();
  }
  return "unknown";
}

std::vector<ScalarFunction> operator_convex_catalog() {
  return {ScalarFunction::square(), ScalarFunction::power(1.5), ScalarFunction::xlogx(),
          ScalarFunction::negative_sqrt(), ScalarFunction::affine(0.5, 1.0)};
}

std::vector<ScalarFunction> convex_catalog(double lo, double hi) {
  std::vector<ScalarFunction> out = operator_convex_catalog();
  const double width = hi - lo;
  // Hinge at the midpoint: convex, not operator convex.
  out.push_back(ScalarFunction::custom_table({lo, lo + 0.5 * width, hi}, {0.0, 0.0, width}));
  // Sampled exponential-like profile.
  std::vector<double> xs, ys;
  for (int k = 0; k <= 8; ++k) {
    const double t = k / 8.0;
    xs.push_back(lo + t * width);
    ys.push_back(std::expm1(3.0 * t));
  }
  out.push_back(ScalarFunction::custom_table(std::move(xs), std::move(ys)));
  return out;
}

CMat matfunc(const ScalarFunction& h, const CMat& a, double tol) {
  return matfunc([&h](double x) { return h(x); }, h.domain(), a, tol);
}

}  // namespace kframes
