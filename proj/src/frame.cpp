#include "kframes/frame.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace kframes {

KFrame::KFrame(CMat vectors, std::string label) : vectors_(std::move(vectors)), label_(std::move(label)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "a frame needs dim >= 1 and count >= 1");
  }
  require_finite(vectors_, "frame vectors");
}

OperatorK::OperatorK(CMat matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "K must be square and nonempty");
  }
  require_finite(matrix_, "K");
}

IndexSubset IndexSubset::from_indices(std::vector<Index> indices, Index n) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= n) {
      throw Error(ErrorCode::BadSubset,
                  "index " + std::to_string(indices[k]) + " outside [0, " + std::to_string(n) + ")");
    }
    if (k > 0 && indices[k] <= indices[k - 1]) {
      throw Error(ErrorCode::BadSubset, "indices must be strictly increasing");
    }
  }
  IndexSubset s;
  s.indices_ = std::move(indices);
  return s;
}

IndexSubset IndexSubset::all(Index n) {
  IndexSubset s;
  s.indices_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) s.indices_[static_cast<std::size_t>(i)] = i;
  return s;
}

IndexSubset IndexSubset::from_mask(std::uint64_t mask, Index n) {
  if (n > 64) throw Error(ErrorCode::BadSubset, "mask subsets support n <= 64");
  if (n < 64 && (mask >> n) != 0) throw Error(ErrorCode::BadSubset, "mask has bits beyond n");
  IndexSubset s;
  for (Index i = 0; i < n; ++i) {
    if ((mask >> i) & 1u) s.indices_.push_back(i);
  }
  return s;
}

IndexSubset IndexSubset::parse(const std::string& text, Index n) {
  if (text == "all") return all(n);
  if (text == "empty" || text.empty()) return empty();
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadSubset, "cannot parse subset entry '" + item + "'");
    }
    if (used != item.size()) throw Error(ErrorCode::BadSubset, "cannot parse subset entry '" + item + "'");
    out.push_back(static_cast<Index>(v));
  }
  return from_indices(std::move(out), n);
}

bool IndexSubset::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexSubset IndexSubset::complement(Index n) const {
  validate(n);
  IndexSubset s;
  for (Index i = 0; i < n; ++i) {
    if (!contains(i)) s.indices_.push_back(i);
  }
  return s;
}

IndexSubset IndexSubset::united(const IndexSubset& other) const {
  IndexSubset s;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(s.indices_));
  return s;
}

IndexSubset IndexSubset::minus(const IndexSubset& other) const {
  IndexSubset s;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(s.indices_));
  return s;
}

bool IndexSubset::disjoint(const IndexSubset& other) const {
  std::vector<Index> common;
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                        other.indices_.end(), std::back_inserter(common));
  return common.empty();
}

void IndexSubset::validate(Index n) const {
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= n)) {
    throw Error(ErrorCode::BadSubset, "subset " + to_string() + " invalid for n = " + std::to_string(n));
  }
}

std::string IndexSubset::to_string() const {
  if (indices_.empty()) return "empty";
  std::string out;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(indices_[k]);
  }
  return out;
}

bool DualPair::valid(double tol) const {
  return residual <= tol * (1.0 + op_norm(op.matrix()));
}

void require_same_dim(const KFrame& f, const OperatorK& k) {
  if (f.dim() != k.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "frame dim " + std::to_string(f.dim()) +
                                                  " vs operator dim " + std::to_string(k.dim()));
  }
}

DualPair make_dual_pair(const KFrame& frame, CMat dual_vectors, const OperatorK& op) {
  require_same_dim(frame, op);
  if (dual_vectors.rows() != frame.dim() || dual_vectors.cols() != frame.count()) {
    throw Error(ErrorCode::DimensionMismatch, "dual vectors must have the frame's shape");
  }
  require_finite(dual_vectors, "dual vectors");
  const double residual = op_norm(frame.vectors() * dual_vectors.adjoint() - op.matrix());
  return DualPair{frame, std::move(dual_vectors), op, residual};
}

CMat select_columns(const CMat& m, const IndexSubset& j) {
  j.validate(m.cols());
  CMat out(m.rows(), static_cast<Index>(j.size()));
  Index c = 0;
  for (Index i : j.indices()) out.col(c++) = m.col(i);
  return out;
}

CVec synthesis(const KFrame& f, const CVec& coefficients) {
  if (coefficients.size() != f.count()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector length differs from frame count");
  }
  return f.vectors() * coefficients;
}

CVec analysis(const KFrame& f, const CVec& x) {
  if (x.size() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length differs from frame dim");
  }
  return f.vectors().adjoint() * x;
}

CMat frame_operator(const KFrame& f) { return f.vectors() * f.vectors().adjoint(); }

CMat partial_frame_operator(const KFrame& f, const IndexSubset& j) {
  const CMat cols = select_columns(f.vectors(), j);
  if (cols.cols() == 0) return CMat::Zero(f.dim(), f.dim());
  return cols * cols.adjoint();
}

CMat mixed_operator(const DualPair& pair, const IndexSubset& j) {
  const CMat fj = select_columns(pair.frame.vectors(), j);
  const CMat gj = select_columns(pair.dual_vectors, j);
  if (fj.cols() == 0) return CMat::Zero(pair.frame.dim(), pair.frame.dim());
  return fj * gj.adjoint();
}

KFrameBounds kframe_bounds(const KFrame& f, const OperatorK& k, double tol) {
  require_same_dim(f, k);
  const CMat& t = f.synthesis_matrix();
  KFrameBounds b;
  b.upper_opt = op_norm(frame_operator(f));
  const CMat t_pinv = pinv(t, kRangeRankTol);
  const double k_norm = op_norm(k.matrix());
  b.range_residual = op_norm(k.matrix() - t * (t_pinv * k.matrix()));
  b.is_kframe = b.range_residual <= tol * (1.0 + k_norm);
  if (!b.is_kframe) {
    b.lower_opt = 0.0;
  } else if (k_norm == 0.0) {
    b.lower_opt = std::numeric_limits<double>::infinity();
  } else {
    // Douglas solution X_F = T_F†K; the optimal lower bound is ‖X_F‖⁻².
    const CMat x = t_pinv * k.matrix();
    const double xn = op_norm(x);
    b.lower_opt = 1.0 / (xn * xn);
  }
  return b;
}

ParsevalCheck is_parseval_kframe(const KFrame& f, const OperatorK& k, double tol) {
  require_same_dim(f, k);
  const CMat kk = k.gram();
  ParsevalCheck c;
  c.residual = op_norm(frame_operator(f) - kk);
  c.is_parseval = c.residual <= tol * (1.0 + op_norm(kk));
  return c;
}

void require_parseval(const KFrame& f, const OperatorK& k, double tol) {
  const ParsevalCheck c = is_parseval_kframe(f, k, tol);
  if (!c.is_parseval) {
    throw Error(ErrorCode::NotParseval, "‖S_F − KK*‖ = " + std::to_string(c.residual));
  }
}

}  // namespace kframes
