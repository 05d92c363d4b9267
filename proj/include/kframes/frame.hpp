#pragma once

// Frames, operators and index subsets.
//
// Convention: ⟨x, y⟩ = yᴴx, linear in the first slot. A frame {f_i} is stored
// as the d×n synthesis matrix T_F whose i-th column is f_i, so the analysis
// coefficients ⟨f, f_i⟩ are the entries of T_Fᴴ f.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kframes/numkit.hpp"

namespace kframes {

class KFrame {
 public:
  explicit KFrame(CMat vectors, std::string label = {});

  Index dim() const { return vectors_.rows(); }
  Index count() const { return vectors_.cols(); }
  const CMat& vectors() const { return vectors_; }
  /// Synthesis matrix T_F; identical to vectors().
  const CMat& synthesis_matrix() const { return vectors_; }
  CVec vector(Index i) const { return vectors_.col(i); }
  const std::string& label() const { return label_; }

 private:
  CMat vectors_;
  std::string label_;
};

/// The bounded operator K on ℂ^d.
class OperatorK {
 public:
  explicit OperatorK(CMat matrix);

  Index dim() const { return matrix_.rows(); }
  const CMat& matrix() const { return matrix_; }
  CMat adjoint() const { return matrix_.adjoint(); }
  /// KK*.
  CMat gram() const { return matrix_ * matrix_.adjoint(); }

 private:
  CMat matrix_;
};

/// Strictly increasing zero-based indices. Validity against a frame size n is
/// checked where the subset meets a frame.
class IndexSubset {
 public:
  IndexSubset() = default;
  /// Throws BadSubset on duplicates, unsorted input or indices ≥ n.
  static IndexSubset from_indices(std::vector<Index> indices, Index n);
  static IndexSubset all(Index n);
  static IndexSubset empty() { return IndexSubset{}; }
  /// Bit i of mask selects index i.
  static IndexSubset from_mask(std::uint64_t mask, Index n);
  /// "all", "empty" or comma-separated indices such as "0,2,5".
  static IndexSubset parse(const std::string& text, Index n);

  const std::vector<Index>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(Index i) const;
  IndexSubset complement(Index n) const;
  IndexSubset united(const IndexSubset& other) const;
  IndexSubset minus(const IndexSubset& other) const;
  bool disjoint(const IndexSubset& other) const;
  void validate(Index n) const;
  std::string to_string() const;

  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;

 private:
  std::vector<Index> indices_;
};

struct KFrameBounds {
  /// +∞ encodes the Unbounded sentinel (K = 0); 0 when F is not a K-frame.
  double lower_opt = 0.0;
  double upper_opt = 0.0;
  bool is_kframe = false;
  /// ‖(I − T_F T_F†)K‖, the margin of the range-inclusion test.
  double range_residual = 0.0;

  bool lower_unbounded() const { return std::isinf(lower_opt); }
};

/// A K-frame with a candidate K-dual {g_i}; residual = ‖T_F·Gᴴ − K‖.
struct DualPair {
  KFrame frame;
  CMat dual_vectors;
  OperatorK op;
  double residual = 0.0;

  bool valid(double tol = kDefaultTol) const;
};

/// Builds a DualPair and measures its reconstruction residual.
DualPair make_dual_pair(const KFrame& frame, CMat dual_vectors, const OperatorK& op);

CVec synthesis(const KFrame& f, const CVec& coefficients);
CVec analysis(const KFrame& f, const CVec& x);
CMat frame_operator(const KFrame& f);
CMat partial_frame_operator(const KFrame& f, const IndexSubset& j);
/// M_J = Σ_{i∈J} f_i g_iᴴ.
CMat mixed_operator(const DualPair& pair, const IndexSubset& j);

KFrameBounds kframe_bounds(const KFrame& f, const OperatorK& k, double tol = kDefaultTol);

struct ParsevalCheck {
  bool is_parseval = false;
  double residual = 0.0;  // ‖S_F − KK*‖
};

ParsevalCheck is_parseval_kframe(const KFrame& f, const OperatorK& k, double tol = kDefaultTol);

/// Throws NotParseval unless is_parseval_kframe passes.
void require_parseval(const KFrame& f, const OperatorK& k, double tol);

/// Columns of `m` selected by `j`.
CMat select_columns(const CMat& m, const IndexSubset& j);

void require_same_dim(const KFrame& f, const OperatorK& k);

}  // namespace kframes
