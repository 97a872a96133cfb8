#pragma once

#include <functional>

#include "lsl/operator.hpp"

namespace lsl {

/// Eigendecomposition of a symmetric operator, used to apply matrix
/// functions f(A) v = Q f(Λ) Qᵀ v.
///
/// Eigenvalues with |λ| <= clip_tolerance * λ_max that are negative are set to
/// zero (the Neumann Laplacian has an exact zero mode that round-off can push
/// slightly negative). Anything more negative is a NumericalError.
class Spectrum {
 public:
  static constexpr double kClipTolerance = 1e-10;

  /// Dense eigendecomposition of the full operator.
  static Spectrum dense(const SymmetricOperator& op);
  /// Tensor-product decomposition of the background Neumann Laplacian from
  /// the per-axis 1D operators. Requires op.is_background().
  static Spectrum separable(const SymmetricOperator& op);
  /// separable() for background operators, dense() otherwise.
  static Spectrum of(const SymmetricOperator& op);

  using Function = std::function<double(double lambda)>;

  Eigen::VectorXd apply(const Function& f, const Eigen::Ref<const Eigen::VectorXd>& v) const;
  /// Applies f_k for each of several functions sharing one forward transform.
  Eigen::MatrixXd apply_many(const std::vector<Function>& fs,
                             const Eigen::Ref<const Eigen::VectorXd>& v) const;

  const Grid& grid() const noexcept { return grid_; }
  double lambda_max() const noexcept { return lambda_max_; }
  bool is_separable() const noexcept { return separable_; }
  /// Decomposition of an operator with q ≡ 0.
  bool is_background() const noexcept { return background_; }

 private:
  Eigen::VectorXd to_coefficients(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  Eigen::VectorXd from_coefficients(const Eigen::Ref<const Eigen::VectorXd>& c) const;

  Grid grid_;
  bool separable_ = false;
  bool background_ = false;
  double lambda_max_ = 0.0;
  // dense: basis_[0] is the full eigenvector matrix, eigenvalues_ full.
  // separable: basis_[axis] per axis; eigenvalues_ holds λx_i + λy_j in
  // coefficient order (x fastest).
  std::array<Eigen::MatrixXd, 2> basis_;
  Eigen::VectorXd eigenvalues_;
};

}  // namespace lsl
