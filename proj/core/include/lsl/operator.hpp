#pragma once

#include "lsl/grid.hpp"

namespace lsl {

/// Discrete A = -Δ + q with homogeneous Neumann closure (ghost cells mirror
/// the boundary value). Symmetric in the cell-volume inner product; positive
/// semidefinite when q >= 0.
class SymmetricOperator {
 public:
  SymmetricOperator() = default;
  SymmetricOperator(Grid grid, Eigen::VectorXd potential);

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& potential() const noexcept { return potential_; }
  /// True when q ≡ 0, i.e. this is the known background A₀.
  bool is_background() const noexcept { return background_; }

  /// out = A u. `out` must not alias `u`.
  void apply(const Eigen::Ref<const Eigen::VectorXd>& u, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& u) const;

  /// Dense matrix of the operator; only sensible at desk scale.
  Eigen::MatrixXd dense() const;

 private:
  Grid grid_;
  Eigen::VectorXd potential_;
  bool background_ = true;
};

/// Throws ContractError if q lives on another grid or is not finite.
SymmetricOperator assemble_operator(const Grid& grid, const GridFunction& q);
SymmetricOperator background_operator(const Grid& grid);

/// Largest eigenvalue by power iteration, started from the checkerboard mode
/// (the top of the Laplacian spectrum).
double estimate_lambda_max(const SymmetricOperator& op, int iterations = 200);

}  // namespace lsl
