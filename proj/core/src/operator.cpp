#include "lsl/operator.hpp"

#include <cmath>

#include "lsl/errors.hpp"

namespace lsl {

SymmetricOperator::SymmetricOperator(Grid grid, Eigen::VectorXd potential)
    : grid_(std::move(grid)), potential_(std::move(potential)) {
  if (potential_.size() != grid_.size()) throw ContractError("potential does not match the grid");
  if (!potential_.allFinite()) throw ContractError("potential has non-finite values");
  background_ = (potential_.array() == 0.0).all();
}

void SymmetricOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& u, Eigen::Ref<Eigen::VectorXd> out) const {
  const int nx = grid_.cells(0);
  const double hx2 = 1.0 / (grid_.spacing(0) * grid_.spacing(0));
  if (grid_.dimension() == 1) {
    for (int i = 0; i < nx; ++i) {
      const double left = i > 0 ? u[i - 1] : u[i];
      const double right = i + 1 < nx ? u[i + 1] : u[i];
      out[i] = hx2 * (2.0 * u[i] - left - right) + potential_[i] * u[i];
    }
    return;
  }
  const int ny = grid_.cells(1);
  const double hy2 = 1.0 / (grid_.spacing(1) * grid_.spacing(1));
  for (int iy = 0; iy < ny; ++iy) {
    const Eigen::Index row = Eigen::Index(iy) * nx;
    const Eigen::Index up = iy > 0 ? row - nx : row;
    const Eigen::Index down = iy + 1 < ny ? row + nx : row;
    for (int ix = 0; ix < nx; ++ix) {
      const Eigen::Index i = row + ix;
      const double c = u[i];
      const double left = ix > 0 ? u[i - 1] : c;
      const double right = ix + 1 < nx ? u[i + 1] : c;
      out[i] = hx2 * (2.0 * c - left - right) + hy2 * (2.0 * c - u[up + ix] - u[down + ix]) + potential_[i] * c;
    }
  }
}

Eigen::VectorXd SymmetricOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  Eigen::VectorXd out(u.size());
  apply(u, out);
  return out;
}

Eigen::MatrixXd SymmetricOperator::dense() const {
  const Eigen::Index n = grid_.size();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e, a.col(j));
    e[j] = 0.0;
  }
  return a;
}

SymmetricOperator assemble_operator(const Grid& grid, const GridFunction& q) {
  if (!(q.grid == grid)) throw ContractError("potential is defined on a different grid");
  return SymmetricOperator(grid, q.values);
}

SymmetricOperator background_operator(const Grid& grid) {
  return SymmetricOperator(grid, Eigen::VectorXd::Zero(grid.size()));
}

double estimate_lambda_max(const SymmetricOperator& op, int iterations) {
  const Grid& g = op.grid();
  Eigen::VectorXd v(g.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto c = g.coords(i);
    // checkerboard plus a small smooth part so the start is never orthogonal
    // to the top eigenvector when q breaks the symmetry
    v[i] = ((c[0] + c[1]) % 2 == 0 ? 1.0 : -1.0) + 1e-3 * std::cos(0.37 * double(i));
  }
  v.normalize();
  Eigen::VectorXd w(v.size());
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    op.apply(v, w);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 10 && std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace lsl
