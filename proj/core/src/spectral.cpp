#include "lsl/spectral.hpp"

#include <Eigen/Eigenvalues>

#include "lsl/errors.hpp"

namespace lsl {
namespace {

struct Eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Eigenpairs symmetric_eigen(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

void clip_negative(Eigen::VectorXd& values, double lambda_max) {
  const double floor = -Spectrum::kClipTolerance * std::max(lambda_max, 0.0);
  for (auto& v : values) {
    if (v < 0.0) {
      if (v < floor) {
        throw NumericalError("operator has a significantly negative eigenvalue " + std::to_string(v));
      }
      v = 0.0;
    }
  }
}

}  // namespace

Spectrum Spectrum::dense(const SymmetricOperator& op) {
  auto pairs = symmetric_eigen(op.dense());
  Spectrum s;
  s.grid_ = op.grid();
  s.background_ = op.is_background();
  s.lambda_max_ = pairs.values.maxCoeff();
  clip_negative(pairs.values, s.lambda_max_);
  s.eigenvalues_ = std::move(pairs.values);
  s.basis_[0] = std::move(pairs.vectors);
  return s;
}

Spectrum Spectrum::separable(const SymmetricOperator& op) {
  if (!op.is_background()) throw ContractError("separable spectrum needs the background operator (q = 0)");
  const Grid& g = op.grid();
  Spectrum s;
  s.grid_ = g;
  s.separable_ = true;
  s.background_ = true;
  std::array<Eigen::VectorXd, 2> axis_values;
  for (int a = 0; a < g.dimension(); ++a) {
    const double ext[] = {g.extent(a)};
    const int n[] = {g.cells(a)};
    const Grid line = build_grid(ext, n);
    auto pairs = symmetric_eigen(background_operator(line).dense());
    clip_negative(pairs.values, pairs.values.maxCoeff());
    axis_values[a] = std::move(pairs.values);
    s.basis_[a] = std::move(pairs.vectors);
  }
  const int nx = g.cells(0);
  const int ny = g.dimension() == 2 ? g.cells(1) : 1;
  if (g.dimension() == 1) axis_values[1] = Eigen::VectorXd::Zero(1);
  s.eigenvalues_.resize(Eigen::Index(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) s.eigenvalues_[Eigen::Index(iy) * nx + ix] = axis_values[0][ix] + axis_values[1][iy];
  }
  s.lambda_max_ = s.eigenvalues_.maxCoeff();
  return s;
}

Spectrum Spectrum::of(const SymmetricOperator& op) {
  return op.is_background() ? separable(op) : dense(op);
}

Eigen::VectorXd Spectrum::to_coefficients(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != grid_.size()) throw ContractError("vector does not match the spectrum's grid");
  if (!separable_) return basis_[0].transpose() * v;
  if (grid_.dimension() == 1) return basis_[0].transpose() * v;
  const int nx = grid_.cells(0);
  const int ny = grid_.cells(1);
  Eigen::Map<const Eigen::MatrixXd> field(v.data(), nx, ny);
  Eigen::MatrixXd c = basis_[0].transpose() * field * basis_[1];
  return Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
}

Eigen::VectorXd Spectrum::from_coefficients(const Eigen::Ref<const Eigen::VectorXd>& c) const {
  if (!separable_ || grid_.dimension() == 1) return basis_[0] * c;
  const int nx = grid_.cells(0);
  const int ny = grid_.cells(1);
  Eigen::Map<const Eigen::MatrixXd> coef(c.data(), nx, ny);
  Eigen::MatrixXd f = basis_[0] * coef * basis_[1].transpose();
  return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

Eigen::VectorXd Spectrum::apply(const Function& f, const Eigen::Ref<const Eigen::VectorXd>& v) const {
  Eigen::VectorXd c = to_coefficients(v);
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= f(eigenvalues_[i]);
  return from_coefficients(c);
}

Eigen::MatrixXd Spectrum::apply_many(const std::vector<Function>& fs, const Eigen::Ref<const Eigen::VectorXd>& v) const {
  const Eigen::VectorXd c = to_coefficients(v);
  Eigen::MatrixXd out(v.size(), Eigen::Index(fs.size()));
  Eigen::VectorXd scaled(c.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    for (Eigen::Index i = 0; i < c.size(); ++i) scaled[i] = c[i] * fs[k](eigenvalues_[i]);
    out.col(Eigen::Index(k)) = from_coefficients(scaled);
  }
  return out;
}

}  // namespace lsl
