#include "lsl/kernel_system.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "lsl/errors.hpp"

namespace lsl {
namespace {

// Fine cell -> coarse cell map for a grid refining `coarse` by integer factors.
std::vector<Eigen::Index> coarse_index_map(const Grid& fine, const Grid& coarse) {
  if (fine.dimension() != coarse.dimension()) throw ContractError("image grid dimension differs from the forward grid");
  std::array<int, 2> factor{1, 1};
  for (int a = 0; a < fine.dimension(); ++a) {
    if (std::abs(fine.extent(a) - coarse.extent(a)) > 1e-12 * fine.extent(a)) {
      throw ContractError("image grid covers a different domain than the forward grid");
    }
    if (fine.cells(a) % coarse.cells(a) != 0) {
      throw ContractError("forward grid must refine the image grid by an integer factor on every axis");
    }
    factor[a] = fine.cells(a) / coarse.cells(a);
  }
  std::vector<Eigen::Index> map(fine.size());
  for (Eigen::Index i = 0; i < fine.size(); ++i) {
    const auto c = fine.coords(i);
    map[i] = coarse.index(c[0] / factor[0], c[1] / factor[1]);
  }
  return map;
}

}  // namespace

std::string_view to_string(ImagingMode mode) {
  switch (mode) {
    case ImagingMode::born: return "born";
    case ImagingMode::lsl: return "lsl";
    case ImagingMode::cheated: return "cheated";
  }
  return "?";
}

ImagingMode parse_mode(std::string_view name) {
  if (name == "born") return ImagingMode::born;
  if (name == "lsl") return ImagingMode::lsl;
  if (name == "cheated") return ImagingMode::cheated;
  throw ConfigError("unknown imaging mode '" + std::string(name) + "' (expected born, lsl or cheated)");
}

KernelSystem KernelSystem::row_normalized(bool drop_zero_rows) const {
  std::vector<Eigen::Index> keep;
  Eigen::VectorXd scale(rows());
  for (Eigen::Index r = 0; r < rows(); ++r) {
    scale[r] = kernel.cols() > 0 ? kernel.row(r).cwiseAbs().maxCoeff() : 0.0;
    if (scale[r] > 0.0) {
      keep.push_back(r);
    } else if (!drop_zero_rows) {
      scale[r] = 1.0;
      keep.push_back(r);
    }
  }
  KernelSystem out;
  out.image_grid = image_grid;
  out.sources = sources;
  out.steps = steps;
  out.tau = tau;
  out.kernel.resize(Eigen::Index(keep.size()), kernel.cols());
  out.rhs.resize(Eigen::Index(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.kernel.row(Eigen::Index(i)) = kernel.row(keep[i]) / scale[keep[i]];
    out.rhs[Eigen::Index(i)] = rhs[keep[i]] / scale[keep[i]];
  }
  return out;
}

KernelSystem assemble_rows(std::span<const SnapshotSet> background_antiderivative,
                           std::span<const SnapshotSet> internal, const Grid& image_grid) {
  if (background_antiderivative.empty() || background_antiderivative.size() != internal.size()) {
    throw ContractError("need one background and one internal snapshot set per source");
  }
  const SnapshotSet& ref = internal.front();
  const Eigen::Index n = ref.count();
  for (std::size_t j = 0; j < internal.size(); ++j) {
    const SnapshotSet& b = background_antiderivative[j];
    const SnapshotSet& u = internal[j];
    if (u.count() != n || b.count() != n) throw ContractError("snapshot counts differ across sources");
    if (u.tau != ref.tau || b.tau != ref.tau) throw ContractError("time steps differ across sources");
    if (!(u.grid == ref.grid) || !(b.grid == ref.grid)) throw ContractError("forward grids differ across sources");
  }
  const Grid& fine = ref.grid;
  const auto map = coarse_index_map(fine, image_grid);
  const double tau = ref.tau;
  const double weight = tau * fine.cell_volume();

  KernelSystem sys;
  sys.image_grid = image_grid;
  sys.sources = int(internal.size());
  sys.steps = int(n);
  sys.tau = tau;
  sys.kernel = Eigen::MatrixXd::Zero(Eigen::Index(internal.size()) * n, image_grid.size());
  sys.rhs = Eigen::VectorXd::Zero(sys.kernel.rows());

  const long total = long(internal.size()) * long(n);
#if defined(LSL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (long r = 0; r < total; ++r) {
    const Eigen::Index j = r / n;
    const Eigen::Index k = r % n;
    if (k == 0) continue;  // empty time integral
    const auto& b = background_antiderivative[j].values;
    const auto& u = internal[j].values;
    Eigen::VectorXd acc = 0.5 * b.col(k).cwiseProduct(u.col(0)) + 0.5 * b.col(0).cwiseProduct(u.col(k));
    for (Eigen::Index l = 1; l < k; ++l) acc += b.col(k - l).cwiseProduct(u.col(l));
    auto row = sys.kernel.row(r);
    for (Eigen::Index i = 0; i < acc.size(); ++i) row[map[i]] += weight * acc[i];
  }
  return sys;
}

Eigen::VectorXd rhs_vector(std::span<const TransferSeries> background, std::span<const TransferSeries> measured,
                           int steps) {
  if (background.size() != measured.size()) throw ContractError("need background and measured data per source");
  Eigen::VectorXd rhs(Eigen::Index(measured.size()) * steps);
  for (std::size_t j = 0; j < measured.size(); ++j) {
    const auto& f0 = background[j];
    const auto& f = measured[j];
    if (f0.source != f0.receiver || f.source != f.receiver) {
      throw ContractError("monostatic rhs uses diagonal responses only");
    }
    if (f0.length() < steps || f.length() < steps) throw ContractError("transfer series shorter than the row count");
    if (f0.tau != f.tau) throw ContractError("background and measured data use different time steps");
    rhs.segment(Eigen::Index(j) * steps, steps) = f0.samples.head(steps) - f.samples.head(steps);
  }
  return rhs;
}

double largest_singular_value(const Eigen::MatrixXd& kernel, int iterations) {
  if (kernel.size() == 0) return 0.0;
  const bool wide = kernel.rows() <= kernel.cols();
  const Eigen::Index dim = wide ? kernel.rows() : kernel.cols();
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = 1.0 + 0.01 * std::sin(double(i) + 1.0);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd w = wide ? Eigen::VectorXd(kernel * (kernel.transpose() * v))
                             : Eigen::VectorXd(kernel.transpose() * (kernel * v));
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (it > 5 && std::abs(next - estimate) <= 1e-10 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return std::sqrt(std::max(estimate, 0.0));
}

ReflectivityImage solve_reflectivity(const KernelSystem& system, const SolveOptions& options, ImagingMode mode) {
  if (!(options.lambda >= 0.0)) throw ContractError("regularization weight must be non-negative");
  const KernelSystem norm = system.row_normalized();
  const auto& k = norm.kernel;
  const auto& b = norm.rhs;

  ReflectivityImage image;
  image.mode = mode;
  image.values = GridFunction(system.image_grid);
  if (k.rows() == 0) return image;

  Eigen::VectorXd q;
  if (options.lambda > 0.0) {
    const double smax = largest_singular_value(k);
    const double mu = options.lambda * options.lambda * smax * smax;
    if (k.rows() <= k.cols()) {
      Eigen::MatrixXd gram = k * k.transpose();
      gram.diagonal().array() += mu;
      Eigen::LLT<Eigen::MatrixXd> llt(gram);
      if (llt.info() != Eigen::Success) throw NumericalError("regularized normal equations are not positive definite");
      q = k.transpose() * llt.solve(b);
    } else {
      Eigen::MatrixXd gram = k.transpose() * k;
      gram.diagonal().array() += mu;
      Eigen::LLT<Eigen::MatrixXd> llt(gram);
      if (llt.info() != Eigen::Success) throw NumericalError("regularized normal equations are not positive definite");
      q = llt.solve(k.transpose() * b);
    }
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(k);
    image.effective_rank = cod.rank();
    image.rank_deficient = cod.rank() < std::min(k.rows(), k.cols());
    q = cod.solve(b);
  }
  if (options.nonnegative) q = q.cwiseMax(0.0);
  if (!q.allFinite()) throw NumericalError("reflectivity solve produced non-finite values");
  image.values.values = std::move(q);
  return image;
}

double misfit(const KernelSystem& system, const Eigen::Ref<const Eigen::VectorXd>& q) {
  if (q.size() != system.kernel.cols()) throw ContractError("image size does not match the kernel");
  const KernelSystem norm = system.row_normalized(false);
  const double rhs_norm = norm.rhs.norm();
  const double res = (norm.kernel * q - norm.rhs).norm();
  if (rhs_norm == 0.0) return res == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return res / rhs_norm;
}

}  // namespace lsl
