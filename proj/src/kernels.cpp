#include "accelreg/kernels.hpp"

#include <cmath>
#include <sstream>

#include "accelreg/errors.hpp"

namespace accelreg::kernels {

Kernel Kernel::linear() { return Kernel(Linear{}); }

Kernel Kernel::gaussian(double width) {
  if (!(width > 0.0) || !std::isfinite(width))
    throw DomainError("gaussian kernel width must be > 0");
  return Kernel(Gaussian{width});
}

Kernel Kernel::polynomial(int degree, double offset) {
  if (degree < 1) throw DomainError("polynomial kernel degree must be >= 1");
  if (!(offset >= 0.0) || !std::isfinite(offset))
    throw DomainError("polynomial kernel offset must be >= 0");
  return Kernel(Polynomial{degree, offset});
}

double Kernel::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                          const Eigen::Ref<const Eigen::RowVectorXd>& z) const {
  if (x.size() != z.size()) throw DomainError("kernel: point dimensions differ");
  if (std::holds_alternative<Linear>(params_)) return x.dot(z);
  if (const auto* g = std::get_if<Gaussian>(&params_))
    return std::exp(-(x - z).squaredNorm() / (2.0 * g->width * g->width));
  const auto& p = std::get<Polynomial>(params_);
  return std::pow(x.dot(z) + p.offset, p.degree);
}

std::string Kernel::describe() const {
  std::ostringstream out;
  if (std::holds_alternative<Linear>(params_)) {
    out << "linear";
  } else if (const auto* g = std::get_if<Gaussian>(&params_)) {
    out << "gaussian(width=" << g->width << ")";
  } else {
    const auto& p = std::get<Polynomial>(params_);
    out << "polynomial(degree=" << p.degree << ", offset=" << p.offset << ")";
  }
  return out.str();
}

namespace {

void check_finite(const Eigen::MatrixXd& points, const char* which) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (!points.row(i).allFinite()) {
      std::ostringstream msg;
      msg << which << ": non-finite feature in row " << i;
      throw DataError(msg.str());
    }
  }
}

}  // namespace

Gram gram(const Eigen::MatrixXd& points, const Kernel& kernel) {
  if (points.rows() == 0) throw DomainError("gram: empty point set");
  check_finite(points, "gram");
  const Eigen::Index n = points.rows();
  Gram out;
  out.matrix.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double k = kernel(points.row(i), points.row(j));
      out.matrix(i, j) = k;
      out.matrix(j, i) = k;
    }
  }
  out.kappa2 = out.matrix.diagonal().maxCoeff();
  if (!std::isfinite(out.kappa2) || !out.matrix.allFinite())
    throw NumericError("gram: kernel values overflow; standardize the features");
  return out;
}

Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& eval, const Eigen::MatrixXd& train,
                           const Kernel& kernel) {
  if (eval.cols() != train.cols()) throw DomainError("cross_gram: point dimensions differ");
  check_finite(eval, "cross_gram (evaluation points)");
  check_finite(train, "cross_gram (training points)");
  Eigen::MatrixXd out(eval.rows(), train.rows());
  for (Eigen::Index j = 0; j < train.rows(); ++j)
    for (Eigen::Index i = 0; i < eval.rows(); ++i) out(i, j) = kernel(eval.row(i), train.row(j));
  return out;
}

Eigen::MatrixXd to_points(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t dim = rows.front().size();
  Eigen::MatrixXd out(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      std::ostringstream msg;
      msg << "point " << i << " has dimension " << rows[i].size() << ", expected " << dim;
      throw DomainError(msg.str());
    }
    for (std::size_t k = 0; k < dim; ++k) out(i, k) = rows[i][k];
  }
  return out;
}

}  // namespace accelreg::kernels
