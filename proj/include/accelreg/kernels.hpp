#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace accelreg::kernels {

struct Linear {};

// exp(-|x - x'|^2 / (2 width^2))
struct Gaussian {
  double width;
};

// (<x, x'> + offset)^degree
struct Polynomial {
  int degree;
  double offset;
};

class Kernel {
 public:
  using Params = std::variant<Linear, Gaussian, Polynomial>;

  static Kernel linear();
  static Kernel gaussian(double width);
  static Kernel polynomial(int degree, double offset = 1.0);

  const Params& params() const { return params_; }
  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    const Eigen::Ref<const Eigen::RowVectorXd>& z) const;
  std::string describe() const;

 private:
  explicit Kernel(Params p) : params_(p) {}
  Params params_;
};

struct Gram {
  Eigen::MatrixXd matrix;
  // max_j K(x_j, x_j), an upper bound for the operator norm of matrix / n.
  double kappa2 = 0.0;
};

// Points are the rows of `points`. Throws DomainError on an empty set and
// DataError naming the first row with a non-finite feature.
Gram gram(const Eigen::MatrixXd& points, const Kernel& kernel);

// K(eval_i, train_j); column counts of the two point sets must agree.
Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& eval, const Eigen::MatrixXd& train,
                           const Kernel& kernel);

// Stacks equally sized vectors as rows; DomainError on ragged input.
Eigen::MatrixXd to_points(const std::vector<std::vector<double>>& rows);

}  // namespace accelreg::kernels
