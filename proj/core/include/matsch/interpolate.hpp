#pragma once

// Lagrange-type interpolation on a point set: cardinal functions
// u_j(x) = sum_k c_{j,k} phi(|x - x_k|) with u_j(x_k) = delta_{jk}.

#include <span>
#include <string>

#include <Eigen/Dense>

#include "matsch/schoenberg.hpp"

namespace matsch {

struct LagrangeBasis {
    SchoenbergMatrixView source;
    /// Row j holds c_j, the solution of (S + reg I) c_j = e_j.
    Eigen::MatrixXd coefficients;
    /// max_j ||S c_j - e_j||_inf against the unregularized S.
    double solve_residual = 0.0;
    double reg = 0.0;
    std::string factorization;  ///< "llt" or "ldlt"
};

/// SingularityError when S is not positive definite and reg == 0, or when
/// the shifted system cannot be factorized either.
LagrangeBasis solve_lagrange(const SchoenbergMatrixView& S, double reg = 0.0);

class Interpolant {
public:
    /// Kernel taken from the basis source; ValidationError on a sample count mismatch.
    Interpolant(LagrangeBasis basis, Eigen::VectorXd samples);

    [[nodiscard]] double operator()(std::span<const double> x) const;
    [[nodiscard]] const LagrangeBasis& basis() const noexcept { return basis_; }
    [[nodiscard]] const Eigen::VectorXd& samples() const noexcept { return samples_; }
    [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }
    [[nodiscard]] const PointSet& nodes() const noexcept { return *basis_.source.source; }

private:
    LagrangeBasis basis_;
    Eigen::VectorXd samples_;
    KernelSpec kernel_;
    Eigen::VectorXd weights_;  ///< C^T f, so A_X f(x) = sum_k w_k phi(|x - x_k|)
};

double eval_interpolant(const Interpolant& interp, std::span<const double> x);

/// max_{j,k} |u_j(x_k) - delta_{jk}| with the kernel matrix rebuilt from X.
double cardinality_check(const LagrangeBasis& basis, const PointSet& X, const KernelSpec& kernel);

}  // namespace matsch
