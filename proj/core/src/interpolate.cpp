#include "matsch/interpolate.hpp"

#include <cmath>

#include "matsch/errors.hpp"

namespace matsch {

LagrangeBasis solve_lagrange(const SchoenbergMatrixView& S, double reg) {
    if (!(reg >= 0.0) || !std::isfinite(reg)) throw ValidationError("reg must be a finite nonnegative number");
    const Eigen::Index N = S.size();
    if (N == 0 || S.entries.cols() != N) throw ValidationError("solve_lagrange: square nonempty matrix required");
    if (!S.entries.isApprox(S.entries.transpose(), 1e-14)) throw ValidationError("solve_lagrange: S is not symmetric");

    const Eigen::MatrixXd A = S.entries + reg * Eigen::MatrixXd::Identity(N, N);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
    LagrangeBasis b;
    b.source = S;
    b.reg = reg;

    Eigen::LLT<Eigen::MatrixXd> llt(A);
    // Rounding can leave a tiny positive pivot on a singular matrix.
    const auto pivots = [&] { return llt.matrixLLT().diagonal().array().square(); };
    if (llt.info() == Eigen::Success && pivots().minCoeff() > 1e-15 * pivots().maxCoeff()) {
        b.coefficients = llt.solve(I);
        b.factorization = "llt";
    } else {
        if (reg == 0.0)
            throw SingularityError("kernel matrix is not numerically positive definite; run certify on the point "
                                   "set first or pass a positive --reg");
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        const auto& dvec = ldlt.vectorD();
        const double dmax = dvec.cwiseAbs().maxCoeff();
        if (ldlt.info() != Eigen::Success || dvec.cwiseAbs().minCoeff() <= 1e-15 * dmax)
            throw SingularityError("regularized kernel matrix is singular; increase --reg");
        b.coefficients = ldlt.solve(I);
        b.factorization = "ldlt";
    }
    if (!b.coefficients.allFinite()) throw SingularityError("solve produced non-finite coefficients");
    // S symmetric, so S c_j is column j of S C^T.
    b.solve_residual = (S.entries * b.coefficients.transpose() - I).cwiseAbs().maxCoeff();
    return b;
}

Interpolant::Interpolant(LagrangeBasis basis, Eigen::VectorXd samples)
    : basis_(std::move(basis)), samples_(std::move(samples)) {
    if (!basis_.source.kernel) throw ValidationError("interpolant needs a kernel-backed basis");
    if (!basis_.source.source) throw ValidationError("interpolant needs the node set");
    if (samples_.size() != basis_.coefficients.rows())
        throw ValidationError("expected " + std::to_string(basis_.coefficients.rows()) + " samples, got " +
                              std::to_string(samples_.size()));
    kernel_ = *basis_.source.kernel;
    weights_ = basis_.coefficients.transpose() * samples_;
}

double Interpolant::operator()(std::span<const double> x) const {
    const Eigen::MatrixXd& P = nodes().coords();
    if (static_cast<Eigen::Index>(x.size()) != P.cols())
        throw ValidationError("evaluation point has wrong dimension");
    const Eigen::Map<const Eigen::RowVectorXd> xv(x.data(), P.cols());
    double acc = 0.0;
    for (Eigen::Index k = 0; k < P.rows(); ++k) acc += weights_(k) * kernel_eval(kernel_, (P.row(k) - xv).norm());
    return acc;
}

double eval_interpolant(const Interpolant& interp, std::span<const double> x) { return interp(x); }

double cardinality_check(const LagrangeBasis& basis, const PointSet& X, const KernelSpec& kernel) {
    const Eigen::Index N = X.size();
    if (basis.coefficients.rows() != N) throw ValidationError("basis and point set sizes differ");
    Eigen::MatrixXd phi(N, N);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index k = 0; k < N; ++k) phi(j, k) = kernel_eval(kernel, X.distance(j, k));
    // u_j(x_k) = sum_m c_{j,m} phi(x_k, x_m) = (C Phi)_{jk}.
    return (basis.coefficients * phi - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff();
}

}  // namespace matsch
