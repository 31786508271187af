#pragma once

// Scattered point sets, Schoenberg matrices S_X(phi) = [phi(|x_j - x_k|)],
// the Schur-test norm bound and separation threshold for normalized
// decreasing profiles, and operator certificates (bounded / invertible)
// for kernel matrices and Gramians of kernel translates.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "matsch/kernels.hpp"
#include "matsch/quadrature.hpp"

namespace matsch {

class PointSet {
public:
    /// Rows of `coords` are the points. Throws ValidationError on fewer than
    /// two points or non-finite coordinates, DuplicatePointError on repeats.
    explicit PointSet(Eigen::MatrixXd coords, double rank_tol = 1e-10);

    [[nodiscard]] const Eigen::MatrixXd& coords() const noexcept { return coords_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return coords_.rows(); }
    [[nodiscard]] int ambient_dim() const noexcept { return static_cast<int>(coords_.cols()); }
    /// delta(X): minimum pairwise distance.
    [[nodiscard]] double separation() const noexcept { return separation_; }
    /// Numerical rank of the centered coordinate matrix.
    [[nodiscard]] int effective_dim() const noexcept { return effective_dim_; }
    [[nodiscard]] std::pair<Eigen::Index, Eigen::Index> closest_pair() const noexcept { return closest_; }
    [[nodiscard]] double distance(Eigen::Index i, Eigen::Index j) const;
    /// The first m points (m >= 2).
    [[nodiscard]] PointSet head(Eigen::Index m) const;

private:
    Eigen::MatrixXd coords_;
    double rank_tol_;
    double separation_ = 0.0;
    int effective_dim_ = 0;
    std::pair<Eigen::Index, Eigen::Index> closest_{0, 1};
};

/// Ragged rows raise ValidationError.
PointSet build_point_set(const std::vector<std::vector<double>>& coords, double rank_tol = 1e-10);

struct SchoenbergMatrixView {
    Eigen::MatrixXd entries;
    std::optional<KernelSpec> kernel;  ///< empty for a raw profile
    std::string label;                 ///< kernel or profile description
    std::shared_ptr<const PointSet> source;

    [[nodiscard]] Eigen::Index size() const noexcept { return entries.rows(); }
};

/// S_X(kernel). DomainError when the kernel is singular at the origin.
SchoenbergMatrixView assemble(const KernelSpec& kernel, const PointSet& X);
SchoenbergMatrixView assemble(const RealFn& profile, const PointSet& X, std::string label);

/// Nonnegative decreasing profile f with f(0) = 1.
class RadialProfile {
public:
    /// Normalized version of a catalog kernel (value / value at 0).
    static RadialProfile from_kernel(const KernelSpec& kernel);
    /// Arbitrary profile, validated by sampling; PreconditionError when it is
    /// negative, increasing somewhere or not 1 at the origin.
    static RadialProfile from_function(RealFn f, std::string label);

    [[nodiscard]] double operator()(double z) const { return f_(z); }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    /// int_0^inf f(t) t^{d-1} dt; closed form for Matern and IMQ profiles,
    /// +inf when it diverges.
    [[nodiscard]] double tail_integral(int d, const QuadratureConfig& cfg = {}) const;
    /// Same integral, always by quadrature.
    [[nodiscard]] double tail_integral_quadrature(int d, const QuadratureConfig& cfg = {}) const;
    /// f(r) = int exp(-r^2 t) dnu(t) with nu equivalent to Lebesgue measure and
    /// int t^{-d/2} dnu finite. Known analytically for the Matern and IMQ families.
    [[nodiscard]] bool laplace_moment_finite(int d) const;
    /// Matern order for Matern-type profiles.
    [[nodiscard]] std::optional<double> matern_order() const;

private:
    enum class Kind { matern, imq, generic };
    RadialProfile(Kind kind, double param, RealFn f, std::string label)
        : kind_(kind), param_(param), f_(std::move(f)), label_(std::move(label)) {}

    Kind kind_;
    double param_;
    RealFn f_;
    std::string label_;
};

/// 1 + d(5^d - 1) / delta^d * int f t^{d-1}.
double norm_bound(const RadialProfile& profile, int d, double delta, const QuadratureConfig& cfg = {});
/// [d(5^d - 1) int f t^{d-1}]^{1/d}.
double invertibility_threshold(const RadialProfile& profile, int d, const QuadratureConfig& cfg = {});

enum class Decision { bounded_invertible, bounded_only, inconclusive };
const char* to_string(Decision d);

struct SpectralEvidence {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Eigen::Index size = 0;
    std::string method;  ///< "dense" or "lanczos"
};

/// Extreme eigenvalues of a symmetric matrix: dense solver up to 512 rows,
/// Lanczos with full reorthogonalization above.
SpectralEvidence extreme_eigenvalues(const Eigen::MatrixXd& s, double tol = 1e-10);

struct OperatorCertificate {
    double norm_bound = 0.0;
    double invertibility_threshold = 0.0;
    double delta_observed = 0.0;
    int d = 0;
    int n = 0;
    Decision decision = Decision::inconclusive;
    SpectralEvidence spectral;
    std::string rule;    ///< which criterion fired
    std::string kernel;  ///< normalized profile the decision is about
    std::string space;   ///< Hilbert space for Riesz certificates, else empty
};

/// spectral_n <= 0 uses every point; otherwise the first spectral_n points.
OperatorCertificate certify(const KernelSpec& kernel, const PointSet& X, int spectral_n = 0,
                            const QuadratureConfig& cfg = {});
OperatorCertificate certify(const RadialProfile& profile, const PointSet& X, int spectral_n = 0,
                            const QuadratureConfig& cfg = {});

/// Gramian of the translates spec(. - x_j) in `space`.
SchoenbergMatrixView gramian_of_translates(const InnerProductSpace& space, const KernelSpec& spec,
                                           const PointSet& X);
/// Riesz-sequence certificate: the Gramian normalized to unit diagonal is
/// certified as a Schoenberg matrix of the mapped kernel.
OperatorCertificate riesz_certificate(const InnerProductSpace& space, const KernelSpec& spec,
                                      const PointSet& X, int spectral_n = 0,
                                      const QuadratureConfig& cfg = {});

}  // namespace matsch
