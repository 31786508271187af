#include "matsch/schoenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "matsch/errors.hpp"
#include "matsch/specfun.hpp"

namespace matsch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double shell_factor(int d) { return d * (std::pow(5.0, d) - 1.0); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(Eigen::MatrixXd coords, double rank_tol) : coords_(std::move(coords)), rank_tol_(rank_tol) {
    if (coords_.rows() < 2) throw ValidationError("point set needs at least two points");
    if (coords_.cols() < 1) throw ValidationError("points need at least one coordinate");
    if (!coords_.allFinite()) throw ValidationError("point coordinates must be finite");
    if (!(rank_tol_ > 0.0 && rank_tol_ < 1.0)) throw ValidationError("rank_tol must lie in (0, 1)");

    const Eigen::Index N = coords_.rows();
    double best = kInf;
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double dist = (coords_.row(i) - coords_.row(j)).norm();
            if (dist == 0.0) throw DuplicatePointError(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (dist < best) {
                best = dist;
                closest_ = {i, j};
            }
        }
    }
    separation_ = best;

    const Eigen::MatrixXd centered = coords_.rowwise() - coords_.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) >= rank_tol_ * smax) ++rank;
    effective_dim_ = std::max(1, rank);
}

double PointSet::distance(Eigen::Index i, Eigen::Index j) const {
    return (coords_.row(i) - coords_.row(j)).norm();
}

PointSet PointSet::head(Eigen::Index m) const {
    if (m < 2 || m > size()) throw ValidationError("head: size out of range");
    return PointSet(coords_.topRows(m), rank_tol_);
}

PointSet build_point_set(const std::vector<std::vector<double>>& coords, double rank_tol) {
    if (coords.size() < 2) throw ValidationError("point set needs at least two points");
    const std::size_t dim = coords.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(coords.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].size() != dim)
            throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(coords[i].size()) +
                                  " coordinates, expected " + std::to_string(dim));
        for (std::size_t k = 0; k < dim; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = coords[i][k];
    }
    return PointSet(std::move(m), rank_tol);
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

Eigen::MatrixXd fill_symmetric(const PointSet& X, const RealFn& phi, double diag) {
    const Eigen::Index N = X.size();
    Eigen::MatrixXd s(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        s(j, j) = diag;
        for (Eigen::Index k = j + 1; k < N; ++k) {
            const double v = phi(X.distance(j, k));
            s(j, k) = v;
            s(k, j) = v;
        }
    }
    return s;
}

void check_kernel_dim(const KernelSpec& kernel, const PointSet& X) {
    const bool dim_bound = kernel.family == KernelFamily::bessel_potential ||
                           kernel.family == KernelFamily::f_kernel ||
                           kernel.family == KernelFamily::f_alpha_lambda;
    if (dim_bound && kernel.n != X.ambient_dim())
        throw DomainError("kernel dimension n=" + std::to_string(kernel.n) + " differs from point dimension " +
                          std::to_string(X.ambient_dim()));
}

}  // namespace

SchoenbergMatrixView assemble(const KernelSpec& kernel, const PointSet& X) {
    kernel.validate();
    if (!kernel.finite_at_origin()) throw DomainError(kernel.describe() + " is singular at the origin");
    check_kernel_dim(kernel, X);
    const double diag = kernel_eval(kernel, 0.0);
    SchoenbergMatrixView v;
    v.entries = fill_symmetric(X, [&](double z) { return kernel_eval(kernel, z); }, diag);
    v.kernel = kernel;
    v.label = kernel.describe();
    v.source = std::make_shared<const PointSet>(X);
    return v;
}

SchoenbergMatrixView assemble(const RealFn& profile, const PointSet& X, std::string label) {
    const double diag = profile(0.0);
    if (!std::isfinite(diag)) throw DomainError("profile is not finite at the origin");
    SchoenbergMatrixView v;
    v.entries = fill_symmetric(X, profile, diag);
    v.label = std::move(label);
    v.source = std::make_shared<const PointSet>(X);
    return v;
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile RadialProfile::from_kernel(const KernelSpec& k) {
    k.validate();
    if (!k.finite_at_origin()) throw DomainError(k.describe() + " is singular at the origin");
    auto mk_matern = [&](double a) {
        return RadialProfile(Kind::matern, a, [a](double z) { return matern_norm(a, z); },
                             "matern-norm(alpha=" + fmt(a) + ")");
    };
    switch (k.family) {
        case KernelFamily::matern:
        case KernelFamily::matern_norm:
        case KernelFamily::f_kernel:
            return mk_matern(k.alpha);
        case KernelFamily::bessel_potential:
            return mk_matern(k.alpha - 0.5 * k.n);
        case KernelFamily::imq: {
            const double b = k.beta;
            return RadialProfile(Kind::imq, b, [b](double z) { return std::pow(1.0 + z * z, -b); },
                                 "imq(beta=" + fmt(b) + ")");
        }
        case KernelFamily::f_alpha_lambda: {
            const double f0 = kernel_eval(k, 0.0);
            return from_function([k, f0](double z) { return kernel_eval(k, z) / f0; },
                                 k.describe() + " / value at 0");
        }
    }
    throw DomainError("unknown kernel family");
}

RadialProfile RadialProfile::from_function(RealFn f, std::string label) {
    if (!f) throw PreconditionError("empty profile");
    const double f0 = f(0.0);
    if (!(std::abs(f0 - 1.0) <= 1e-12)) throw PreconditionError("profile must equal 1 at the origin, got " + fmt(f0));
    double prev = f0;
    // Log-spaced sampling on [1e-3, 1e3].
    constexpr int kSamples = 240;
    for (int i = 0; i <= kSamples; ++i) {
        const double t = std::pow(10.0, -3.0 + 6.0 * i / kSamples);
        const double v = f(t);
        if (!std::isfinite(v) || v < 0.0)
            throw PreconditionError("profile is negative or non-finite at t=" + fmt(t));
        if (v > prev * (1.0 + 1e-12) + 1e-300)
            throw PreconditionError("profile increases near t=" + fmt(t));
        prev = v;
    }
    return RadialProfile(Kind::generic, 0.0, std::move(f), std::move(label));
}

double RadialProfile::tail_integral(int d, const QuadratureConfig& cfg) const {
    if (d < 1) throw DomainError("d must be >= 1");
    switch (kind_) {
        case Kind::matern:
            return matern_tail_mass(param_, d);
        case Kind::imq:
            if (!(param_ > 0.5 * d)) return kInf;
            return 0.5 * beta_fn(param_ - 0.5 * d, 0.5 * d);
        case Kind::generic:
            break;
    }
    return tail_integral_quadrature(d, cfg);
}

double RadialProfile::tail_integral_quadrature(int d, const QuadratureConfig& cfg) const {
    if (d < 1) throw DomainError("d must be >= 1");
    const auto g = [this, d](double t) { return f_(t) * std::pow(t, d - 1); };
    const DecayHint hint = kind_ == Kind::imq ? DecayHint::power : DecayHint::unknown;
    try {
        const QuadEstimate q = integrate_to_infinity(g, 0.0, cfg, hint);
        if (!std::isfinite(q.value)) return kInf;
        return q.value;
    } catch (const AccuracyError&) {
        return kInf;
    } catch (const DivergenceError&) {
        return kInf;
    }
}

bool RadialProfile::laplace_moment_finite(int d) const {
    switch (kind_) {
        case Kind::matern:
            // f_a(t) ~ exp(-1/(4t)) near 0 and t^{-a-1} at infinity.
            return true;
        case Kind::imq:
            // exp(-t) t^{b-1} / Gamma(b): t^{-d/2} moment finite iff b > d/2.
            return param_ > 0.5 * d;
        case Kind::generic:
            return false;
    }
    return false;
}

std::optional<double> RadialProfile::matern_order() const {
    if (kind_ == Kind::matern) return param_;
    return std::nullopt;
}

double norm_bound(const RadialProfile& profile, int d, double delta, const QuadratureConfig& cfg) {
    if (!(delta > 0.0)) throw DomainError("norm_bound: delta must be positive");
    const double I = profile.tail_integral(d, cfg);
    if (!std::isfinite(I)) return kInf;
    return 1.0 + shell_factor(d) * I / std::pow(delta, d);
}

double invertibility_threshold(const RadialProfile& profile, int d, const QuadratureConfig& cfg) {
    const double I = profile.tail_integral(d, cfg);
    if (!std::isfinite(I)) return kInf;
    return std::pow(shell_factor(d) * I, 1.0 / d);
}

const char* to_string(Decision d) {
    switch (d) {
        case Decision::bounded_invertible: return "bounded_invertible";
        case Decision::bounded_only: return "bounded_only";
        case Decision::inconclusive: return "inconclusive";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Spectra

namespace {

SpectralEvidence lanczos(const Eigen::MatrixXd& s, double tol) {
    const Eigen::Index N = s.rows();
    Eigen::MatrixXd Q(N, std::min<Eigen::Index>(N, 64));
    std::vector<double> alpha, beta;
    // Deterministic start vector with all components nonzero.
    Eigen::VectorXd q(N);
    for (Eigen::Index i = 0; i < N; ++i) q(i) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    q.normalize();
    SpectralEvidence ev;
    ev.size = N;
    ev.method = "lanczos";
    for (Eigen::Index m = 0; m < N; ++m) {
        if (m == Q.cols()) Q.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(N, 2 * Q.cols()));
        Q.col(m) = q;
        Eigen::VectorXd w = s * q;
        alpha.push_back(q.dot(w));
        // Full reorthogonalization, applied twice.
        for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(m + 1) * (Q.leftCols(m + 1).transpose() * w);
        const double b = w.norm();

        const auto k = static_cast<Eigen::Index>(alpha.size());
        // The tridiagonal eigensolve is O(k^3); check at geometrically spaced steps.
        const Eigen::Index every = std::max<Eigen::Index>(8, k / 8);
        if (k % every != 0 && m + 1 < N && b > 0.0) {
            beta.push_back(b);
            q = w / b;
            continue;
        }
        const Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
        const Eigen::VectorXd sub =
            k > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), k - 1)) : Eigen::VectorXd();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        ev.lambda_min = tri.eigenvalues()(0);
        ev.lambda_max = tri.eigenvalues()(k - 1);
        // Ritz residual norms ||S y - theta y|| = b |last component|.
        const double r_lo = b * std::abs(tri.eigenvectors()(k - 1, 0));
        const double r_hi = b * std::abs(tri.eigenvectors()(k - 1, k - 1));
        const double scale = std::max(1.0, std::abs(ev.lambda_max));
        if (std::max(r_lo, r_hi) <= tol * scale || b <= tol * scale) break;
        beta.push_back(b);
        q = w / b;
    }
    return ev;
}

}  // namespace

SpectralEvidence extreme_eigenvalues(const Eigen::MatrixXd& s, double tol) {
    if (s.rows() != s.cols() || s.rows() == 0) throw ValidationError("extreme_eigenvalues: square matrix required");
    if (s.rows() <= 512) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
        SpectralEvidence ev;
        ev.lambda_min = es.eigenvalues()(0);
        ev.lambda_max = es.eigenvalues()(s.rows() - 1);
        ev.size = s.rows();
        ev.method = "dense";
        return ev;
    }
    return lanczos(s, tol);
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

OperatorCertificate decide(const RadialProfile& profile, const PointSet& X, const QuadratureConfig& cfg) {
    OperatorCertificate c;
    c.d = X.effective_dim();
    c.n = X.ambient_dim();
    c.delta_observed = X.separation();
    c.kernel = profile.label();
    c.norm_bound = norm_bound(profile, c.d, c.delta_observed, cfg);
    c.invertibility_threshold = invertibility_threshold(profile, c.d, cfg);
    const bool bounded = std::isfinite(c.norm_bound);
    if (bounded && c.n >= 2 && profile.laplace_moment_finite(c.d)) {
        c.decision = Decision::bounded_invertible;
        c.rule = "laplace-representation (n>=2, finite t^{-d/2} moment)";
    } else if (bounded && c.delta_observed > c.invertibility_threshold) {
        c.decision = Decision::bounded_invertible;
        c.rule = "separation (delta > threshold)";
    } else if (bounded) {
        c.decision = Decision::bounded_only;
        c.rule = "norm bound only (delta <= threshold)";
    } else {
        c.decision = Decision::inconclusive;
        c.rule = "none (int f t^{d-1} diverges)";
    }
    return c;
}

SpectralEvidence truncated_spectrum(const Eigen::MatrixXd& s, int spectral_n) {
    const Eigen::Index N = s.rows();
    const Eigen::Index m = spectral_n <= 0 ? N : std::min<Eigen::Index>(N, spectral_n);
    return extreme_eigenvalues(s.topLeftCorner(m, m));
}

}  // namespace

OperatorCertificate certify(const RadialProfile& profile, const PointSet& X, int spectral_n,
                            const QuadratureConfig& cfg) {
    OperatorCertificate c = decide(profile, X, cfg);
    const SchoenbergMatrixView v = assemble([&](double z) { return profile(z); }, X, profile.label());
    c.spectral = truncated_spectrum(v.entries, spectral_n);
    return c;
}

OperatorCertificate certify(const KernelSpec& kernel, const PointSet& X, int spectral_n,
                            const QuadratureConfig& cfg) {
    check_kernel_dim(kernel, X);
    return certify(RadialProfile::from_kernel(kernel), X, spectral_n, cfg);
}

SchoenbergMatrixView gramian_of_translates(const InnerProductSpace& space, const KernelSpec& spec,
                                           const PointSet& X) {
    if (space.n != X.ambient_dim()) throw DomainError("space dimension differs from point dimension");
    const KernelSpec mapped = translate_inner_product_kernel(space, spec);
    SchoenbergMatrixView v = assemble(mapped, X);
    v.label = "gramian of " + spec.describe() + " translates in " + space.describe() + " = S_X(" +
              mapped.describe() + ")";
    return v;
}

OperatorCertificate riesz_certificate(const InnerProductSpace& space, const KernelSpec& spec, const PointSet& X,
                                      int spectral_n, const QuadratureConfig& cfg) {
    const SchoenbergMatrixView g = gramian_of_translates(space, spec, X);
    const KernelSpec mapped = translate_inner_product_kernel(space, spec);
    OperatorCertificate c = decide(RadialProfile::from_kernel(mapped), X, cfg);
    const double diag = g.entries(0, 0);
    c.spectral = truncated_spectrum(g.entries / diag, spectral_n);
    c.space = space.describe();
    c.kernel = mapped.describe() + " normalized as " + c.kernel;
    return c;
}

}  // namespace matsch
