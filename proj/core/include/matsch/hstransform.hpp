#pragma once

// Hankel-Schoenberg transforms of finite positive measures on [0, inf):
//   phi(r) = int Omega_lambda(r t) dnu(t),
// their inversion, Parseval's relation, the order-lowering map and the
// catalog of representing densities used elsewhere in the library.

#include <utility>
#include <vector>

#include "matsch/grid.hpp"
#include "matsch/quadrature.hpp"

namespace matsch {

/// c * delta_0 + p(t) dt. An empty density means the measure is the atom alone.
struct RadialDensity {
    double atom_at_zero = 0.0;
    RealFn density;
    DecayHint decay = DecayHint::unknown;
    /// Right end of the support when decay == compact.
    double support_end = 0.0;

    [[nodiscard]] bool has_density() const { return static_cast<bool>(density); }
    /// p(t); 0 when there is no density part.
    [[nodiscard]] double operator()(double t) const { return density ? density(t) : 0.0; }
};

struct TransformResult {
    std::vector<std::pair<double, double>> values;
    double est_error = 0.0;
    int panels_used = 0;
};

/// Total mass nu([0, inf)). Throws DivergenceError when the integral does
/// not settle.
double total_mass(const RadialDensity& nu, const QuadratureConfig& cfg = {});
/// int t^power dnu(t) (the atom contributes only for power == 0).
double moment(const RadialDensity& nu, double power, const QuadratureConfig& cfg = {});
/// int exp(-s t) dnu(t), s >= 0.
double laplace_transform(const RadialDensity& nu, double s, const QuadratureConfig& cfg = {});

TransformResult hs_forward(const RadialDensity& nu, double lambda, const EvalGrid& grid,
                           const QuadratureConfig& cfg = {});
/// Single-point forward transform.
double hs_forward_at(const RadialDensity& nu, double lambda, double r,
                     const QuadratureConfig& cfg = {});

/// f(t) = t^{2l+1} / (4^l Gamma(l+1)^2) int Omega_l(r t) phi(r) r^{2l+1} dr,
/// for lambda >= -1/2 and t > 0. `phi_decay` describes phi(r) r^{2l+1}.
TransformResult hs_inverse(const RealFn& phi, double lambda, const EvalGrid& t_grid,
                           const QuadratureConfig& cfg = {},
                           DecayHint phi_decay = DecayHint::power);

struct ParsevalSides {
    double lhs = 0.0;  ///< int f1 f2 t^{2l+1} dt
    double rhs = 0.0;  ///< 4^{-l} Gamma(l+1)^{-2} int phi1 phi2 r^{2l+1} dr
    [[nodiscard]] double residual() const;
};

/// Both sides of Parseval's relation for phi_j(r) = int Omega_l(r t) f_j(t) t^{2l+1} dt.
ParsevalSides parseval_check(const RealFn& f1, const RealFn& f2, double lambda,
                             const QuadratureConfig& cfg = {},
                             DecayHint decay = DecayHint::unknown);
/// |LHS - RHS| / max(|LHS|, |RHS|), 0 when both vanish.
double parseval_residual(const RealFn& f1, const RealFn& f2, double lambda,
                         const QuadratureConfig& cfg = {},
                         DecayHint decay = DecayHint::unknown);

/// The measure mu on [0, inf) whose order-(n-2)/2 transform equals the
/// order-lambda transform of nu. Requires lambda > (n-2)/2.
RadialDensity order_lower(const RadialDensity& nu, double lambda, int n,
                          const QuadratureConfig& cfg = {});

/// (2/B(rho+1, lambda-rho)) (1-t^2)^{lambda-rho-1} t^{2rho+1} on [0, 1]:
/// averaging Omega_rho(r t) against it gives Omega_lambda(r).
RadialDensity omega_averaging_density(double lambda, double rho);
/// |Omega_lambda(r) - int Omega_rho(r t) dnu(t)| for the density above.
double omega_self_consistency(double lambda, double rho, double r,
                              const QuadratureConfig& cfg = {});

enum class LaplaceKind { f_alpha, g_alpha };

/// f_alpha(t) = 4^{-a} exp(-1/(4t)) t^{-a-1} / Gamma(a), or g_alpha defined by
/// its inner integral. Both are probability densities with
///   int exp(-z^2 t) f_a(t) dt = Mn_a(z),   int exp(-z^2 u) g_a(u) du = Mn_a(sqrt z).
RadialDensity laplace_density(LaplaceKind kind, double alpha, const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// Catalog

/// 2/B(a, l+1) (1+t^2)^{-a-l-1} t^{2l+1}; its order-l transform is Mn_a(r).
RadialDensity beta_type_density(double alpha, double lambda);
/// K_a(t) t^{a+2l+1} / (2^{a+2l} Gamma(l+1) Gamma(a+l+1)); order-l transform
/// (1+r^2)^{-a-l-1}.
RadialDensity binomial_representing_density(double alpha, double lambda);
/// K_a(t) t^{b-1} / (2^{b-2} Gamma((b+a)/2) Gamma((b-a)/2)), b > |a|; order-l
/// transform 2F1((b-a)/2, (b+a)/2; l+1; -r^2).
RadialDensity bessel_moment_density(double alpha, double beta);
RadialDensity point_mass(double c);

}  // namespace matsch
