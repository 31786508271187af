#pragma once

// Radial kernel catalog on R^n: Matern (raw and normalized), Bessel
// potentials G_a, the F_a and F_{a,l} kernels, and inverse multiquadrics
// phi_b(z) = (1+z^2)^{-b}; their radial Fourier transforms, convolution
// semigroup checks and the reproducing-kernel inner products of translates.
//
// Fourier convention: f^(xi) = int f(x) exp(-i x.xi) dx, so that
// G_a^(xi) = (1+|xi|^2)^{-a}.

#include <span>
#include <string>

#include "matsch/quadrature.hpp"

namespace matsch {

enum class KernelFamily {
    matern,            ///< M_a(z) = K_a(z) z^a
    matern_norm,       ///< Mn_a(z) = 2^{1-a}/Gamma(a) M_a(z)
    bessel_potential,  ///< G_a on R^n
    f_kernel,          ///< F_a = G_{a+n/2} on R^n
    f_alpha_lambda,    ///< F_{a,l} on R^n, Fourier transform (1+|xi|^2)^{-a-l-1}
    imq,               ///< (1+z^2)^{-b}
};

const char* to_string(KernelFamily f);

struct KernelSpec {
    KernelFamily family = KernelFamily::matern_norm;
    double alpha = 0.5;
    double beta = 1.0;
    double lambda = 0.0;
    int n = 1;  ///< ambient dimension

    static KernelSpec matern(double alpha, int n = 1);
    static KernelSpec matern_norm(double alpha, int n = 1);
    static KernelSpec bessel_potential(double alpha, int n);
    static KernelSpec f_kernel(double alpha, int n);
    static KernelSpec f_alpha_lambda(double alpha, double lambda, int n);
    static KernelSpec imq(double beta, int n = 1);

    /// Throws DomainError on parameter constraint violations.
    void validate() const;
    [[nodiscard]] bool finite_at_origin() const;
    [[nodiscard]] std::string describe() const;
};

/// Kernel value at distance z >= 0. F_{a,l} goes through a one-dimensional
/// quadrature; everything else is closed form.
double kernel_eval(const KernelSpec& spec, double z, const QuadratureConfig& cfg = {});

/// n-dimensional Fourier transform at |xi| via the radial Omega-quadrature.
double radial_fourier(const KernelSpec& spec, double xi_norm, const QuadratureConfig& cfg = {});
/// The same transform from its known closed form.
double radial_fourier_closed(const KernelSpec& spec, double xi_norm);

/// (G_a * G_b)(z) on R^n computed on the Fourier side: the product
/// (1+|xi|^2)^{-a-b} is inverted by the radial quadrature.
double convolution_fourier(double alpha, double beta, int n, double z,
                           const QuadratureConfig& cfg = {});
/// |(G_a * G_b)(z) - G_{a+b}(z)| with the convolution from the Fourier side.
double convolution_check(double alpha, double beta, int n, double z,
                         const QuadratureConfig& cfg = {});

/// The two closed-form convolutions in R^3, as functions of z = |x-y|:
///   which = 1: int e^{-|u-x|-|u-y|}/(|u-x||u-y|) du = 2 pi e^{-z}
///   which = 2: int e^{-|u-x|-|u-y|} du = pi e^{-z}(1 + z + z^2/3)
double r3_convolution_closed(int which, double z);
/// Left-hand sides above through convolution_fourier.
double r3_convolution_fourier(int which, double z, const QuadratureConfig& cfg = {});

enum class SpaceKind { l2, sobolev, kspace };

struct InnerProductSpace {
    SpaceKind kind = SpaceKind::l2;
    double alpha = 0.0;  ///< smoothness for sobolev / kspace; unused for l2
    int n = 1;

    static InnerProductSpace l2(int n) { return {SpaceKind::l2, 0.0, n}; }
    static InnerProductSpace sobolev(double alpha, int n) { return {SpaceKind::sobolev, alpha, n}; }
    static InnerProductSpace kspace(double alpha, int n) { return {SpaceKind::kspace, alpha, n}; }
    [[nodiscard]] std::string describe() const;
};

/// Kernel whose values are the inner products of translates of `spec` in
/// `space`: G_{2a} (or F_{2a+n/2}) in L2, G_a in H^a, phi_b in K_{b-n/2}.
KernelSpec translate_inner_product_kernel(const InnerProductSpace& space, const KernelSpec& spec);

/// <spec(. - x), spec(. - y)> in `space`.
double rkhs_inner(const InnerProductSpace& space, const KernelSpec& spec, std::span<const double> x,
                  std::span<const double> y);

/// int_0^inf [K_a(t) t^a]^2 t^{2l+1} dt by quadrature.
double l2_norm_sq(double alpha, double lambda, const QuadratureConfig& cfg = {});
/// sqrt(pi) Gamma(a+l+1) Gamma(2a+l+1) Gamma(l+1) / (4 Gamma(a+l+3/2)).
double l2_norm_sq_closed(double alpha, double lambda);

/// int_0^inf K_a(t) t^{b-1} dt = 2^{b-2} Gamma((b+a)/2) Gamma((b-a)/2), b > |a|.
double moment_integral(double alpha, double beta);
double moment_integral_quadrature(double alpha, double beta, const QuadratureConfig& cfg = {});

/// int_0^inf Mn_a(t) t^{d-1} dt = 2^{d-1} Gamma(a+d/2) Gamma(d/2) / Gamma(a).
double matern_tail_mass(double alpha, int d);

}  // namespace matsch
