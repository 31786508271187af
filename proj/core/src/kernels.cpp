#include "matsch/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "matsch/errors.hpp"
#include "matsch/specfun.hpp"

namespace matsch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
const double kLnPi = std::log(kPi);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_dim(int n) {
    if (n < 1) throw DomainError("ambient dimension must be a positive integer");
}

// log of 2^{a-1+n/2} pi^{n/2} Gamma(a): G_a = M_{a-n/2} / exp(this)
double log_g_denominator(double a, int n) {
    return (a - 1.0 + 0.5 * n) * kLn2 + 0.5 * n * kLnPi + std::lgamma(a);
}

double bessel_potential_value(double a, int n, double z) {
    const double nu = a - 0.5 * n;
    if (z == 0.0) {
        if (!(nu > 0.0)) throw DomainError("G_alpha is singular at the origin for alpha <= n/2");
        return std::exp(std::lgamma(nu) - 0.5 * n * std::log(4.0 * kPi) - std::lgamma(a));
    }
    if (is_half_integer(nu)) return matern_half_integer(nu, z) / std::exp(log_g_denominator(a, n));
    return std::exp(bessel_k_eval(nu, z).log_value + nu * std::log(z) - log_g_denominator(a, n));
}

double f_alpha_lambda_value(const KernelSpec& s, double z, const QuadratureConfig& cfg) {
    const double a = s.alpha;
    const double l = s.lambda;
    const int n = s.n;
    const double log_c = (a + 2.0 * l) * kLn2 + 0.5 * n * kLnPi + std::lgamma(l + 1.0 - 0.5 * n) +
                         std::lgamma(a + l + 1.0);
    const double p = 2.0 * l - n + 1.0;
    // s = sqrt(z^2 + u^2) turns int_z^inf (s^2-z^2)^{l-n/2} K_a(s) s^{a+1} ds into
    // int_0^inf u^{2l-n+1} K_a(s) s^a du, free of the endpoint singularity.
    const auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double sv = std::hypot(z, u);
        return std::exp(bessel_k_eval(a, sv).log_value + a * std::log(sv) + p * std::log(u) - log_c);
    };
    return integrate_to_infinity(f, 0.0, cfg, DecayHint::exponential).value;
}

}  // namespace

const char* to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::matern: return "matern";
        case KernelFamily::matern_norm: return "matern-norm";
        case KernelFamily::bessel_potential: return "g";
        case KernelFamily::f_kernel: return "f";
        case KernelFamily::f_alpha_lambda: return "f-lambda";
        case KernelFamily::imq: return "imq";
    }
    return "?";
}

KernelSpec KernelSpec::matern(double alpha, int n) {
    return {KernelFamily::matern, alpha, 0.0, 0.0, n};
}
KernelSpec KernelSpec::matern_norm(double alpha, int n) {
    return {KernelFamily::matern_norm, alpha, 0.0, 0.0, n};
}
KernelSpec KernelSpec::bessel_potential(double alpha, int n) {
    return {KernelFamily::bessel_potential, alpha, 0.0, 0.0, n};
}
KernelSpec KernelSpec::f_kernel(double alpha, int n) {
    return {KernelFamily::f_kernel, alpha, 0.0, 0.0, n};
}
KernelSpec KernelSpec::f_alpha_lambda(double alpha, double lambda, int n) {
    return {KernelFamily::f_alpha_lambda, alpha, 0.0, lambda, n};
}
KernelSpec KernelSpec::imq(double beta, int n) { return {KernelFamily::imq, 0.0, beta, 0.0, n}; }

void KernelSpec::validate() const {
    require_dim(n);
    const auto finite = [](double v) { return std::isfinite(v); };
    switch (family) {
        case KernelFamily::matern:
            if (!finite(alpha)) throw DomainError("matern: alpha must be finite");
            break;
        case KernelFamily::matern_norm:
            if (!finite(alpha) || !(alpha > 0.0)) throw DomainError("matern-norm: alpha must be positive");
            break;
        case KernelFamily::bessel_potential:
            if (!finite(alpha) || !(alpha > 0.0)) throw DomainError("G_alpha: alpha must be positive");
            break;
        case KernelFamily::f_kernel:
            if (!finite(alpha) || !(alpha > -0.25 * n)) throw DomainError("F_alpha: alpha must exceed -n/4");
            break;
        case KernelFamily::f_alpha_lambda:
            if (!finite(alpha) || !finite(lambda)) throw DomainError("F_alpha,lambda: parameters must be finite");
            if (!(lambda > 0.5 * n - 1.0)) throw DomainError("F_alpha,lambda: requires lambda > (n-2)/2");
            if (!(alpha + lambda + 1.0 > 0.0))
                throw DomainError("F_alpha,lambda: requires alpha + lambda + 1 > 0");
            break;
        case KernelFamily::imq:
            if (!finite(beta) || !(beta > 0.0)) throw DomainError("imq: beta must be positive");
            break;
    }
}

bool KernelSpec::finite_at_origin() const {
    switch (family) {
        case KernelFamily::matern: return alpha > 0.0;
        case KernelFamily::matern_norm: return true;
        case KernelFamily::bessel_potential: return alpha > 0.5 * n;
        case KernelFamily::f_kernel: return alpha > 0.0;
        case KernelFamily::f_alpha_lambda: return 2.0 * lambda - n + 2.0 + alpha > std::abs(alpha);
        case KernelFamily::imq: return true;
    }
    return false;
}

std::string KernelSpec::describe() const {
    const std::string dim = ", n=" + std::to_string(n) + ")";
    switch (family) {
        case KernelFamily::matern: return "matern(alpha=" + fmt(alpha) + dim;
        case KernelFamily::matern_norm: return "matern-norm(alpha=" + fmt(alpha) + dim;
        case KernelFamily::bessel_potential: return "g(alpha=" + fmt(alpha) + dim;
        case KernelFamily::f_kernel: return "f(alpha=" + fmt(alpha) + dim;
        case KernelFamily::f_alpha_lambda:
            return "f-lambda(alpha=" + fmt(alpha) + ", lambda=" + fmt(lambda) + dim;
        case KernelFamily::imq: return "imq(beta=" + fmt(beta) + dim;
    }
    return "?";
}

double kernel_eval(const KernelSpec& spec, double z, const QuadratureConfig& cfg) {
    spec.validate();
    if (!std::isfinite(z) || z < 0.0) throw DomainError("kernel_eval: distance must be finite and >= 0");
    if (z == 0.0 && !spec.finite_at_origin())
        throw DomainError("kernel_eval: " + spec.describe() + " is singular at the origin");
    switch (spec.family) {
        case KernelFamily::matern: return matern(spec.alpha, z);
        case KernelFamily::matern_norm: return matern_norm(spec.alpha, z);
        case KernelFamily::bessel_potential: return bessel_potential_value(spec.alpha, spec.n, z);
        case KernelFamily::f_kernel:
            return bessel_potential_value(spec.alpha + 0.5 * spec.n, spec.n, z);
        case KernelFamily::f_alpha_lambda: return f_alpha_lambda_value(spec, z, cfg);
        case KernelFamily::imq: return std::exp(-spec.beta * std::log1p(z * z));
    }
    return 0.0;
}

double radial_fourier(const KernelSpec& spec, double xi_norm, const QuadratureConfig& cfg) {
    spec.validate();
    if (!std::isfinite(xi_norm) || xi_norm < 0.0) throw DomainError("radial_fourier: |xi| must be >= 0");
    const int n = spec.n;
    if (spec.family == KernelFamily::imq && !(spec.beta > 0.5 * n))
        throw DomainError("radial_fourier: imq needs beta > n/2 to be integrable");
    if (spec.family == KernelFamily::matern && !(2.0 * spec.alpha + n > 0.0))
        throw DomainError("radial_fourier: matern needs 2 alpha + n > 0 to be integrable");
    const double lambda = 0.5 * n - 1.0;
    const auto g = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double v = kernel_eval(spec, t, cfg);
        return v == 0.0 ? 0.0 : v * std::pow(t, n - 1);
    };
    const DecayHint hint = spec.family == KernelFamily::imq ? DecayHint::power : DecayHint::exponential;
    const double c = 2.0 * std::exp(0.5 * n * kLnPi - std::lgamma(0.5 * n));
    return c * integrate_hankel(g, lambda, xi_norm, cfg, hint).value;
}

double radial_fourier_closed(const KernelSpec& spec, double xi_norm) {
    spec.validate();
    const int n = spec.n;
    const double h = 0.5 * n;
    const double l1 = std::log1p(xi_norm * xi_norm);
    switch (spec.family) {
        case KernelFamily::matern:
            if (!(spec.alpha + h > 0.0)) throw DomainError("radial_fourier_closed: matern not integrable");
            return std::exp((spec.alpha + n - 1.0) * kLn2 + h * kLnPi + std::lgamma(spec.alpha + h) -
                            (spec.alpha + h) * l1);
        case KernelFamily::matern_norm:
            return std::exp(n * kLn2 + h * kLnPi + std::lgamma(spec.alpha + h) - std::lgamma(spec.alpha) -
                            (spec.alpha + h) * l1);
        case KernelFamily::bessel_potential: return std::exp(-spec.alpha * l1);
        case KernelFamily::f_kernel: return std::exp(-(spec.alpha + h) * l1);
        case KernelFamily::f_alpha_lambda: return std::exp(-(spec.alpha + spec.lambda + 1.0) * l1);
        case KernelFamily::imq:
            if (!(spec.beta > h)) throw DomainError("radial_fourier_closed: imq needs beta > n/2");
            return std::pow(2.0 * kPi, n) * bessel_potential_value(spec.beta, n, xi_norm);
    }
    return 0.0;
}

double convolution_fourier(double alpha, double beta, int n, double z, const QuadratureConfig& cfg) {
    require_dim(n);
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("convolution: alpha, beta must be positive");
    if (!std::isfinite(z) || z < 0.0) throw DomainError("convolution: distance must be >= 0");
    const double s = alpha + beta;
    if (z == 0.0 && !(s > 0.5 * n)) throw DomainError("convolution: singular at the origin");
    const double lambda = 0.5 * n - 1.0;
    const auto g = [&](double xi) {
        if (xi <= 0.0) return 0.0;
        return std::exp(-s * std::log1p(xi * xi) + (n - 1) * std::log(xi));
    };
    const double c =
        2.0 * std::exp(0.5 * n * kLnPi - std::lgamma(0.5 * n) - n * std::log(2.0 * kPi));
    return c * integrate_hankel(g, lambda, z, cfg, DecayHint::power).value;
}

double convolution_check(double alpha, double beta, int n, double z, const QuadratureConfig& cfg) {
    const double lhs = convolution_fourier(alpha, beta, n, z, cfg);
    return std::abs(lhs - bessel_potential_value(alpha + beta, n, z));
}

double r3_convolution_closed(int which, double z) {
    if (!(z >= 0.0)) throw DomainError("r3_convolution_closed: distance must be >= 0");
    if (which == 1) return 2.0 * kPi * std::exp(-z);
    if (which == 2) return kPi * std::exp(-z) * (1.0 + z + z * z / 3.0);
    throw DomainError("r3_convolution_closed: which must be 1 or 2");
}

double r3_convolution_fourier(int which, double z, const QuadratureConfig& cfg) {
    // e^{-r}/r = 4 pi G_1 and e^{-r} = 8 pi G_2 in R^3.
    if (which == 1) return 16.0 * kPi * kPi * convolution_fourier(1.0, 1.0, 3, z, cfg);
    if (which == 2) return 64.0 * kPi * kPi * convolution_fourier(2.0, 2.0, 3, z, cfg);
    throw DomainError("r3_convolution_fourier: which must be 1 or 2");
}

std::string InnerProductSpace::describe() const {
    const std::string dim = "n=" + std::to_string(n);
    switch (kind) {
        case SpaceKind::l2: return "L2(" + dim + ")";
        case SpaceKind::sobolev: return "H(alpha=" + fmt(alpha) + ", " + dim + ")";
        case SpaceKind::kspace: return "K(alpha=" + fmt(alpha) + ", " + dim + ")";
    }
    return "?";
}

KernelSpec translate_inner_product_kernel(const InnerProductSpace& space, const KernelSpec& spec) {
    spec.validate();
    require_dim(space.n);
    if (spec.n != space.n) throw DomainError("kernel and space dimensions differ");
    const int n = space.n;
    switch (space.kind) {
        case SpaceKind::l2:
            if (spec.family == KernelFamily::bessel_potential) {
                if (!(spec.alpha > 0.25 * n)) throw DomainError("L2: G_alpha needs alpha > n/4");
                return KernelSpec::bessel_potential(2.0 * spec.alpha, n);
            }
            if (spec.family == KernelFamily::f_kernel)
                return KernelSpec::f_kernel(2.0 * spec.alpha + 0.5 * n, n);
            throw DomainError("L2 inner products are available for g and f kernels only");
        case SpaceKind::sobolev:
            if (spec.family != KernelFamily::bessel_potential)
                throw DomainError("Sobolev inner products need a g kernel");
            if (!(spec.alpha > 0.5 * n)) throw DomainError("Sobolev: reproducing kernel needs alpha > n/2");
            if (spec.alpha != space.alpha) throw DomainError("Sobolev: kernel order must equal the space order");
            return spec;
        case SpaceKind::kspace:
            if (spec.family != KernelFamily::imq) throw DomainError("K-space inner products need an imq kernel");
            if (!(spec.beta > 0.5 * n)) throw DomainError("K-space: imq needs beta > n/2");
            if (std::abs(spec.beta - 0.5 * n - space.alpha) > 1e-12 * std::max(1.0, spec.beta))
                throw DomainError("K-space: space order must equal beta - n/2");
            return spec;
    }
    throw DomainError("unknown space");
}

double rkhs_inner(const InnerProductSpace& space, const KernelSpec& spec, std::span<const double> x,
                  std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("rkhs_inner: points have different dimensions");
    if (x.size() != static_cast<std::size_t>(space.n))
        throw ValidationError("rkhs_inner: point dimension differs from the space dimension");
    const KernelSpec mapped = translate_inner_product_kernel(space, spec);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    return kernel_eval(mapped, std::sqrt(d2));
}

double l2_norm_sq(double alpha, double lambda, const QuadratureConfig& cfg) {
    if (!std::isfinite(alpha) || !std::isfinite(lambda) || !(lambda > -1.0) ||
        !(2.0 * alpha + lambda + 1.0 > 0.0))
        throw DomainError("l2_norm_sq: requires lambda > -1 and 2 alpha + lambda + 1 > 0");
    const double p = 2.0 * alpha + 2.0 * lambda + 1.0;
    const auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::exp(2.0 * bessel_k_eval(alpha, t).log_value + p * std::log(t));
    };
    return integrate_to_infinity(f, 0.0, cfg, DecayHint::exponential).value;
}

double l2_norm_sq_closed(double alpha, double lambda) {
    if (!std::isfinite(alpha) || !std::isfinite(lambda) || !(lambda > -1.0) ||
        !(2.0 * alpha + lambda + 1.0 > 0.0))
        throw DomainError("l2_norm_sq_closed: requires lambda > -1 and 2 alpha + lambda + 1 > 0");
    // Gamma(a+l+1) may sit on the negative axis when alpha < 0; keep signs.
    return std::sqrt(kPi) * gamma_fn(alpha + lambda + 1.0) * gamma_fn(2.0 * alpha + lambda + 1.0) *
           gamma_fn(lambda + 1.0) / (4.0 * gamma_fn(alpha + lambda + 1.5));
}

double moment_integral(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(beta > std::abs(alpha)))
        throw DomainError("moment_integral: requires beta > |alpha|");
    return std::exp((beta - 2.0) * kLn2 + std::lgamma(0.5 * (beta + alpha)) +
                    std::lgamma(0.5 * (beta - alpha)));
}

double moment_integral_quadrature(double alpha, double beta, const QuadratureConfig& cfg) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(beta > std::abs(alpha)))
        throw DomainError("moment_integral_quadrature: requires beta > |alpha|");
    const auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::exp(bessel_k_eval(alpha, t).log_value + (beta - 1.0) * std::log(t));
    };
    return integrate_to_infinity(f, 0.0, cfg, DecayHint::exponential).value;
}

double matern_tail_mass(double alpha, int d) {
    if (!(alpha > 0.0)) throw DomainError("matern_tail_mass: alpha must be positive");
    require_dim(d);
    return std::exp((d - 1.0) * kLn2 + std::lgamma(alpha + 0.5 * d) + std::lgamma(0.5 * d) -
                    std::lgamma(alpha));
}

}  // namespace matsch
