#include "matsch/hstransform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "matsch/errors.hpp"
#include "matsch/specfun.hpp"

namespace matsch {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_order(double lambda) {
    if (!std::isfinite(lambda) || !(lambda > -1.0))
        throw DomainError("Hankel-Schoenberg order must be finite and exceed -1");
}

// log(1 + t^2) without overflow for huge t.
double log1p_sq(double t) {
    if (t > 1e100) return 2.0 * std::log(t);
    if (t > 1.0) return 2.0 * std::log(t) + std::log1p(1.0 / (t * t));
    return std::log1p(t * t);
}

QuadratureConfig with_support(QuadratureConfig cfg, const RadialDensity& nu) {
    if (nu.decay == DecayHint::compact && nu.support_end > 0.0) cfg.tail_cut = nu.support_end;
    return cfg;
}

QuadEstimate half_line(const RealFn& f, const RadialDensity& nu, const QuadratureConfig& cfg) {
    return integrate_to_infinity(f, 0.0, with_support(cfg, nu), nu.decay);
}

}  // namespace

double total_mass(const RadialDensity& nu, const QuadratureConfig& cfg) {
    if (!nu.has_density()) return nu.atom_at_zero;
    QuadEstimate q;
    try {
        q = half_line(nu.density, nu, cfg);
    } catch (const AccuracyError& e) {
        throw DivergenceError(std::string("total mass did not converge: ") + e.what());
    }
    if (!std::isfinite(q.value)) throw DivergenceError("total mass is not finite");
    return nu.atom_at_zero + q.value;
}

double moment(const RadialDensity& nu, double power, const QuadratureConfig& cfg) {
    const double atom = power == 0.0 ? nu.atom_at_zero : 0.0;
    if (!nu.has_density()) return atom;
    const auto f = [&](double t) {
        const double p = nu(t);
        return p == 0.0 ? 0.0 : p * std::pow(t, power);
    };
    const QuadEstimate q = half_line(f, nu, cfg);
    if (!std::isfinite(q.value)) throw DivergenceError("moment integral is not finite");
    return atom + q.value;
}

double laplace_transform(const RadialDensity& nu, double s, const QuadratureConfig& cfg) {
    if (!(s >= 0.0)) throw DomainError("laplace_transform: s must be nonnegative");
    if (!nu.has_density()) return nu.atom_at_zero;
    const auto f = [&](double t) {
        const double p = nu(t);
        return p == 0.0 ? 0.0 : p * std::exp(-s * t);
    };
    RadialDensity hinted = nu;
    if (s > 0.0 && hinted.decay != DecayHint::compact) hinted.decay = DecayHint::exponential;
    return nu.atom_at_zero + half_line(f, hinted, cfg).value;
}

double hs_forward_at(const RadialDensity& nu, double lambda, double r, const QuadratureConfig& cfg) {
    require_order(lambda);
    if (r == 0.0) return total_mass(nu, cfg);
    if (!nu.has_density()) return nu.atom_at_zero;
    return nu.atom_at_zero +
           integrate_hankel(nu.density, lambda, r, with_support(cfg, nu), nu.decay).value;
}

TransformResult hs_forward(const RadialDensity& nu, double lambda, const EvalGrid& grid,
                           const QuadratureConfig& cfg) {
    require_order(lambda);
    cfg.validate();
    if (nu.atom_at_zero < 0.0) throw DomainError("hs_forward: negative atom");
    const double mass = total_mass(nu, cfg);
    TransformResult out;
    out.values.reserve(grid.size());
    for (double r : grid) {
        if (r == 0.0 || !nu.has_density()) {
            out.values.emplace_back(r, r == 0.0 ? mass : nu.atom_at_zero);
            continue;
        }
        const QuadEstimate q = integrate_hankel(nu.density, lambda, r, with_support(cfg, nu), nu.decay);
        out.values.emplace_back(r, nu.atom_at_zero + q.value);
        out.est_error = std::max(out.est_error, q.error);
        out.panels_used += q.panels;
    }
    return out;
}

TransformResult hs_inverse(const RealFn& phi, double lambda, const EvalGrid& t_grid,
                           const QuadratureConfig& cfg, DecayHint phi_decay) {
    if (!std::isfinite(lambda) || lambda < -0.5)
        throw DomainError("hs_inverse: order must be at least -1/2");
    cfg.validate();
    const double log_c = -lambda * 2.0 * kLn2 - 2.0 * std::lgamma(lambda + 1.0);
    const double p = 2.0 * lambda + 1.0;
    const auto g = [&](double r) {
        const double v = phi(r);
        return v == 0.0 ? 0.0 : v * std::pow(r, p);
    };
    TransformResult out;
    out.values.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t <= 0.0) throw DomainError("hs_inverse: grid points must be positive");
        const QuadEstimate q = integrate_hankel(g, lambda, t, cfg, phi_decay);
        const double scale = std::exp(log_c + p * std::log(t));
        out.values.emplace_back(t, scale * q.value);
        out.est_error = std::max(out.est_error, scale * q.error);
        out.panels_used += q.panels;
    }
    return out;
}

double ParsevalSides::residual() const {
    const double m = std::max(std::abs(lhs), std::abs(rhs));
    return m == 0.0 ? 0.0 : std::abs(lhs - rhs) / m;
}

ParsevalSides parseval_check(const RealFn& f1, const RealFn& f2, double lambda,
                             const QuadratureConfig& cfg, DecayHint decay) {
    require_order(lambda);
    cfg.validate();
    const double p = 2.0 * lambda + 1.0;
    ParsevalSides out;
    const auto lhs_f = [&](double t) {
        const double a = f1(t);
        if (a == 0.0) return 0.0;
        const double b = f2(t);
        return b == 0.0 ? 0.0 : a * b * std::pow(t, p);
    };
    out.lhs = integrate_to_infinity(lhs_f, 0.0, cfg, decay).value;

    const auto w1 = [&](double t) {
        const double v = f1(t);
        return v == 0.0 ? 0.0 : v * std::pow(t, p);
    };
    const auto w2 = [&](double t) {
        const double v = f2(t);
        return v == 0.0 ? 0.0 : v * std::pow(t, p);
    };
    // The outer integrand is itself a quadrature result; ask less of the outer rule.
    QuadratureConfig outer = cfg;
    outer.rel_tol = std::max(cfg.rel_tol * 100.0, 1e-9);
    outer.abs_tol = std::max(cfg.abs_tol * 100.0, 1e-12);
    const auto rhs_f = [&](double r) {
        const double a = integrate_hankel(w1, lambda, r, cfg, decay).value;
        if (a == 0.0) return 0.0;
        // Same function passed twice (a norm): one transform suffices.
        const double b = &f1 == &f2 ? a : integrate_hankel(w2, lambda, r, cfg, decay).value;
        return a * b * std::pow(r, p);
    };
    const double c = std::exp(-2.0 * lambda * kLn2 - 2.0 * std::lgamma(lambda + 1.0));
    out.rhs = c * integrate_to_infinity(rhs_f, 0.0, outer, DecayHint::power).value;
    if (!std::isfinite(out.lhs) || !std::isfinite(out.rhs))
        throw DivergenceError("parseval_check: an integral is not finite");
    return out;
}

double parseval_residual(const RealFn& f1, const RealFn& f2, double lambda,
                         const QuadratureConfig& cfg, DecayHint decay) {
    return parseval_check(f1, f2, lambda, cfg, decay).residual();
}

RadialDensity order_lower(const RadialDensity& nu, double lambda, int n, const QuadratureConfig& cfg) {
    if (n < 1) throw DomainError("order_lower: dimension must be positive");
    const double half_n = 0.5 * n;
    if (!std::isfinite(lambda) || !(lambda > half_n - 1.0))
        throw DomainError("order_lower: requires lambda > (n-2)/2");
    if (!nu.has_density()) throw DomainError("order_lower: measure is concentrated at zero");

    // mu(tau) = (1/B(n/2, l+1-n/2)) int_0^1 (1-u)^{l-n/2} u^{n/2-3/2} p(tau/sqrt(u)) du
    const double a = lambda - half_n;
    const double b = half_n - 1.5;
    const double inv_beta = 1.0 / beta_fn(half_n, lambda + 1.0 - half_n);
    const RealFn p = nu.density;
    const bool compact = nu.decay == DecayHint::compact && nu.support_end > 0.0;
    const double end = nu.support_end;
    QuadratureConfig inner = cfg;
    inner.tail_cut = 0.0;

    RadialDensity mu;
    mu.atom_at_zero = nu.atom_at_zero;
    mu.decay = nu.decay;
    mu.support_end = nu.support_end;
    mu.density = [=](double tau) {
        if (tau < 0.0) return 0.0;
        if (compact && tau >= end) return 0.0;
        if (tau == 0.0) {
            const double p0 = p(0.0);
            if (p0 == 0.0) return 0.0;
            if (n == 1) return std::numeric_limits<double>::infinity();
            return p0 * inv_beta * beta_fn(half_n - 0.5, a + 1.0);
        }
        const double lo = compact ? (tau / end) * (tau / end) : 0.0;
        const auto f = [&](double u) {
            const double v = p(tau / std::sqrt(u));
            if (v == 0.0) return 0.0;
            return std::pow(1.0 - u, a) * std::pow(u, b) * v;
        };
        return inv_beta * integrate(f, lo, 1.0, inner).value;
    };
    return mu;
}

RadialDensity omega_averaging_density(double lambda, double rho) {
    require_order(rho);
    if (!std::isfinite(lambda) || !(lambda > rho))
        throw DomainError("omega_averaging_density: requires lambda > rho > -1");
    const double c = 2.0 / beta_fn(rho + 1.0, lambda - rho);
    const double e1 = lambda - rho - 1.0;
    const double e2 = 2.0 * rho + 1.0;
    RadialDensity nu;
    nu.decay = DecayHint::compact;
    nu.support_end = 1.0;
    nu.density = [=](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return c * std::pow((1.0 - t) * (1.0 + t), e1) * std::pow(t, e2);
    };
    return nu;
}

double omega_self_consistency(double lambda, double rho, double r, const QuadratureConfig& cfg) {
    const RadialDensity nu = omega_averaging_density(lambda, rho);
    const auto f = [&](double t) { return omega(rho, r * t) * nu(t); };
    const double avg = integrate(f, 0.0, 1.0, cfg).value;
    return std::abs(omega(lambda, r) - avg);
}

RadialDensity laplace_density(LaplaceKind kind, double alpha, const QuadratureConfig& cfg) {
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw DomainError("laplace_density: alpha must be positive");
    RadialDensity nu;
    nu.decay = DecayHint::power;
    if (kind == LaplaceKind::f_alpha) {
        const double log_c = -alpha * 2.0 * kLn2 - std::lgamma(alpha);
        nu.density = [=](double t) {
            if (t <= 0.0) return 0.0;
            return std::exp(log_c - 0.25 / t - (alpha + 1.0) * std::log(t));
        };
        return nu;
    }
    const double log_c =
        -(2.0 * alpha + 1.0) * kLn2 - 0.5 * std::log(std::numbers::pi) - std::lgamma(alpha);
    QuadratureConfig inner = cfg;
    inner.tail_cut = 0.0;
    // With t = sqrt(u) s the inner integral becomes
    //   u^{(1-a)/2} int exp(-1/(4 sqrt(u) s) - s^2/4) s^{-a} ds,
    // whose integrand has a fixed Gaussian tail whatever u is.
    nu.density = [=](double u) {
        if (u <= 0.0) return 0.0;
        const double c = 0.25 / std::sqrt(u);
        const auto f = [&](double s) {
            if (s <= 0.0) return 0.0;
            return std::exp(-c / s - 0.25 * s * s - alpha * std::log(s));
        };
        const double j = integrate_to_infinity(f, 0.0, inner, DecayHint::exponential).value;
        return std::exp(log_c - (1.0 + 0.5 * alpha) * std::log(u)) * j;
    };
    return nu;
}

RadialDensity beta_type_density(double alpha, double lambda) {
    require_order(lambda);
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw DomainError("beta_type_density: alpha must be positive");
    const double log_c = kLn2 - std::log(beta_fn(alpha, lambda + 1.0));
    const double e = alpha + lambda + 1.0;
    const double q = 2.0 * lambda + 1.0;
    RadialDensity nu;
    nu.decay = DecayHint::power;
    nu.density = [=](double t) {
        if (t <= 0.0) return q > 0.0 ? 0.0 : (q == 0.0 ? std::exp(log_c) : std::numeric_limits<double>::infinity());
        return std::exp(log_c - e * log1p_sq(t) + q * std::log(t));
    };
    return nu;
}

RadialDensity binomial_representing_density(double alpha, double lambda) {
    require_order(lambda);
    if (!std::isfinite(alpha) || !(alpha + lambda + 1.0 > 0.0))
        throw DomainError("binomial_representing_density: requires alpha + lambda + 1 > 0");
    const double log_c =
        (alpha + 2.0 * lambda) * kLn2 + std::lgamma(lambda + 1.0) + std::lgamma(alpha + lambda + 1.0);
    const double q = alpha + 2.0 * lambda + 1.0;
    const double q0 = q - std::abs(alpha);  // power at the origin
    RadialDensity nu;
    nu.decay = DecayHint::exponential;
    nu.density = [=](double t) {
        if (t <= 0.0) return q0 > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::exp(bessel_k_eval(alpha, t).log_value + q * std::log(t) - log_c);
    };
    return nu;
}

RadialDensity bessel_moment_density(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(beta > std::abs(alpha)))
        throw DomainError("bessel_moment_density: requires beta > |alpha|");
    const double log_c = (beta - 2.0) * kLn2 + std::lgamma(0.5 * (beta + alpha)) +
                         std::lgamma(0.5 * (beta - alpha));
    const double q0 = beta - 1.0 - std::abs(alpha);
    RadialDensity nu;
    nu.decay = DecayHint::exponential;
    nu.density = [=](double t) {
        if (t <= 0.0) return q0 > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::exp(bessel_k_eval(alpha, t).log_value + (beta - 1.0) * std::log(t) - log_c);
    };
    return nu;
}

RadialDensity point_mass(double c) {
    if (!std::isfinite(c) || c < 0.0) throw DomainError("point_mass: mass must be nonnegative");
    RadialDensity nu;
    nu.atom_at_zero = c;
    nu.decay = DecayHint::compact;
    return nu;
}

}  // namespace matsch
