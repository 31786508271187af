#pragma once

// Special-function substrate: Gamma/Beta/Pochhammer, Gauss 2F1 on the
// negative axis, modified Bessel functions I and K, the Matern functions
// M_a(z) = K_a(z) z^a and their normalized variant, and the normalized
// Bessel kernels Omega_l(t) = Gamma(l+1) (t/2)^{-l} J_l(t).
//
// Everything here is a pure function of its arguments.

#include <cstddef>
#include <vector>

namespace matsch {

/// Truncation controls for the power-series evaluators.
struct SeriesPolicy {
    double rel_tol = 1e-17;
    int max_terms = 500;
    /// Below this distance from an integer the Temme limit forms replace
    /// pi*mu/sin(pi*mu) and sinh(e)/e.
    double near_integer_eps = 1e-6;

    void validate() const;
};

struct Hyp2f1Policy {
    double rel_tol = 1e-16;
    int max_terms = 200000;
};

// ---------------------------------------------------------------------------
// Gamma family

double gamma_fn(double x);
double log_gamma_fn(double x);
double beta_fn(double a, double b);
/// (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.
double pochhammer(double a, int k);
/// psi(k) for a positive integer k.
double digamma_int(int k);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// ---------------------------------------------------------------------------
// Gauss hypergeometric function, x <= 0 only.

double hyp2f1(double a, double b, double c, double x, const Hyp2f1Policy& policy = {});

// ---------------------------------------------------------------------------
// Modified Bessel functions

enum class BesselKPath {
    series,      ///< Temme form of the I_{+-a} series, upward Matern recurrence
    schlafli,    ///< trapezoidal quadrature of the cosh integral
    asymptotic,  ///< Hankel expansion, summed to its smallest term
};

const char* to_string(BesselKPath path);

struct BesselKValue {
    double value = 0.0;
    double log_value = 0.0;
    BesselKPath path = BesselKPath::series;
    bool overflow = false;
};

/// Path chosen by bessel_k for (alpha, z).
BesselKPath bessel_k_default_path(double alpha, double z);

/// K_alpha(z) for real alpha and z > 0. Overflow is reported as +inf with the
/// flag set; log_value stays finite.
BesselKValue bessel_k_eval(double alpha, double z, const SeriesPolicy& policy = {});
double bessel_k(double alpha, double z, const SeriesPolicy& policy = {});
/// K_alpha(z) forced through one evaluation path (for cross-validation).
BesselKValue bessel_k_via(BesselKPath path, double alpha, double z,
                          const SeriesPolicy& policy = {});

/// I_alpha(z) from its defining power series.
double bessel_i(double alpha, double z, const SeriesPolicy& policy = {});
/// The sine-quotient definition pi/2 (I_{-a} - I_a)/sin(a pi). Only usable
/// away from integer orders and for moderate z; throws DomainError within
/// policy.near_integer_eps of an integer.
double bessel_k_sine_quotient(double alpha, double z, const SeriesPolicy& policy = {});
/// K_n(z) for integer n from the logarithmic series with digamma weights.
double bessel_k_integer_series(int n, double z, const SeriesPolicy& policy = {});

// ---------------------------------------------------------------------------
// Matern functions

/// M_alpha(z) = K_alpha(z) z^alpha. z = 0 is allowed for alpha > 0.
double matern(double alpha, double z);
/// Normalized Matern function 2^{1-a}/Gamma(a) K_a(z) z^a, equal to 1 at 0.
double matern_norm(double alpha, double z);
/// Closed form of M_alpha for alpha = +-(n + 1/2).
double matern_half_integer(double alpha, double z);
/// True when 2*alpha is an odd integer.
bool is_half_integer(double alpha);
/// d/dz M_alpha(z) = -K_{alpha-1}(z) z^alpha.
double matern_derivative(double alpha, double z);

// ---------------------------------------------------------------------------
// Normalized Bessel kernel Omega_lambda

enum class OmegaPath {
    series,      ///< power series (small t)
    miller,      ///< backward recurrence normalized by the Neumann sum
    asymptotic,  ///< Hankel P/Q expansion
};

const char* to_string(OmegaPath path);

OmegaPath omega_default_path(double lambda, double t);
/// Omega_lambda(t) for lambda > -1; even in t.
double omega(double lambda, double t);
double omega_via(OmegaPath path, double lambda, double t);
/// First `count` positive zeros of Omega_lambda, ascending.
std::vector<double> omega_zeros(double lambda, std::size_t count);

}  // namespace matsch
