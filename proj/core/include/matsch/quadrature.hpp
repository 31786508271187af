#pragma once

// One-dimensional quadrature used by the transform and kernel modules:
// finite and half-line integrals of smooth integrands with possible endpoint
// singularities, and Hankel-type integrals against Omega_lambda(r t).

#include <functional>

namespace matsch {

enum class OscillatoryMode {
    zero_splitting,  ///< panels between zeros of Omega, epsilon-accelerated
    plain_adaptive,  ///< one adaptive rule over the whole range (baseline)
};

/// How fast an integrand decays at infinity; picks stopping rules.
enum class DecayHint { unknown, compact, exponential, power };

struct QuadratureConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_panels = 400;
    OscillatoryMode oscillatory_mode = OscillatoryMode::zero_splitting;
    /// Upper truncation point for half-line integrals; 0 means none.
    double tail_cut = 0.0;

    void validate() const;
    /// Copy of `base` with MS_QUAD_MAX_PANELS applied when it is set.
    static QuadratureConfig from_env(QuadratureConfig base);
    static QuadratureConfig from_env();
};

struct QuadEstimate {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

using RealFn = std::function<double(double)>;

/// int_a^b f. Endpoint singularities are tolerated (double-exponential rule).
QuadEstimate integrate(const RealFn& f, double a, double b, const QuadratureConfig& cfg = {});

/// int_a^inf f; honours cfg.tail_cut.
QuadEstimate integrate_to_infinity(const RealFn& f, double a, const QuadratureConfig& cfg = {},
                                   DecayHint hint = DecayHint::unknown);

/// int_0^inf Omega_lambda(r t) g(t) dt.
QuadEstimate integrate_hankel(const RealFn& g, double lambda, double r,
                              const QuadratureConfig& cfg = {},
                              DecayHint hint = DecayHint::unknown);

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// most recent diagonal estimate and a crude error (difference of the last
/// two estimates).
QuadEstimate wynn_epsilon(const double* partial_sums, int count);

}  // namespace matsch
