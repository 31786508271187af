#include "matsch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "matsch/errors.hpp"
#include "matsch/specfun.hpp"

namespace matsch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The Boost integrators are not const-callable in this Boost version, so
// each thread keeps its own instance.
boost::math::quadrature::tanh_sinh<double>& ts_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

boost::math::quadrature::exp_sinh<double>& es_rule() {
    thread_local boost::math::quadrature::exp_sinh<double> rule(12);
    return rule;
}

double tolerance(const QuadratureConfig& cfg, double value) {
    return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
}

// Far out on the half line some integrands are products like inf * 0; the
// true value there is zero.
double guarded(const RealFn& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v) && std::abs(x) > 1e8) return 0.0;
    return v;
}

// tanh-sinh on [a, b]; bisect while the error estimate is too large.
void adaptive_ts(const RealFn& f, double a, double b, const QuadratureConfig& cfg, int depth,
                 QuadEstimate& acc) {
    double err = 0.0;
    double l1 = 0.0;
    const double tol = std::max(cfg.rel_tol, 1e-15);
    double v = 0.0;
    try {
        v = ts_rule().integrate([&](double x) { return guarded(f, x); }, a, b, tol, &err, &l1);
    } catch (const std::exception&) {
        // Boost rejects non-finite samples; split and retry away from the culprit.
        v = 0.0;
        err = kInf;
    }
    const bool ok = std::isfinite(v) && err <= std::max(cfg.abs_tol, cfg.rel_tol * l1);
    if (ok || depth >= 24 || acc.panels + 2 > cfg.max_panels) {
        acc.value += v;
        acc.error += std::isfinite(err) ? err : std::abs(v);
        acc.panels += 1;
        return;
    }
    const double mid = 0.5 * (a + b);
    adaptive_ts(f, a, mid, cfg, depth + 1, acc);
    adaptive_ts(f, mid, b, cfg, depth + 1, acc);
}

QuadEstimate gk_panel(const RealFn& f, double a, double b, const QuadratureConfig& cfg) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, 12, std::max(cfg.rel_tol, 1e-15), &err);
    return {v, err, 1};
}

// Zeros of Omega_lambda: exact for the first few, then spaced by pi, which is
// the asymptotic spacing. Panel ends only need to sit near sign changes for
// the alternating-sum acceleration to work.
class ZeroWalker {
public:
    explicit ZeroWalker(double lambda) : exact_(omega_zeros(lambda, kExact)) {}
    double operator()(int k) const {  // k >= 1
        if (k <= kExact) return exact_[static_cast<std::size_t>(k - 1)];
        return exact_.back() + (k - kExact) * std::numbers::pi;
    }

private:
    static constexpr int kExact = 24;
    std::vector<double> exact_;
};

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw DomainError("QuadratureConfig: tolerances must be positive");
    if (max_panels < 16) throw DomainError("QuadratureConfig: max_panels must be at least 16");
    if (!(tail_cut >= 0.0)) throw DomainError("QuadratureConfig: tail_cut must be nonnegative");
}

QuadratureConfig QuadratureConfig::from_env() { return from_env(QuadratureConfig{}); }

QuadratureConfig QuadratureConfig::from_env(QuadratureConfig base) {
    if (const char* s = std::getenv("MS_QUAD_MAX_PANELS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end == s || *end != '\0' || v < 16 || v > 10000000)
            throw DomainError(std::string("MS_QUAD_MAX_PANELS must be an integer >= 16, got '") + s +
                              "'");
        base.max_panels = static_cast<int>(v);
    }
    return base;
}

QuadEstimate wynn_epsilon(const double* s, int n) {
    if (n <= 0) return {0.0, kInf, 0};
    if (n < 3) return {s[n - 1], n == 2 ? std::abs(s[1] - s[0]) : kInf, 0};
    std::vector<double> em1(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> e0(s, s + n);
    double best = s[n - 1];
    double best_err = std::abs(s[n - 1] - s[n - 2]);
    for (int k = 1; k < n; ++k) {
        const int len = n - k;
        std::vector<double> e1(static_cast<std::size_t>(len));
        bool broken = false;
        for (int i = 0; i < len; ++i) {
            const double d = e0[static_cast<std::size_t>(i) + 1] - e0[static_cast<std::size_t>(i)];
            if (d == 0.0 || !std::isfinite(d)) {
                broken = true;
                break;
            }
            e1[static_cast<std::size_t>(i)] = em1[static_cast<std::size_t>(i) + 1] + 1.0 / d;
        }
        if (broken) break;
        if (k % 2 == 0) {
            const double last = e1.back();
            if (!std::isfinite(last)) break;
            const double err = len >= 2 ? std::abs(last - e1[e1.size() - 2]) : std::abs(last - best);
            best = last;
            best_err = err;
        }
        em1 = std::move(e0);
        e0 = std::move(e1);
    }
    return {best, best_err, 0};
}

QuadEstimate integrate(const RealFn& f, double a, double b, const QuadratureConfig& cfg) {
    cfg.validate();
    if (a == b) return {};
    if (a > b) {
        QuadEstimate r = integrate(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    QuadEstimate acc;
    adaptive_ts(f, a, b, cfg, 0, acc);
    return acc;
}

QuadEstimate integrate_to_infinity(const RealFn& f, double a, const QuadratureConfig& cfg,
                                   DecayHint hint) {
    cfg.validate();
    if (cfg.tail_cut > a) return integrate(f, a, cfg.tail_cut, cfg);
    const double split = a + 1.0;
    QuadEstimate head = integrate(f, a, split, cfg);
    if (hint == DecayHint::compact) return head;

    double err = 0.0;
    double l1 = 0.0;
    double tail = 0.0;
    bool ok = true;
    try {
        tail = es_rule().integrate([&](double x) { return guarded(f, x); }, split, kInf,
                                   std::max(cfg.rel_tol, 1e-15), &err, &l1);
    } catch (const std::exception&) {
        ok = false;
    }
    ok = ok && std::isfinite(tail) && err <= tolerance(cfg, l1) * 10.0;
    if (ok) return {head.value + tail, head.error + err, head.panels + 1};

    // Fallback: geometrically growing panels until contributions die out.
    QuadEstimate acc = head;
    double lo = split;
    double width = 1.0;
    int quiet = 0;
    while (acc.panels < cfg.max_panels) {
        QuadEstimate p = integrate(f, lo, lo + width, cfg);
        acc.value += p.value;
        acc.error += p.error;
        acc.panels += p.panels;
        lo += width;
        width *= 2.0;
        quiet = std::abs(p.value) <= 0.1 * tolerance(cfg, acc.value) ? quiet + 1 : 0;
        if (quiet >= 3) return acc;
    }
    throw AccuracyError("integrate_to_infinity: tail did not converge", acc.value, acc.error);
}

QuadEstimate integrate_hankel(const RealFn& g, double lambda, double r, const QuadratureConfig& cfg,
                              DecayHint hint) {
    cfg.validate();
    if (!(lambda > -1.0)) throw DomainError("integrate_hankel: order must exceed -1");
    r = std::abs(r);
    if (r == 0.0) return integrate_to_infinity(g, 0.0, cfg, hint);
    const RealFn h = [&](double t) {
        const double gv = g(t);
        return gv == 0.0 ? 0.0 : omega(lambda, r * t) * gv;
    };

    if (cfg.oscillatory_mode == OscillatoryMode::plain_adaptive) {
        if (cfg.tail_cut > 0.0) return integrate(h, 0.0, cfg.tail_cut, cfg);
        return integrate_to_infinity(h, 0.0, cfg, hint);
    }

    const ZeroWalker zeros(lambda);
    const double cut = cfg.tail_cut > 0.0 ? cfg.tail_cut : kInf;
    std::vector<double> sums;
    sums.reserve(64);
    double partial = 0.0;
    double panel_err = 0.0;
    double lo = 0.0;
    double prev_extrap = std::numeric_limits<double>::quiet_NaN();
    double prev_extrap_err = kInf;
    int quiet = 0;
    int panels = 0;
    for (int k = 1; panels < cfg.max_panels; ++k) {
        const double hi = std::min(zeros(k) / r, cut);
        // The first panel may carry an endpoint singularity at 0.
        const QuadEstimate p = k == 1 ? integrate(h, lo, hi, cfg) : gk_panel(h, lo, hi, cfg);
        partial += p.value;
        panel_err += p.error;
        panels += p.panels;
        sums.push_back(partial);
        lo = hi;
        if (hi >= cut) return {partial, panel_err, panels};

        const double tol = tolerance(cfg, partial);
        if (hint != DecayHint::power) {
            quiet = std::abs(p.value) <= 0.01 * tol ? quiet + 1 : 0;
            if (quiet >= 3) return {partial, panel_err + std::abs(p.value), panels};
        }
        if (hint == DecayHint::compact) continue;
        if (sums.size() >= 6) {
            const int window = std::min<int>(static_cast<int>(sums.size()), 30);
            const QuadEstimate e = wynn_epsilon(sums.data() + sums.size() - window, window);
            const double step = std::isnan(prev_extrap) ? kInf : std::abs(e.value - prev_extrap);
            const double est = std::max(step, e.error);
            if (est <= tolerance(cfg, e.value) && prev_extrap_err <= tolerance(cfg, e.value))
                return {e.value, est + panel_err, panels};
            prev_extrap = e.value;
            prev_extrap_err = est;
        }
    }
    const double best = std::isnan(prev_extrap) ? partial : prev_extrap;
    throw AccuracyError("integrate_hankel: panel budget exhausted", best,
                        std::isfinite(prev_extrap_err) ? prev_extrap_err : std::abs(partial));
}

}  // namespace matsch
