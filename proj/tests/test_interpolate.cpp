#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "matsch/errors.hpp"
#include "matsch/interpolate.hpp"
#include "matsch/schoenberg.hpp"

using namespace matsch;

namespace {

PointSet progression(int count, double lo, double hi) {
    Eigen::MatrixXd c(count, 1);
    for (int i = 0; i < count; ++i) c(i, 0) = lo + (hi - lo) * i / (count - 1);
    return PointSet(c);
}

PointSet jittered_grid2(std::mt19937_64& rng, int side, double step, double jitter) {
    std::uniform_real_distribution<double> u(-jitter, jitter);
    Eigen::MatrixXd c(side * side, 2);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) c.row(i * side + j) << step * (i + u(rng)), step * (j + u(rng));
    return PointSet(c);
}

Interpolant build(const KernelSpec& k, const PointSet& x, const Eigen::VectorXd& f, double reg = 0.0) {
    return Interpolant(solve_lagrange(assemble(k, x), reg), f);
}

double at(const Interpolant& s, double x) {
    const std::array<double, 1> p{x};
    return s(p);
}

}  // namespace

TEST_CASE("one by one system") {
    SchoenbergMatrixView v;
    v.entries = Eigen::MatrixXd::Constant(1, 1, 0.25);
    const LagrangeBasis b = solve_lagrange(v);
    CHECK(b.coefficients(0, 0) == 4.0);
    CHECK(b.solve_residual == 0.0);
}

TEST_CASE("two point hand case") {
    const PointSet x = build_point_set({{0}, {1}});
    const KernelSpec k = KernelSpec::matern_norm(0.5);
    const LagrangeBasis b = solve_lagrange(assemble(k, x));
    const double e = std::exp(-1.0), det = 1 - e * e;
    CHECK(b.factorization == "llt");
    CHECK(b.coefficients(0, 0) == doctest::Approx(1 / det).epsilon(1e-14));
    CHECK(b.coefficients(0, 1) == doctest::Approx(-e / det).epsilon(1e-14));
    CHECK(b.coefficients(1, 1) == doctest::Approx(1 / det).epsilon(1e-14));
    CHECK(cardinality_check(b, x, k) < 1e-15);

    Eigen::VectorXd f(2);
    f << 1, e;
    const Interpolant s(b, f);
    CHECK(at(s, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at(s, 1.0) == doctest::Approx(e).epsilon(1e-14));
    // f is itself a translate of the kernel, so the interpolant is exact
    CHECK(at(s, 0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(at(s, 0.5) > e);
    CHECK(at(s, 0.5) < 1.0);
}

TEST_CASE("solver accuracy on a separated set") {
    const PointSet x = progression(200, 0.0, 199 * 4.5);
    const KernelSpec k = KernelSpec::matern_norm(0.5);
    REQUIRE(certify(k, x).decision == Decision::bounded_invertible);
    const LagrangeBasis b = solve_lagrange(assemble(k, x));
    CHECK(b.solve_residual <= 1e-10);
    CHECK(cardinality_check(b, x, k) <= 1e-9);
    CHECK((b.coefficients - b.coefficients.transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("node reproduction and constants") {
    std::mt19937_64 rng(17);
    const PointSet x = jittered_grid2(rng, 15, 1.0, 0.25);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd f(x.size());
    for (auto& v : f) v = gauss(rng);
    for (const KernelSpec& k : {KernelSpec::matern_norm(1.0, 2), KernelSpec::imq(1.5, 2)}) {
        const Interpolant s = build(k, x, f);
        const Interpolant one = build(k, x, Eigen::VectorXd::Ones(x.size()));
        double worst = 0.0, worst_one = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const Eigen::RowVectorXd p = x.coords().row(j);
            worst = std::max(worst, std::abs(s(std::span<const double>(p.data(), 2)) - f(j)));
            worst_one = std::max(worst_one, std::abs(eval_interpolant(one, std::span<const double>(p.data(), 2)) - 1));
        }
        CHECK(worst < 1e-8);
        CHECK(worst_one < 1e-9);
    }
}

TEST_CASE("kernel self-interpolation improves under refinement") {
    const KernelSpec k = KernelSpec::matern_norm(1.5);
    const auto target = [&](double x) { return kernel_eval(k, std::abs(x - 0.37)); };
    double prev = 1e300;
    for (int count : {6, 11, 21, 41}) {
        const PointSet x = progression(count, 0.0, 4.0);
        Eigen::VectorXd f(count);
        for (int i = 0; i < count; ++i) f(i) = target(x.coords()(i, 0));
        const Interpolant s = build(k, x, f);
        double err = 0.0;
        for (int i = 0; i + 1 < count; ++i) {
            const double mid = 0.5 * (x.coords()(i, 0) + x.coords()(i + 1, 0));
            err = std::max(err, std::abs(at(s, mid) - target(mid)));
        }
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("regularization trades exactness for stability") {
    const PointSet x = progression(30, 0.0, 10.0);
    const KernelSpec k = KernelSpec::matern_norm(1.0);
    const SchoenbergMatrixView S = assemble(k, x);
    double prev = cardinality_check(solve_lagrange(S), x, k);
    CHECK(prev < 1e-9);
    for (double reg : {1e-6, 1e-4, 1e-2, 1.0}) {
        const LagrangeBasis b = solve_lagrange(S, reg);
        CHECK(b.reg == reg);
        const double dev = cardinality_check(b, x, k);
        CHECK(dev > prev);
        prev = dev;
    }
    CHECK_THROWS_AS(solve_lagrange(S, -1.0), ValidationError);
}

TEST_CASE("coefficient size is controlled by the smallest eigenvalue") {
    std::mt19937_64 rng(23);
    for (const KernelSpec& k : {KernelSpec::matern_norm(0.5, 2), KernelSpec::matern_norm(2.0, 2), KernelSpec::imq(2.0, 2)}) {
        const PointSet x = jittered_grid2(rng, 10, 0.8, 0.2);
        const OperatorCertificate c = certify(k, x);
        const LagrangeBasis b = solve_lagrange(assemble(k, x));
        const double inf_norm = b.coefficients.cwiseAbs().rowwise().sum().maxCoeff();
        CHECK(inf_norm <= std::sqrt(static_cast<double>(x.size())) / c.spectral.lambda_min * (1 + 1e-9));
    }
}

TEST_CASE("singular systems") {
    SchoenbergMatrixView ones;
    ones.entries = Eigen::MatrixXd::Ones(3, 3);
    CHECK_THROWS_AS(solve_lagrange(ones), SingularityError);
    const LagrangeBasis shifted = solve_lagrange(ones, 0.1);
    CHECK(shifted.factorization == "llt");
    CHECK(shifted.solve_residual > 0.01);

    SchoenbergMatrixView indefinite;
    indefinite.entries.resize(2, 2);
    indefinite.entries << 1, 2, 2, 1;
    CHECK_THROWS_AS(solve_lagrange(indefinite), SingularityError);
    const LagrangeBasis ld = solve_lagrange(indefinite, 0.5);
    CHECK(ld.factorization == "ldlt");
    CHECK(((indefinite.entries + 0.5 * Eigen::MatrixXd::Identity(2, 2)) * ld.coefficients.transpose())
              .isIdentity(1e-14));
    // reg = 1 puts an eigenvalue exactly at zero
    CHECK_THROWS_AS(solve_lagrange(indefinite, 1.0), SingularityError);

    SchoenbergMatrixView skew;
    skew.entries.resize(2, 2);
    skew.entries << 1, 0.5, 0.2, 1;
    CHECK_THROWS_AS(solve_lagrange(skew), ValidationError);
}

TEST_CASE("interpolant input checks") {
    const PointSet x = build_point_set({{0}, {1}, {2}});
    const LagrangeBasis b = solve_lagrange(assemble(KernelSpec::imq(1.0), x));
    CHECK_THROWS_AS(Interpolant(b, Eigen::VectorXd::Ones(2)), ValidationError);
    const Interpolant s(b, Eigen::VectorXd::Ones(3));
    const std::array<double, 2> wrong{0, 0};
    CHECK_THROWS_AS((void)s(wrong), ValidationError);
    CHECK(s.nodes().size() == 3);
    SchoenbergMatrixView raw = assemble([](double t) { return std::exp(-t); }, x, "exp");
    CHECK_THROWS_AS(Interpolant(solve_lagrange(raw), Eigen::VectorXd::Ones(3)), ValidationError);
    CHECK_THROWS_AS(cardinality_check(b, build_point_set({{0}, {1}}), KernelSpec::imq(1.0)), ValidationError);
}
