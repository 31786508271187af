#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "matsch/errors.hpp"
#include "matsch/kernels.hpp"
#include "matsch/schoenberg.hpp"

using namespace matsch;

namespace {

constexpr double kPi = std::numbers::pi;

PointSet progression(int count, double step) {
    Eigen::MatrixXd c(count, 1);
    for (int i = 0; i < count; ++i) c(i, 0) = i * step;
    return PointSet(c);
}

PointSet grid2(int side, double step) {
    Eigen::MatrixXd c(side * side, 2);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) c.row(i * side + j) << i * step, j * step;
    return PointSet(c);
}

// Uniform points in a cube; duplicates are astronomically unlikely.
PointSet random_cloud(std::mt19937_64& rng, int count, int dim, double side) {
    std::uniform_real_distribution<double> u(0.0, side);
    Eigen::MatrixXd c(count, dim);
    for (int i = 0; i < count; ++i)
        for (int k = 0; k < dim; ++k) c(i, k) = u(rng);
    return PointSet(c);
}

// Unit lattice in [0, side)^dim with every point moved by at most `jitter`
// per coordinate; separation stays above 1 - 2 jitter.
PointSet jittered_lattice(std::mt19937_64& rng, int count, int dim, double jitter) {
    const int side = static_cast<int>(std::ceil(std::pow(count, 1.0 / dim) - 1e-9));
    std::uniform_real_distribution<double> u(-jitter, jitter);
    Eigen::MatrixXd c(count, dim);
    for (int i = 0; i < count; ++i) {
        int rest = i;
        for (int k = 0; k < dim; ++k) {
            c(i, k) = rest % side + u(rng);
            rest /= side;
        }
    }
    return PointSet(c);
}

double dense_min_eig(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

TEST_CASE("point sets") {
    const PointSet a = build_point_set({{0}, {1}, {3}});
    CHECK(a.separation() == 1.0);
    CHECK(a.effective_dim() == 1);
    CHECK(a.ambient_dim() == 1);
    const PointSet line = build_point_set({{0, 0, 0}, {1, 2, 3}, {2, 4, 6}, {-1, -2, -3.5 + 0.5}});
    CHECK(line.effective_dim() == 1);
    CHECK(line.ambient_dim() == 3);
    CHECK(build_point_set({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}).effective_dim() == 2);
    const PointSet b = build_point_set({{0, 0}, {5, 5}, {0.5, 0}, {9, 9}});
    CHECK(b.separation() == 0.5);
    CHECK(b.closest_pair() == std::pair<Eigen::Index, Eigen::Index>{0, 2});
    CHECK(b.head(2).separation() == doctest::Approx(std::sqrt(50.0)));

    try {
        (void)build_point_set({{0, 1}, {2, 3}, {0, 1}});
        FAIL("expected DuplicatePointError");
    } catch (const DuplicatePointError& e) {
        CHECK(e.first() == 0);
        CHECK(e.second() == 2);
    }
    CHECK_THROWS_AS(build_point_set({{0}}), ValidationError);
    CHECK_THROWS_AS(build_point_set({{0, 1}, {2}}), ValidationError);
    CHECK_THROWS_AS(build_point_set({{0}, {std::nan("")}}), ValidationError);
}

TEST_CASE("assembly") {
    const PointSet x = build_point_set({{0}, {1}});
    const SchoenbergMatrixView m = assemble(KernelSpec::matern_norm(0.5), x);
    CHECK(m.entries(0, 0) == 1.0);
    CHECK(m.entries(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(m.entries(1, 0) == m.entries(0, 1));
    const SchoenbergMatrixView q = assemble(KernelSpec::imq(1.0), x);
    CHECK(q.entries(0, 1) == 0.5);
    CHECK(q.size() == 2);

    std::mt19937_64 rng(3);
    const PointSet cloud = random_cloud(rng, 40, 2, 5.0);
    const SchoenbergMatrixView s = assemble(KernelSpec::matern_norm(1.3, 2), cloud);
    CHECK(s.entries.diagonal().isOnes(1e-14));
    CHECK((s.entries - s.entries.transpose()).norm() == 0.0);
    CHECK(s.source->size() == 40);

    const PointSet x3 = build_point_set({{0, 0, 0}, {1, 0, 0}});
    CHECK_THROWS_AS(assemble(KernelSpec::bessel_potential(1.0, 3), x3), DomainError);
    CHECK_THROWS_AS(assemble(KernelSpec::bessel_potential(2.0, 2), x3), DomainError);
    CHECK(assemble(KernelSpec::bessel_potential(2.0, 3), x3).entries(0, 1) ==
          doctest::Approx(std::exp(-1.0) / (8 * kPi)).epsilon(1e-13));
}

TEST_CASE("norm bound and threshold") {
    const RadialProfile m = RadialProfile::from_kernel(KernelSpec::matern_norm(0.5));
    const RadialProfile q = RadialProfile::from_kernel(KernelSpec::imq(1.0));
    CHECK(norm_bound(m, 1, 10.0) == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(norm_bound(q, 1, 4.0) == doctest::Approx(1 + kPi / 2).epsilon(1e-14));
    CHECK(norm_bound(m, 1, 1e12) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(invertibility_threshold(m, 1) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(invertibility_threshold(q, 1) == doctest::Approx(2 * kPi).epsilon(1e-14));
    // Matern d=1 threshold 4 Gamma(a+1/2) Gamma(1/2) / Gamma(a)
    for (double a : {1.0, 2.0}) {
        const RadialProfile p = RadialProfile::from_kernel(KernelSpec::matern_norm(a));
        CHECK(invertibility_threshold(p, 1) ==
              doctest::Approx(4 * std::tgamma(a + 0.5) * std::sqrt(kPi) / std::tgamma(a)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(norm_bound(m, 1, 0.0), DomainError);
    CHECK(std::isinf(invertibility_threshold(q, 2)));

    for (int d : {1, 2, 3}) {
        for (double a : {0.5, 1.0, 2.5}) {
            const RadialProfile p = RadialProfile::from_kernel(KernelSpec::matern_norm(a));
            CHECK(p.tail_integral_quadrature(d) == doctest::Approx(p.tail_integral(d)).epsilon(1e-10));
        }
        const RadialProfile p = RadialProfile::from_kernel(KernelSpec::imq(d + 0.7));
        CHECK(p.tail_integral_quadrature(d) == doctest::Approx(p.tail_integral(d)).epsilon(1e-10));
    }
    const RadialProfile e = RadialProfile::from_function([](double t) { return std::exp(-t); }, "exp");
    CHECK(invertibility_threshold(e, 1) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(norm_bound(e, 2, 3.0) == doctest::Approx(norm_bound(m, 2, 3.0)).epsilon(1e-10));
}

TEST_CASE("profile preconditions") {
    CHECK_THROWS_AS(RadialProfile::from_function([](double t) { return std::cos(t); }, "cos"), PreconditionError);
    CHECK_THROWS_AS(RadialProfile::from_function([](double t) { return 2 * std::exp(-t); }, "2exp"),
                    PreconditionError);
    CHECK_THROWS_AS(
        RadialProfile::from_function([](double t) { return std::exp(-t) * (1 + 0.5 * std::sin(5 * t)); }, "wiggle"),
        PreconditionError);
    CHECK_THROWS_AS(RadialProfile::from_function(RealFn{}, "empty"), PreconditionError);
    CHECK_THROWS_AS(RadialProfile::from_kernel(KernelSpec::bessel_potential(1.0, 3)), DomainError);
}

TEST_CASE("certificates for the reference configurations") {
    const OperatorCertificate c1 = certify(KernelSpec::matern_norm(0.5), progression(30, 5.0));
    CHECK(c1.decision == Decision::bounded_invertible);
    CHECK(c1.rule == "separation (delta > threshold)");
    CHECK(c1.invertibility_threshold == doctest::Approx(4.0));
    CHECK(c1.delta_observed == 5.0);
    CHECK(c1.d == 1);
    CHECK(c1.n == 1);

    const OperatorCertificate c2 = certify(KernelSpec::matern_norm(1.0, 2), grid2(6, 0.3));
    CHECK(c2.decision == Decision::bounded_invertible);
    CHECK(c2.rule == "laplace-representation (n>=2, finite t^{-d/2} moment)");
    CHECK(c2.spectral.lambda_min > 0.0);

    const OperatorCertificate c3 = certify(KernelSpec::imq(1.0), progression(30, 4.0));
    CHECK(c3.decision == Decision::bounded_only);
    CHECK(c3.norm_bound == doctest::Approx(1 + kPi / 2));

    // Laplace moment finite for imq only when beta > d/2
    const OperatorCertificate c4 = certify(KernelSpec::imq(2.0, 2), grid2(5, 0.5));
    CHECK(c4.decision == Decision::bounded_invertible);
    const OperatorCertificate c5 = certify(KernelSpec::imq(1.0, 2), grid2(5, 0.5));
    CHECK(c5.decision == Decision::inconclusive);
    CHECK(std::isinf(c5.norm_bound));

    // collinear points in the plane: d=1, n=2
    Eigen::MatrixXd line(10, 2);
    for (int i = 0; i < 10; ++i) line.row(i) << 3.0 * i, 4.0 * i;
    const OperatorCertificate c6 = certify(KernelSpec::imq(1.0, 2), PointSet(line));
    CHECK(c6.d == 1);
    CHECK(c6.n == 2);
    CHECK(c6.decision == Decision::bounded_invertible);

    const OperatorCertificate partial = certify(KernelSpec::matern_norm(0.5), progression(30, 5.0), 7);
    CHECK(partial.spectral.size == 7);
}

TEST_CASE("scaling a set never loses the separation decision") {
    for (double a : {0.5, 1.0, 2.0}) {
        const KernelSpec k = KernelSpec::matern_norm(a);
        const PointSet base = progression(20, 1.0);
        Decision prev = certify(k, base).decision;
        for (double c : {1.5, 3.0, 6.0, 12.0, 24.0}) {
            const Decision now = certify(k, progression(20, c)).decision;
            if (prev == Decision::bounded_invertible) CHECK(now == Decision::bounded_invertible);
            CHECK(now != Decision::inconclusive);
            prev = now;
        }
        CHECK(prev == Decision::bounded_invertible);
    }
}

TEST_CASE("spectrum stays inside the analytic bounds") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> count(20, 150);
    for (int trial = 0; trial < 18; ++trial) {
        const int d = 1 + trial % 3;
        const PointSet x = random_cloud(rng, count(rng), d, 8.0 * d);
        const KernelSpec k = trial % 2 ? KernelSpec::matern_norm(0.5 + trial % 4, d) : KernelSpec::imq(d + 0.5, d);
        const OperatorCertificate c = certify(k, x);
        CHECK(c.spectral.lambda_max <= c.norm_bound * (1 + 1e-12));
        if (c.norm_bound < 2) CHECK(c.spectral.lambda_min >= 2 - c.norm_bound - 1e-12);
    }
}

TEST_CASE("Cholesky succeeds on kernel matrices of distinct points") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + trial % 3;
        const PointSet x = jittered_lattice(rng, trial < 3 ? 120 : 500, d, 0.3);
        CHECK(x.separation() >= 0.4);
        for (const KernelSpec& k : {KernelSpec::matern_norm(1.0, d), KernelSpec::imq(1.0, d)}) {
            Eigen::LLT<Eigen::MatrixXd> llt(assemble(k, x).entries);
            CHECK(llt.info() == Eigen::Success);
        }
    }
}

TEST_CASE("shell counts around each point") {
    std::mt19937_64 rng(11);
    std::vector<PointSet> sets;
    for (int d : {1, 2, 3}) sets.push_back(random_cloud(rng, 200, d, 6.0));
    sets.push_back(grid2(12, 1.0));
    {
        // hexagonal patch: densest packing in the plane
        Eigen::MatrixXd h(0, 2);
        std::vector<Eigen::RowVector2d> pts;
        for (int i = -8; i <= 8; ++i)
            for (int j = -8; j <= 8; ++j) pts.emplace_back(i + 0.5 * j, std::sqrt(3.0) / 2 * j);
        h.resize(static_cast<Eigen::Index>(pts.size()), 2);
        for (std::size_t i = 0; i < pts.size(); ++i) h.row(static_cast<Eigen::Index>(i)) = pts[i];
        sets.emplace_back(h);
    }
    {
        // face-centred cubic patch in R^3
        std::vector<Eigen::RowVector3d> pts;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j)
                for (int k = -4; k <= 4; ++k)
                    if ((i + j + k) % 2 == 0) pts.emplace_back(i, j, k);
        Eigen::MatrixXd f(static_cast<Eigen::Index>(pts.size()), 3);
        for (std::size_t i = 0; i < pts.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = pts[i];
        sets.emplace_back(f);
    }
    for (const PointSet& x : sets) {
        const int d = x.effective_dim();
        const double delta = x.separation();
        int worst_excess = 0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            std::vector<int> shell(64, 0);
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                if (k == j) continue;
                const auto m = static_cast<std::size_t>(std::floor(x.distance(j, k) / delta * (1 + 1e-12)));
                if (m < shell.size()) ++shell[m];
            }
            for (std::size_t m = 1; m < shell.size(); ++m) {
                const double cap = (std::pow(5.0, d) - 1) * std::pow(static_cast<double>(m), d - 1);
                worst_excess = std::max(worst_excess, shell[m] - static_cast<int>(cap));
            }
            CHECK(shell[0] == 0);
        }
        CHECK(worst_excess <= 0);
    }
}

TEST_CASE("Lanczos agrees with the dense solver") {
    std::mt19937_64 rng(5);
    const PointSet x = random_cloud(rng, 700, 2, 40.0);
    const Eigen::MatrixXd s = assemble(KernelSpec::matern_norm(1.5, 2), x).entries;
    const SpectralEvidence ev = extreme_eigenvalues(s);
    CHECK(ev.method == "lanczos");
    const Eigen::VectorXd all =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
    CHECK(ev.lambda_min == doctest::Approx(all(0)).epsilon(1e-8));
    CHECK(ev.lambda_max == doctest::Approx(all(all.size() - 1)).epsilon(1e-8));
    const SpectralEvidence small = extreme_eigenvalues(s.topLeftCorner(100, 100));
    CHECK(small.method == "dense");
    CHECK(small.lambda_min == doctest::Approx(dense_min_eig(s.topLeftCorner(100, 100))).epsilon(1e-12));
    CHECK_THROWS_AS(extreme_eigenvalues(Eigen::MatrixXd(2, 3)), ValidationError);
}

TEST_CASE("Gramians of translates") {
    const PointSet x3 = build_point_set({{0, 0, 0}, {1, 0, 0}});
    const SchoenbergMatrixView l2 = gramian_of_translates(InnerProductSpace::l2(3), KernelSpec::bessel_potential(1, 3), x3);
    CHECK(l2.entries(0, 0) == doctest::Approx(1 / (8 * kPi)).epsilon(1e-13));
    CHECK(l2.entries(0, 1) == doctest::Approx(std::exp(-1.0) / (8 * kPi)).epsilon(1e-13));

    std::mt19937_64 rng(9);
    const PointSet y = random_cloud(rng, 25, 2, 4.0);
    const KernelSpec g = KernelSpec::bessel_potential(1.5, 2);
    CHECK(gramian_of_translates(InnerProductSpace::sobolev(1.5, 2), g, y).entries == assemble(g, y).entries);
    const KernelSpec q = KernelSpec::imq(2.0, 2);
    CHECK(gramian_of_translates(InnerProductSpace::kspace(1.0, 2), q, y).entries == assemble(q, y).entries);
    CHECK_THROWS_AS(gramian_of_translates(InnerProductSpace::kspace(1.0, 3), q, y), DomainError);
}

TEST_CASE("Riesz certificates") {
    std::mt19937_64 rng(13);
    const PointSet x3 = random_cloud(rng, 60, 3, 5.0);
    const OperatorCertificate r1 = riesz_certificate(InnerProductSpace::l2(3), KernelSpec::bessel_potential(1, 3), x3);
    CHECK(r1.decision == Decision::bounded_invertible);
    CHECK(r1.space == "L2(n=3)");
    CHECK(r1.spectral.lambda_min > 0);

    // H^a(R): mapped profile Mn_{a-1/2}, threshold 4 Gamma(a) Gamma(1/2) / Gamma(a-1/2)
    const double a = 1.0;
    const double thr = 4 * std::tgamma(a) * std::sqrt(kPi) / std::tgamma(a - 0.5);
    const KernelSpec g = KernelSpec::bessel_potential(a, 1);
    const OperatorCertificate r2 = riesz_certificate(InnerProductSpace::sobolev(a, 1), g, progression(20, 1.1 * thr));
    CHECK(r2.invertibility_threshold == doctest::Approx(thr));
    CHECK(r2.decision == Decision::bounded_invertible);
    CHECK(riesz_certificate(InnerProductSpace::sobolev(a, 1), g, progression(20, 0.9 * thr)).decision ==
          Decision::bounded_only);

    // K_{b-1/2}(R) with phi_b: threshold 2 B(b-1/2, 1/2)
    const double b = 1.0;
    const double thr_k = 2 * std::beta(b - 0.5, 0.5);
    const KernelSpec q = KernelSpec::imq(b, 1);
    CHECK(riesz_certificate(InnerProductSpace::kspace(b - 0.5, 1), q, progression(20, 1.05 * thr_k)).decision ==
          Decision::bounded_invertible);
    CHECK(riesz_certificate(InnerProductSpace::kspace(b - 0.5, 1), q, progression(20, 0.95 * thr_k)).decision ==
          Decision::bounded_only);

    // L2(R) with G_a: mapped Mn_{2a-1/2}, threshold 4 Gamma(2a) Gamma(1/2) / Gamma(2a-1/2)
    const double al = 0.6;
    const double thr_l2 = 4 * std::tgamma(2 * al) * std::sqrt(kPi) / std::tgamma(2 * al - 0.5);
    const OperatorCertificate r3 =
        riesz_certificate(InnerProductSpace::l2(1), KernelSpec::bessel_potential(al, 1), progression(15, 1.05 * thr_l2));
    CHECK(r3.invertibility_threshold == doctest::Approx(thr_l2));
    CHECK(r3.decision == Decision::bounded_invertible);
}
