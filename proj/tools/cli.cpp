#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "matsch/errors.hpp"
#include "matsch/hstransform.hpp"
#include "matsch/interpolate.hpp"
#include "matsch/kernels.hpp"
#include "matsch/schoenberg.hpp"
#include "matsch/specfun.hpp"

namespace matsch::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadParams = 2;
constexpr int kBadInput = 3;
constexpr int kSolverFailed = 4;

/// Input file problems (missing file, unparsable number).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string kernel = "matern-norm";
    double alpha = 0.5;
    double beta = 1.0;
    double lambda = 0.0;
    int n = 1;
    std::string grid;
    std::vector<double> z;
    std::vector<double> xi;
    bool fourier = false;
    std::string points;
    std::string samples;
    std::string at;
    std::string out;
    double tol = 0.0;
    double reg = 0.0;
    std::uint64_t seed = 1;
    int spectral_n = 0;
    int random_points = 0;
    double spacing = 1.0;
    std::string space = "none";
    std::string density = "binomial";
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// JSON number, or null when not finite.
ojson jnum(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

KernelSpec kernel_from(const Options& o) {
    KernelSpec k;
    if (o.kernel == "matern") k = KernelSpec::matern(o.alpha, o.n);
    else if (o.kernel == "matern-norm") k = KernelSpec::matern_norm(o.alpha, o.n);
    else if (o.kernel == "g") k = KernelSpec::bessel_potential(o.alpha, o.n);
    else if (o.kernel == "f") k = KernelSpec::f_kernel(o.alpha, o.n);
    else if (o.kernel == "f-lambda") k = KernelSpec::f_alpha_lambda(o.alpha, o.lambda, o.n);
    else if (o.kernel == "imq") k = KernelSpec::imq(o.beta, o.n);
    else throw DomainError("unknown kernel '" + o.kernel + "'");
    k.validate();
    return k;
}

QuadratureConfig quad_from(const Options& o) {
    QuadratureConfig cfg = QuadratureConfig::from_env();
    if (o.tol != 0.0) {
        if (!(o.tol > 0.0) || !(o.tol < 1.0)) throw DomainError("--tol must lie in (0, 1)");
        cfg.rel_tol = o.tol;
    }
    cfg.validate();
    return cfg;
}

EvalGrid grid_from(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw DomainError("--grid expects lo:hi:step, got '" + spec + "'");
        }
    }
    if (parts.size() != 3) throw DomainError("--grid expects lo:hi:step, got '" + spec + "'");
    return EvalGrid::range(parts[0], parts[1], parts[2]);
}

std::vector<double> abscissae(const Options& o, const std::vector<double>& explicit_values) {
    if (!o.grid.empty()) return grid_from(o.grid).points();
    if (!explicit_values.empty()) return explicit_values;
    throw DomainError("give --grid or explicit evaluation points");
}

/// Numeric CSV: '#' comments, optional non-numeric header row, comma or
/// whitespace separated.
std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        bool ok = true;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) ok = false;
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) {
            if (rows.empty()) continue;  // header row
            throw InputError(path + ":" + std::to_string(lineno) + ": not a numeric row");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Jittered lattice in R^n: spacing h, jitter 0.2 h per coordinate, so the
/// separation is at least 0.6 h.
std::vector<std::vector<double>> random_points(int count, int n, double h, std::uint64_t seed) {
    if (count < 2) throw DomainError("--random-points needs at least 2 points");
    if (!(h > 0.0)) throw DomainError("--spacing must be positive");
    std::mt19937_64 rng(seed);
    // Portable uniform in [-1, 1).
    const auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
    int side = 1;
    while (std::pow(side, n) < count) ++side;
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < count; ++i) {
        std::vector<double> p(static_cast<std::size_t>(n));
        int rest = i;
        for (int k = 0; k < n; ++k) {
            p[static_cast<std::size_t>(k)] = h * ((rest % side) + 0.2 * u());
            rest /= side;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

PointSet points_from(const Options& o) {
    if (o.random_points > 0) return build_point_set(random_points(o.random_points, o.n, o.spacing, o.seed));
    if (o.points.empty()) throw DomainError("give --points FILE or --random-points N");
    return build_point_set(read_csv(o.points));
}

/// Writes to --out when given, else to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + o.out + "'");
    f << text;
}

// ---------------------------------------------------------------------------

int cmd_eval(const Options& o, std::ostream& out) {
    const KernelSpec k = kernel_from(o);
    const QuadratureConfig cfg = quad_from(o);
    std::ostringstream s;
    if (o.fourier) {
        s << "xi,fourier_value\n";
        for (double xi : abscissae(o, o.xi)) s << num(xi) << ',' << num(radial_fourier(k, xi, cfg)) << '\n';
    } else {
        s << "z,value\n";
        for (double z : abscissae(o, o.z)) s << num(z) << ',' << num(kernel_eval(k, z, cfg)) << '\n';
    }
    emit(o, out, s.str());
    return kOk;
}

int cmd_transform(const Options& o, std::ostream& out) {
    const QuadratureConfig cfg = quad_from(o);
    RadialDensity nu;
    std::function<double(double)> closed;
    const double a = o.alpha, l = o.lambda, b = o.beta;
    if (o.density == "binomial") {
        nu = binomial_representing_density(a, l);
        closed = [=](double r) { return std::pow(1.0 + r * r, -a - l - 1.0); };
    } else if (o.density == "beta-type") {
        nu = beta_type_density(a, l);
        closed = [=](double r) { return matern_norm(a, r); };
    } else if (o.density == "bessel-moment") {
        nu = bessel_moment_density(a, b);
        closed = [=](double r) { return hyp2f1(0.5 * (b - a), 0.5 * (b + a), l + 1.0, -r * r); };
    } else {
        throw DomainError("unknown --density '" + o.density + "'");
    }
    const std::vector<double> r = abscissae(o, o.z);
    const TransformResult res = hs_forward(nu, l, EvalGrid(r), cfg);
    std::ostringstream s;
    s << "r,transform,closed_form,abs_diff\n";
    for (const auto& [ri, v] : res.values) {
        const double c = closed(ri);
        s << num(ri) << ',' << num(v) << ',' << num(c) << ',' << num(std::abs(v - c)) << '\n';
    }
    emit(o, out, s.str());
    return kOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
    const QuadratureConfig cfg = quad_from(o);
    const KernelSpec k = kernel_from(o);
    const PointSet X = points_from(o);
    OperatorCertificate c;
    if (o.space == "none") {
        c = certify(k, X, o.spectral_n, cfg);
    } else {
        InnerProductSpace sp;
        if (o.space == "l2") sp = InnerProductSpace::l2(o.n);
        else if (o.space == "sobolev") sp = InnerProductSpace::sobolev(o.alpha, o.n);
        else if (o.space == "kspace") sp = InnerProductSpace::kspace(o.beta - 0.5 * o.n, o.n);
        else throw DomainError("unknown --space '" + o.space + "'");
        c = riesz_certificate(sp, k, X, o.spectral_n, cfg);
    }
    ojson j;
    j["delta"] = jnum(c.delta_observed);
    j["d"] = c.d;
    j["n"] = c.n;
    j["norm_bound"] = jnum(c.norm_bound);
    j["threshold"] = jnum(c.invertibility_threshold);
    j["decision"] = to_string(c.decision);
    j["lambda_min"] = jnum(c.spectral.lambda_min);
    j["lambda_max"] = jnum(c.spectral.lambda_max);
    j["rule"] = c.rule;
    j["kernel"] = c.kernel;
    j["space"] = c.space;
    j["points"] = X.size();
    j["spectral_size"] = c.spectral.size;
    j["spectral_method"] = c.spectral.method;
    emit(o, out, j.dump(2) + "\n");
    return kOk;
}

int cmd_interpolate(const Options& o, std::ostream& out, std::ostream& err) {
    const KernelSpec k = kernel_from(o);
    const PointSet X = points_from(o);
    if (o.samples.empty()) throw DomainError("give --samples FILE");
    const auto srows = read_csv(o.samples);
    Eigen::VectorXd f(static_cast<Eigen::Index>(srows.size()));
    for (std::size_t i = 0; i < srows.size(); ++i) {
        if (srows[i].size() != 1) throw InputError(o.samples + ": expected one column");
        f(static_cast<Eigen::Index>(i)) = srows[i][0];
    }
    if (f.size() != X.size()) {
        err << "error: " << X.size() << " points but " << f.size() << " samples\n";
        return kSolverFailed;
    }
    const LagrangeBasis basis = solve_lagrange(assemble(k, X), o.reg);
    const Interpolant interp(basis, f);

    std::vector<std::vector<double>> at;
    if (o.at.empty()) {
        for (Eigen::Index i = 0; i < X.size(); ++i) {
            std::vector<double> p;
            for (int c = 0; c < X.ambient_dim(); ++c) p.push_back(X.coords()(i, c));
            at.push_back(std::move(p));
        }
    } else {
        at = read_csv(o.at);
    }
    std::ostringstream s;
    s << "# kernel=" << k.describe() << " solve_residual=" << num(basis.solve_residual) << " reg=" << num(o.reg)
      << " factorization=" << basis.factorization << '\n';
    for (int c = 0; c < X.ambient_dim(); ++c) s << 'x' << c << ',';
    s << "value\n";
    for (const auto& p : at) {
        if (static_cast<int>(p.size()) != X.ambient_dim())
            throw InputError("evaluation point has " + std::to_string(p.size()) + " coordinates");
        for (double v : p) s << num(v) << ',';
        s << num(interp(p)) << '\n';
    }
    emit(o, out, s.str());
    return kOk;
}

// ---------------------------------------------------------------------------
// Identity suite

struct Check {
    std::string name;
    ojson params;
    double residual;
    double tolerance;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<Check> identity_suite(const QuadratureConfig& cfg) {
    std::vector<Check> out;
    const auto add = [&](std::string name, ojson params, const std::function<double()>& residual, double tol) {
        double r;
        try {
            r = residual();
        } catch (const std::exception&) {
            r = std::numeric_limits<double>::infinity();
        }
        out.push_back({std::move(name), std::move(params), r, tol});
    };

    for (auto [a, l] : {std::pair{1.0, 0.0}, {0.5, 0.5}, {2.0, 1.5}})
        for (double r : {0.0, 1.0, 5.0})
            add("S7", {{"alpha", a}, {"lambda", l}, {"r", r}},
                [&, a = a, l = l, r] {
                    return rel(hs_forward_at(binomial_representing_density(a, l), l, r, cfg),
                               std::pow(1.0 + r * r, -a - l - 1.0));
                },
                1e-6);
    for (auto [a, l] : {std::pair{1.0, 0.0}, {0.5, 0.5}, {2.0, 1.5}})
        add("S8", {{"alpha", a}, {"lambda", l}, {"z", 1.0}},
            [&, a = a, l = l] {
                const RealFn phi = [a, l](double r) { return std::pow(1.0 + r * r, -a - l - 1.0); };
                const double got = hs_inverse(phi, l, EvalGrid({1.0}), cfg).values.front().second;
                return rel(got, binomial_representing_density(a, l)(1.0));
            },
            1e-5);
    for (int n : {1, 2, 3})
        add("S9", {{"alpha", 1.0}, {"n", n}, {"xi", 1.0}},
            [&, n] { return rel(radial_fourier(KernelSpec::bessel_potential(1.0, n), 1.0, cfg), 0.5); }, 1e-6);
    for (int n : {1, 2, 3})
        add("S10", {{"alpha", 0.75}, {"lambda", 0.75}, {"n", n}, {"xi", 2.0}},
            [&, n] {
                return rel(radial_fourier(KernelSpec::f_alpha_lambda(0.75, 0.75, n), 2.0, cfg), std::pow(5.0, -2.5));
            },
            1e-6);
    add("parseval", {{"alpha", 0.5}, {"lambda", -0.5}},
        [&] {
            const RealFn f = [](double t) { return matern(0.5, t); };
            const ParsevalSides s = parseval_check(f, f, -0.5, cfg, DecayHint::exponential);
            return std::max(std::abs(s.lhs - std::numbers::pi / 4), s.residual());
        },
        1e-8);
    add("moment-integral", {{"alpha", 0.7}, {"beta", 2.3}},
        [&] { return rel(moment_integral_quadrature(0.7, 2.3, cfg), moment_integral(0.7, 2.3)); }, 1e-8);
    add("l2-norm", {{"alpha", 1.0}, {"lambda", 0.0}},
        [&] { return rel(l2_norm_sq(1.0, 0.0, cfg), 2.0 / 3.0); }, 1e-8);
    for (int which : {1, 2})
        add("conv-R3", {{"display", which}, {"z", 1.0}},
            [&, which] { return std::abs(r3_convolution_fourier(which, 1.0, cfg) - r3_convolution_closed(which, 1.0)); },
            1e-3);
    add("convolution-semigroup", {{"alpha", 0.8}, {"beta", 1.1}, {"n", 2}, {"z", 0.7}},
        [&] { return convolution_check(0.8, 1.1, 2, 0.7, cfg) / kernel_eval(KernelSpec::bessel_potential(1.9, 2), 0.7); },
        1e-8);
    add("omega-averaging", {{"lambda", 1.5}, {"rho", 0.0}, {"r", 3.0}},
        [&] { return omega_self_consistency(1.5, 0.0, 3.0, cfg); }, 1e-8);
    return out;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const QuadratureConfig cfg = quad_from(o);
    const std::vector<Check> checks = identity_suite(cfg);
    ojson list = ojson::array();
    bool all = true;
    for (const auto& c : checks) {
        const bool pass = c.residual <= c.tolerance;
        all = all && pass;
        list.push_back({{"identity", c.name},
                        {"params", c.params},
                        {"residual", jnum(c.residual)},
                        {"tolerance", c.tolerance},
                        {"pass", pass}});
    }
    ojson j;
    j["identities"] = list;
    j["all_pass"] = all;
    emit(o, out, j.dump(2) + "\n");
    return all ? kOk : kVerifyFailed;
}

void add_kernel_options(CLI::App* c, Options& o) {
    c->add_option("--kernel", o.kernel, "matern | matern-norm | g | f | f-lambda | imq")
        ->check(CLI::IsMember({"matern", "matern-norm", "g", "f", "f-lambda", "imq"}));
    c->add_option("--alpha", o.alpha);
    c->add_option("--beta", o.beta);
    c->add_option("--lambda", o.lambda);
    c->add_option("--n", o.n, "ambient dimension");
}

void add_common(CLI::App* c, Options& o) {
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--tol", o.tol, "quadrature relative tolerance");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Matern kernels, Hankel-Schoenberg transforms and Schoenberg matrices"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "kernel or Fourier transform table");
    add_kernel_options(eval, o);
    add_common(eval, o);
    eval->add_option("--grid", o.grid, "lo:hi:step");
    eval->add_option("--z", o.z, "distance(s)");
    eval->add_option("--xi", o.xi, "frequency norm(s)");
    eval->add_flag("--fourier", o.fourier, "tabulate the n-dimensional Fourier transform");

    auto* transform = app.add_subcommand("transform", "Hankel-Schoenberg transform of a catalog density");
    transform->add_option("--density", o.density, "binomial | beta-type | bessel-moment");
    transform->add_option("--alpha", o.alpha);
    transform->add_option("--beta", o.beta);
    transform->add_option("--lambda", o.lambda);
    transform->add_option("--grid", o.grid, "lo:hi:step");
    transform->add_option("--r", o.z, "radius values");
    add_common(transform, o);

    auto* cert = app.add_subcommand("certify", "bounded / invertible certificate for S_X");
    add_kernel_options(cert, o);
    add_common(cert, o);
    cert->add_option("--points", o.points, "CSV, one point per row");
    cert->add_option("--random-points", o.random_points, "jittered lattice with this many points");
    cert->add_option("--spacing", o.spacing, "lattice spacing for --random-points");
    cert->add_option("--seed", o.seed);
    cert->add_option("--spectral-N", o.spectral_n, "truncation for the spectral evidence (0: all)");
    cert->add_option("--space", o.space, "none | l2 | sobolev | kspace (Riesz certificate)")
        ->check(CLI::IsMember({"none", "l2", "sobolev", "kspace"}));

    auto* interp = app.add_subcommand("interpolate", "Lagrange-type interpolation");
    add_kernel_options(interp, o);
    add_common(interp, o);
    interp->add_option("--points", o.points, "nodes, CSV");
    interp->add_option("--random-points", o.random_points);
    interp->add_option("--spacing", o.spacing);
    interp->add_option("--seed", o.seed);
    interp->add_option("--samples", o.samples, "single-column CSV aligned with the nodes");
    interp->add_option("--at", o.at, "evaluation points CSV (default: the nodes)");
    interp->add_option("--reg", o.reg, "diagonal shift");

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    add_common(verify, o);

    std::vector<const char*> argv{"matsch"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadParams;
    }

    try {
        if (*eval) return cmd_eval(o, out);
        if (*transform) return cmd_transform(o, out);
        if (*cert) return cmd_certify(o, out);
        if (*interp) return cmd_interpolate(o, out, err);
        if (*verify) return cmd_verify(o, out);
    } catch (const DuplicatePointError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << " (try `certify`)\n";
        return kSolverFailed;
    } catch (const AccuracyError& e) {
        err << "error: " << e.what() << '\n';
        return kSolverFailed;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kSolverFailed;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kBadParams;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kBadParams;
    }
    return kBadParams;
}

}  // namespace matsch::cli
