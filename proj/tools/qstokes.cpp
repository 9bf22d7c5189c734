// Command-line surface: Newton data, moduli dimension, normal forms,
// direction-wise summation, Stokes cocycles, and named identity checks.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "qstokes/io.hpp"
#include "qstokes/stokes.hpp"

using namespace qstokes;
using nlohmann::json;

namespace {

struct GlobalOpts {
    double q_re = 2.0, q_im = 0.0;
    bool q_set = false;
    int order = kDefaultOrder;
    int window = kDefaultWindow;
    double tolerance = 1e-8;
    std::string precision;
    std::string output;
};

void write_output(const GlobalOpts& g, const json& j) {
    const std::string text = dump_deterministic(j);
    if (g.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(g.output);
        if (!out) throw SchemaError("cannot open output file '" + g.output + "'");
        out << text;
    }
}

void check_precision(const GlobalOpts& g) {
    std::string want = g.precision;
    if (want.empty()) {
        if (const char* env = std::getenv("QSTOKES_PRECISION")) want = env;
    }
    if (want.empty()) return;
    const bool long_double_build =
#ifdef QSTOKES_LONG_DOUBLE
        true;
#else
        false;
#endif
    const std::string built = long_double_build ? "long-double" : "double";
    if (want != built)
        throw SchemaError("scalar precision is fixed at build time (built: " + built +
                          ", requested: " + want + "); rebuild with QSTOKES_LONG_DOUBLE=" +
                          (want == "long-double" ? "ON" : "OFF"));
}

json rational_to_json(const Rational& r) {
    return json{{"num", r.num}, {"den", r.den}};
}

BlockModule load_module(const std::string& path, const GlobalOpts& g) {
    BlockModule m = parse_module_file(path);
    if (g.q_set) m.q = Complex(static_cast<Real>(g.q_re), static_cast<Real>(g.q_im));
    return m;
}

json newton_of_module(const BlockModule& m) {
    json j;
    json slopes = json::array();
    long long irr_num = 0;
    for (int b = 0; b < m.block_count(); ++b) {
        const auto& blk = m.blocks[static_cast<size_t>(b)];
        slopes.push_back(json{{"slope", blk.mu}, {"multiplicity", blk.rank()}});
        if (blk.mu > 0) irr_num += static_cast<long long>(blk.mu) * blk.rank();
    }
    j["slopes"] = slopes;
    j["irregularity"] = rational_to_json(Rational(irr_num, 1));
    j["index_formal"] = 0;
    j["index_convergent"] = -irr_num;
    return j;
}

json newton_of_operator(const QDiffOperator& p) {
    json j;
    const auto np = newton_polygon(p);
    json slopes = json::array();
    for (const auto& [mu, r] : np.slopes)
        slopes.push_back(json{{"slope", rational_to_json(mu)}, {"multiplicity", r}});
    j["slopes"] = slopes;
    j["irregularity"] = rational_to_json(irregularity(np));
    j["index_formal"] = index(p, IndexSetting::formal);
    try {
        j["index_convergent"] = index(p, IndexSetting::convergent);
    } catch (const NonIntegralSlopes&) {
        j["index_convergent"] = nullptr;
    }
    return j;
}

Complex parse_point(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return Complex(static_cast<Real>(std::stod(s)), 0);
        return Complex(static_cast<Real>(std::stod(s.substr(0, comma))),
                       static_cast<Real>(std::stod(s.substr(comma + 1))));
    } catch (const std::exception&) {
        throw SchemaError(std::string(what) + ": expected re[,im]");
    }
}

std::vector<Complex> sample_grid(const BlockModule& m, const std::vector<Complex>& avoid,
                                 int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.25, 0.85);
    std::uniform_real_distribution<double> arg(0.0, 6.283185307179586);
    std::vector<Complex> out;
    for (int guard = 0; guard < 50 * count && static_cast<int>(out.size()) < count; ++guard) {
        const Real r = static_cast<Real>(mag(rng));
        const Real t = static_cast<Real>(arg(rng));
        const int k = guard % 4;
        Complex z = Complex(r * std::cos(t), r * std::sin(t)) * cpow_int(m.q, -k);
        bool ok = true;
        for (const Complex& pole : avoid)
            if (dq_distance(z, pole, m.q) < Real(0.05)) ok = false;
        if (ok) out.push_back(z);
    }
    return out;
}

// quadratic least-squares coefficient of y over x = 1..n
Real quadratic_coefficient(const std::vector<Real>& y) {
    const int n = static_cast<int>(y.size());
    CMat A(3, 3), b(3, 1);
    Real s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (int i = 0; i < n; ++i) {
        const Real x = i + 1;
        s0 += 1; s1 += x; s2 += x * x; s3 += x * x * x; s4 += x * x * x * x;
        t0 += y[static_cast<size_t>(i)];
        t1 += x * y[static_cast<size_t>(i)];
        t2 += x * x * y[static_cast<size_t>(i)];
    }
    A(0, 0) = s0; A(0, 1) = s1; A(0, 2) = s2;
    A(1, 0) = s1; A(1, 1) = s2; A(1, 2) = s3;
    A(2, 0) = s2; A(2, 1) = s3; A(2, 2) = s4;
    b(0, 0) = t0; b(1, 0) = t1; b(2, 0) = t2;
    return solve(A, b)(2, 0).real();
}

// ---------------------------------------------------------------------------
// named verification fixtures
// ---------------------------------------------------------------------------

struct VerifyResult {
    bool pass = false;
    Real residual = 0;
    std::string detail;
};


VerifyResult verify_triple_product(const Complex& q, Real tol) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Real worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const Complex z(1.5 + 0.45 * d(rng), 0.45 * d(rng));
        const Complex series = theta_q(z, q, ThetaMode::series);
        const Complex product = theta_q(z, q, ThetaMode::product);
        worst = std::max(worst, std::abs(series - product) / std::abs(product));
        const Complex lhs = theta_q(q * z, q);
        worst = std::max(worst, std::abs(lhs - z * theta_q(z, q)) / std::abs(lhs));
    }
    for (int k = -2; k <= 2; ++k) {
        const Complex z = -cpow_int(q, k);
        if (std::abs(theta_q(z, q)) > 1e-9 * growth_majorant(z, q)) worst = std::max(worst, Real(1));
    }
    return {worst <= tol, worst, "series vs product and functional equations, thq and theta forms"};
}

VerifyResult verify_rank2_elliptic(const Complex& q, Real tol) {
    const Complex lam(1.3, 0), mu(0, 1.7);
    const LaurentSeries u = LaurentSeries::monomial(Complex(-1), 0, 0, 40);
    auto sl = q_euler_sum(q, u, lam, q, 56);
    auto sm = q_euler_sum(q, u, mu, q, 56);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Real worst = 0;
    int used = 0;
    for (int k = 0; used < 20 && k < 200; ++k) {
        Complex z = Complex(0.4 + 0.2 * d(rng), 0.2 * d(rng)) * cpow_int(q, -(k % 4));
        bool ok = std::abs(z) < 0.9;
        for (const Complex& pole : {-lam, -mu, Complex(-1, 0)})
            if (dq_distance(z, pole, q) < Real(0.05)) ok = false;
        if (!ok) continue;
        ++used;
        const Complex lhs = sl.eval(z) - sm.eval(z);
        const Complex rhs = rank2_elliptic_formula(lam, mu, z, q);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return {used == 20 && worst <= tol, worst, "difference of sums vs elliptic closed form, thq variant"};
}

VerifyResult verify_borel_square(const Complex& q, Real tol) {
    auto rep = borel_square_obstructions(q, 6);
    return {rep.max_rel_err <= std::max(tol, Real(1e-6)), rep.max_rel_err,
            "squared-series Borel values at q^m"};
}

VerifyResult verify_residue_alpha0(const Complex& q, Real tol) {
    const Complex lam(1.4, 0);
    const LaurentSeries u = LaurentSeries::monomial(Complex(-1), 0, 0, 40);
    auto s = q_euler_sum(q, u, lam, q, 56);
    auto probe = [&](Real h) {
        const Complex z = -lam * (Real(1) + h);
        return (z + lam) * s.eval(z);
    };
    const Complex got = (Real(8) * probe(2.5e-5) - Real(6) * probe(5e-5) + probe(1e-4)) / Real(3);
    const Complex want = lam / theta_q(-Complex(1) / lam, q);
    const Real rel = std::abs(got - want) / std::abs(want);
    return {rel <= tol, rel, "residue at z = -lambda vs lambda/thq(-1/lambda), thq variant"};
}

VerifyResult verify_sym_square(const Complex& q, Real tol) {
    BlockModule m;
    CMat a(1, 1), b(1, 1);
    a(0, 0) = Complex(1);
    b(0, 0) = Complex(1);
    m.q = q;
    m.blocks.push_back({0, a});
    m.blocks.push_back({1, b});
    SMat u(1, 1);
    u(0, 0) = LaurentSeries::monomial(Complex(-1), 0, 0, 40);
    m.U[{0, 1}] = u;
    auto s2 = symmetric_square(m);
    const Direction c(Complex(1.3, 0), q), dd(Complex(1.7, 0.4), q);
    auto f2 = stokes_cocycle(m, c, dd, 48);
    auto f3 = stokes_cocycle(s2, c, dd, 48);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Real worst = 0;
    int used = 0;
    for (int k = 0; used < 10 && k < 100; ++k) {
        Complex z = Complex(0.4 + 0.15 * d(rng), 0.15 * d(rng)) * cpow_int(q, -(k % 3));
        if (dq_distance(z, -c.c, q) < 0.05 || dq_distance(z, -dd.c, q) < 0.05) continue;
        if (std::abs(z) > 0.85) continue;
        ++used;
        const CMat want = symmetric_square_gauge(f2.eval(z)(0, 1));
        const CMat got = f3.eval(z);
        worst = std::max(worst, max_abs(got - want) / std::max(Real(1), max_abs(want)));
    }
    return {used == 10 && worst <= std::max(tol, Real(1e-9)), worst,
            "cocycle functoriality under the symmetric square"};
}

VerifyResult verify_mock_theta(const Complex& q, Real tol) {
    auto rep = fixtures::mock_theta_check(Complex(1.25, 0.2), q, 30);
    const Real worst = std::max({rep.equation_residual, rep.split_residual,
                                 std::abs(rep.invariant_g - Complex(-1)),
                                 std::abs(rep.invariant_h - Complex(1))});
    return {worst <= std::max(tol, Real(1e-9)), worst,
            "double-pole sum, even/odd split, class invariants"};
}

VerifyResult verify_mordell(const Complex& q, Real tol) {
    auto rep = fixtures::mordell_check(Complex(1.45, 0.1), q, 48);
    return {rep.equation_residual <= std::max(tol, Real(1e-9)), rep.equation_residual,
            "generating-series equation residual"};
}

VerifyResult verify_homotopy(const Complex& q, Real tol) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto rnd_series = [&](int lo, int hi) {
        LaurentSeries f = LaurentSeries::zero(lo, hi);
        for (int n = lo; n <= hi; ++n)
            f.at(n) = Complex(static_cast<Real>(d(rng)), static_cast<Real>(d(rng)));
        return f;
    };
    Real worst = 0;
    for (int rep = 0; rep < 3; ++rep) {
        QDiffOperator p;
        p.q = q;
        for (int i = 0; i <= 3; ++i) {
            auto c = rnd_series(0, 24);
            if (i == 0 || i == 3) c.at(0) += Complex(2);
            p.coeffs.emplace(i, std::move(c));
        }
        std::vector<LaurentSeries> probes;
        for (int t = 0; t < 4; ++t) probes.push_back(rnd_series(0, 24));
        worst = std::max(worst, homotopy_check(p, probes).max_residual());
    }
    return {worst <= std::max(tol, Real(1e-10)), worst, "scalar/companion complex homotopy"};
}

VerifyResult verify_confluent(const Complex& q, Real tol) {
    auto rep = fixtures::confluent_factorization_check(Complex(0.4, 0.1), Complex(0.7, -0.2), q, 24);
    auto rep0 = fixtures::confluent_factorization_check(Complex(0), Complex(0), q, 24);
    const Real worst = std::max({rep.factor_identity_residual, rep.product_identity_residual,
                                 rep0.closed_form_residual});
    // reported only, never gated: the conjectured closed form of the
    // exactly solvable Stokes difference
    const Real conj = fixtures::conjectured_confluent_stokes_residual(
        q, Complex(1.3, 0), Complex(0, 1.7), 40);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", static_cast<double>(conj));
    return {worst <= std::max(tol, Real(1e-10)), worst,
            "operator factorisation and the exactly solvable case; conjectured "
            "Stokes closed form deviates by " + std::string(buf) + " (reported only)"};
}

int run_verify(const std::string& name, bool all, const GlobalOpts& g) {
    const Complex q(static_cast<Real>(g.q_re), static_cast<Real>(g.q_im));
    using Fn = VerifyResult (*)(const Complex&, Real);
    // output ordering fixed by fixture name
    const std::vector<std::pair<std::string, Fn>> table = {
        {"borel-square", verify_borel_square},
        {"confluent", verify_confluent},
        {"homotopy", verify_homotopy},
        {"mock-theta", verify_mock_theta},
        {"mordell", verify_mordell},
        {"rank2-elliptic", verify_rank2_elliptic},
        {"residue-alpha0", verify_residue_alpha0},
        {"sym-square", verify_sym_square},
        {"triple-product", verify_triple_product},
    };
    bool any = false, failed = false;
    for (const auto& [key, fn] : table) {
        if (!all && key != name) continue;
        any = true;
        const VerifyResult r = fn(q, static_cast<Real>(g.tolerance));
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << key
                  << "  max-rel-residual=" << static_cast<double>(r.residual) << "  ("
                  << r.detail << ")\n";
        if (!r.pass) failed = true;
    }
    if (!any) {
        std::cerr << "unknown fixture '" << name << "'; known:";
        for (const auto& [key, fn] : table) std::cerr << " " << key;
        std::cerr << "\n";
        return 1;
    }
    return failed ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations for linear analytic q-difference modules with integral slopes"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    std::string qspec;
    app.add_option("--q", qspec, "base |q|>1 as re[,im] (default 2)");
    app.add_option("--order", g.order, "truncation order");
    app.add_option("--window", g.window, "two-sided Laurent window half-width");
    app.add_option("--tolerance", g.tolerance, "numeric tolerance for verdicts");
    app.add_option("--precision", g.precision, "scalar precision: double | long-double");
    app.add_option("--output", g.output, "write JSON output to this file");

    std::string file, direction, dir_c, dir_d, fixture, csv_path;
    double gevrey = 0.0;
    bool verify_all = false;

    auto* cmd_newton = app.add_subcommand("newton", "Newton polygon, irregularity, indices");
    cmd_newton->add_option("file", file)->required();

    auto* cmd_dim = app.add_subcommand("dim", "moduli dimension and per-level breakdown");
    cmd_dim->add_option("file", file)->required();

    auto* cmd_norm = app.add_subcommand("normalize", "normal form and conjugating gauge");
    cmd_norm->add_option("file", file)->required();
    cmd_norm->add_option("--gevrey", gevrey, "level cutoff order s (0 = full normal form)");

    auto* cmd_sum = app.add_subcommand("sum", "direction-wise summation of the gauge");
    cmd_sum->add_option("file", file)->required();
    cmd_sum->add_option("--direction", direction, "direction re[,im]")->required();
    cmd_sum->add_option("--csv", csv_path, "emit (m, log|entry|) decay data to this CSV file");

    auto* cmd_stokes = app.add_subcommand("stokes", "Stokes cocycle between two directions");
    cmd_stokes->add_option("file", file)->required();
    cmd_stokes->add_option("--c", dir_c, "first direction re[,im]")->required();
    cmd_stokes->add_option("--d", dir_d, "second direction re[,im]")->required();

    auto* cmd_verify = app.add_subcommand("verify", "run a named identity check");
    cmd_verify->add_option("fixture", fixture, "fixture name");
    cmd_verify->add_flag("--all", verify_all, "run every fixture");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        check_precision(g);
        if (!qspec.empty()) {
            const Complex qq = parse_point(qspec, "--q");
            g.q_re = static_cast<double>(qq.real());
            g.q_im = static_cast<double>(qq.imag());
            g.q_set = true;
        }

        if (cmd_newton->parsed()) {
            std::ifstream in(file);
            if (!in) throw SchemaError("cannot open '" + file + "'");
            json j = json::parse(in, nullptr, true, true);
            json out = is_operator_description(j) ? newton_of_operator(parse_operator(j))
                                                  : newton_of_module(parse_module(j));
            write_output(g, out);
            return 0;
        }

        if (cmd_dim->parsed()) {
            BlockModule m = load_module(file, g);
            json out;
            out["dimension"] = moduli_dimension(m);
            json levels = json::object();
            for (int i = 0; i < m.block_count(); ++i)
                for (int j = i + 1; j < m.block_count(); ++j) {
                    const int lvl = m.blocks[static_cast<size_t>(j)].mu -
                                    m.blocks[static_cast<size_t>(i)].mu;
                    const long long d = static_cast<long long>(
                                            m.blocks[static_cast<size_t>(i)].rank()) *
                                        m.blocks[static_cast<size_t>(j)].rank() * lvl;
                    const std::string key = std::to_string(lvl);
                    levels[key] = levels.value(key, 0LL) + d;
                }
            out["per_level"] = levels;
            write_output(g, out);
            return 0;
        }

        if (cmd_norm->parsed()) {
            BlockModule m = load_module(file, g);
            NormalFormResult nf = gevrey > 0.0
                                      ? gevrey_cutoff_form(m, static_cast<Real>(gevrey), g.order)
                                      : bg_normal_form(m, g.order);
            json out;
            out["normal_form"] = emit_module(nf.V);
            out["gauge_residual"] =
                static_cast<double>(gauge_conjugation_residual(nf.F, m, nf.V, g.order));
            out["obstruction_tail_bound"] = static_cast<double>(nf.tail_bound);
            out["free_coefficients"] = free_coefficient_count(nf.V);
            write_output(g, out);
            return 0;
        }

        if (cmd_sum->parsed()) {
            BlockModule m = load_module(file, g);
            const Direction c(parse_point(direction, "--direction"), m.q);
            if (!is_generic(c, m)) {
                std::cerr << "ForbiddenDirection: resonant direction; forbidden classes of E_q:\n";
                for (const auto& d : resonance_set(m))
                    std::cerr << "  (" << static_cast<double>(d.c.real()) << ", "
                              << static_cast<double>(d.c.imag()) << ")\n";
                return 1;
            }
            auto f = algebraic_sum(m, c, g.window);
            json out;
            out["direction"] = complex_to_json(c.c);
            json poles = json::array();
            for (const auto& d : resonance_set(m)) poles.push_back(complex_to_json(d.c));
            out["forbidden_classes"] = poles;
            json samples = json::array();
            Real worst = 0;
            for (const Complex& z : sample_grid(m, {-c.c}, 24, 99)) {
                const Real r = summation_residual(f, m, z);
                worst = std::max(worst, r);
                json s;
                s["z"] = complex_to_json(z);
                s["conjugation_residual"] = static_cast<double>(r);
                json rows = json::array();
                const CMat v = f.eval(z);
                for (int i = 0; i < v.rows(); ++i) {
                    json row = json::array();
                    for (int jj = 0; jj < v.cols(); ++jj) row.push_back(complex_to_json(v(i, jj)));
                    rows.push_back(std::move(row));
                }
                s["F"] = std::move(rows);
                samples.push_back(std::move(s));
            }
            out["samples"] = samples;
            out["max_conjugation_residual"] = static_cast<double>(worst);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) throw SchemaError("cannot open CSV file '" + csv_path + "'");
                csv << "m,log_abs_entry\n";
                const Complex z0(0.52, 0.31);
                for (int mm = 1; mm <= 12; ++mm) {
                    CMat v;
                    try {
                        v = f.eval(z0 * cpow_int(m.q, -mm));
                    } catch (const PointTooFar&) {
                        break; // window no longer certifies this depth
                    }
                    Real offmax = 0;
                    for (int i = 0; i < v.rows(); ++i)
                        for (int jj = i + 1; jj < v.cols(); ++jj)
                            offmax = std::max(offmax, std::abs(v(i, jj)));
                    csv << mm << "," << static_cast<double>(std::log(std::max(offmax, Real(1e-300))))
                        << "\n";
                }
            }
            write_output(g, out);
            return worst <= static_cast<Real>(g.tolerance) ? 0 : 2;
        }

        if (cmd_stokes->parsed()) {
            BlockModule m = load_module(file, g);
            const Direction c(parse_point(dir_c, "--c"), m.q);
            const Direction d(parse_point(dir_d, "--d"), m.q);
            auto fcd = stokes_cocycle(m, c, d, g.window);
            json out;
            out["c"] = complex_to_json(c.c);
            out["d"] = complex_to_json(d.c);
            json samples = json::array();
            Real worst = 0, offmax = 0;
            for (const Complex& z : sample_grid(m, {-c.c, -d.c}, 16, 7)) {
                const Real r = fcd.automorphism_residual(m, z);
                worst = std::max(worst, r);
                const CMat v = fcd.eval(z);
                for (int i = 0; i < v.rows(); ++i)
                    for (int jj = i + 1; jj < v.cols(); ++jj)
                        offmax = std::max(offmax, std::abs(v(i, jj)));
                json s;
                s["z"] = complex_to_json(z);
                s["automorphism_residual"] = static_cast<double>(r);
                samples.push_back(std::move(s));
            }
            out["samples"] = samples;
            out["max_automorphism_residual"] = static_cast<double>(worst);
            // flatness fit per level on a fixed ray
            json flat = json::object();
            const Complex z0(0.52, 0.31);
            for (int i = 0; i < m.block_count(); ++i)
                for (int j = i + 1; j < m.block_count(); ++j) {
                    const int lvl = m.blocks[static_cast<size_t>(j)].mu -
                                    m.blocks[static_cast<size_t>(i)].mu;
                    if (flat.contains(std::to_string(lvl))) continue;
                    // descend the ray only as deep as the window certifies and
                    // while the entries keep decaying (past that, evaluation
                    // noise dominates the flat values)
                    std::vector<Real> y;
                    bool usable = true;
                    Real prev_step = 0;
                    for (int mm = 1; mm <= 9; ++mm) {
                        CMat v;
                        try {
                            v = fcd.eval(z0 * cpow_int(m.q, -mm));
                        } catch (const PointTooFar&) {
                            break;
                        }
                        Real entry = 0;
                        const int ro = m.block_offset(i), co = m.block_offset(j);
                        for (int ii = 0; ii < m.blocks[static_cast<size_t>(i)].rank(); ++ii)
                            for (int jj = 0; jj < m.blocks[static_cast<size_t>(j)].rank(); ++jj)
                                entry = std::max(entry, std::abs(v(ro + ii, co + jj)));
                        if (entry <= 0) usable = false;
                        const Real logent = std::log(std::max(entry, Real(1e-300)));
                        // quadratic flatness steepens each decay step by
                        // lvl*log|q|; a step that fails to steepen by a good
                        // fraction of that marks the noise floor
                        const Real steepen = Real(0.4) * lvl * std::log(std::abs(m.q));
                        if (!y.empty()) {
                            const Real step = logent - y.back();
                            if (step > prev_step - steepen) break;
                            prev_step = step;
                        } else {
                            prev_step = Real(1e30);
                        }
                        y.push_back(logent);
                    }
                    if (!usable || y.size() < 4) {
                        flat[std::to_string(lvl)] =
                            json{{"fit", nullptr},
                                 {"note", "window too narrow for a certified decay fit; "
                                          "increase --window"}};
                        continue;
                    }
                    const Real c2 = quadratic_coefficient(y);
                    const Real want = -lvl * std::log(std::abs(m.q)) / 2;
                    flat[std::to_string(lvl)] =
                        json{{"fit", static_cast<double>(c2)},
                             {"expected", static_cast<double>(want)},
                             {"within_15_percent", std::abs(c2 - want) <= 0.15 * std::abs(want)}};
                }
            out["flatness"] = flat;
            const bool trivial = offmax <= 10 * static_cast<Real>(g.tolerance);
            out["max_offdiagonal"] = static_cast<double>(offmax);
            out["trivial"] = trivial;
            out["verdict"] = trivial ? "analytically equivalent to the graded part"
                                     : "nontrivial analytic class";
            write_output(g, out);
            return worst <= static_cast<Real>(g.tolerance) ? 0 : 2;
        }

        if (cmd_verify->parsed()) {
            if (!verify_all && fixture.empty()) {
                std::cerr << "verify: give a fixture name or --all\n";
                return 1;
            }
            return run_verify(fixture, verify_all, g);
        }
    } catch (const SchemaError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
