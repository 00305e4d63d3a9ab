// mincuba: rule generation, verification, interpolation and Lebesgue sweeps.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <mincuba/mincuba.hpp>

namespace fs = std::filesystem;
using namespace mincuba;

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    double alpha = -0.5;
    double beta = -0.5;
    double gamma = -0.5;
    int n = 0;
    std::vector<int> ns;
    std::string domain = "square";
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 12345;
    int grid = 0;
    int threads = 1;
    std::string family = "auto";
    std::string function = "exp";
    std::size_t mc = 0;
};

JacobiParams params_of(const Flags& f) {
    const JacobiParams p{f.alpha, f.beta};
    try {
        p.validate();
    } catch (const parameter_error& e) {
        throw usage_error(e.what());
    }
    return p;
}

void check_gamma(const Flags& f) {
    if (f.gamma != -0.5 && f.gamma != 0.5) throw usage_error("--gamma must be -0.5 or +0.5");
}

void check_n(int n, double gamma) {
    const int nmin = gamma < 0 ? 1 : 2;
    if (n < nmin) throw usage_error("--n must be at least " + std::to_string(nmin) + " for this gamma");
}

void check_threads(const Flags& f) {
    if (f.threads < 1) throw usage_error("--threads must be positive");
}

DomainTag domain_of_flag(const std::string& s) {
    try {
        return domain_from_string(s);
    } catch (const input_error& e) {
        throw usage_error(e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::string g(double x, const char* fmt = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

std::string render(const CubatureRule& r, const std::string& format) {
    if (format == "json") return export_json(r);
    if (format == "csv") return export_csv(r);
    return export_plotdata(r);
}

int cmd_rule(const Flags& f) {
    const JacobiParams p = params_of(f);
    check_gamma(f);
    check_n(f.n, f.gamma);
    const DomainTag d = domain_of_flag(f.domain);
    const CubatureRule r = make_rule(d, p, f.gamma, f.n);
    NeumaierSum ws;
    for (double w : r.weights) ws.add(w);
    const std::string summary = "nodes=" + std::to_string(r.size()) + " degree=" + std::to_string(r.degree) +
                                " weight_sum_residual=" + g(std::abs(ws.value() - 1.0), "%.3g") + "\n";
    const std::string text = render(r, f.format);
    if (f.out.empty()) {
        std::cout << text;
        std::cerr << summary;
    } else {
        write_text(f.out, text);
        std::cout << summary;
    }
    return 0;
}

int cmd_verify(const Flags& f) {
    const JacobiParams p = params_of(f);
    check_gamma(f);
    check_n(f.n, f.gamma);
    const DomainTag d = domain_of_flag(f.domain);
    const bool onsquare = d == DomainTag::Square || d == DomainTag::Rhombus;
    TestFamily fam = onsquare ? TestFamily::SymmetryReduced : TestFamily::Monomials;
    if (f.family == "monomials")
        fam = TestFamily::Monomials;
    else if (f.family == "symmetric") {
        if (!onsquare) throw usage_error("--family symmetric needs --domain square or rhombus");
        fam = TestFamily::SymmetryReduced;
    }
    const CubatureRule r = make_rule(d, p, f.gamma, f.n);
    const auto oracle = ReferenceIntegrator::for_degree(r.weight, r.degree + 1);
    const ExactnessReport rep = verify_exactness(r, oracle, fam);

    std::cout << "rule domain=" << to_string(d) << " n=" << r.n << " nodes=" << r.size() << " degree=" << r.degree
              << "\n";
    std::map<int, std::pair<double, bool>> strata;
    std::map<int, int> count;
    for (const auto& e : rep.entries) {
        auto [it, fresh] = strata.try_emplace(e.degree, 0.0, true);
        it->second.first = std::max(it->second.first, e.error);
        it->second.second = it->second.second && e.pass;
        ++count[e.degree];
    }
    for (const auto& [deg, s] : strata)
        std::cout << "degree " << deg << ": polys=" << count[deg] << " max_err=" << g(s.first, "%.2e") << " "
                  << (s.second ? "PASS" : "FAIL") << "\n";
    if (rep.probe_certified) {
        std::cout << "degree " << r.degree + 1 << " probe: polys=" << rep.probes.size()
                  << " max_err=" << g(rep.max_probe_error, "%.2e") << " expected-fail "
                  << (rep.max_probe_error > kProbeGap ? "OK" : "NOT DETECTED") << "\n";
    } else {
        std::cout << "degree " << r.degree + 1 << " probe: skipped (oracle not certified)\n";
    }
    if (f.mc > 0) {
        auto fn = [](double a, double b) { return std::cos(a + 0.5 * b); };
        const MonteCarloEstimate mc = montecarlo_check(fn, r.weight, f.mc, f.seed);
        const double ref = oracle.integrate(fn);
        std::cout << "montecarlo cos(a+b/2): mean=" << g(mc.mean, "%.6f") << " stderr=" << g(mc.std_error, "%.2e")
                  << " oracle=" << g(ref, "%.6f") << " z=" << g((mc.mean - ref) / mc.std_error, "%.2f") << "\n";
    }
    if (rep.pass) {
        std::cout << "max residual < 1e-9 (" << g(rep.max_error, "%.2e") << ") PASS\n";
        return 0;
    }
    std::cout << "max residual " << g(rep.max_error, "%.2e") << " FAIL\n";
    return kExitNumeric;
}

using TestFn = std::function<double(double, double)>;

TestFn test_function(const std::string& name) {
    if (name == "const") return [](double, double) { return 1.0; };
    if (name == "exp") return [](double a, double b) { return std::exp(a + b); };
    if (name == "runge") return [](double a, double b) { return 1.0 / (1.0 + a * a + b * b); };
    if (name == "abs32") return [](double a, double) { return std::pow(std::abs(a), 1.5); };
    // mono:A:B with A + B <= 6
    int a = -1, b = -1;
    if (std::sscanf(name.c_str(), "mono:%d:%d", &a, &b) == 2 && a >= 0 && b >= 0 && a + b <= 6)
        return [a, b](double x, double y) { return ipow(x, a) * ipow(y, b); };
    throw usage_error("unknown --function '" + name + "' (const, exp, runge, abs32, mono:A:B with A+B<=6)");
}

std::vector<int> n_list(const Flags& f) {
    std::vector<int> ns = f.ns;
    if (ns.empty()) throw usage_error("--n is required");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw usage_error("--n list must be strictly ascending");
    return ns;
}

int cmd_interp(const Flags& f) {
    const JacobiParams p = params_of(f);
    check_gamma(f);
    const DomainTag d = domain_of_flag(f.domain);
    if (d == DomainTag::Rhombus) throw usage_error("interp supports --domain omega, star or square");
    if (d == DomainTag::Square && f.gamma != -0.5) throw usage_error("the square interpolant needs --gamma -0.5");
    const TestFn fn = test_function(f.function);
    const std::vector<int> ns = n_list(f);
    for (int n : ns) check_n(n, f.gamma);
    const int grid = f.grid == 0 ? 64 : f.grid;
    if (grid < 2) throw usage_error("--grid must be at least 2");

    std::string table = "n,nodes,max_error,mean_error\n";
    for (int n : ns) {
        const CubatureRule r = make_rule(d, p, f.gamma, n);
        const auto s = sample(r, fn);
        const Interpolant I = d == DomainTag::Square ? interpolate_square(r, s) : interpolate_omega(r, s);
        const ErrorReport e = error_report(I, fn, grid);
        table += std::to_string(n) + "," + std::to_string(r.size()) + "," + g(e.max_abs, "%.6e") + "," +
                 g(e.mean_abs, "%.6e") + "\n";
    }
    std::cout << table;
    if (!f.out.empty()) write_text(f.out, table);
    return 0;
}

int cmd_lebesgue(const Flags& f) {
    const JacobiParams p = params_of(f);
    check_gamma(f);
    check_threads(f);
    const DomainTag d = domain_of_flag(f.domain);
    if (d != DomainTag::Square && d != DomainTag::Omega) throw usage_error("lebesgue supports --domain square or omega");
    if (d == DomainTag::Square && f.gamma != -0.5) throw usage_error("the square interpolant needs --gamma -0.5");
    const std::vector<int> ns = n_list(f);
    for (int n : ns) {
        check_n(n, f.gamma);
        if (f.grid != 0 && f.grid < 8 * n) throw usage_error("--grid must be at least 8n per axis");
    }

    const bool omega = d == DomainTag::Omega;
    std::string table = omega ? "n,lambda,lambda_over_log2n_sq,log_slope,bound_1d\n"
                              : "n,lambda,lambda_over_log2n_sq,log_slope\n";
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const int n = ns[i];
        const LebesgueEstimate e =
            omega ? lebesgue_omega(p, f.gamma, n, f.grid, f.threads) : lebesgue_square(p, n, f.grid, f.threads);
        const double L2 = std::log(2.0 * n) * std::log(2.0 * n);
        std::string slope = "n/a";
        if (i > 0) slope = g((std::log(e.value) - ly.back()) / (std::log(double(n)) - lx.back()), "%.4f");
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(e.value));
        table += std::to_string(n) + "," + g(e.value, "%.6g") + "," + g(e.value / L2, "%.6g") + "," + slope;
        if (omega) table += "," + g(e.bound_1d, "%.6g");
        table += "\n";
    }
    std::cout << table;
    if (ns.size() > 1) {
        // least-squares slope of log lambda against log n
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= ly.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        std::cout << "fit_slope=" << g(sxy / sxx, "%.4f") << "\n";
    } else {
        std::cout << "fit_slope=n/a\n";
    }
    if (!f.out.empty()) write_text(f.out, table);
    return 0;
}

int cmd_figures(const Flags& f) {
    const fs::path dir = f.out.empty() ? fs::path("figures") : fs::path(f.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
    const JacobiParams cheb{-0.5, -0.5};
    struct Fig {
        const char* file;
        CubatureRule rule;
    };
    const std::vector<Fig> figs = {
        {"fig2_omega.dat", gauss_rule_omega(cheb, -0.5, 10)},
        {"fig2_star.dat", gauss_rule_star(cheb, -0.5, 10)},
        {"fig3_rhombus.dat", minimal_rule_rhombus(cheb, -0.5, 5)},
        {"fig4_square_a-0.5_b-0.5.dat", minimal_rule_square(cheb, -0.5, 9)},
        {"fig4_square_a0_b0.dat", minimal_rule_square({0.0, 0.0}, -0.5, 9)},
    };
    for (const Fig& fig : figs) {
        write_text((dir / fig.file).string(), export_plotdata(fig.rule));
        std::cout << fig.file << " nodes=" << fig.rule.size() << " degree=" << fig.rule.degree << "\n";
    }
    return 0;
}

void add_weight_flags(CLI::App* sc, Flags& f) {
    sc->add_option("--alpha", f.alpha, "Jacobi exponent alpha (> -1)");
    sc->add_option("--beta", f.beta, "Jacobi exponent beta (> -1)");
    sc->add_option("--gamma", f.gamma, "-0.5 or +0.5");
    sc->add_option("--domain", f.domain, "omega | star | rhombus | square")
        ->check(CLI::IsMember({"omega", "star", "rhombus", "square"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian and minimal cubature rules, interpolation and Lebesgue constants"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Flags f;

    auto* rule = app.add_subcommand("rule", "write a cubature rule");
    add_weight_flags(rule, f);
    rule->add_option("--n", f.n, "rule index")->required();
    rule->add_option("--format", f.format, "json | csv | plot")->check(CLI::IsMember({"json", "csv", "plot"}));
    rule->add_option("--out", f.out, "output file (default: standard output)");

    auto* verify = app.add_subcommand("verify", "check exactness against the reference integrator");
    add_weight_flags(verify, f);
    verify->add_option("--n", f.n, "rule index")->required();
    verify->add_option("--family", f.family, "auto | monomials | symmetric")
        ->check(CLI::IsMember({"auto", "monomials", "symmetric"}));
    verify->add_option("--mc", f.mc, "also print a Monte Carlo cross-check with this many samples");
    verify->add_option("--seed", f.seed, "Monte Carlo seed");

    auto* interp = app.add_subcommand("interp", "interpolation error study");
    add_weight_flags(interp, f);
    interp->add_option("--n", f.ns, "ascending list of n")->required()->delimiter(',');
    interp->add_option("--function", f.function, "const | exp | runge | abs32 | mono:A:B");
    interp->add_option("--grid", f.grid, "error grid points per axis (default 64)");
    interp->add_option("--out", f.out, "also write the table as CSV");

    auto* leb = app.add_subcommand("lebesgue", "Lebesgue constant sweep");
    add_weight_flags(leb, f);
    leb->add_option("--n", f.ns, "ascending list of n")->required()->delimiter(',');
    leb->add_option("--grid", f.grid, "grid points per axis (default max(8n, 128))");
    leb->add_option("--threads", f.threads, "worker threads");
    leb->add_option("--out", f.out, "also write the table as CSV");

    auto* figs = app.add_subcommand("figures", "node files for the degree-19 and degree-35 node plots");
    figs->add_option("--out", f.out, "output directory (default: figures)");
    figs->add_option("--threads", f.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*rule) return cmd_rule(f);
        if (*verify) return cmd_verify(f);
        if (*interp) return cmd_interp(f);
        if (*leb) return cmd_lebesgue(f);
        if (*figs) return cmd_figures(f);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const parameter_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
