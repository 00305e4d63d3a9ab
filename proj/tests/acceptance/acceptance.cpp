// One PASS/FAIL line per acceptance criterion. argv[1] is the mincuba CLI.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <mincuba/mincuba.hpp>

#include "../oracles.hpp"

using namespace mincuba;
namespace fs = std::filesystem;

namespace {

const JacobiParams kParams[] = {{-0.5, -0.5}, {0.0, 0.0}, {0.5, -0.25}};

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<Point2> read_plot(const fs::path& p) {
    std::ifstream in(p);
    std::vector<Point2> pts;
    for (std::string l; std::getline(in, l);) {
        if (l.empty() || l[0] == '#') continue;
        std::istringstream is(l);
        Point2 q;
        if (is >> q.a >> q.b) pts.push_back(q);
    }
    return pts;
}

bool invariant(const std::vector<Point2>& pts, const std::function<Point2(Point2)>& g) {
    std::set<std::pair<double, double>> s;
    for (const Point2& p : pts) s.insert({p.a, p.b});
    for (const Point2& p : pts) {
        const Point2 q = g(p);
        if (!s.count({q.a, q.b})) return false;
    }
    return true;
}

// 1: Gaussian rules on Omega against closed-form moments
Outcome c1() {
    Outcome o;
    double worst = 0, weakest_probe = 1e300;
    for (const auto& p : kParams)
        for (double g : {-0.5, 0.5})
            for (int n : {2, 3, 5, 8}) {
                const CubatureRule r = gauss_rule_omega(p, g, n);
                // relative to the integral of |u^a v^b|, since some moments vanish
                auto rel = [&](int a, int b) {
                    const double q = apply(r, [&](double u, double v) { return std::pow(u, a) * std::pow(v, b); });
                    const double e = (double)oracle::omega_moment(p.alpha, p.beta, g, a, b);
                    const double scale = apply(r, [&](double u, double v) { return std::abs(std::pow(u, a) * std::pow(v, b)); });
                    return std::abs(q - e) / std::max({std::abs(e), scale, 1e-300});
                };
                for (int d = 0; d <= r.degree; ++d)
                    for (int a = 0; a <= d; ++a) worst = std::max(worst, rel(a, d - a));
                double probe = 0;
                for (int a = 0; a <= r.degree + 1; ++a) probe = std::max(probe, rel(a, r.degree + 1 - a));
                weakest_probe = std::min(weakest_probe, probe);
                if (probe <= 1e-6) o.pass = false;
            }
    if (worst > 1e-9) o.pass = false;
    o.detail = "max_rel=" + fmt(worst) + " min_probe=" + fmt(weakest_probe);
    return o;
}

// 2: node counts of the minimal rules
Outcome c2() {
    Outcome o;
    for (int n = 1; n <= 32; ++n) {
        const std::size_t dim = static_cast<std::size_t>(2 * n) * (2 * n + 1) / 2;
        const std::size_t minus = minimal_rule_square({-0.5, -0.5}, -0.5, n).size();
        // the gamma = +1/2 rule starts at n = 2 (n = 1 would have no nodes)
        const std::size_t plus = n >= 2 ? minimal_rule_square({-0.5, -0.5}, 0.5, n).size() : 0;
        if (minus != static_cast<std::size_t>(2 * n * (n + 1)) || minus != dim + n) o.pass = false;
        if (plus != static_cast<std::size_t>(2 * n * (n - 1))) o.pass = false;
    }
    o.detail = "minus n=1..32, plus n=2..32";
    return o;
}

// 3: square minimal rules, symmetry-reduced family through degree 4n-1
Outcome c3() {
    Outcome o;
    double worst = 0;
    for (const auto& p : kParams)
        for (int n : {2, 3, 5}) {
            const CubatureRule r = minimal_rule_square(p, -0.5, n);
            const ReferenceIntegrator R = ReferenceIntegrator::for_degree(r.weight, r.degree + 1);
            const ExactnessReport rep = verify_exactness(r, R, TestFamily::SymmetryReduced);
            worst = std::max(worst, rep.max_error);
            if (r.degree != 4 * n - 1 || !rep.pass) o.pass = false;
        }
    if (worst > 1e-9) o.pass = false;
    o.detail = "max_err=" + fmt(worst);
    return o;
}

// 4: augmented kernel between nodes
Outcome c4() {
    Outcome o;
    double worst = 0;
    for (const auto& p : kParams)
        for (int n = 1; n <= 6; ++n) {
            const CubatureRule r = minimal_rule_square(p, -0.5, n);
            const QuadRule1D q = gauss_rule(p, n);
            const KernelSpec spec(KernelKind::CK_STAR, p, n);
            for (std::size_t a = 0; a < r.size(); ++a)
                for (std::size_t b = 0; b < r.size(); ++b) {
                    const int j = r.orbit[a].j - 1, k = r.orbit[a].k - 1;
                    const double ll = q.weights[j] * q.weights[k];
                    const double expect = a == b ? (j == k ? 4.0 : 2.0) / ll : 0.0;
                    const double v = kernel_square_star(spec, r.nodes[a], r.nodes[b]);
                    const double scale = (j == k ? 4.0 : 2.0) / ll;
                    worst = std::max(worst, std::abs(v - expect) / (a == b ? expect : scale));
                }
        }
    if (worst > 1e-8) o.pass = false;
    o.detail = "max_rel=" + fmt(worst);
    return o;
}

// 5: interpolation delta and reproduction
Outcome c5() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto random_poly = [&](int d) {
        std::vector<double> c;
        for (int i = 0; i < (d + 1) * (d + 2) / 2; ++i) c.push_back(U(rng));
        return [c, d](double a, double b) {
            double s = 0;
            int idx = 0;
            for (int i = 0; i <= d; ++i)
                for (int j = 0; i + j <= d; ++j) s += c[idx++] * std::pow(a, i) * std::pow(b, j);
            return s;
        };
    };
    double worst = 0;
    for (const auto& p : kParams) {
        const int n = 3;
        const CubatureRule r = minimal_rule_square(p, -0.5, n);
        const auto f = random_poly(2 * n - 1);
        const Interpolant I = interpolate_square(r, sample(r, f));
        for (std::size_t i = 0; i < r.size(); ++i) {
            const std::vector<double> l = I.fundamentals(r.nodes[i]);
            for (std::size_t k = 0; k < r.size(); ++k) worst = std::max(worst, std::abs(l[k] - (i == k ? 1.0 : 0.0)));
        }
        std::vector<Point2> pts;
        for (int t = 0; t < 100; ++t) pts.push_back({U(rng), U(rng)});
        for (const Point2& x : pts) worst = std::max(worst, std::abs(I(x) - f(x.a, x.b)));
        for (int m = 0; m < n; ++m) {
            const BasisId id{BasisFamily::Q2_EVEN, m, n};
            const auto q = [&](double x, double y) { return eval_basis_square(id, p, x, y); };
            const Interpolant J = interpolate_square(r, sample(r, q));
            for (const Point2& x : pts) worst = std::max(worst, std::abs(J(x) - q(x.a, x.b)));
        }
        for (double g : {-0.5, 0.5}) {
            const int m = 6;
            const CubatureRule ro = gauss_rule_omega(p, g, m);
            const auto h = random_poly(g < 0 ? m - 1 : m - 2);
            const Interpolant K = interpolate_omega(ro, sample(ro, h));
            for (int t = 0; t < 100; ++t) {
                const Point2 x = sym_map(U(rng), U(rng));
                worst = std::max(worst, std::abs(K(x) - h(x.a, x.b)));
            }
        }
    }
    if (worst > 1e-8) o.pass = false;
    o.detail = "max_err=" + fmt(worst);
    return o;
}

// 6: defining sum of hat h against its closed form
Outcome c6() {
    Outcome o;
    double worst = 0;
    for (const JacobiParams p : {JacobiParams{-0.5, -0.5}, JacobiParams{0, 0}, JacobiParams{1.3, 0.2}})
        for (int n = 1; n <= 32; ++n) {
            const QuadRule1D q = gauss_rule(p, n);
            for (int m = 0; m < n; ++m) {
                const double sum = (double)oracle::hat_h_sum(p.alpha, p.beta, m, q.nodes, q.weights);
                const double closed = hat_h(p, n, m);
                worst = std::max(worst, std::abs(sum - closed) / std::abs(closed));
            }
        }
    if (worst > 1e-10) o.pass = false;
    o.detail = "max_rel=" + fmt(worst);
    return o;
}

// 7: Lebesgue constant growth and the Omega bound
Outcome c7() {
    Outcome o;
    const int ns[] = {4, 8, 16, 32};
    double lo = 1e300, hi = 0;
    std::vector<double> lx, ly;
    for (int n : ns) {
        const double l = lebesgue_square({-0.5, -0.5}, n).value;
        const double r = l / std::pow(std::log(2.0 * n), 2);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        lx.push_back(std::log(n));
        ly.push_back(std::log(lebesgue_square({0, 0}, n).value));
    }
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 4; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    double ratio = 0;
    for (const auto& p : kParams)
        for (int n = 1; n <= 32; ++n) {
            const LebesgueEstimate e = lebesgue_omega(p, -0.5, n);
            ratio = std::max(ratio, e.value / e.bound_1d);
        }
    if (hi / lo >= 2.0 || std::abs(slope - 1.0) > 0.3 || ratio > 1.0 + 1e-6) o.pass = false;
    o.detail = "spread=" + fmt(hi / lo) + " slope=" + fmt(slope) + " max_L/bound=" + fmt(ratio);
    return o;
}

// 8: 1Q_{k,2n} vanish at the square nodes
Outcome c8() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0;
    for (const auto& p : kParams)
        for (int n = 1; n <= 8; ++n) {
            const CubatureRule r = minimal_rule_square(p, -0.5, n);
            const std::vector<double> g = detail::chebyshev_grid(64);
            for (int k = 0; k <= n; ++k) {
                const BasisId id{BasisFamily::Q1_EVEN, k, n};
                double scale = 0, at_nodes = 0;
                for (double x : g)
                    for (double y : g) scale = std::max(scale, std::abs(eval_basis_square(id, p, x, y)));
                for (const Point2& x : r.nodes) at_nodes = std::max(at_nodes, std::abs(eval_basis_square(id, p, x.a, x.b)));
                worst = std::max(worst, at_nodes / scale);
            }
        }
    if (worst > 1e-9) o.pass = false;
    o.detail = "max_rel=" + fmt(worst);
    return o;
}

// 9: figure node files
Outcome c9(const std::string& cli, const fs::path& dir) {
    Outcome o;
    if (run(cli + " figures --out " + dir.string()) != 0) return {false, "figures command failed"};
    const std::pair<const char*, std::size_t> files[] = {{"fig2_omega.dat", 55},
                                                          {"fig2_star.dat", 55},
                                                          {"fig3_rhombus.dat", 60},
                                                          {"fig4_square_a-0.5_b-0.5.dat", 180},
                                                          {"fig4_square_a0_b0.dat", 180}};
    std::ostringstream d;
    for (const auto& [name, count] : files) {
        const std::vector<Point2> pts = read_plot(dir / name);
        d << pts.size() << " ";
        if (pts.size() != count) o.pass = false;
        const std::string s = name;
        const bool square = s.find("square") != std::string::npos, rhombus = s.find("rhombus") != std::string::npos;
        if (square) {
            if (!invariant(pts, [](Point2 p) { return Point2{p.b, p.a}; })) o.pass = false;
            if (!invariant(pts, [](Point2 p) { return Point2{-p.a, -p.b}; })) o.pass = false;
        }
        if (rhombus) {
            if (!invariant(pts, [](Point2 p) { return Point2{p.a, -p.b}; })) o.pass = false;
            if (!invariant(pts, [](Point2 p) { return Point2{-p.a, -p.b}; })) o.pass = false;
        }
    }
    o.detail = "counts=" + d.str() + "symmetric=" + (o.pass ? "yes" : "no");
    return o;
}

// 10: repeated runs and thread counts give identical bytes
Outcome c10(const std::string& cli, const fs::path& dir) {
    Outcome o;
    const std::string rules[] = {"--domain omega --gamma -0.5 --n 6", "--domain star --gamma 0.5 --n 5",
                                 "--domain rhombus --alpha 0.5 --beta -0.25 --n 4", "--domain square --n 7"};
    int i = 0;
    for (const std::string& r : rules) {
        for (const char* f : {"json", "csv", "plot"}) {
            const fs::path a = dir / ("r" + std::to_string(i) + "a." + f), b = dir / ("r" + std::to_string(i) + "b." + f);
            run(cli + " rule " + r + " --format " + f + " --out " + a.string());
            run(cli + " rule " + r + " --format " + f + " --out " + b.string());
            if (slurp(a).empty() || slurp(a) != slurp(b)) o.pass = false;
        }
        ++i;
    }
    const fs::path l1 = dir / "leb1.csv", l4 = dir / "leb4.csv";
    run(cli + " lebesgue --n 4,8,12 --threads 1 --out " + l1.string());
    run(cli + " lebesgue --n 4,8,12 --threads 4 --out " + l4.string());
    if (slurp(l1).empty() || slurp(l1) != slurp(l4)) o.pass = false;
    const fs::path f1 = dir / "fig1", f4 = dir / "fig4";
    run(cli + " figures --threads 1 --out " + f1.string());
    run(cli + " figures --threads 4 --out " + f4.string());
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(f1)) {
        ++files;
        if (slurp(e.path()) != slurp(f4 / e.path().filename())) o.pass = false;
    }
    if (files == 0) o.pass = false;
    o.detail = "compared 12 rule exports, lebesgue table, " + std::to_string(files) + " figure files";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-mincuba-cli> [workdir]\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::current_path() / "acceptance_work";
    fs::remove_all(work);
    fs::create_directories(work / "fig");
    fs::create_directories(work / "det");

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8},
        {9, [&] { return c9(cli, work / "fig"); }},
        {10, [&] { return c10(cli, work / "det"); }},
    };
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d: %s  (%.2fs) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
