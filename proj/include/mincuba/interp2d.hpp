#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "cubature2d.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "jacobi1d.hpp"
#include "orthopoly2d.hpp"
#include "summation.hpp"

namespace mincuba {

enum class InterpKind { OmegaMinus, OmegaPlus, SquareStar };

namespace detail {

/**
 * Runs fn(row) for row = 0..rows-1 on up to `threads` workers. Each row is
 * handled by exactly one call, so results stored per row do not depend on
 * the thread count.
 */
template <class Fn>
void parallel_rows(int rows, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, rows));
    if (threads == 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int r = t; r < rows; r += threads) fn(r);
        });
    for (auto& th : pool) th.join();
}

// cos(pi i / (G-1)), i = 0..G-1, ascending
inline std::vector<double> chebyshev_grid(int G) {
    std::vector<double> g(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i) g[i] = -std::cos(std::numbers::pi * i / (G - 1));
    g[0] = -1.0;
    g[G - 1] = 1.0;
    return g;
}

// Nelder-Mead maximization in a box, fixed iteration budget
template <class F>
std::pair<Point2, double> nelder_mead_max(F&& f, Point2 x0, double step, double lo, double hi,
                                          int iters = 200) {
    auto clamp = [lo, hi](Point2 p) { return Point2{std::clamp(p.a, lo, hi), std::clamp(p.b, lo, hi)}; };
    std::array<Point2, 3> s = {clamp(x0), clamp({x0.a + step, x0.b}), clamp({x0.a, x0.b + step})};
    std::array<double, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = f(s[i]);
    for (int it = 0; it < iters; ++it) {
        std::array<int, 3> o = {0, 1, 2};
        std::sort(o.begin(), o.end(), [&](int a, int b) { return v[a] > v[b]; });
        const Point2 best = s[o[0]], mid = s[o[1]], worst = s[o[2]];
        const Point2 c{(best.a + mid.a) / 2, (best.b + mid.b) / 2};
        auto along = [&](double t) { return clamp({c.a + t * (worst.a - c.a), c.b + t * (worst.b - c.b)}); };
        const Point2 r = along(-1.0);
        const double fr = f(r);
        if (fr > v[o[0]]) {
            const Point2 e = along(-2.0);
            const double fe = f(e);
            if (fe > fr) {
                s[o[2]] = e;
                v[o[2]] = fe;
            } else {
                s[o[2]] = r;
                v[o[2]] = fr;
            }
        } else if (fr > v[o[1]]) {
            s[o[2]] = r;
            v[o[2]] = fr;
        } else {
            const Point2 k = along(0.5);
            const double fk = f(k);
            if (fk > v[o[2]]) {
                s[o[2]] = k;
                v[o[2]] = fk;
            } else {
                for (int i : {o[1], o[2]}) {
                    s[i] = clamp({(s[i].a + best.a) / 2, (s[i].b + best.b) / 2});
                    v[i] = f(s[i]);
                }
            }
        }
    }
    int bi = 0;
    for (int i = 1; i < 3; ++i)
        if (v[i] > v[bi]) bi = i;
    return {s[bi], v[bi]};
}

class InterpEngine {
public:
    virtual ~InterpEngine() = default;
    // cubature-weighted kernel values, i.e. fundamental polynomials, in node order
    virtual void fundamentals(Point2 p, double* out) const = 0;
    virtual InterpKind kind() const = 0;
};

/**
 * Fundamental polynomials on Omega from the 1-D ones:
 *   gamma = -1/2: l_j(x)l_k(y) + l_j(y)l_k(x), l_j(x)l_j(y) when j = k;
 *   gamma = +1/2: (x_j - x_k)(l_j(x)l_k(y) - l_k(x)l_j(y)) / (x - y),
 * (x, y) being the roots of z^2 - uz + v.
 */
class OmegaEngine final : public InterpEngine {
public:
    explicit OmegaEngine(const CubatureRule& rule)
        : minus_(rule.weight.minus()), star_(rule.domain == DomainTag::OmegaStar),
          lag_(gauss_rule(rule.weight.params, rule.n)), orbit_(rule.orbit) {}

    InterpKind kind() const override { return minus_ ? InterpKind::OmegaMinus : InterpKind::OmegaPlus; }

    void fundamentals(Point2 p, double* out) const override {
        if (star_) p = star_to_omega(p.a, p.b);
        const auto [x, y] = omega_roots(p.a, p.b);
        fundamentals_at_roots(x, y, out);
    }

    // same, with the roots given directly
    void fundamentals_at_roots(double x, double y, double* out) const {
        const int n = lag_.size();
        std::vector<double> lx(static_cast<std::size_t>(n)), ly(lx.size()), dd(lx.size());
        if (minus_) {
            lag_.basis(x, lx.data());
            lag_.basis(y, ly.data());
        } else {
            lag_.basis_divided(x, y, lx.data(), ly.data(), dd.data());
        }
        const auto& xs = lag_.rule().nodes;
        for (std::size_t i = 0; i < orbit_.size(); ++i) {
            const int j = orbit_[i].j - 1, k = orbit_[i].k - 1;
            if (minus_)
                out[i] = j == k ? lx[j] * ly[j] : lx[j] * ly[k] + ly[j] * lx[k];
            else
                out[i] = (xs[j] - xs[k]) * (ly[k] * dd[j] - ly[j] * dd[k]);
        }
    }

    std::size_t size() const { return orbit_.size(); }

private:
    bool minus_;
    bool star_;
    Lagrange1D lag_;
    std::vector<OrbitIndex> orbit_;
};

/**
 * Fundamental polynomials of the minimal rule on the square (gamma = -1/2):
 * w_node * K*_{2n}(x, node). The kernel at the four nodes of one orbit
 * splits into an invariant part and three parts carrying the factors
 * (x1^2-x2^2), (x1+x2), (x1-x2), whose signs over the branches
 * (s,t), (t,s), (-s,-t), (-t,-s) are (+,-,+,-), (+,+,-,-), (+,-,-,+).
 */
class SquareEngine final : public InterpEngine {
public:
    explicit SquareEngine(const CubatureRule& rule)
        : n_(rule.n), spec_(KernelKind::CK_STAR, rule.weight.params, rule.n), q_(gauss_rule(rule.weight.params, rule.n)) {
        const int n = n_;
        for (int s = 0; s < 4; ++s) {
            const auto& rec = spec_.rec(s / 2, s % 2);
            table_[s].assign(static_cast<std::size_t>(n) * n, 0.0);
            for (int j = 0; j < n; ++j) rec.values(q_.nodes[j], n - 1, &table_[s][j * n]);
        }
        // pair index per (j,k) and node-side factors
        pair_of_.assign(static_cast<std::size_t>(n) * n, -1);
        for (std::size_t i = 0; i < rule.orbit.size(); ++i) {
            const OrbitIndex& o = rule.orbit[i];
            const int j = o.j - 1, k = o.k - 1;
            int& pi = pair_of_[j * n + k];
            if (pi < 0) {
                pi = static_cast<int>(pairs_.size());
                const double cj = std::sqrt((1.0 + q_.nodes[j]) / 2), sj = std::sqrt((1.0 - q_.nodes[j]) / 2);
                const double ck = std::sqrt((1.0 + q_.nodes[k]) / 2), sk = std::sqrt((1.0 - q_.nodes[k]) / 2);
                const double s = cj * ck + sj * sk, t = cj * ck - sj * sk;
                pairs_.push_back({j, k, (s - t) * (s + t), s + t, s - t});
            }
            node_pair_.push_back(pi);
            node_branch_.push_back(o.branch);
            node_weight_.push_back(rule.weights[i]);
        }
    }

    InterpKind kind() const override { return InterpKind::SquareStar; }
    std::size_t size() const { return node_pair_.size(); }
    std::size_t pairs() const { return pairs_.size(); }

    // kernel value on the four branches of every pair: out[4*pair + branch-1]
    void branch_kernels(Point2 X, double* out) const {
        const int n = n_;
        const KernelConstants& c = spec_.consts();
        const auto [A, B] = half_angle_args(X.a, X.b);
        // k_m(A, x_j), k_m(B, x_j) per shift; m = n-1, and n-2 for the (1,1) shift
        std::array<std::vector<double>, 4> kA, kB;
        std::vector<double> pA(static_cast<std::size_t>(n)), pB(pA.size());
        std::vector<double> kA11m(static_cast<std::size_t>(n)), kB11m(kA11m.size());
        double qA = 0.0, qB = 0.0;
        for (int s = 0; s < 4; ++s) {
            const auto& rec = spec_.rec(s / 2, s % 2);
            rec.values(A, n - 1, pA.data());
            rec.values(B, n - 1, pB.data());
            kA[s].assign(static_cast<std::size_t>(n), 0.0);
            kB[s].assign(static_cast<std::size_t>(n), 0.0);
            for (int j = 0; j < n; ++j) {
                const double* t = &table_[s][j * n];
                double sa = 0.0, sb = 0.0;
                for (int r = 0; r + 1 < n; ++r) {
                    sa += pA[r] * t[r];
                    sb += pB[r] * t[r];
                }
                if (s == 3) {
                    kA11m[j] = sa;
                    kB11m[j] = sb;
                }
                kA[s][j] = sa + pA[n - 1] * t[n - 1];
                kB[s][j] = sb + pB[n - 1] * t[n - 1];
            }
            if (s == 3) {
                qA = pA[n - 1];
                qB = pB[n - 1];
            }
        }
        const double Ex = (X.a - X.b) * (X.a + X.b), Px = X.a + X.b, Mx = X.a - X.b;
        const double b0 = c.b_generic;
        const double qcoef = (b0 * b0 - b0) * 2.0 * c.gamma_ab * c.gamma_ab;
        auto km = [](const std::vector<double>& a, const std::vector<double>& b, int j, int k) {
            return 0.5 * (a[k] * b[j] + a[j] * b[k]);
        };
        for (std::size_t pi = 0; pi < pairs_.size(); ++pi) {
            const Pair& p = pairs_[pi];
            const int j = p.j, k = p.k;
            const double I = km(kA[0], kB[0], j, k);
            const double k11m = n >= 2 ? km(kA11m, kB11m, j, k) : 0.0;
            const double k11 = km(kA[3], kB[3], j, k);
            const double tn = table_[3][j * n + n - 1] * table_[3][k * n + n - 1];
            const double E = Ex * p.e * (c.d11 * (k11m + b0 * (k11 - k11m)) + qcoef * qA * qB * tn);
            const double P = c.d01 * Px * p.P * km(kA[1], kB[1], j, k);
            const double M = c.d10 * Mx * p.M * km(kA[2], kB[2], j, k);
            double* o = out + 4 * pi;
            o[0] = I + E + P + M;
            o[1] = I - E + P - M;
            o[2] = I + E - P - M;
            o[3] = I - E - P + M;
        }
    }

    void fundamentals(Point2 X, double* out) const override {
        std::vector<double> bk(4 * pairs_.size());
        branch_kernels(X, bk.data());
        for (std::size_t i = 0; i < node_pair_.size(); ++i)
            out[i] = node_weight_[i] * bk[4 * node_pair_[i] + node_branch_[i] - 1];
    }

    // sum over nodes of |fundamental polynomial|
    double lebesgue_function(Point2 X) const {
        std::vector<double> f(node_pair_.size());
        fundamentals(X, f.data());
        double s = 0.0;
        for (double v : f) s += std::abs(v);
        return s;
    }

    const KernelSpec& spec() const { return spec_; }

private:
    struct Pair {
        int j, k;
        double e, P, M;
    };
    int n_;
    KernelSpec spec_;
    QuadRule1D q_;
    std::array<std::vector<double>, 4> table_;
    std::vector<int> pair_of_;
    std::vector<Pair> pairs_;
    std::vector<int> node_pair_;
    std::vector<int> node_branch_;
    std::vector<double> node_weight_;
};

} // namespace detail

/**
 * Lagrange interpolant: samples at the nodes of a cubature rule and the
 * fundamental polynomials of that node set.
 */
class Interpolant {
public:
    Interpolant(CubatureRule rule, std::vector<double> samples, std::shared_ptr<const detail::InterpEngine> engine)
        : rule_(std::move(rule)), samples_(std::move(samples)), engine_(std::move(engine)) {}

    const CubatureRule& rule() const { return rule_; }
    const std::vector<double>& samples() const { return samples_; }
    InterpKind kind() const { return engine_->kind(); }

    double operator()(Point2 p) const {
        std::vector<double> l(rule_.size());
        engine_->fundamentals(p, l.data());
        NeumaierSum s;
        for (std::size_t i = 0; i < l.size(); ++i) s.add(samples_[i] * l[i]);
        return s.value();
    }
    double operator()(double a, double b) const { return (*this)(Point2{a, b}); }

    // all fundamental polynomials at p, in node order
    std::vector<double> fundamentals(Point2 p) const {
        std::vector<double> l(rule_.size());
        engine_->fundamentals(p, l.data());
        return l;
    }

    double fundamental(std::size_t i, Point2 p) const { return fundamentals(p).at(i); }

    // same node set, new samples
    Interpolant with_samples(std::vector<double> samples) const {
        if (samples.size() != rule_.size()) throw input_error("sample count must equal the node count");
        return Interpolant(rule_, std::move(samples), engine_);
    }

private:
    CubatureRule rule_;
    std::vector<double> samples_;
    std::shared_ptr<const detail::InterpEngine> engine_;
};

inline Interpolant interpolate_omega(const CubatureRule& rule, std::vector<double> samples) {
    if (rule.domain != DomainTag::Omega && rule.domain != DomainTag::OmegaStar)
        throw contract_error("interpolate_omega needs a Gaussian rule on Omega or Omega*");
    if (samples.size() != rule.size()) throw input_error("sample count must equal the node count");
    return Interpolant(rule, std::move(samples), std::make_shared<detail::OmegaEngine>(rule));
}

inline Interpolant interpolate_square(const CubatureRule& rule, std::vector<double> samples) {
    if (rule.domain != DomainTag::Square || !rule.weight.minus())
        throw contract_error("interpolate_square needs the gamma = -1/2 minimal rule on the square");
    if (samples.size() != rule.size()) throw input_error("sample count must equal the node count");
    return Interpolant(rule, std::move(samples), std::make_shared<detail::SquareEngine>(rule));
}

// samples f at the nodes
template <class F>
std::vector<double> sample(const CubatureRule& rule, F&& f) {
    std::vector<double> s(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        s[i] = f(rule.nodes[i].a, rule.nodes[i].b);
        if (!std::isfinite(s[i])) throw evaluation_error("sampled function is not finite at a node", i);
    }
    return s;
}

struct LebesgueEstimate {
    int n = 0;
    int grid = 0; // points per axis
    double value = 0.0;
    Point2 argmax;
    double bound_1d = std::numeric_limits<double>::quiet_NaN(); // (||I_n||)^2, Omega only
};

namespace detail {

// grid max with deterministic tie-break (larger value, then smaller x, then smaller y)
template <class F>
std::pair<Point2, double> grid_max(F&& fn, const std::vector<double>& g, int threads) {
    const int G = static_cast<int>(g.size());
    std::vector<double> rv(static_cast<std::size_t>(G), -1.0);
    std::vector<int> ri(static_cast<std::size_t>(G), 0);
    parallel_rows(G, threads, [&](int r) {
        double best = -1.0;
        int bi = 0;
        for (int c = 0; c < G; ++c) {
            const double v = fn(Point2{g[r], g[c]});
            if (v > best) {
                best = v;
                bi = c;
            }
        }
        rv[r] = best;
        ri[r] = bi;
    });
    int br = 0;
    for (int r = 1; r < G; ++r)
        if (rv[r] > rv[br]) br = r;
    return {Point2{g[br], g[ri[br]]}, rv[br]};
}

template <class F>
LebesgueEstimate scan(F&& fn, int n, int G, int threads) {
    const std::vector<double> g = chebyshev_grid(G);
    auto [p, v] = grid_max(fn, g, threads);
    LebesgueEstimate est{n, G, v, p};
    const double step = std::numbers::pi / (G - 1);
    auto [q, w] = nelder_mead_max(fn, p, step, -1.0, 1.0);
    if (w > est.value) {
        est.value = w;
        est.argmax = q;
    }
    return est;
}

} // namespace detail

inline int default_lebesgue_grid(int n) { return std::max(8 * n, 128); }

/**
 * max over the square of sum_{all nodes} |l_node(x)| for the minimal-rule
 * interpolant: Chebyshev tensor grid of G points per axis plus one
 * Nelder-Mead refinement from the grid argmax.
 */
inline LebesgueEstimate lebesgue_square(const JacobiParams& params, int n, int grid = 0, int threads = 1) {
    params.validate();
    if (n < 1) throw domain_error("lebesgue_square needs n >= 1");
    if (grid == 0) grid = default_lebesgue_grid(n);
    if (grid < 8 * n) throw domain_error("grid must have at least 8n points per axis");
    const CubatureRule rule = minimal_rule_square(params, -0.5, n);
    const detail::SquareEngine eng(rule);
    return detail::scan([&](Point2 X) { return eng.lebesgue_function(X); }, n, grid, threads);
}

/**
 * max over Omega of sum_{j,k} |l_{j,k}(u,v)|, scanned through (x, y) in the
 * square with (u, v) = (x + y, xy). bound_1d is the squared 1-D Lebesgue
 * constant of the Gauss nodes.
 */
inline LebesgueEstimate lebesgue_omega(const JacobiParams& params, double gamma, int n, int grid = 0,
                                       int threads = 1) {
    params.validate();
    const CubatureRule rule = gauss_rule_omega(params, gamma, n);
    if (grid == 0) grid = default_lebesgue_grid(n);
    if (grid < 8 * n) throw domain_error("grid must have at least 8n points per axis");
    const detail::OmegaEngine eng(rule);
    auto fn = [&](Point2 X) {
        std::vector<double> l(eng.size());
        eng.fundamentals_at_roots(X.a, X.b, l.data());
        double s = 0.0;
        for (double v : l) s += std::abs(v);
        return s;
    };
    LebesgueEstimate est = detail::scan(fn, n, grid, threads);
    const double one = lebesgue1d(params, n, 0, 0, std::max(8 * n, 1024)).value;
    est.bound_1d = one * one;
    return est;
}

struct ErrorReport {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    std::size_t points = 0;
};

/**
 * |L f - f| on a G x G Chebyshev tensor grid, mapped into the rule's domain
 * (through (x, y) -> (x + y, xy) for Omega).
 */
template <class F>
ErrorReport error_report(const Interpolant& I, F&& f, int grid) {
    if (grid < 2) throw domain_error("error grid needs at least 2 points per axis");
    const std::vector<double> g = detail::chebyshev_grid(grid);
    const DomainTag d = I.rule().domain;
    NeumaierSum sum;
    ErrorReport rep;
    for (double x : g)
        for (double y : g) {
            Point2 p{x, y};
            if (d == DomainTag::Omega || d == DomainTag::OmegaStar) {
                if (x < y) continue;
                p = sym_map(x, y);
                if (d == DomainTag::OmegaStar) p = omega_to_star_unchecked(p);
            } else if (d == DomainTag::Rhombus) {
                p = square_to_rhombus(x, y);
            }
            const double fv = f(p.a, p.b);
            if (!std::isfinite(fv)) throw evaluation_error("test function is not finite", rep.points);
            const double e = std::abs(I(p) - fv);
            rep.max_abs = std::max(rep.max_abs, e);
            sum.add(e);
            ++rep.points;
        }
    rep.mean_abs = sum.value() / static_cast<double>(rep.points);
    return rep;
}

} // namespace mincuba
