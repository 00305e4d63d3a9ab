#pragma once
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "jacobi1d.hpp"
#include "oracle.hpp"
#include "orthopoly2d.hpp"
#include "summation.hpp"
#include "weights.hpp"

namespace mincuba {

// 1-based indices of the generating Gauss nodes; branch 1..4 on the
// rhombus/square, 0 on Omega and Omega*.
struct OrbitIndex {
    int j = 0;
    int k = 0;
    int branch = 0;
    friend bool operator==(const OrbitIndex&, const OrbitIndex&) = default;
};

struct CubatureRule {
    WeightSpec weight;
    int n = 0;
    int degree = 0;
    DomainTag domain = DomainTag::Omega;
    std::vector<Point2> nodes;
    std::vector<double> weights;
    std::vector<OrbitIndex> orbit;

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

struct PairWeight {
    int j; // 0-based, j <= k
    int k;
    double w;
};

inline void check_rule_args(const WeightSpec& w, int n) {
    w.validate();
    const int nmin = w.minus() ? 1 : 2;
    if (n < nmin) {
        std::ostringstream os;
        os << "n must be at least " << nmin << " for gamma = " << w.gamma << " (got " << n << ")";
        throw domain_error(os.str());
    }
}

/**
 * Pair weights of the Gaussian rule on Omega for the normalized weight:
 *   gamma = -1/2: 2 l_j l_k for j < k, l_j^2 for j = k;
 *   gamma = +1/2: l_j l_k (x_j - x_k)^2 / sigma^2 for j < k.
 * Order: k ascending, then j ascending.
 */
inline std::vector<PairWeight> omega_pairs(const QuadRule1D& q, bool minus) {
    std::vector<PairWeight> out;
    const double var = jacobi_variance(q.params);
    for (int k = 0; k < q.n; ++k) {
        for (int j = 0; j <= k; ++j) {
            const double l = q.weights[j] * q.weights[k];
            if (minus) {
                out.push_back({j, k, j == k ? l : 2.0 * l});
            } else if (j < k) {
                const double d = q.nodes[j] - q.nodes[k];
                out.push_back({j, k, l * d * d / var});
            }
        }
    }
    return out;
}

inline CubatureRule make_rule(WeightFamily fam, const JacobiParams& params, double gamma, int n) {
    CubatureRule r;
    r.weight = {fam, params, gamma};
    check_rule_args(r.weight, n);
    r.n = n;
    r.domain = domain_of(fam);
    return r;
}

} // namespace detail

// Gaussian rule on Omega, nodes (x_j + x_k, x_j x_k)
inline CubatureRule gauss_rule_omega(const JacobiParams& params, double gamma, int n) {
    CubatureRule r = detail::make_rule(WeightFamily::W_OMEGA, params, gamma, n);
    r.degree = r.weight.minus() ? 2 * n - 1 : 2 * n - 3;
    const QuadRule1D q = gauss_rule(params, n);
    for (const auto& pw : detail::omega_pairs(q, r.weight.minus())) {
        r.nodes.push_back(sym_map(q.nodes[pw.j], q.nodes[pw.k]));
        r.weights.push_back(pw.w);
        r.orbit.push_back({pw.j + 1, pw.k + 1, 0});
    }
    return r;
}

// Gaussian rule on Omega*, nodes (1/4 (1+x_j)(1+x_k), 1/4 (1-x_j)(1-x_k))
inline CubatureRule gauss_rule_star(const JacobiParams& params, double gamma, int n) {
    CubatureRule r = detail::make_rule(WeightFamily::W_STAR, params, gamma, n);
    r.degree = r.weight.minus() ? 2 * n - 1 : 2 * n - 3;
    const QuadRule1D q = gauss_rule(params, n);
    for (const auto& pw : detail::omega_pairs(q, r.weight.minus())) {
        const double xj = q.nodes[pw.j], xk = q.nodes[pw.k];
        r.nodes.push_back({0.25 * (1.0 + xj) * (1.0 + xk), 0.25 * (1.0 - xj) * (1.0 - xk)});
        r.weights.push_back(pw.w);
        r.orbit.push_back({pw.j + 1, pw.k + 1, 0});
    }
    return r;
}

namespace detail {

// cos(theta/2), sin(theta/2) of a Gauss node x = cos theta
inline std::pair<double, double> half_angles(double x) {
    return {std::sqrt((1.0 + x) / 2.0), std::sqrt((1.0 - x) / 2.0)};
}

template <class Emit>
void four_fold(const JacobiParams& params, bool minus, int n, Emit&& emit) {
    const QuadRule1D q = gauss_rule(params, n);
    for (const auto& pw : omega_pairs(q, minus)) {
        const auto [cj, sj] = half_angles(q.nodes[pw.j]);
        const auto [ck, sk] = half_angles(q.nodes[pw.k]);
        // s, t from the angles so that |s|, |t| <= 1 holds in floating point
        const double s = std::cos((q.thetas[pw.j] - q.thetas[pw.k]) / 2.0);
        const double t = std::cos((q.thetas[pw.j] + q.thetas[pw.k]) / 2.0);
        emit(pw, cj * ck, sj * sk, s, t, pw.w / 4.0);
    }
}

} // namespace detail

// declared degree of the four-fold rules: 4n-1 for gamma = -1/2, 4n-5 for gamma = +1/2
inline int minimal_rule_degree(bool minus, int n) { return minus ? 4 * n - 1 : 4 * n - 5; }

/**
 * Minimal rule on the rhombus: the four sign choices
 * (U,V), (U,-V), (-U,-V), (-U,V) with U = cos(t_j/2)cos(t_k/2), V = sin(t_j/2)sin(t_k/2).
 */
inline CubatureRule minimal_rule_rhombus(const JacobiParams& params, double gamma, int n) {
    CubatureRule r = detail::make_rule(WeightFamily::U_RHOMBUS, params, gamma, n);
    r.degree = minimal_rule_degree(r.weight.minus(), n);
    detail::four_fold(params, r.weight.minus(), n,
                      [&](const detail::PairWeight& pw, double U, double V, double, double, double w) {
        const Point2 pts[4] = {{U, V}, {U, -V}, {-U, -V}, {-U, V}};
        for (int i = 0; i < 4; ++i) {
            r.nodes.push_back(pts[i]);
            r.weights.push_back(w);
            r.orbit.push_back({pw.j + 1, pw.k + 1, i + 1});
        }
    });
    return r;
}

/**
 * Minimal rule on the square: orbits (s,t), (t,s), (-s,-t), (-t,-s) with
 * s = cos((t_j - t_k)/2), t = cos((t_j + t_k)/2).
 */
inline CubatureRule minimal_rule_square(const JacobiParams& params, double gamma, int n) {
    CubatureRule r = detail::make_rule(WeightFamily::CW_SQUARE, params, gamma, n);
    r.degree = minimal_rule_degree(r.weight.minus(), n);
    detail::four_fold(params, r.weight.minus(), n,
                      [&](const detail::PairWeight& pw, double, double, double s, double t, double w) {
        const Point2 pts[4] = {{s, t}, {t, s}, {-s, -t}, {-t, -s}};
        for (int i = 0; i < 4; ++i) {
            r.nodes.push_back(pts[i]);
            r.weights.push_back(w);
            r.orbit.push_back({pw.j + 1, pw.k + 1, i + 1});
        }
    });
    return r;
}

inline CubatureRule make_rule(DomainTag d, const JacobiParams& params, double gamma, int n) {
    switch (d) {
    case DomainTag::Omega: return gauss_rule_omega(params, gamma, n);
    case DomainTag::OmegaStar: return gauss_rule_star(params, gamma, n);
    case DomainTag::Rhombus: return minimal_rule_rhombus(params, gamma, n);
    case DomainTag::Square: return minimal_rule_square(params, gamma, n);
    }
    throw input_error("unknown domain");
}

// sum_i w_i f(node_i) in node order with compensated summation
template <class F>
double apply(const CubatureRule& rule, F&& f) {
    NeumaierSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = f(rule.nodes[i].a, rule.nodes[i].b);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrand is not finite at node " << i << " (" << rule.nodes[i].a << ", "
               << rule.nodes[i].b << ")";
            throw evaluation_error(os.str(), i);
        }
        s.add(rule.weights[i] * v);
    }
    return s.value();
}

enum class TestFamily { Monomials, SymmetryReduced };

struct ExactnessEntry {
    std::string label;
    int degree = 0;
    double cubature = 0.0;
    double reference = 0.0;
    double error = 0.0;
    bool pass = false;
};

struct ExactnessReport {
    int declared_degree = 0;
    bool probe_certified = false;
    std::vector<ExactnessEntry> entries;
    std::vector<ExactnessEntry> probes;
    double max_error = 0.0;       // max |cubature - reference| at or below the declared degree
    double max_probe_error = 0.0; // at degree declared + 1
    bool pass = false;
};

constexpr double kExactnessTol = 1e-9;
constexpr double kProbeGap = 1e-6;

inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

namespace detail {

struct TestPoly {
    std::string label;
    int degree;
    std::function<double(double, double)> f;
};

inline std::vector<TestPoly> monomials(int deg_lo, int deg_hi) {
    std::vector<TestPoly> out;
    for (int d = deg_lo; d <= deg_hi; ++d)
        for (int a = d; a >= 0; --a) {
            const int b = d - a;
            std::ostringstream os;
            os << "x^" << a << " y^" << b;
            out.push_back({os.str(), d, [a, b](double x, double y) { return ipow(x, a) * ipow(y, b); }});
        }
    return out;
}

// U = 2xy, V = x^2 + y^2 - 1, p = x + y, q = x - y; square coordinates
inline std::vector<TestPoly> symmetry_reduced(int deg_lo, int deg_hi) {
    std::vector<TestPoly> out;
    struct Part {
        const char* name;
        int extra;
        int kind;
    };
    const Part parts[4] = {{"", 0, 0}, {"(x+y) ", 1, 1}, {"(x-y) ", 1, 2}, {"(x^2-y^2) ", 2, 3}};
    for (int d = deg_lo; d <= deg_hi; ++d)
        for (const Part& pt : parts) {
            const int rest = d - pt.extra;
            if (rest < 0 || rest % 2) continue;
            for (int a = rest / 2; a >= 0; --a) {
                const int b = rest / 2 - a;
                std::ostringstream os;
                os << pt.name << "U^" << a << " V^" << b;
                const int kind = pt.kind;
                out.push_back({os.str(), d, [a, b, kind](double x, double y) {
                                   double f = ipow(2.0 * x * y, a) * ipow(x * x + y * y - 1.0, b);
                                   if (kind == 1) f *= x + y;
                                   if (kind == 2) f *= x - y;
                                   if (kind == 3) f *= (x - y) * (x + y);
                                   return f;
                               }});
            }
        }
    return out;
}

/**
 * Polynomial of degree s + 1 that vanishes at every node of the rule but has a
 * positive integral: the square of a degree-n orthogonal polynomial whose
 * common zeros are the nodes.
 */
inline TestPoly witness(const CubatureRule& rule) {
    const JacobiParams p = rule.weight.params;
    const bool minus = rule.weight.minus();
    const int n = rule.n;
    std::function<double(double, double)> omega_sq;
    if (minus) {
        const BasisId id{BasisFamily::P_MINUS, 0, n};
        omega_sq = [id, p](double u, double v) {
            const double q = eval_basis_omega(id, p, u, v);
            return q * q;
        };
    } else {
        const BasisId id{BasisFamily::P_PLUS, 0, n - 1};
        omega_sq = [id, p](double u, double v) {
            const double q = eval_basis_omega(id, p, u, v);
            return q * q;
        };
    }
    auto on_square = [omega_sq](double x, double y) {
        const Point2 w = quad_map(x, y);
        return omega_sq(w.a, w.b);
    };
    switch (rule.domain) {
    case DomainTag::Omega: return {"witness P^2", rule.degree + 1, omega_sq};
    case DomainTag::OmegaStar:
        return {"witness P^2", rule.degree + 1, [omega_sq](double s, double t) {
                    const Point2 w = star_to_omega(s, t);
                    return omega_sq(w.a, w.b);
                }};
    case DomainTag::Square: return {"witness Q^2", rule.degree + 1, on_square};
    case DomainTag::Rhombus:
        return {"witness Q^2", rule.degree + 1, [on_square](double u, double v) {
                    const Point2 q = rotate_to_square(u, v);
                    return on_square(q.a, q.b);
                }};
    }
    return {"", 0, {}};
}

} // namespace detail

/**
 * Compares the rule with the oracle on a basis of the polynomials of degree
 * <= declared degree, and checks that some polynomial of degree declared + 1
 * is not integrated exactly (skipped when the oracle cannot certify it).
 */
inline ExactnessReport verify_exactness(const CubatureRule& rule, const ReferenceIntegrator& oracle,
                                        TestFamily family = TestFamily::Monomials) {
    if (!(oracle.weight() == rule.weight))
        throw capability_error("oracle was built for a different weight than the rule");
    const bool onsquare = rule.domain == DomainTag::Square || rule.domain == DomainTag::Rhombus;
    if (family == TestFamily::SymmetryReduced && !onsquare)
        throw contract_error("the symmetry-reduced family applies to square and rhombus rules");

    ExactnessReport rep;
    rep.declared_degree = rule.degree;
    const int s = rule.degree;
    rep.probe_certified = oracle.certified_degree() >= s + 1;

    auto polys = family == TestFamily::Monomials ? detail::monomials(0, s + 1)
                                                 : detail::symmetry_reduced(0, s + 1);
    // symmetry-reduced polynomials live on the square; pull them back to the rhombus
    const bool pull = family == TestFamily::SymmetryReduced && rule.domain == DomainTag::Rhombus;

    const std::size_t npoly = polys.size();
    polys.push_back(detail::witness(rule));
    for (std::size_t ip = 0; ip < polys.size(); ++ip) {
        const auto& tp = polys[ip];
        if (tp.degree > s && !rep.probe_certified) continue;
        std::function<double(double, double)> f = tp.f;
        if (pull && ip < npoly) {
            f = [g = tp.f](double u, double v) {
                const Point2 q = rotate_to_square(u, v);
                return g(q.a, q.b);
            };
        }
        ExactnessEntry e;
        e.label = tp.label;
        e.degree = tp.degree;
        e.cubature = apply(rule, f);
        e.reference = oracle.integrate(f);
        e.error = std::abs(e.cubature - e.reference);
        if (tp.degree <= s) {
            e.pass = e.error <= kExactnessTol * (1.0 + std::abs(e.reference));
            rep.max_error = std::max(rep.max_error, e.error);
            rep.entries.push_back(std::move(e));
        } else {
            e.pass = e.error > kProbeGap;
            rep.max_probe_error = std::max(rep.max_probe_error, e.error);
            rep.probes.push_back(std::move(e));
        }
    }
    bool all = true;
    for (const auto& e : rep.entries) all = all && e.pass;
    rep.pass = all && (!rep.probe_certified || rep.max_probe_error > kProbeGap);
    return rep;
}

} // namespace mincuba
