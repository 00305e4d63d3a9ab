#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include "errors.hpp"

namespace mincuba {

// Exponents of the Jacobi weight (1-x)^alpha (1+x)^beta.
struct JacobiParams {
    double alpha = 0.0;
    double beta = 0.0;

    JacobiParams shifted(int i, int j) const { return {alpha + i, beta + j}; }

    bool admissible() const {
        return std::isfinite(alpha) && std::isfinite(beta) && alpha > -1.0 && beta > -1.0;
    }

    void validate() const {
        if (!admissible()) {
            std::ostringstream os;
            os << "Jacobi parameters must satisfy alpha > -1 and beta > -1 (got alpha=" << alpha
               << ", beta=" << beta << ")";
            throw parameter_error(os.str());
        }
    }

    friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
};

struct JacobiConstants {
    double lead = 0.0;  // leading coefficient of P_n
    double norm = 0.0;  // c * int P_n^2 w
    double cnorm = 0.0; // c with c * int w = 1
};

// Gauss-Jacobi rule for the normalized measure c w(x) dx. Nodes descending.
struct QuadRule1D {
    JacobiParams params;
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> thetas;
    std::vector<double> weights;
};

inline double log_cnorm(const JacobiParams& p) {
    const double a = p.alpha, b = p.beta;
    return std::lgamma(a + b + 2.0) - (a + b + 1.0) * std::numbers::ln2 - std::lgamma(a + 1.0) -
           std::lgamma(b + 1.0);
}

inline double cnorm(const JacobiParams& p) {
    p.validate();
    return std::exp(log_cnorm(p));
}

/**
 * Three-term recurrence of the orthonormal Jacobi polynomials
 *   x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1},  p_0 = 1,
 * holding coefficients for degrees 0..N.
 */
template <class Real = double>
class Recurrence {
public:
    Recurrence() = default;

    Recurrence(const JacobiParams& p, int max_degree) : params_(p), N_(max_degree) {
        p.validate();
        if (max_degree < 0) throw domain_error("recurrence degree must be non-negative");
        const Real al = p.alpha, be = p.beta, s = al + be;
        a_.assign(static_cast<std::size_t>(N_) + 1, Real(0));
        b_.assign(static_cast<std::size_t>(N_) + 1, Real(0));
        b_[0] = (be - al) / (s + 2);
        for (int k = 1; k <= N_; ++k) {
            const Real t = 2 * k + s;
            b_[k] = (be * be - al * al) / (t * (t + 2));
        }
        for (int k = 1; k <= N_; ++k) {
            Real a2;
            if (k == 1) {
                a2 = 4 * (1 + al) * (1 + be) / ((2 + s) * (2 + s) * (3 + s));
            } else {
                const Real t = 2 * k + s;
                a2 = 4 * Real(k) * (k + al) * (k + be) * (k + s) / (t * t * (t + 1) * (t - 1));
            }
            a_[k] = std::sqrt(a2);
        }
    }

    const JacobiParams& params() const { return params_; }
    int max_degree() const { return N_; }
    Real a(int k) const { return a_[static_cast<std::size_t>(k)]; }
    Real b(int k) const { return b_[static_cast<std::size_t>(k)]; }

    // p_0(x)..p_m(x) into out[0..m]
    void values(Real x, int m, Real* out) const {
        out[0] = 1;
        if (m == 0) return;
        out[1] = (x - b_[0]) / a_[1];
        for (int k = 1; k < m; ++k)
            out[k + 1] = ((x - b_[k]) * out[k] - a_[k] * out[k - 1]) / a_[k + 1];
    }

    std::vector<Real> values(Real x, int m) const {
        std::vector<Real> out(static_cast<std::size_t>(m) + 1);
        values(x, m, out.data());
        return out;
    }

    Real value(int m, Real x) const {
        Real p0 = 1;
        if (m == 0) return p0;
        Real p1 = (x - b_[0]) / a_[1];
        for (int k = 1; k < m; ++k) {
            const Real p2 = ((x - b_[k]) * p1 - a_[k] * p0) / a_[k + 1];
            p0 = p1;
            p1 = p2;
        }
        return p1;
    }

    // values and first derivatives
    void derivatives(Real x, int m, Real* p, Real* dp) const {
        p[0] = 1;
        dp[0] = 0;
        if (m == 0) return;
        p[1] = (x - b_[0]) / a_[1];
        dp[1] = 1 / a_[1];
        for (int k = 1; k < m; ++k) {
            p[k + 1] = ((x - b_[k]) * p[k] - a_[k] * p[k - 1]) / a_[k + 1];
            dp[k + 1] = (p[k] + (x - b_[k]) * dp[k] - a_[k] * dp[k - 1]) / a_[k + 1];
        }
    }

    /**
     * Divided differences d[k] = (p_k(x1) - p_k(x2)) / (x1 - x2), k = 0..m.
     * Exact in the confluent case x1 == x2, where it returns p_k'(x1).
     * p1 receives p_k(x1).
     */
    void divided(Real x1, Real x2, int m, Real* p1, Real* d) const {
        p1[0] = 1;
        d[0] = 0;
        if (m == 0) return;
        p1[1] = (x1 - b_[0]) / a_[1];
        d[1] = 1 / a_[1];
        for (int k = 1; k < m; ++k) {
            p1[k + 1] = ((x1 - b_[k]) * p1[k] - a_[k] * p1[k - 1]) / a_[k + 1];
            d[k + 1] = (p1[k] + (x2 - b_[k]) * d[k] - a_[k] * d[k - 1]) / a_[k + 1];
        }
    }

    // sum_{j<=n} p_j(x) p_j(y), direct
    Real kernel_sum(int n, Real x, Real y) const {
        Real px0 = 1, py0 = 1, s = 1;
        if (n == 0) return s;
        Real px1 = (x - b_[0]) / a_[1], py1 = (y - b_[0]) / a_[1];
        s += px1 * py1;
        for (int k = 1; k < n; ++k) {
            const Real px2 = ((x - b_[k]) * px1 - a_[k] * px0) / a_[k + 1];
            const Real py2 = ((y - b_[k]) * py1 - a_[k] * py0) / a_[k + 1];
            px0 = px1;
            px1 = px2;
            py0 = py1;
            py1 = py2;
            s += px1 * py1;
        }
        return s;
    }

private:
    JacobiParams params_;
    int N_ = -1;
    std::vector<Real> a_;
    std::vector<Real> b_;
};

inline void check_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw domain_error(std::string(what) + " must be finite");
}

// P_n^{(alpha,beta)}(x), classical normalization P_n(1) = (alpha+1)_n / n!
inline double eval_jacobi(const JacobiParams& p, int n, double x) {
    p.validate();
    if (n < 0) throw domain_error("degree must be non-negative");
    check_finite(x, "x");
    const double a = p.alpha, b = p.beta, s = a + b;
    double P0 = 1.0;
    if (n == 0) return P0;
    double P1 = (a + 1.0) + (s + 2.0) * (x - 1.0) / 2.0;
    for (int m = 2; m <= n; ++m) {
        const double t = 2.0 * m + s;
        const double c0 = 2.0 * m * (m + s) * (t - 2.0);
        const double c1 = (t - 1.0) * (t * (t - 2.0) * x + a * a - b * b);
        const double c2 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * t;
        const double P2 = (c1 * P1 - c2 * P0) / c0;
        P0 = P1;
        P1 = P2;
    }
    return P1;
}

inline double eval_orthonormal(const JacobiParams& p, int n, double x) {
    if (n < 0) throw domain_error("degree must be non-negative");
    check_finite(x, "x");
    return Recurrence<double>(p, n).value(n, x);
}

inline JacobiConstants constants(const JacobiParams& p, int n) {
    p.validate();
    if (n < 0) throw domain_error("degree must be non-negative");
    const double a = p.alpha, b = p.beta, s = a + b;
    JacobiConstants c;
    c.cnorm = std::exp(log_cnorm(p));
    if (n == 0) {
        c.lead = 1.0;
        c.norm = 1.0;
    } else {
        const double log_lead = std::lgamma(2.0 * n + s + 1.0) - std::lgamma(n + s + 1.0) -
                                n * std::numbers::ln2 - std::lgamma(n + 1.0);
        const double log_norm = std::lgamma(s + 2.0) + std::lgamma(n + a + 1.0) +
                                std::lgamma(n + b + 1.0) - std::log(2.0 * n + s + 1.0) -
                                std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
                                std::lgamma(n + 1.0) - std::lgamma(n + s + 1.0);
        c.lead = std::exp(log_lead);
        c.norm = std::exp(log_norm);
    }
    if (!std::isfinite(c.lead) || !std::isfinite(c.norm) || !std::isfinite(c.cnorm) ||
        c.lead <= 0.0 || c.norm <= 0.0 || c.cnorm <= 0.0) {
        std::ostringstream os;
        os << "Jacobi constants out of double range for n=" << n;
        throw range_error(os.str());
    }
    return c;
}

inline bool confluent(double x, double y) {
    return std::abs(x - y) < 1e-6 * (1.0 + std::abs(x) + std::abs(y));
}

// k_n(x,y) = sum_{j<=n} p_j(x) p_j(y)
inline double cd_kernel(const JacobiParams& p, int n, double x, double y) {
    if (n < 0) throw domain_error("degree must be non-negative");
    check_finite(x, "x");
    check_finite(y, "y");
    const Recurrence<double> r(p, n + 1);
    if (confluent(x, y)) return r.kernel_sum(n, x, y);
    std::vector<double> px(static_cast<std::size_t>(n) + 2), py(px.size());
    r.values(x, n + 1, px.data());
    r.values(y, n + 1, py.data());
    return r.a(n + 1) * (px[n + 1] * py[n] - px[n] * py[n + 1]) / (x - y);
}

namespace detail {

inline std::vector<double> tridiagonal_eigenvalues(const Recurrence<double>& r, int n,
                                                   Eigen::MatrixXd* vectors) {
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) diag(k) = r.b(k);
    for (int k = 0; k + 1 < n; ++k) sub(k) = r.a(k + 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub,
                              vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "tridiagonal eigensolver did not converge for n=" << n;
        throw numeric_error(os.str());
    }
    if (vectors) *vectors = es.eigenvectors();
    return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

} // namespace detail

inline QuadRule1D gauss_rule(const JacobiParams& p, int n) {
    p.validate();
    if (n < 1) throw domain_error("Gauss rule needs n >= 1");
    const Recurrence<double> r(p, n);
    std::vector<double> x = detail::tridiagonal_eigenvalues(r, n, nullptr);
    std::sort(x.begin(), x.end(), std::greater<>());

    std::vector<double> pv(static_cast<std::size_t>(n) + 1), dv(pv.size());
    for (int k = 0; k < n; ++k) {
        for (int it = 0; it < 2; ++it) {
            r.derivatives(x[k], n, pv.data(), dv.data());
            if (dv[n] == 0.0 || !std::isfinite(dv[n])) break;
            x[k] -= pv[n] / dv[n];
        }
        if (!(x[k] > -1.0 && x[k] < 1.0) || !std::isfinite(x[k])) {
            std::ostringstream os;
            os << "Gauss node " << k + 1 << " of " << n << " left (-1,1) during refinement";
            throw numeric_error(os.str());
        }
        if (k > 0 && !(x[k] < x[k - 1])) {
            std::ostringstream os;
            os << "Gauss nodes " << k << " and " << k + 1 << " not strictly decreasing";
            throw numeric_error(os.str());
        }
    }

    QuadRule1D q;
    q.params = p;
    q.n = n;
    q.nodes = x;
    q.thetas.resize(n);
    q.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        r.values(x[k], n - 1, pv.data());
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += pv[j] * pv[j];
        q.weights[k] = 1.0 / s;
        q.thetas[k] = 2.0 * std::atan2(std::sqrt((1.0 - x[k]) / 2.0), std::sqrt((1.0 + x[k]) / 2.0));
    }
    return q;
}

// Weights from the first eigenvector components (cross-check only).
inline std::vector<double> gauss_rule_eigenvector_weights(const JacobiParams& p, int n) {
    p.validate();
    if (n < 1) throw domain_error("Gauss rule needs n >= 1");
    const Recurrence<double> r(p, n);
    Eigen::MatrixXd V;
    std::vector<double> x = detail::tridiagonal_eigenvalues(r, n, &V);
    std::vector<std::pair<double, double>> xw(n);
    for (int k = 0; k < n; ++k) xw[k] = {x[k], V(0, k) * V(0, k)};
    std::sort(xw.begin(), xw.end(), [](auto& l, auto& rr) { return l.first > rr.first; });
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) w[k] = xw[k].second;
    return w;
}

/**
 * hat h_m = sum_k lambda_k (1 - x_k^2) [p_m^{(alpha+1,beta+1)}(x_k)]^2 over the
 * n-point rule, in closed form.
 */
inline double hat_h(const JacobiParams& p, int n, int m) {
    p.validate();
    if (m < 0 || m >= n) {
        std::ostringstream os;
        os << "hat_h needs 0 <= m <= n-1 (got n=" << n << ", m=" << m << ")";
        throw domain_error(os.str());
    }
    const double a = p.alpha, b = p.beta, s = a + b;
    const double base = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) * (3.0 + s));
    if (m <= n - 2) return base;
    return base * (1.0 + s + 2.0 * n) / (1.0 + s + n);
}

/**
 * Fundamental polynomials of interpolation at the nodes of a Gauss rule,
 *   l_k(x) = lambda_k sum_{r<n} p_r(x_k) p_r(x).
 */
class Lagrange1D {
public:
    explicit Lagrange1D(QuadRule1D rule) : rule_(std::move(rule)), rec_(rule_.params, rule_.n) {
        const int n = rule_.n;
        table_.assign(static_cast<std::size_t>(n) * n, 0.0);
        std::vector<double> pv(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            rec_.values(rule_.nodes[k], n - 1, pv.data());
            for (int r = 0; r < n; ++r) table_[k * n + r] = rule_.weights[k] * pv[r];
        }
    }

    const QuadRule1D& rule() const { return rule_; }
    int size() const { return rule_.n; }

    // l_0(x)..l_{n-1}(x)
    void basis(double x, double* out) const {
        const int n = rule_.n;
        std::vector<double> pv(static_cast<std::size_t>(n));
        rec_.values(x, n - 1, pv.data());
        for (int k = 0; k < n; ++k) {
            const double* t = &table_[k * n];
            double s = 0.0;
            for (int r = 0; r < n; ++r) s += t[r] * pv[r];
            out[k] = s;
        }
    }

    // l_k(x), l_k(y) and the divided differences l_k[x,y]
    void basis_divided(double x, double y, double* lx, double* ly, double* dd) const {
        const int n = rule_.n;
        std::vector<double> px(static_cast<std::size_t>(n)), py(px.size()), d(px.size());
        rec_.divided(x, y, n - 1, px.data(), d.data());
        rec_.values(y, n - 1, py.data());
        for (int k = 0; k < n; ++k) {
            const double* t = &table_[k * n];
            double sx = 0.0, sy = 0.0, sd = 0.0;
            for (int r = 0; r < n; ++r) {
                sx += t[r] * px[r];
                sy += t[r] * py[r];
                sd += t[r] * d[r];
            }
            lx[k] = sx;
            ly[k] = sy;
            dd[k] = sd;
        }
    }

    double operator()(const std::vector<double>& samples, double x) const {
        if (samples.size() != static_cast<std::size_t>(rule_.n))
            throw domain_error("sample count must equal the number of nodes");
        std::vector<double> l(static_cast<std::size_t>(rule_.n));
        basis(x, l.data());
        double s = 0.0;
        for (int k = 0; k < rule_.n; ++k) s += samples[k] * l[k];
        return s;
    }

private:
    QuadRule1D rule_;
    Recurrence<double> rec_;
    std::vector<double> table_;
};

inline double lagrange1d(const QuadRule1D& rule, const std::vector<double>& samples, double x) {
    return Lagrange1D(rule)(samples, x);
}

struct LebesgueResult1D {
    double value = 0.0;
    double argmax = 0.0;
    int grid = 0;
};

/**
 * max_x sum_k lambda_k |k_n^{i,j}(x, x_k)| with the shifted kernel
 * (1-x)^{i/2}(1+x)^{j/2}(1-y)^{i/2}(1+y)^{j/2} k_n^{(alpha+i,beta+j)}(x,y).
 * Scan of cos(pi m / M), then Brent refinement around the best grid point.
 */
inline LebesgueResult1D lebesgue1d(const JacobiParams& p, int n, int i, int j, int grid_size) {
    p.validate();
    if (n < 1) throw domain_error("lebesgue1d needs n >= 1");
    if ((i != 0 && i != 1) || (j != 0 && j != 1)) throw domain_error("i and j must be 0 or 1");
    if (grid_size < 8 * n) throw domain_error("grid_size must be at least 8n");
    const QuadRule1D rule = gauss_rule(p, n);
    const Recurrence<double> rec(p.shifted(i, j), n);

    auto factor = [i, j](double x) {
        double f = 1.0;
        if (i) f *= std::sqrt(std::max(0.0, 1.0 - x));
        if (j) f *= std::sqrt(std::max(0.0, 1.0 + x));
        return f;
    };
    std::vector<double> table(static_cast<std::size_t>(n) * (n + 1));
    for (int k = 0; k < n; ++k) {
        rec.values(rule.nodes[k], n, &table[k * (n + 1)]);
        const double s = rule.weights[k] * factor(rule.nodes[k]);
        for (int r = 0; r <= n; ++r) table[k * (n + 1) + r] *= s;
    }
    std::vector<double> pv(static_cast<std::size_t>(n) + 1);
    auto lambda_fn = [&](double x) {
        rec.values(x, n, pv.data());
        double tot = 0.0;
        for (int k = 0; k < n; ++k) {
            const double* t = &table[k * (n + 1)];
            double s = 0.0;
            for (int r = 0; r <= n; ++r) s += t[r] * pv[r];
            tot += std::abs(s);
        }
        return factor(x) * tot;
    };

    const int M = std::max(grid_size, 1024);
    std::vector<double> xs(static_cast<std::size_t>(M) + 1);
    int best = 0;
    double best_val = -1.0;
    for (int m = 0; m <= M; ++m) {
        xs[m] = std::cos(std::numbers::pi * m / M);
        const double v = lambda_fn(xs[m]);
        if (v > best_val) {
            best_val = v;
            best = m;
        }
    }
    LebesgueResult1D res{best_val, xs[best], M + 1};
    const double lo = xs[std::min(best + 1, M)], hi = xs[std::max(best - 1, 0)];
    if (hi > lo) {
        auto r = boost::math::tools::brent_find_minima([&](double x) { return -lambda_fn(x); },
                                                       lo, hi, 40);
        if (-r.second > res.value) {
            res.value = -r.second;
            res.argmax = r.first;
        }
    }
    return res;
}

} // namespace mincuba
