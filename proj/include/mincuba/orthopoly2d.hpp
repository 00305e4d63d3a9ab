#pragma once
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "jacobi1d.hpp"
#include "weights.hpp"

namespace mincuba {

enum class KernelKind {
    K_MINUS, // reproducing kernel of Pi_n on Omega, W_{-1/2}
    K_PLUS,  // same for W_{+1/2}
    CK_ODD,  // kernel of Pi_{2n-1} on the square
    CK_STAR, // augmented kernel of degree 2n on the square
};

struct KernelConstants {
    double c = 0.0;   // c_{alpha,beta}
    double c01 = 0.0; // c_{alpha,beta+1}
    double c10 = 0.0; // c_{alpha+1,beta}
    double c11 = 0.0; // c_{alpha+1,beta+1}
    double d01 = 0.0; // c01^2 / c^2
    double d10 = 0.0;
    double d11 = 0.0;
    double gamma_ab = 0.0; // c11 / (sqrt 2 c)
    double sigma2 = 0.0;   // variance of the Jacobi measure
    double b_generic = 0.0;  // b_{k,n} for k <= n-2
    std::vector<double> b;   // b_{0,n} .. b_{n-1,n}
};

/**
 * Kernel selector with its constants and the one-variable recurrences it
 * needs. Immutable after construction.
 */
class KernelSpec {
public:
    KernelSpec(KernelKind kind, const JacobiParams& params, int n) : kind_(kind), params_(params), n_(n) {
        params.validate();
        const int nmin = (kind == KernelKind::CK_ODD || kind == KernelKind::CK_STAR) ? 1 : 0;
        if (n < nmin) {
            std::ostringstream os;
            os << "kernel index n must be at least " << nmin << " (got " << n << ")";
            throw domain_error(os.str());
        }
        const int deg = n + 2;
        r00_ = Recurrence<double>(params, deg);
        r01_ = Recurrence<double>(params.shifted(0, 1), deg);
        r10_ = Recurrence<double>(params.shifted(1, 0), deg);
        r11_ = Recurrence<double>(params.shifted(1, 1), deg);

        KernelConstants& k = consts_;
        k.c = cnorm(params);
        k.c01 = cnorm(params.shifted(0, 1));
        k.c10 = cnorm(params.shifted(1, 0));
        k.c11 = cnorm(params.shifted(1, 1));
        k.d01 = (k.c01 / k.c) * (k.c01 / k.c);
        k.d10 = (k.c10 / k.c) * (k.c10 / k.c);
        k.d11 = (k.c11 / k.c) * (k.c11 / k.c);
        k.gamma_ab = k.c11 / (std::numbers::sqrt2 * k.c);
        k.sigma2 = jacobi_variance(params);
        if (n >= 1) {
            // b_{k,n}^{-1} = 2 gamma^2 hat h_{n-1} hat h_k
            const double g2 = 2.0 * k.gamma_ab * k.gamma_ab;
            const double hn1 = hat_h(params, n, n - 1);
            k.b_generic = 1.0 / (g2 * hn1 * (k.c / k.c11));
            k.b.resize(static_cast<std::size_t>(n));
            for (int m = 0; m < n; ++m) k.b[m] = 1.0 / (g2 * hn1 * hat_h(params, n, m));
        }
    }

    KernelKind kind() const { return kind_; }
    const JacobiParams& params() const { return params_; }
    int n() const { return n_; }
    const KernelConstants& consts() const { return consts_; }

    // recurrence for the (alpha+i, beta+j) polynomials
    const Recurrence<double>& rec(int i, int j) const {
        if (i == 0) return j == 0 ? r00_ : r01_;
        return j == 0 ? r10_ : r11_;
    }

private:
    KernelKind kind_;
    JacobiParams params_;
    int n_;
    KernelConstants consts_;
    Recurrence<double> r00_, r01_, r10_, r11_;
};

enum class BasisFamily { P_MINUS, P_PLUS, Q1_EVEN, Q2_EVEN };

struct BasisId {
    BasisFamily family = BasisFamily::P_MINUS;
    int k = 0;
    int n = 0;
};

namespace detail {

inline void check_basis(const BasisId& id) {
    const bool q2 = id.family == BasisFamily::Q2_EVEN;
    const int kmax = q2 ? id.n - 1 : id.n;
    if (id.n < (q2 ? 1 : 0) || id.k < 0 || id.k > kmax) {
        std::ostringstream os;
        os << "basis index out of range (k=" << id.k << ", n=" << id.n << ")";
        throw domain_error(os.str());
    }
}

// orthonormal basis of degree n for W_{-1/2}, in terms of the roots x, y
inline double p_minus(const Recurrence<double>& r, int k, int n, double x, double y) {
    const double pnx = r.value(n, x), pny = r.value(n, y);
    if (k == n) return pnx * pny;
    return (pnx * r.value(k, y) + r.value(k, x) * pny) / std::numbers::sqrt2;
}

// orthonormal basis of degree n for W_{+1/2}: sigma (p_{n+1}(x)p_k(y) - p_{n+1}(y)p_k(x)) / (x - y)
inline double p_plus(const Recurrence<double>& r, double sigma, int k, int n, double x, double y) {
    std::vector<double> px(static_cast<std::size_t>(n) + 2), d(px.size());
    r.divided(x, y, n + 1, px.data(), d.data());
    return sigma * (d[n + 1] * r.value(k, y) - r.value(n + 1, y) * d[k]);
}

// (1/2)[k_m(A,A2) k_m(B,B2) + k_m(A,B2) k_m(B,A2)], zero for m < 0
inline double kminus(const Recurrence<double>& r, int m, double A, double B, double A2, double B2) {
    if (m < 0) return 0.0;
    return 0.5 * (r.kernel_sum(m, A, A2) * r.kernel_sum(m, B, B2) +
                  r.kernel_sum(m, A, B2) * r.kernel_sum(m, B, A2));
}

/**
 * sigma^2 [k(x1,y1)k(x2,y2) - k(x1,y2)k(x2,y1)] / ((x1-x2)(y1-y2)), k = k_{m+1},
 * through the divided differences of p_l at (x1,x2) and (y1,y2).
 */
inline double kplus(const Recurrence<double>& r, double sigma2, int m, double x1, double x2, double y1,
                    double y2) {
    const int L = m + 1;
    std::vector<double> px1(static_cast<std::size_t>(L) + 1), dx(px1.size()), py1(px1.size()), dy(px1.size());
    std::vector<double> px2(px1.size()), py2(px1.size());
    r.divided(x1, x2, L, px1.data(), dx.data());
    r.divided(y1, y2, L, py1.data(), dy.data());
    r.values(x2, L, px2.data());
    r.values(y2, L, py2.data());
    double k22 = 0.0, dd = 0.0, D = 0.0, E = 0.0;
    for (int l = 0; l <= L; ++l) {
        k22 += px2[l] * py2[l];
        dd += dx[l] * dy[l];
        D += dx[l] * py2[l];
        E += dy[l] * px2[l];
    }
    return sigma2 * (k22 * dd - D * E);
}

} // namespace detail

// P_{k,n}^{(-1/2)} or P_{k,n}^{(+1/2)} at (u, v) in Omega, orthonormal
inline double eval_basis_omega(const BasisId& id, const JacobiParams& params, double u, double v) {
    params.validate();
    detail::check_basis(id);
    const auto [x, y] = omega_roots(u, v);
    if (id.family == BasisFamily::P_MINUS) {
        const Recurrence<double> r(params, id.n);
        return detail::p_minus(r, id.k, id.n, x, y);
    }
    if (id.family == BasisFamily::P_PLUS) {
        const Recurrence<double> r(params, id.n + 1);
        return detail::p_plus(r, std::sqrt(jacobi_variance(params)), id.k, id.n, x, y);
    }
    throw contract_error("eval_basis_omega takes P_MINUS or P_PLUS");
}

/**
 * Orthonormal even-degree basis on the square for the weight with gamma = -1/2:
 *   1Q_{k,2n}(x,y) = P_{k,n}^{(-1/2)}(2xy, x^2+y^2-1), 0 <= k <= n,
 *   2Q_{k,2n}(x,y) = g (x^2-y^2)[p_{n-1}(A)p_k(B) + p_k(A)p_{n-1}(B)], 0 <= k <= n-1,
 * with (alpha+1, beta+1) polynomials in 2Q, g = c_{a+1,b+1}/(sqrt 2 c_{a,b}),
 * 2Q_{n-1,2n} scaled by sqrt(2)/2, and A, B = xy +- sqrt(1-x^2)sqrt(1-y^2).
 */
inline double eval_basis_square(const BasisId& id, const JacobiParams& params, double x, double y) {
    params.validate();
    detail::check_basis(id);
    const auto [A, B] = half_angle_args(x, y);
    if (id.family == BasisFamily::Q1_EVEN) {
        const Recurrence<double> r(params, id.n);
        return detail::p_minus(r, id.k, id.n, A, B);
    }
    if (id.family == BasisFamily::Q2_EVEN) {
        const JacobiParams p11 = params.shifted(1, 1);
        const Recurrence<double> r(p11, id.n);
        const double g = cnorm(p11) / (std::numbers::sqrt2 * cnorm(params));
        const int m = id.n - 1;
        double s = r.value(m, A) * r.value(id.k, B) + r.value(id.k, A) * r.value(m, B);
        if (id.k == m) s *= std::numbers::sqrt2 / 2.0;
        return g * (x - y) * (x + y) * s;
    }
    throw contract_error("eval_basis_square takes Q1_EVEN or Q2_EVEN");
}

// K_n^{(-1/2)} or K_n^{(+1/2)} between two points of Omega
inline double kernel_omega(const KernelSpec& spec, Point2 P, Point2 Q) {
    const auto [x1, x2] = omega_roots(P.a, P.b);
    const auto [y1, y2] = omega_roots(Q.a, Q.b);
    const Recurrence<double>& r = spec.rec(0, 0);
    switch (spec.kind()) {
    case KernelKind::K_MINUS: return detail::kminus(r, spec.n(), x1, x2, y1, y2);
    case KernelKind::K_PLUS: return detail::kplus(r, spec.consts().sigma2, spec.n(), x1, x2, y1, y2);
    default: throw contract_error("kernel_omega takes K_MINUS or K_PLUS");
    }
}

/**
 * Reproducing kernel of Pi_{2n-1} on the square (gamma = -1/2):
 *   K^{a,b}_{n-1}(s,t) + d11 (x1^2-x2^2)(y1^2-y2^2) K^{a+1,b+1}_{n-2}(s,t)
 *   + d01 (x1+x2)(y1+y2) K^{a,b+1}_{n-1}(s,t) + d10 (x1-x2)(y1-y2) K^{a+1,b}_{n-1}(s,t),
 * K^{a,b}_m(s,t) being the W_{-1/2} kernel at the Omega images of x and y.
 */
inline double kernel_square_odd(const KernelSpec& spec, Point2 X, Point2 Y) {
    if (spec.kind() != KernelKind::CK_ODD && spec.kind() != KernelKind::CK_STAR)
        throw contract_error("kernel_square_odd takes CK_ODD or CK_STAR");
    const int n = spec.n();
    const KernelConstants& k = spec.consts();
    const auto [A, B] = half_angle_args(X.a, X.b);
    const auto [A2, B2] = half_angle_args(Y.a, Y.b);
    const double E = (X.a - X.b) * (X.a + X.b) * (Y.a - Y.b) * (Y.a + Y.b);
    const double P = (X.a + X.b) * (Y.a + Y.b);
    const double M = (X.a - X.b) * (Y.a - Y.b);
    return detail::kminus(spec.rec(0, 0), n - 1, A, B, A2, B2) +
           k.d11 * E * detail::kminus(spec.rec(1, 1), n - 2, A, B, A2, B2) +
           k.d01 * P * detail::kminus(spec.rec(0, 1), n - 1, A, B, A2, B2) +
           k.d10 * M * detail::kminus(spec.rec(1, 0), n - 1, A, B, A2, B2);
}

/**
 * Augmented kernel of degree 2n:
 *   K_{2n-1} + b d11 (x1^2-x2^2)(y1^2-y2^2)[K^{a+1,b+1}_{n-1} - K^{a+1,b+1}_{n-2}]
 *   - n(1+a+b+n)/(1+a+b+2n)^2 2Q_{n-1,2n}(x) 2Q_{n-1,2n}(y),
 * b = (1+a+b+n)/(1+a+b+2n).
 */
inline double kernel_square_star(const KernelSpec& spec, Point2 X, Point2 Y) {
    if (spec.kind() != KernelKind::CK_STAR) throw contract_error("kernel_square_star takes CK_STAR");
    const int n = spec.n();
    const KernelConstants& k = spec.consts();
    const auto [A, B] = half_angle_args(X.a, X.b);
    const auto [A2, B2] = half_angle_args(Y.a, Y.b);
    const double E = (X.a - X.b) * (X.a + X.b) * (Y.a - Y.b) * (Y.a + Y.b);
    const Recurrence<double>& r11 = spec.rec(1, 1);
    const double top = detail::kminus(r11, n - 1, A, B, A2, B2) - detail::kminus(r11, n - 2, A, B, A2, B2);
    const double b0 = k.b_generic;
    // 2Q_{n-1,2n}(x) 2Q_{n-1,2n}(y) = 2 g^2 E p(A)p(B)p(A2)p(B2)
    const double qq = 2.0 * k.gamma_ab * k.gamma_ab * E * r11.value(n - 1, A) * r11.value(n - 1, B) *
                      r11.value(n - 1, A2) * r11.value(n - 1, B2);
    return kernel_square_odd(spec, X, Y) + b0 * k.d11 * E * top + (b0 * b0 - b0) * qq;
}

// K_{2n-1} + sum_k b_{k,n} 2Q_{k,2n}(x) 2Q_{k,2n}(y)
inline double kernel_square_star_sum_form(const KernelSpec& spec, Point2 X, Point2 Y) {
    if (spec.kind() != KernelKind::CK_STAR) throw contract_error("kernel_square_star takes CK_STAR");
    const int n = spec.n();
    double s = kernel_square_odd(spec, X, Y);
    for (int m = 0; m < n; ++m) {
        const BasisId id{BasisFamily::Q2_EVEN, m, n};
        s += spec.consts().b[m] * eval_basis_square(id, spec.params(), X.a, X.b) *
             eval_basis_square(id, spec.params(), Y.a, Y.b);
    }
    return s;
}

} // namespace mincuba
