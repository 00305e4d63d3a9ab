#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "jacobi1d.hpp"
#include "summation.hpp"
#include "weights.hpp"

namespace mincuba {

/**
 * Ground-truth integrals against a WeightSpec.
 *
 * On Omega, u = X + Y and v = XY with X, Y independent draws from the
 * normalized Jacobi measure, so
 *   int f W_{-1/2} = E[f(X+Y, XY)],
 *   int f W_{+1/2} = E[(X-Y)^2 f(X+Y, XY)] / (2 sigma^2),
 * evaluated with an M-point product Gauss-Jacobi rule.
 *
 * On the square the weight is invariant under (x,y) -> (y,x) and
 * (x,y) -> (-x,-y). The invariant part of f is a polynomial in
 * (2xy, x^2+y^2-1), and its value at an Omega point is read off at one square
 * preimage. Omega* and the rhombus are reached by their linear maps.
 */
class ReferenceIntegrator {
public:
    explicit ReferenceIntegrator(const WeightSpec& w, int order = 64) : w_(w), M_(order) {
        if (w.gamma != -0.5 && w.gamma != 0.5)
            throw capability_error("reference integrals are available for gamma = -1/2 and +1/2 only");
        w.validate();
        if (order < 2) throw domain_error("oracle order must be at least 2");
        const QuadRule1D q = gauss_rule(w.params, M_);
        const double var = jacobi_variance(w.params);
        const std::size_t N = static_cast<std::size_t>(M_) * M_;
        wts_.reserve(N);
        omega_.reserve(N);
        square_.reserve(N);
        for (int i = 0; i < M_; ++i) {
            for (int j = 0; j < M_; ++j) {
                const double X = q.nodes[i], Y = q.nodes[j];
                double wt = q.weights[i] * q.weights[j];
                if (!w.minus()) wt *= (X - Y) * (X - Y) / (2.0 * var);
                wts_.push_back(wt);
                omega_.push_back({X + Y, X * Y});
                square_.push_back(square_preimage(X, Y));
            }
        }
    }

    // order large enough for polynomials of total degree <= degree
    static ReferenceIntegrator for_degree(const WeightSpec& w, int degree) {
        return ReferenceIntegrator(w, std::max(64, 2 * degree + 8));
    }

    const WeightSpec& weight() const { return w_; }
    int order() const { return M_; }

    // highest total degree integrated exactly in the weight's own coordinates
    int certified_degree() const {
        const int omega = 2 * M_ - 1 - (w_.minus() ? 0 : 2);
        switch (w_.family) {
        case WeightFamily::W_OMEGA:
        case WeightFamily::W_STAR: return omega;
        case WeightFamily::CW_SQUARE:
        case WeightFamily::U_RHOMBUS: return 2 * omega + 1;
        }
        return omega;
    }

    template <class F>
    double integrate_omega(F&& f) const {
        NeumaierSum s;
        for (std::size_t k = 0; k < wts_.size(); ++k) s.add(wts_[k] * f(omega_[k].a, omega_[k].b));
        return s.value();
    }

    template <class F>
    double integrate_square(F&& f) const {
        NeumaierSum s;
        for (std::size_t k = 0; k < wts_.size(); ++k) {
            const double x = square_[k].a, y = square_[k].b;
            const double avg = 0.25 * (f(x, y) + f(y, x) + f(-x, -y) + f(-y, -x));
            s.add(wts_[k] * avg);
        }
        return s.value();
    }

    // f takes the coordinates of the weight's own domain
    template <class F>
    double integrate(F&& f) const {
        switch (w_.family) {
        case WeightFamily::W_OMEGA: return integrate_omega(f);
        case WeightFamily::W_STAR:
            return integrate_omega([&](double u, double v) {
                const Point2 p = omega_to_star_unchecked({u, v});
                return f(p.a, p.b);
            });
        case WeightFamily::CW_SQUARE: return integrate_square(f);
        case WeightFamily::U_RHOMBUS:
            return integrate_square([&](double x, double y) {
                const Point2 p = square_to_rhombus(x, y);
                return f(p.a, p.b);
            });
        }
        return 0.0;
    }

private:
    WeightSpec w_;
    int M_;
    std::vector<double> wts_;
    std::vector<Point2> omega_;
    std::vector<Point2> square_;
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

namespace detail {

// X with density c (1-x)^alpha (1+x)^beta: (1+X)/2 ~ Beta(beta+1, alpha+1)
class JacobiSampler {
public:
    explicit JacobiSampler(const JacobiParams& p) : ga_(p.beta + 1.0, 1.0), gb_(p.alpha + 1.0, 1.0) {}
    template <class G>
    double operator()(G& g) {
        const double a = ga_(g), b = gb_(g);
        return 2.0 * a / (a + b) - 1.0;
    }

private:
    std::gamma_distribution<double> ga_, gb_;
};

} // namespace detail

/**
 * Importance-sampled estimate of int f dmu. Omega and Omega* draw (X, Y) from
 * the Jacobi measure; the square and rhombus draw from the product Chebyshev
 * density, which needs 2 alpha + 1 >= 0 and 2 beta + 1 >= 0 for a bounded ratio.
 */
template <class F>
MonteCarloEstimate montecarlo_check(F&& f, const WeightSpec& w, std::size_t samples,
                                    std::uint64_t seed = 12345) {
    w.validate();
    if (samples < 2) throw domain_error("Monte Carlo needs at least two samples");
    std::mt19937_64 gen(seed);
    double mean = 0.0, m2 = 0.0;
    auto push = [&](std::size_t k, double g) {
        const double d = g - mean;
        mean += d / static_cast<double>(k + 1);
        m2 += d * (g - mean);
    };

    if (w.family == WeightFamily::W_OMEGA || w.family == WeightFamily::W_STAR) {
        detail::JacobiSampler sx(w.params), sy(w.params);
        const double var = jacobi_variance(w.params);
        for (std::size_t k = 0; k < samples; ++k) {
            const double X = sx(gen), Y = sy(gen);
            double g = 1.0;
            if (!w.minus()) g = (X - Y) * (X - Y) / (2.0 * var);
            Point2 p{X + Y, X * Y};
            if (w.family == WeightFamily::W_STAR) p = omega_to_star_unchecked(p);
            push(k, g * f(p.a, p.b));
        }
    } else {
        const double ea = 2.0 * w.params.alpha + 1.0, eb = 2.0 * w.params.beta + 1.0;
        if (ea < 0.0 || eb < 0.0)
            throw capability_error("Monte Carlo on the square needs 2 alpha + 1 >= 0 and 2 beta + 1 >= 0");
        const double b = omega_normalization(w.params, w.gamma);
        const double pi2 = std::numbers::pi * std::numbers::pi;
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (std::size_t k = 0; k < samples; ++k) {
            const double x = std::cos(std::numbers::pi * U(gen));
            const double y = std::cos(std::numbers::pi * U(gen));
            double ratio = b * pi2 * std::pow(std::abs(x - y), ea) * std::pow(std::abs(x + y), eb);
            if (w.minus())
                ratio *= 0.5;
            else
                ratio *= 2.0 * (1.0 - x * x) * (1.0 - y * y);
            Point2 p{x, y};
            if (w.family == WeightFamily::U_RHOMBUS) p = square_to_rhombus(x, y);
            push(k, ratio * f(p.a, p.b));
        }
    }
    const double var = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

} // namespace mincuba
