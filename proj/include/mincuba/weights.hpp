#pragma once
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "geometry.hpp"
#include "jacobi1d.hpp"

namespace mincuba {

enum class WeightFamily { W_OMEGA, W_STAR, U_RHOMBUS, CW_SQUARE };

inline std::string_view to_string(WeightFamily f) {
    switch (f) {
    case WeightFamily::W_OMEGA: return "W_OMEGA";
    case WeightFamily::W_STAR: return "W_STAR";
    case WeightFamily::U_RHOMBUS: return "U_RHOMBUS";
    case WeightFamily::CW_SQUARE: return "CW_SQUARE";
    }
    return "?";
}

inline WeightFamily family_from_string(std::string_view s) {
    if (s == "W_OMEGA") return WeightFamily::W_OMEGA;
    if (s == "W_STAR") return WeightFamily::W_STAR;
    if (s == "U_RHOMBUS") return WeightFamily::U_RHOMBUS;
    if (s == "CW_SQUARE") return WeightFamily::CW_SQUARE;
    throw input_error("unknown weight family '" + std::string(s) + "'");
}

inline DomainTag domain_of(WeightFamily f) {
    switch (f) {
    case WeightFamily::W_OMEGA: return DomainTag::Omega;
    case WeightFamily::W_STAR: return DomainTag::OmegaStar;
    case WeightFamily::U_RHOMBUS: return DomainTag::Rhombus;
    case WeightFamily::CW_SQUARE: return DomainTag::Square;
    }
    return DomainTag::Omega;
}

inline WeightFamily family_of(DomainTag d) {
    switch (d) {
    case DomainTag::Omega: return WeightFamily::W_OMEGA;
    case DomainTag::OmegaStar: return WeightFamily::W_STAR;
    case DomainTag::Rhombus: return WeightFamily::U_RHOMBUS;
    case DomainTag::Square: return WeightFamily::CW_SQUARE;
    }
    return WeightFamily::W_OMEGA;
}

/**
 * W(u,v) = b (1-u+v)^alpha (1+u+v)^beta (u^2-4v)^gamma on Omega, and its
 * images on Omega*, the rhombus and the square. gamma is -1/2 or +1/2.
 */
struct WeightSpec {
    WeightFamily family = WeightFamily::W_OMEGA;
    JacobiParams params;
    double gamma = -0.5;

    bool minus() const { return gamma < 0.0; }
    DomainTag domain() const { return domain_of(family); }

    void validate() const {
        params.validate();
        if (gamma != -0.5 && gamma != 0.5) {
            std::ostringstream os;
            os << "gamma must be -1/2 or +1/2 (got " << gamma << ")";
            throw parameter_error(os.str());
        }
        if (!(params.alpha + gamma + 0.5 > -1.0) || !(params.beta + gamma + 0.5 > -1.0))
            throw parameter_error("weight is not integrable for these exponents");
    }

    friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

// variance of the normalized Jacobi measure
inline double jacobi_variance(const JacobiParams& p) {
    const Recurrence<double> r(p, 1);
    return r.a(1) * r.a(1);
}

// b with int_Omega W = 1: 2c^2 for gamma = -1/2 and c^2 / sigma^2 for gamma = +1/2
inline double omega_normalization(const JacobiParams& p, double gamma) {
    const double c = cnorm(p);
    return gamma < 0.0 ? 2.0 * c * c : c * c / jacobi_variance(p);
}

inline double omega_density(const WeightSpec& w, double u, double v) {
    const double b = omega_normalization(w.params, w.gamma);
    const double d = u * u - 4.0 * v;
    if (d <= 0.0 && w.minus()) return 0.0;
    return b * std::pow(std::max(0.0, 1.0 - u + v), w.params.alpha) *
           std::pow(std::max(0.0, 1.0 + u + v), w.params.beta) * std::pow(std::max(0.0, d), w.gamma);
}

// density of the weight family at a point of its own domain
inline double density(const WeightSpec& w, Point2 p) {
    w.validate();
    if (!contains(w.domain(), p)) return 0.0;
    switch (w.family) {
    case WeightFamily::W_OMEGA: return omega_density(w, p.a, p.b);
    case WeightFamily::W_STAR: {
        const Point2 q = star_to_omega(p.a, p.b);
        return 8.0 * omega_density(w, q.a, q.b);
    }
    case WeightFamily::CW_SQUARE:
    case WeightFamily::U_RHOMBUS: {
        const Point2 q = w.family == WeightFamily::U_RHOMBUS ? rotate_to_square(p.a, p.b) : p;
        const double x = q.a, y = q.b;
        const double b = omega_normalization(w.params, w.gamma);
        const double g = std::max(0.0, (1.0 - x * x) * (1.0 - y * y));
        if (g == 0.0 && w.minus()) return 0.0;
        const double val = b * std::pow(4.0, w.gamma) *
                           std::pow(std::abs(x - y), 2.0 * w.params.alpha + 1.0) *
                           std::pow(std::abs(x + y), 2.0 * w.params.beta + 1.0) * std::pow(g, w.gamma);
        return w.family == WeightFamily::U_RHOMBUS ? 2.0 * val : val;
    }
    }
    return 0.0;
}

} // namespace mincuba
