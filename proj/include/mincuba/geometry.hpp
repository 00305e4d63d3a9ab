#pragma once
#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace mincuba {

enum class DomainTag { Omega, OmegaStar, Rhombus, Square };

inline std::string_view to_string(DomainTag d) {
    switch (d) {
    case DomainTag::Omega: return "omega";
    case DomainTag::OmegaStar: return "star";
    case DomainTag::Rhombus: return "rhombus";
    case DomainTag::Square: return "square";
    }
    return "?";
}

inline DomainTag domain_from_string(std::string_view s) {
    if (s == "omega") return DomainTag::Omega;
    if (s == "star") return DomainTag::OmegaStar;
    if (s == "rhombus") return DomainTag::Rhombus;
    if (s == "square") return DomainTag::Square;
    throw input_error("unknown domain '" + std::string(s) + "'");
}

struct Point2 {
    double a = 0.0;
    double b = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

constexpr double kBoundarySlack = 1e-12;

// Omega: 1 - u + v >= 0, 1 + u + v >= 0, u^2 >= 4v (|u| <= 2)
// OmegaStar: s, t >= 0, sqrt(s) + sqrt(t) <= 1
// Rhombus: |u + v| <= 1, |u - v| <= 1
inline bool contains(DomainTag d, Point2 p, double slack = kBoundarySlack) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b)) return false;
    const double u = p.a, v = p.b;
    switch (d) {
    case DomainTag::Omega:
        return 1.0 - u + v >= -slack && 1.0 + u + v >= -slack && u * u - 4.0 * v >= -slack &&
               std::abs(u) <= 2.0 + slack;
    case DomainTag::OmegaStar:
        return u >= -slack && v >= -slack &&
               std::sqrt(std::max(u, 0.0)) + std::sqrt(std::max(v, 0.0)) <= 1.0 + slack;
    case DomainTag::Rhombus:
        return std::abs(u + v) <= 1.0 + slack && std::abs(u - v) <= 1.0 + slack;
    case DomainTag::Square:
        return std::abs(u) <= 1.0 + slack && std::abs(v) <= 1.0 + slack;
    }
    return false;
}

// (x, y) -> (x + y, xy)
inline Point2 sym_map(double x, double y) { return {x + y, x * y}; }

// (x, y) -> (2xy, x^2 + y^2 - 1)
inline Point2 quad_map(double x, double y) { return {2.0 * x * y, x * x + y * y - 1.0}; }

inline Point2 omega_to_star_unchecked(Point2 p) {
    return {(1.0 + p.b + p.a) / 4.0, (1.0 + p.b - p.a) / 4.0};
}

// inverse of u = 2(s - t), v = 2s + 2t - 1
inline Point2 affine_to_star(double u, double v) {
    if (!contains(DomainTag::Omega, {u, v})) throw domain_error("point is outside Omega");
    return omega_to_star_unchecked({u, v});
}

inline Point2 star_to_omega(double s, double t) { return {2.0 * (s - t), 2.0 * (s + t) - 1.0}; }

// rhombus -> Omega*, (u, v) -> (u^2, v^2)
inline Point2 unsquare_map(double u, double v) { return {u * u, v * v}; }

inline Point2 rotate_to_square(double u, double v) { return {u + v, u - v}; }

inline Point2 square_to_rhombus(double x, double y) { return {(x + y) / 2.0, (x - y) / 2.0}; }

/**
 * Roots (x, y), x >= y, of z^2 - u z + v for a point of Omega. A slightly
 * negative discriminant (within slack) is treated as a double root.
 */
inline std::pair<double, double> omega_roots(double u, double v, double slack = kBoundarySlack) {
    double disc = u * u - 4.0 * v;
    if (disc < -slack * (1.0 + u * u)) throw domain_error("point is outside Omega (complex roots)");
    disc = std::sqrt(std::max(disc, 0.0));
    const double big = u >= 0.0 ? (u + disc) / 2.0 : (u - disc) / 2.0;
    double small = big != 0.0 ? v / big : 0.0;
    double x = big, y = small;
    if (x < y) std::swap(x, y);
    return {x, y};
}

/**
 * cos(theta -+ phi) for x = cos theta, y = cos phi in [-1, 1]:
 * A = xy + sqrt(1-x^2) sqrt(1-y^2), B = xy - sqrt(1-x^2) sqrt(1-y^2).
 * These are the roots of z^2 - 2xy z + (x^2 + y^2 - 1).
 */
inline std::pair<double, double> half_angle_args(double x, double y) {
    const double sx = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    const double sy = std::sqrt(std::max(0.0, (1.0 - y) * (1.0 + y)));
    return {x * y + sx * sy, x * y - sx * sy};
}

/**
 * A square preimage of the Omega point (X + Y, XY), X = cos theta, Y = cos phi:
 * (cos((theta - phi)/2), cos((theta + phi)/2)).
 */
inline Point2 square_preimage(double X, double Y) {
    const double cx = std::sqrt(std::max(0.0, (1.0 + X) / 2.0));
    const double sx = std::sqrt(std::max(0.0, (1.0 - X) / 2.0));
    const double cy = std::sqrt(std::max(0.0, (1.0 + Y) / 2.0));
    const double sy = std::sqrt(std::max(0.0, (1.0 - Y) / 2.0));
    return {cx * cy + sx * sy, cx * cy - sx * sy};
}

} // namespace mincuba
