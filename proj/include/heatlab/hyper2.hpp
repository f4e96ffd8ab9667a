/// @file hyper2.hpp
/// @brief Closed-form geometry of the hyperbolic plane for the 2D probes.
///
/// Points live on the hyperboloid x0^2 - x1^2 - x2^2 = 1, x0 > 0; the polar
/// chart is (cosh s, sinh s cos phi, sinh s sin phi). Along the compact-orbit
/// circle of a polar point the horocyclic coordinate is
/// A(s, phi) = -log(cosh s - sinh s cos phi). The half-space chart (x, h),
/// h > 0, has cosh d((x,h), (0,1)) = 1 + (|x|^2 + (h-1)^2) / (2h); that
/// formula also serves the three-dimensional half-space with |x| the radial
/// horospherical coordinate.
#pragma once

#include <cmath>

namespace heatlab {

struct H2Point {
    double x0 = 1.0, x1 = 0.0, x2 = 0.0;
};

inline H2Point h2_polar(double s, double phi) {
    return {std::cosh(s), std::sinh(s) * std::cos(phi), std::sinh(s) * std::sin(phi)};
}

/// Polar chart re-centered at the point (cosh c, sinh c, 0): geodesic radius
/// sp, angle phip against the outward axis direction.
inline H2Point h2_about(double c, double sp, double phip) {
    const double ch = std::cosh(sp), sh = std::sinh(sp);
    H2Point p;
    p.x0 = std::cosh(c) * ch + std::sinh(c) * sh * std::cos(phip);
    p.x1 = std::sinh(c) * ch + std::cosh(c) * sh * std::cos(phip);
    p.x2 = sh * std::sin(phip);
    return p;
}

inline double h2_dist(const H2Point& a, const H2Point& b) {
    const double m = a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2;
    return std::acosh(m < 1.0 ? 1.0 : m);
}

inline double h2_radius(const H2Point& p) { return std::acosh(p.x0 < 1.0 ? 1.0 : p.x0); }

inline double h2_angle(const H2Point& p) { return std::atan2(p.x2, p.x1); }

/// Geodesic distance between polar points (s1, 0) and (s2, dphi).
inline double h2_polar_dist(double s1, double s2, double dphi) {
    const double m = std::cosh(s1) * std::cosh(s2) - std::sinh(s1) * std::sinh(s2) * std::cos(dphi);
    return std::acosh(m < 1.0 ? 1.0 : m);
}

/// Horocyclic A-coordinate of the polar point (s, phi). The direct form
/// cosh s - sinh s cos phi cancels to zero in doubles once s > 18 and phi is
/// small; the identity below is exact and keeps every digit at any radius.
inline double h2_horo_A(double s, double phi) {
    const double sp = std::sin(0.5 * phi);
    return -std::log(std::exp(-s) + 2.0 * std::sinh(s) * sp * sp);
}

/// Distance to the base point in the half-space chart; works in any dimension
/// with x the Euclidean norm of the horospherical coordinate.
inline double half_space_dist(double x, double h) {
    const double m = 1.0 + (x * x + (h - 1.0) * (h - 1.0)) / (2.0 * h);
    return std::acosh(m < 1.0 ? 1.0 : m);
}

}  // namespace heatlab
