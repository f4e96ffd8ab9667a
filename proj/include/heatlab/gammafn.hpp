/// @file gammafn.hpp
/// @brief Complex log-gamma with pole diagnostics.
///
/// log_gamma uses a 9-term Lanczos sum (g = 7) on Re z >= 1/2 and the upward
/// recurrence Gamma(z) = Gamma(z+m) / (z (z+1) ... ) on the left half plane,
/// so no reflection-formula branch bookkeeping is needed. The result may differ
/// from the principal branch by a multiple of 2*pi*i; every consumer here only
/// exponentiates differences, which is branch-offset safe.
#pragma once

#include <complex>

namespace heatlab {

/// Arguments closer than this to a pole of Gamma are rejected.
constexpr double kPoleTol = 1e-8;

/// Distance from z to the nearest pole of Gamma (the non-positive integers).
double gamma_pole_distance(std::complex<double> z);

bool near_gamma_pole(std::complex<double> z, double tol = kPoleTol);

/// log Gamma(z), up to an additive multiple of 2*pi*i on the left half plane.
/// Throws std::domain_error if z is within kPoleTol of a pole.
std::complex<double> log_gamma(std::complex<double> z);

/// Gamma(a) / Gamma(b) via exponentiated log difference.
std::complex<double> gamma_ratio(std::complex<double> a, std::complex<double> b);

}  // namespace heatlab
