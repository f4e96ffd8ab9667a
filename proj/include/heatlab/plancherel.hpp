/// @file plancherel.hpp
/// @brief Harish-Chandra c-function, Plancherel density and the b-function.
///
/// All quantities are rank-one Gindikin-Karpelevic factors multiplied over the
/// reduced positive roots. The scalar argument per root alpha is
/// z = <lambda, alpha> / <alpha, alpha>. With A = <rho, alpha>/<alpha,alpha>,
///
///   c_a(z) = [G(A + m1/2)/G(A)] [G(A/2 + m1/4 + m2/2)/G(A/2 + m1/4)]
///            [G(iz)/G(iz + m1/2)] [G(iz/2 + m1/4)/G(iz/2 + m1/4 + m2/2)]
///
/// normalized so the full product satisfies c(-i rho) = 1. The b-function
/// strips the lone zero at lambda = 0: b_a(z) = |alpha|^2 iz c_a(z), which
/// replaces G(iz) by G(iz + 1) and is pole-free near z = 0. Then
/// b(lambda) = pi(i lambda) c(lambda) with pi the product of root pairings, and
/// the Plancherel density is |c(lambda)|^{-2} = pi(lambda)^2 / (b(lambda) b(-lambda))
/// for real lambda, a cancellation-free form that vanishes only on the walls.
#pragma once

#include <complex>

#include "heatlab/geometry.hpp"

namespace heatlab {

class Plancherel {
  public:
    explicit Plancherel(const SymmetricSpace& space);

    const SymmetricSpace& space() const { return *space_; }

    /// Rank-one factor for reduced root #k at scalar argument z (rarely needed
    /// directly; exposed for diagnostics and tests).
    std::complex<double> c_factor(int k, std::complex<double> z) const;
    std::complex<double> b_factor(int k, std::complex<double> z) const;

    /// Full c(xi + i*eta); defined off the singular set of the Gamma factors.
    std::complex<double> c_function(const Vec& xi, const Vec& eta) const;

    /// Plancherel density |c(lambda)|^{-2} for real lambda.
    double density(const Vec& lambda) const;

    /// 1 / c(-lambda) = pi(-i lambda) / b(-lambda) for real lambda; decays like
    /// the half-density and vanishes linearly on the walls.
    std::complex<double> c_inv_minus(const Vec& lambda) const;

    /// b(-(xi + i*eta)). Requires eta in the closed positive chamber, where all
    /// Gamma arguments stay in the right half plane; throws otherwise.
    std::complex<double> b_minus(const Vec& xi, const Vec& eta) const;
    std::complex<double> b_minus_inv(const Vec& xi, const Vec& eta) const;

    /// b(0), real and positive.
    double b_zero() const { return b_zero_; }

    /// Sum over roots of (1 - (m1+m2)/2) * log(1 + |<alpha,lambda>|): the
    /// growth model for log |b(-lambda)| up to a bounded ratio.
    double log_b_growth_model(const Vec& lambda) const;

  private:
    const SymmetricSpace* space_;
    struct Factor {
        Vec alpha;
        double alpha_sq = 1.0;
        int m1 = 0, m2 = 0;
        double log_norm = 0.0;  ///< the two constant Gamma brackets, real
    };
    std::vector<Factor> factors_;
    double b_zero_ = 1.0;

    std::complex<double> log_b_factor(const Factor& f, std::complex<double> z) const;
};

}  // namespace heatlab
