/// @file spherical.hpp
/// @brief Spherical function engines: Taylor launch, scaled radial ODE,
///        Harish-Chandra series, and the closed form for complex-type spaces.
///
/// Everything returns the tilted function phihat = e^{<rho,H>} phi_lambda(exp H),
/// which stays of size O(poly) across the whole chamber and is the quantity the
/// heat kernel machinery actually consumes. Conventions:
///   phi_{i rho} = 1 identically, so phihat_{i rho}(H) = e^{<rho,H>};
///   phihat_lambda(0) = 1; phihat is Weyl invariant in lambda.
///
/// Engine dispatch for rank one (radius r, spectral parameter lambda):
///   r < 0.05                 even Taylor series about 0;
///   r in [0.05, 1)           Dormand-Prince integration of the scaled ODE
///                            w'' + (A(r) - 2 rho) w' + (lam^2 + 2 rho^2 - rho A(r)) w = 0
///                            launched from the Taylor values at 0.05;
///   r >= 1, real regular lam Harish-Chandra series with Gangolli coefficients;
///   complex or singular lam  ODE continuation (tube |Im lam| <= |rho|).
/// Spaces with all root multiplicities equal to 2 (the complex-type case, e.g.
/// the A2 catalog space) use an exact Weyl-alternating closed form everywhere.
#pragma once

#include <complex>
#include <vector>

#include "heatlab/geometry.hpp"
#include "heatlab/plancherel.hpp"

namespace heatlab {

/// Dispatch radii and the regularity threshold for series engines.
constexpr double kTaylorRadius = 0.05;
constexpr double kSeriesRadius = 1.0;
constexpr double kLambdaRegTol = 1e-3;

/// Gangolli coefficients of the rank-one outgoing wave
///   Phi_lambda(r) = e^{(i lam - rho) r} sum_k gam_k e^{-2kr},   gam_0 = 1,
/// from the radial eigen-equation recursion. Valid at any lambda with
/// Im lambda > -1 (the recursion denominators 4k(k - i lam) vanish only at
/// lambda = -ik); the heat engine evaluates these on saddle-shifted contours
/// lambda = u + i sigma with sigma > 0. Truncates once the tail cannot matter
/// at radius r >= 1, capped at k_cap terms.
std::vector<std::complex<double>> rank1_wave_coeffs(const Plancherel& pl,
                                                    std::complex<double> lam, int k_cap = 250);

/// Harish-Chandra expansion at one real regular lambda, rank one.
/// phihat(r) = 2 Re[ c(lam) wave(r) ] with wave(r) = e^{i lam r} sum_k G_k e^{-2kr}.
class RankOneSeries {
  public:
    RankOneSeries(const Plancherel& pl, double lam);

    double lambda() const { return lam_; }
    int terms() const { return static_cast<int>(gam_.size()); }

    /// One outgoing wave e^{rho r} Phi_lambda(r); accurate for r >= kSeriesRadius.
    std::complex<double> wave(double r) const;
    /// Full phihat.
    double phi_hat(double r) const;
    /// Plancherel-weighted value |c(lam)|^{-2} phihat(r) in the cancellation-free
    /// form 2 Re[ c(-lam)^{-1} wave(r) ]; vanishes smoothly as lam -> wall.
    double weighted_phi_hat(double r) const;

  private:
    double lam_;
    std::complex<double> c_lam_;        // c(lambda)
    std::complex<double> c_inv_minus_;  // 1 / c(-lambda)
    std::vector<std::complex<double>> gam_;
};

/// Harish-Chandra expansion in rank two at real regular lambda; used as an
/// independent cross-check of the closed form deep in the chamber (mu(H) >~ 1.5).
class RankTwoSeries {
  public:
    RankTwoSeries(const Plancherel& pl, const Vec& lam, int order = 14);
    std::complex<double> phi_hat(const Vec& H) const;

  private:
    struct Branch {
        Vec wlam;
        std::complex<double> c_wlam;
        std::vector<std::complex<double>> gamma;  // (order+1)^2 row-major table
    };
    const Plancherel* pl_;
    int order_;
    Vec s1_, s2_;  // simple roots
    std::vector<Branch> branches_;
};

class SphericalEngine {
  public:
    explicit SphericalEngine(const SymmetricSpace& space);

    const SymmetricSpace& space() const { return *space_; }
    const Plancherel& plancherel() const { return pl_; }

    /// phihat at complex spectral parameter xi + i*eta; requires
    /// |eta| <= |rho| + tol (the tube where phi stays bounded).
    std::complex<double> phi_hat(const Vec& xi, const Vec& eta, const Vec& H) const;
    /// Real spectral parameter.
    std::complex<double> phi_hat(const Vec& xi, const Vec& H) const;

    /// Ground spherical function (lambda = 0), real and positive.
    double phi0_hat(const Vec& H) const;
    /// Batches along the rank-one axis at ascending radii: one Taylor zone, one
    /// ODE sweep through all checkpoints, then the series zone. Rank one only.
    std::vector<double> phi_hat_profile(double lam, const std::vector<double>& rs) const;
    std::vector<double> phi0_hat_profile(const std::vector<double>& rs) const;

    /// Complex spectral parameter along the rank-one axis, batched at ascending
    /// radii. Accepts any imaginary shift whose e^{|Im lam| r} stays in double
    /// range: transforms of compactly supported data are entire, and the heat
    /// engine samples them on strongly shifted contours at small times. Rank
    /// one only.
    std::vector<std::complex<double>> phi_hat_profile_c(std::complex<double> lam,
                                                        const std::vector<double>& rs) const;

    /// |c(lam)|^{-2} phihat_lam(H) for real lam; real in rank one, complex in
    /// higher rank (symmetrize over a Weyl-even grid before taking real parts).
    std::complex<double> weighted_phi_hat(const Vec& lam, const Vec& H) const;

    /// Exact closed form for complex-type spaces (all multiplicities 2).
    std::complex<double> closed_form_phi_hat(const Vec& xi, const Vec& eta, const Vec& H) const;
    bool has_closed_form() const { return complex_type_; }

    /// Alternating-sum factor kappa with
    /// sum_w det(w) <w lam, H>^d = kappa * pi(lam) pi(H), d = #reduced positives.
    double alternating_kappa() const { return kappa_; }

  private:
    // rank-one internals (scalar lambda, radius r)
    void taylor_u(std::complex<double> lam, double r, std::complex<double>& u,
                  std::complex<double>& du) const;
    std::complex<double> phi_hat_rank1(std::complex<double> lam, double r) const;
    std::complex<double> ode_phi_hat_rank1(std::complex<double> lam, double r) const;

    std::complex<double> closed_form_raw(const Vec& xi, const Vec& eta, const Vec& H) const;
    std::complex<double> closed_form_wallsafe(const Vec& xi, const Vec& eta, const Vec& H) const;

    const SymmetricSpace* space_;
    Plancherel pl_;
    bool complex_type_ = false;
    double kappa_ = 0.0;
    double taylor_A_[8] = {};  // odd-part coefficients of the radial drift at 0
};

/// Independent oracle for the real hyperbolic family: the classical
/// one-dimensional integral representation, evaluated by fixed Gauss panels.
/// Valid for m_2alpha = 0; moderate radii (overflow-guarded internally).
std::complex<double> phi_hat_integral_rep(const SymmetricSpace& space, std::complex<double> lam,
                                          double r);

}  // namespace heatlab
