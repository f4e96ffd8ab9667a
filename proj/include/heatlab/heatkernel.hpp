/// @file heatkernel.hpp
/// @brief Spectral synthesis of the heat kernel and its multiplier variants.
///
/// Everything is computed in hat coordinates,
///   hhat_t(H) = e^{t|rho|^2 + <rho,H>} h_t(exp H),
/// the normalization in which the kernel is a Gaussian times slowly varying
/// factors. Two evaluators cover every radius in rank one:
///  - a direct quadrature of the spectral integral over [0, Lambda(t)],
///    Lambda(t) = max(40/sqrt t, 10), with batched spherical-profile sweeps;
///    accurate while r^2/4t is moderate;
///  - a saddle-shifted contour through lambda = u + i r/2t, one shift per
///    Harish-Chandra wave, which factors e^{-r^2/4t} out exactly and leaves a
///    positive Gaussian integrand with no cancellation at any radius.
/// The crossover sits at r^2/4t = 16, where both evaluators agree to several
/// digits beyond every tolerance used downstream.
///
/// Spaces with every multiplicity equal to 2 (the A2 catalog space, and the
/// rank-one H^3) also carry an exact product closed form, used both as an
/// oracle for the quadrature engines and as the fast path for wide rank-two
/// scans. A separable-moment quadrature provides an independent numeric route
/// in rank two for cross-checking the closed form.
#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "heatlab/geometry.hpp"
#include "heatlab/interp.hpp"
#include "heatlab/linalg.hpp"
#include "heatlab/plancherel.hpp"
#include "heatlab/spherical.hpp"

namespace heatlab {

/// Rank-one spectral multiplier m(lambda). Must be even, real on the real
/// axis, and holomorphic on the horizontal lines the engine integrates along
/// (transforms of compactly supported radial data qualify: they are entire).
using Multiplier = std::function<std::complex<double>(std::complex<double>)>;

/// Concentration window: radius r(t) = t^{1 - exponent} around 2t rho, i.e.
/// epsilon(t) = t^{-exponent} with t * epsilon(t) the window half-width.
struct ConcentrationSpec {
    double exponent = 0.25;  ///< must lie in (0, 1/2)

    double epsilon(double t) const;
    double radius(double t) const;  ///< t * epsilon(t)
};

class HeatEngine {
  public:
    explicit HeatEngine(const SymmetricSpace& space);

    const SymmetricSpace& space() const { return *space_; }
    const SphericalEngine& spherical() const { return sph_; }
    const Plancherel& plancherel() const { return sph_.plancherel(); }

    /// Inversion constant 2^{n-l} / ((2 pi)^l c_meas |W|).
    double inversion_const() const { return c0_; }
    /// All multiplicities equal to 2 (exact product form available).
    bool has_closed_form() const { return all_two_; }
    /// Radius beyond which the shifted-contour evaluator takes over.
    double shift_radius(double t) const;

    /// The identity multiplier (plain heat kernel).
    static Multiplier unit_multiplier();

    // --- rank-one radial evaluators -----------------------------------------

    /// hhat-type values at ascending radii, one vector per multiplier.
    std::vector<std::vector<double>> multiplier_profiles(
        double t, const std::vector<double>& rs, const std::vector<Multiplier>& ms) const;
    std::vector<double> hhat_profile(double t, const std::vector<double>& rs) const;
    double hhat(double t, double r) const;
    /// log hhat for the plain kernel; stays finite where hhat underflows.
    double log_hhat(double t, double r) const;
    /// Dense cubic table of log hhat on [0, r_max] for scattered-distance
    /// consumers (2D convolutions); interpolation error well below 1e-6.
    UniformCubicTable log_hhat_table(double t, double r_max, double dr = 0.02) const;

    // --- generic points ------------------------------------------------------

    /// Dispatches on rank and type; H in the closed chamber.
    double hhat_point(double t, const Vec& H) const;
    double log_hhat_point(double t, const Vec& H) const;
    /// log h_t(exp H) = log hhat - t|rho|^2 - <rho, H>.
    double log_kernel(double t, const Vec& H) const;
    /// Spherical transform of the kernel: e^{-t(|lambda|^2 + |rho|^2)}.
    double heat_transform(double t, const Vec& lambda) const;

    /// Exact product form; throws unless has_closed_form().
    double closed_form_hhat(double t, const Vec& H) const;
    double log_closed_form_hhat(double t, const Vec& H) const;
    /// Independent separable-moment quadrature (rank-two closed-form spaces,
    /// regular H only); used to cross-check the product form.
    double moment_hhat(double t, const Vec& H) const;

    // --- integral diagnostics ------------------------------------------------

    /// \int_X h_t, evaluated as a radial (rank one) or chamber (rank two)
    /// quadrature; equals 1 up to quadrature error.
    double total_mass(double t) const;
    /// Transform of the synthesized kernel back at a real spectral point.
    double transform_roundtrip(double t, double lam) const;                    // rank one
    std::complex<double> transform_roundtrip_rank2(double t, const Vec& lam) const;
    /// Heat mass outside the moving Cartan window of the concentration spec.
    double mass_outside(double t, const ConcentrationSpec& conc) const;
    /// t^{nu/2} ( hhat_t(0) - e^{-t' |rho|^2} hhat_{t+t'}(0) ), the delayed-
    /// kernel central gap.
    double delayed_gap(double t, double tprime) const;

    // --- envelope and asymptotic models (hat coordinates, log scale) ---------

    /// Global two-sided model: t^{-n/2} prod (1 + t + <a,H>)^{(m_a+m_2a)/2 - 1}
    /// phi0hat(H) e^{-|H|^2/4t}.
    double log_envelope_hat(double t, const Vec& H) const;
    /// Sharp critical-window model C1 t^{-nu/2} b(-iH/2t)^{-1} phi0hat(H)
    /// e^{-|H|^2/4t}; requires mu(H) >= 5 and t >= 5.
    double log_critical_hat(double t, const Vec& H) const;
    /// Deep-interior polynomial model C3 t^{-nu/2} pi(H) e^{-|H|^2/4t}.
    double log_interior_hat(double t, const Vec& H) const;

    /// Batched rank-one variants (single ground-sweep instead of one ODE per
    /// radius); radii ascending, along the chamber axis.
    std::vector<double> log_envelope_hat_profile(double t, const std::vector<double>& rs) const;
    std::vector<double> log_critical_hat_profile(double t, const std::vector<double>& rs) const;

    double crit_c1() const { return c1_; }
    double crit_c2() const { return c2_; }
    double crit_c3() const { return c3_; }

    /// Polar wedge of the positive chamber in rank two: angle interval.
    std::pair<double, double> chamber_wedge() const;

    /// Shared parameter guard: t >= 0.05 and t |rho|^2 <= 600.
    void check_time(double t) const;

  private:
    struct LambdaGrid {
        std::vector<double> x, w;
    };
    LambdaGrid direct_lambda_grid(double t, double r_resolve) const;

    /// Shifted-contour accumulators: value_k = 4 C0 e^{log_pref} Re acc[k].
    struct ShiftedEval {
        double log_pref = 0.0;
        std::vector<std::complex<double>> acc;
    };
    ShiftedEval shifted_core(double t, double r, const std::vector<Multiplier>& ms) const;
    /// Shared-contour evaluation of rs[lo..hi) (one shift per block); writes
    /// out[k][i] for i in [lo, hi).
    void shifted_block(double t, const std::vector<double>& rs, std::size_t lo, std::size_t hi,
                       const std::vector<Multiplier>& ms,
                       std::vector<std::vector<double>>& out) const;
    std::vector<double> direct_values(double t, const std::vector<double>& rs,
                                      const std::vector<Multiplier>& ms) const;

    double rank2_chamber_mass(double t, const ConcentrationSpec* conc) const;

    const SymmetricSpace* space_;
    SphericalEngine sph_;
    bool all_two_ = false;
    double c0_ = 0.0;          // inversion constant
    double c1_ = 0.0, c2_ = 0.0, c3_ = 0.0;
    double rho2_ = 0.0;        // |rho|^2
    int nu_ = 0, dim_ = 0, dpos_ = 0;
};

}  // namespace heatlab
