/// @file convergence.hpp
/// @brief Long-time convergence diagnostics: Lp distance between evolved data
/// and the mass-projected kernel, the translated-kernel L1 gap with its
/// angular Poisson limit, kernel quotients, Busemann functions, and the
/// boundary-transform limit functional.
///
/// Everything radial runs through the heat engine's multiplier profiles in
/// hat coordinates; the non-radial quantities (translated kernels, off-center
/// bumps) reduce to radial profiles evaluated at law-of-cosines distances, so
/// the worst quadrature anywhere is two dimensional.
#pragma once

#include <vector>

#include "heatlab/heatkernel.hpp"
#include "heatlab/initialdata.hpp"
#include "heatlab/interp.hpp"

namespace heatlab {

/// Ordinary least squares of log y against log x.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;    ///< standard error of the slope
    double max_resid = 0.0;   ///< largest |log-residual|
};

/// Throws unless xs and ys are positive and hold at least three points.
FitResult fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Lp distances between u(t, .) and mass * h_t for one time.
struct DeviationReport {
    double t = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double lp = 0.0;           ///< 0 unless a p was requested
    double linf = 0.0;
    double linf_radius = 0.0;  ///< where the sup was attained
};

struct RateReport {
    std::vector<DeviationReport> rows;  ///< aligned with the time grid
    FitResult l1_fit;                   ///< log l1 against log t
};

class ConvergenceLab {
  public:
    explicit ConvergenceLab(const HeatEngine& eng) : eng_(&eng) {}

    const HeatEngine& engine() const { return *eng_; }

    // --- Lp deviations (radial data, rank one) -------------------------------

    /// Norms of u(t,.) - M h_t over the whole space. p = 0 skips the Lp slot;
    /// otherwise p in [1, 3]. Throws if the radial grid fails its tail check.
    DeviationReport deviation(const RadialDatum& u0, double t, double p = 0.0) const;

    /// deviation() over a time grid plus the log-log L1 fit.
    RateReport rate_scan(const RadialDatum& u0, const std::vector<double>& times,
                         double p = 0.0) const;

    /// lp - l1^{1/p} linf^{1-1/p} for one row (p = 2 reads the l2 slot);
    /// nonpositive up to rounding by Hoelder interpolation.
    static double interpolation_excess(const DeviationReport& row, double p);

    // --- evolved profiles ----------------------------------------------------

    /// uhat(t, r) = e^{t|rho|^2 + rho r} (u0 * h_t)(r) at ascending radii.
    std::vector<double> evolve_hat_profile(const RadialDatum& u0, double t,
                                           const std::vector<double>& rs) const;

    /// Dense cubic table of log uhat on [0, r_max] for scattered-distance
    /// consumers; throws if any profile value is nonpositive.
    UniformCubicTable evolve_log_hat_table(const RadialDatum& u0, double t, double r_max,
                                           double dr = 0.05) const;

    /// ||u(t,.) - u0||_{L1}, the approximation-of-identity gap at small t.
    double l1_initial_gap(const RadialDatum& u0, double t) const;

    // --- translated kernels and their Poisson limit (real hyperbolic) --------

    /// ||h_t(., y) - h_t(., e)||_{L1} for y at distance s, by a 2D polar
    /// quadrature over log-kernel tables. Throws if the radial cutoff leaves
    /// more than 0.5% of the value in the tail.
    double dirac_l1_gap(double s, double t) const;

    /// Angular average of the Poisson factor (cosh s - sinh s cos theta)^{-2 rho};
    /// equals 1 identically (spherical function at the distinguished point).
    double k_average(double s) const;

    /// Angular average of |Poisson factor - 1|: the t -> infinity limit of
    /// dirac_l1_gap(s, .).
    double k_integral_limit(double s) const;

    /// h_t at distance d(x, y) over h_t at distance R, for x on the chamber
    /// axis at radius R and y at polar (s, theta).
    double kernel_quotient(double t, double R, double s, double theta) const;
    /// The t -> infinity limit of the quotient: e^{2 rho A} with A the
    /// horocycle functional of (s, theta).
    double quotient_limit(double s, double theta) const;
    /// max |quotient - limit| over the concentration window and a theta probe
    /// set, fitted in log-log against r(t)/t.
    FitResult quotient_error_fit(double s, const std::vector<double>& times,
                                 const ConcentrationSpec& conc) const;

    /// d(gamma(r), y) - r for the unit-speed chamber geodesic and y at polar
    /// (s, theta); converges to -A(s, theta) as r grows.
    static double busemann_finite(double theta, double s, double r);
    /// |finite-r value - limit|.
    static double busemann_gap(double theta, double s, double r);

    // --- boundary transform at the distinguished spectral points (H^2) -------

    /// Helgason boundary value at lambda = +-i rho and boundary angle theta;
    /// plus = false gives the zero-exponent route (the mass, any theta).
    double boundary_value(const PlaneBump& u0, double theta, bool plus) const;

    /// Angular average of |boundary value(+) - mass|: the limit of the L1
    /// deviation for the (possibly off-center) bump.
    double boundary_limit_functional(const PlaneBump& u0) const;

    /// ||u(t,.) - M h_t||_{L1} for a radial bump recentered at distance
    /// `center` (center = 0 reduces to deviation().l1 through a different,
    /// genuinely 2D quadrature).
    double off_center_l1_gap(const RadialDatum& u0, double center, double t) const;

    // --- Euclidean reference -------------------------------------------------

    /// sqrt(t) * sup_x |u(t,x) - M G_t(x)| for a mass-normalized bump on the
    /// real line; decays like 1/t, the flat-space contrast case.
    static double euclidean_linf_contrast(double xi, double t);

  private:
    struct Grid {
        std::vector<double> x, w;  ///< w = 0 marks scan-only nodes
    };
    struct AngularRule {
        std::vector<double> x, w;  ///< weights normalized to total 1
    };

    void require_real_hyperbolic(const char* who) const;
    /// sin^{n-2} rule on [0, pi], geometrically refined toward 0; an optional
    /// kink angle becomes a panel boundary.
    AngularRule angular_rule(double kink = -1.0) const;
    /// Quadrature panels plus the sup-scan nodes, merged ascending.
    Grid deviation_grid(double t, double r_max) const;
    double lp_sum(const Grid& g, const std::vector<double>& dev, double t, double p) const;

    const HeatEngine* eng_;
};

}  // namespace heatlab
