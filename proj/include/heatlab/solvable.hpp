/// @file solvable.hpp
/// @brief The distinguished heat flow on the solvable side of the Iwasawa
/// decomposition: half-space model points, the modular weight, right-Haar
/// radial reductions, the horospherical (Abel-type) projection, critical-
/// window concentration, the mass function, and the deviation norms of the
/// conjugated Cauchy problem.
///
/// The conjugated kernel htilde_t = deltatilde^{1/2} e^{t|rho|^2} h_t is a
/// probability density for the right Haar measure of S = N exp(a), and its
/// horospherical projection is exactly the Euclidean Gaussian. Everything
/// radial reduces to chamber quadratures through the K-average identity
/// \int_K dk e^{<rho, A(kg)>} = phi_0(g); the genuinely non-symmetric checks
/// run in the half-space model of the hyperbolic plane where A(g) and the
/// Cartan projection are closed form.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "heatlab/convergence.hpp"
#include "heatlab/heatkernel.hpp"
#include "heatlab/initialdata.hpp"
#include "heatlab/interp.hpp"

namespace heatlab {

/// Half-space coordinates of real hyperbolic space H^n, n in {2, 3}: x is the
/// horospherical part (x2 unused when n = 2), height > 0 the flat part, and
/// the Iwasawa coordinate of the point is A = log height. Base point (0, 1).
struct HalfSpacePoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double height = 1.0;
};

/// Critical window of the conjugated kernel in radial coordinates:
/// eps sqrt(t) <= |H| <= sqrt(t)/eps together with mu(H) >= eps sqrt(t).
/// In rank one both constraints are intervals; lo/hi store their
/// intersection along the chamber axis.
struct WindowTilde {
    double t = 0.0;
    double eps = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

class SolvableLab {
  public:
    explicit SolvableLab(const HeatEngine& eng);

    const HeatEngine& engine() const { return *eng_; }

    // --- half-space model (real hyperbolic, n in {2, 3}) ---------------------

    /// Geodesic distance to the base point (0, 1).
    double model_distance(const HalfSpacePoint& p) const;
    /// Iwasawa coordinate <rho, A(g)> / |rho| = log height (scalar A).
    static double iwasawa_coordinate(const HalfSpacePoint& p);
    /// deltatilde^{1/2}(g) = e^{-<rho, A(g)>} = height^{-rho}.
    double modular_weight(const HalfSpacePoint& p) const;
    /// htilde_t(g) = deltatilde^{1/2}(g) e^{t|rho|^2} h_t at the point's radius.
    double h_tilde(double t, const HalfSpacePoint& p) const;
    /// Kostant convexity <rho, A(g)> <= <rho, g+> within the given slack.
    bool kostant_inequality(const HalfSpacePoint& p, double slack = 1e-12) const;
    /// Failure count over `npoints` pseudo-random points with coordinates
    /// x_i, log(height) uniform in [-box, box]; deterministic for fixed seed.
    int kostant_failures(double box, int npoints, unsigned seed) const;

    // --- right-Haar radial reduction -----------------------------------------

    /// \int_G dg e^{<rho, A(g)>} F(g) = c_meas \int delta(H) phi_0(H) F(H) dH
    /// for radial F, integrated over radii [r_lo, r_hi]. Plain-scale F; the
    /// caller keeps the integrand representable (fine up to r ~ 200).
    double right_haar_radial(const std::function<double(double)>& F, double r_lo,
                             double r_hi) const;

    /// \int_S d_r g htilde_t = c_meas e^{t|rho|^2} \int delta phi_0 h_t; equals
    /// 1 up to quadrature error. Any catalog space (rank two integrates the
    /// closed-form chamber wedge).
    double dr_total_mass(double t) const;
    /// Same integral restricted to radii [r_lo, r_hi] (rank one).
    double dr_mass_on(double t, double r_lo, double r_hi) const;
    /// Independent half-plane route for the shell integral of e^{<rho, A(g)>}:
    /// an iterated 2D quadrature with exact section endpoints. H^2 only.
    double shell_weight_2d(double r_lo, double r_hi) const;
    /// The same shell integral through the radial reduction (F = 1).
    double shell_weight_radial(double r_lo, double r_hi) const;

    // --- horospherical projection --------------------------------------------

    /// \int_N htilde_t(n exp A) dn over the half-space slice height = e^A;
    /// equals the Euclidean Gaussian (4 pi t)^{-1/2} e^{-A^2/4t}. H^2/H^3.
    double horospherical_projection(double t, double a_coord) const;
    static double euclidean_gauss(double t, double a_coord);

    // --- critical window -----------------------------------------------------

    /// eps <= 0 picks the default eps(t) = t^{-1/4}.
    WindowTilde window_tilde(double t, double eps = 0.0) const;
    /// 1 minus the d_r htilde mass of the window (radial reduction in rank
    /// one, closed-form wedge quadrature in rank two).
    double mass_outside_tilde(double t, double eps = 0.0) const;

    // --- refined chamber asymptotics -----------------------------------------

    /// Scaled residuals of the two interior models at radius r:
    ///   first  = (hhat_t(r) / [t^{-nu/2} pi(H) e^{-r^2/4t}] - C3) * eps sqrt(t)
    ///   second = (phi0hat(r) / pi(H) - C2) * mu(H).
    /// Throws unless r lies in the window.
    std::array<double, 2> refined_residuals(double t, double r, double eps = 0.0) const;

    // --- mass function -------------------------------------------------------

    /// M(g) = (v0 * phi_0)(g) / phi_0(g) at a radial point, by an honest
    /// orbit-average quadrature (real hyperbolic, where the polar distance law
    /// is closed form). Constant = Hv0(0) for radial data.
    double mass_function_radial(const RadialDatum& v0, double r) const;
    /// Same functional for the radial profile translated to (0, e^c), at an
    /// arbitrary half-space point (hyperbolic plane).
    double mass_function_translated(const RadialDatum& u0, double c,
                                    const HalfSpacePoint& p) const;

    // --- kernel/ground ratio gap ---------------------------------------------

    /// h_t(d)/h_t(R) - phi_0(d)/phi_0(R) with d the distance from the axis
    /// point at radius R to the probe at polar (s, theta). Real hyperbolic.
    double ratio_gap(double t, double R, double s, double theta) const;

    // --- sup norms of the conjugated kernel ----------------------------------

    /// t^{(l + #reduced positives)/2} * sup_S htilde_t. The orbit sup of
    /// deltatilde^{1/2} is e^{<rho, H>} by Kostant convexity, so the sup is a
    /// chamber scan of hhat.
    double sup_norm_htilde(double t) const;
    /// hhat at the probe radius |H| = sqrt(t) |rho|-direction over the sup.
    double sup_probe_ratio(double t) const;
    /// Normalized sup of htilde outside the critical window.
    double outside_sup_tilde(double t, double eps = 0.0) const;
    /// The outside sup split over the three exit regimes: |H| below the
    /// window, |H| beyond it, mu(H) small inside the radial band (rank two;
    /// empty third slot in rank one).
    std::array<double, 3> outside_sup_cases(double t, double eps = 0.0) const;

    // --- deviation norms of the conjugated flow ------------------------------

    struct DistDeviation {
        double t = 0.0;
        double l1 = 0.0;         ///< L1(S, d_r) of vtilde(t) - M htilde_t
        double linf = 0.0;       ///< L-infinity(S) of the same difference
        double linf_norm = 0.0;  ///< linf * t^{(l + #reduced positives)/2}
    };

    /// Radial datum, any rank-one catalog space: multiplier route with the
    /// spectral deviation Hv0(lambda) - Hv0(0).
    DistDeviation deviation_radial(const RadialDatum& v0, double t) const;
    /// Radial profile translated to (0, e^c) on the hyperbolic plane: full 2D
    /// quadrature with the Iwasawa weight and the non-constant mass function.
    DistDeviation deviation_translated(const RadialDatum& u0, double c, double t) const;

    // --- weighted data-class gate --------------------------------------------

    /// Convergence gate for \int_G |v0| e^{<rho, g+>}: accepts when the dyadic
    /// increments of the truncated integral collapse geometrically, rejects
    /// when they grow. Optionally reports the last increment ratio.
    bool weighted_class_gate(const std::function<double(double)>& v0,
                             double* increment_ratio = nullptr) const;

  private:
    struct Grid {
        std::vector<double> x, w;
    };

    void require_rank_one(const char* who) const;
    void require_half_space(const char* who) const;
    void require_plane(const char* who) const;
    double norm_exponent() const;  ///< (rank + #reduced positives)/2
    Grid radial_grid(double lo, double hi, double panel_width) const;
    /// c_meas * sum w delta_hat phi0hat hhat over the grid (rank one).
    double hat_mass_sum(double t, const Grid& g) const;
    /// Geometrically refined [0, pi] rule reaching scale e^{-depth_scale}.
    Grid angular_rule(double depth_scale, int per_panel) const;
    UniformCubicTable log_phi0_table(double r_max) const;
    double rank2_window_mass(double t, double eps) const;

    const HeatEngine* eng_;
    const SymmetricSpace* space_;
    double rho_ = 0.0;   // rank one: <rho, unit axis>; 0 in rank two
    double rho2_ = 0.0;  // |rho|^2
    double cm_ = 0.0;    // measure constant
};

}  // namespace heatlab
