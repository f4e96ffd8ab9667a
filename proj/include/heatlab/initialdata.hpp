/// @file initialdata.hpp
/// @brief Initial data: radial profiles, their transforms, and plane bumps.
///
/// A RadialDatum samples a compactly supported radial profile on Gauss nodes
/// of its support; from those samples it provides the total mass and the
/// spherical transform at real or complex spectral parameters (the transform
/// of compactly supported data is entire, so it may be evaluated on the
/// shifted contours the heat engine uses). PlaneBump is the non-radial
/// counterpart on the hyperbolic plane: a geodesic ball bump about a point at
/// distance `center` from the base point, pre-sampled for 2D quadratures.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "heatlab/heatkernel.hpp"
#include "heatlab/hyper2.hpp"
#include "heatlab/spherical.hpp"

namespace heatlab {

/// Smooth bump exp(-1 / (1 - (r/xi)^2)) on [0, xi), zero outside.
double bump_profile(double r, double xi);

class RadialDatum {
  public:
    /// Samples `profile` on [0, support]; panels defaults to ~support/0.7.
    RadialDatum(const SphericalEngine& sph, std::function<double(double)> profile,
                double support, int panels = 0);

    static RadialDatum bump(const SphericalEngine& sph, double xi);

    double support() const { return support_; }
    double mass() const { return mass_; }
    double value(double r) const { return profile_(r); }

    /// Spherical transform Hu0(lambda); entire in lambda, even, real on the
    /// real axis. Requires |Im lambda| * support <= 600.
    std::complex<double> transform(std::complex<double> lam) const;
    double transform_real(double lam) const { return transform(lam).real(); }

    /// lam -> Hu0(lam), for the heat engine.
    Multiplier multiplier() const;
    /// lam -> Hu0(lam) - mass (the deviation from the mass-projected kernel).
    Multiplier deviation_multiplier() const;

  private:
    const SphericalEngine* sph_;
    std::function<double(double)> profile_;
    double support_ = 1.0, mass_ = 0.0;
    std::vector<double> nodes_;    // Gauss nodes on [0, support]
    std::vector<double> amp_;      // weight * density_hat * e^{rho r} * u0
};

/// Geodesic ball bump on the hyperbolic plane, sampled in tangent-polar
/// coordinates about the center point (distance `center` from the base point
/// along the first axis).
struct PlaneBump {
    struct Node {
        double weight = 0.0;  ///< quadrature weight including sinh(s')
        double value = 0.0;   ///< bump value
        double dist0 = 0.0;   ///< geodesic distance to the base point
        double angle0 = 0.0;  ///< polar angle seen from the base point
    };

    double center = 0.0, xi = 1.0;
    double mass = 0.0;
    std::vector<Node> nodes;

    PlaneBump(double center, double xi, int rad_panels = 5, int ang_panels = 5);
};

}  // namespace heatlab
