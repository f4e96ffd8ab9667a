/// @file geometry.hpp
/// @brief Restricted root data and flat-chamber geometry of noncompact symmetric spaces.
///
/// A space is described by its rank-l restricted root system with multiplicities
/// (m_alpha on each positive reduced root alpha, m_2alpha on its double). From
/// that we derive the half-sums rho and rho0, the dimension n and pseudo-dimension
/// nu, the Weyl group, the radial volume density delta, and the measure constant
/// c_meas that turns chamber integrals c_meas * \int_{a+} delta(H) f(H) dH into
/// integrals over the space.
///
/// Catalog names:
///   "Hr:n"  real hyperbolic space of dimension n   (m_alpha = n-1)
///   "Hc:n"  complex hyperbolic space, complex dim n (m_alpha = 2n-2, m_2alpha = 1)
///   "Hq:n"  quaternionic hyperbolic space           (m_alpha = 4n-4, m_2alpha = 3)
///   "A2c"   the rank-two space with A2 root system and all multiplicities 2
/// Rank-one roots are normalized to |alpha| = 1; A2c uses the standard A2
/// realization in {x in R^3 : sum x_i = 0} mapped isometrically to R^2.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heatlab/linalg.hpp"

namespace heatlab {

/// Distance from a wall below which a point counts as singular.
constexpr double kWallTol = 1e-12;

/// One positive reduced root with its multiplicities.
struct RootEntry {
    Vec alpha;
    int m_alpha = 0;    ///< multiplicity of alpha
    int m_2alpha = 0;   ///< multiplicity of 2*alpha (0 if 2*alpha is not a root)
};

/// Positive reduced roots of a restricted root system.
struct RootDatum {
    int rank = 1;
    std::vector<RootEntry> roots;
};

/// Load a root datum from JSON text: {"rank": l, "roots": [[..],..], "mult": [[m1,m2],..]}.
RootDatum root_datum_from_json(const std::string& json_text);

class SymmetricSpace;

/// A point of the closed positive chamber (validated on construction).
struct ChamberPoint {
    Vec H;
};

/// Immutable bundle of everything derived from a root datum.
class SymmetricSpace {
  public:
    /// Build from a catalog name ("Hr:3", "Hc:2", "Hq:2", "A2c").
    static SymmetricSpace from_catalog(const std::string& name);
    /// Build from user-supplied root data (validated: reflections permute the
    /// root set, Cartan integers are integral, multiplicities positive).
    static SymmetricSpace from_datum(const RootDatum& datum, std::string name = "abstract");

    const std::string& name() const { return name_; }
    int rank() const { return rank_; }
    int dim() const { return dim_n_; }             ///< manifold dimension n
    int pseudo_dim() const { return nu_; }         ///< nu = rank + 2 * #(reduced positive roots)
    const std::vector<RootEntry>& reduced_roots() const { return roots_; }
    const std::vector<int>& simple_indices() const { return simple_; }
    int num_reduced_positive() const { return static_cast<int>(roots_.size()); }

    const Vec& rho() const { return rho_; }        ///< half sum of positive roots with multiplicity
    const Vec& rho0() const { return rho0_; }      ///< half sum of the reduced positive roots
    double rho_norm_sq() const { return rho_sq_; }

    const std::vector<Mat>& weyl() const { return weyl_; }
    int weyl_order() const { return static_cast<int>(weyl_.size()); }
    const Mat& longest_element() const { return w0_; }

    /// Measure constant: radial integrals over the space are
    /// c_meas * \int_{a+} delta(H) f(H) dH.
    double meas_const() const { return c_meas_; }

    // --- chamber geometry ---------------------------------------------------

    bool in_closed_chamber(const Vec& H, double tol = kWallTol) const;
    ChamberPoint chamber_point(const Vec& H) const;   ///< throws if H is outside
    /// Distance to the walls: min over simple roots of <alpha, H>.
    double mu_min(const Vec& H) const;
    /// Product over reduced positive roots of <alpha, H>.
    double pi_prod(const Vec& H) const;
    /// pi evaluated on rho0 (the constant in the ground spherical asymptotics).
    double pi_rho0() const { return pi_rho0_; }
    /// Cartan distance between the bi-invariant orbits of exp(H1), exp(H2).
    double cartan_distance(const ChamberPoint& a, const ChamberPoint& b) const;
    /// Weyl orbit of a point, duplicates removed.
    std::vector<Vec> weyl_orbit(const Vec& lambda, double tol = 1e-9) const;
    /// The dominant (closed-chamber) representative of the orbit of H.
    Vec dominant(const Vec& H) const;

    // --- radial density -----------------------------------------------------

    /// delta(H) = prod (sinh<alpha,H>)^{m_alpha} (sinh<2alpha,H>)^{m_2alpha}.
    double density(const Vec& H) const;
    double log_density(const Vec& H) const;
    /// delta(H) * exp(-2<rho,H>) = prod ((1 - e^{-2<a,H>})/2)^{m_a} ..., in (0, 2^-n].
    /// Stays representable where density itself overflows.
    double density_hat(const Vec& H) const;
    double log_density_hat(const Vec& H) const;
    /// Two-sided envelope model prod (<a,H>/(1+<a,H>))^{m_a} e^{2<rho,H>}
    /// (evaluated with the 2alpha factors included), for ratio tests.
    double log_density_envelope(const Vec& H) const;

    /// Convenience for rank one: the scalar pairing <alpha, H> with H = r*alpha_hat.
    bool is_rank_one() const { return rank_ == 1; }
    int m1() const;   ///< rank one: m_alpha
    int m2() const;   ///< rank one: m_2alpha
    double rho_scalar() const;  ///< rank one: <rho, unit chamber direction>

    /// Unit vector spanning the chamber (rank one only).
    Vec axis() const;
    /// Vector in the rho direction scaled to a given Cartan radius (any rank):
    /// returns s * rho / |rho|.
    Vec rho_dir(double s) const;

  private:
    SymmetricSpace() = default;
    void finish_build();

    std::string name_;
    int rank_ = 1;
    std::vector<RootEntry> roots_;
    std::vector<int> simple_;
    Vec rho_, rho0_;
    double rho_sq_ = 0.0;
    double pi_rho0_ = 1.0;
    int dim_n_ = 0, nu_ = 0;
    std::vector<Mat> weyl_;
    Mat w0_;
    double c_meas_ = 0.0;
};

}  // namespace heatlab
