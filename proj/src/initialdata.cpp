#include "heatlab/initialdata.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "heatlab/quadrature.hpp"

namespace heatlab {

double bump_profile(double r, double xi) {
    const double q = r / xi;
    if (!(q < 1.0) || q < 0.0) return 0.0;
    return std::exp(-1.0 / (1.0 - q * q));
}

RadialDatum::RadialDatum(const SphericalEngine& sph, std::function<double(double)> profile,
                         double support, int panels)
    : sph_(&sph), profile_(std::move(profile)), support_(support) {
    if (!(support_ > 0.0)) throw std::invalid_argument("RadialDatum: support must be positive");
    if (!sph.space().is_rank_one())
        throw std::logic_error("RadialDatum: radial data live on rank-one spaces");
    if (panels <= 0) panels = std::max(6, static_cast<int>(std::ceil(support_ / 0.5)));
    std::vector<double> w;
    append_gauss_panels(0.0, support_, panels, 16, nodes_, w);
    const auto& sp = sph.space();
    const double rho = sp.rho_scalar(), cm = sp.meas_const();
    amp_.resize(nodes_.size());
    mass_ = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double r = nodes_[i];
        amp_[i] = w[i] * sp.density_hat(Vec{r}) * std::exp(rho * r) * profile_(r);
        // int u0 = c_meas int delta u0, and delta = delta_hat e^{2 rho r}.
        mass_ += cm * amp_[i] * std::exp(rho * r);
    }
}

RadialDatum RadialDatum::bump(const SphericalEngine& sph, double xi) {
    return RadialDatum(
        sph, [xi](double r) { return bump_profile(r, xi); }, xi);
}

std::complex<double> RadialDatum::transform(std::complex<double> lam) const {
    // Hu0(lambda) = c_meas int delta u0 phi_lambda
    //             = c_meas int delta_hat e^{rho r} u0 phihat_lambda dr.
    const std::vector<std::complex<double>> ph = sph_->phi_hat_profile_c(lam, nodes_);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += amp_[i] * ph[i];
    return sph_->space().meas_const() * acc;
}

Multiplier RadialDatum::multiplier() const {
    return [this](std::complex<double> lam) { return transform(lam); };
}

Multiplier RadialDatum::deviation_multiplier() const {
    const double m = mass_;
    return [this, m](std::complex<double> lam) { return transform(lam) - m; };
}

PlaneBump::PlaneBump(double center_in, double xi_in, int rad_panels, int ang_panels)
    : center(center_in), xi(xi_in) {
    if (!(xi > 0.0)) throw std::invalid_argument("PlaneBump: radius must be positive");
    std::vector<double> sx, sw, px, pw;
    append_gauss_panels(0.0, xi, rad_panels, 16, sx, sw);
    append_gauss_panels(0.0, 2.0 * std::numbers::pi, ang_panels, 16, px, pw);
    nodes.reserve(sx.size() * px.size());
    mass = 0.0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
        const double v = bump_profile(sx[i], xi);
        for (std::size_t a = 0; a < px.size(); ++a) {
            Node n;
            n.weight = sw[i] * pw[a] * std::sinh(sx[i]);
            n.value = v;
            const H2Point p = h2_about(center, sx[i], px[a]);
            n.dist0 = h2_radius(p);
            n.angle0 = h2_angle(p);
            nodes.push_back(n);
            mass += n.weight * n.value;
        }
    }
}

}  // namespace heatlab
