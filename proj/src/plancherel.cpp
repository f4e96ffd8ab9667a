#include "heatlab/plancherel.hpp"

#include <cmath>
#include <stdexcept>

#include "heatlab/gammafn.hpp"

namespace heatlab {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

Plancherel::Plancherel(const SymmetricSpace& space) : space_(&space) {
    for (const auto& r : space.reduced_roots()) {
        Factor f;
        f.alpha = r.alpha;
        f.alpha_sq = norm_sq(r.alpha);
        f.m1 = r.m_alpha;
        f.m2 = r.m_2alpha;
        const double A = dot(space.rho(), r.alpha) / f.alpha_sq;
        f.log_norm = std::lgamma(A + 0.5 * f.m1) - std::lgamma(A) +
                     std::lgamma(0.5 * A + 0.25 * f.m1 + 0.5 * f.m2) -
                     std::lgamma(0.5 * A + 0.25 * f.m1);
        factors_.push_back(f);
    }
    double b0 = 1.0;
    for (std::size_t k = 0; k < factors_.size(); ++k)
        b0 *= b_factor(static_cast<int>(k), 0.0).real();
    b_zero_ = b0;
}

std::complex<double> Plancherel::log_b_factor(const Factor& f, std::complex<double> z) const {
    const std::complex<double> iz = kI * z;
    return std::log(f.alpha_sq) + f.log_norm + log_gamma(iz + 1.0) -
           log_gamma(iz + 0.5 * f.m1) + log_gamma(0.5 * iz + 0.25 * f.m1) -
           log_gamma(0.5 * iz + 0.25 * f.m1 + 0.5 * f.m2);
}

std::complex<double> Plancherel::b_factor(int k, std::complex<double> z) const {
    return std::exp(log_b_factor(factors_[static_cast<std::size_t>(k)], z));
}

std::complex<double> Plancherel::c_factor(int k, std::complex<double> z) const {
    const auto& f = factors_[static_cast<std::size_t>(k)];
    // c_a = b_a / (|alpha|^2 iz); keep in log form until the end.
    return std::exp(log_b_factor(f, z)) / (f.alpha_sq * kI * z);
}

std::complex<double> Plancherel::c_function(const Vec& xi, const Vec& eta) const {
    std::complex<double> log_c = 0.0;
    for (const auto& f : factors_) {
        const std::complex<double> z = cdot(f.alpha, xi, eta) / f.alpha_sq;
        log_c += log_b_factor(f, z) - std::log(f.alpha_sq * kI * z);
    }
    return std::exp(log_c);
}

double Plancherel::density(const Vec& lambda) const {
    // pi(lambda)^2 / (b(lambda) b(-lambda)); every factor is pole-free for real
    // lambda, so the density vanishes quadratically on the walls and nowhere else.
    double log_mag = 0.0;
    double pi2 = 1.0;
    for (const auto& f : factors_) {
        const double z = dot(f.alpha, lambda) / f.alpha_sq;
        pi2 *= dot(f.alpha, lambda);
        log_mag += (log_b_factor(f, z) + log_b_factor(f, -z)).real();
    }
    return pi2 * pi2 * std::exp(-log_mag);
}

std::complex<double> Plancherel::c_inv_minus(const Vec& lambda) const {
    std::complex<double> num = 1.0;
    std::complex<double> log_b = 0.0;
    for (const auto& f : factors_) {
        const double z = dot(f.alpha, lambda) / f.alpha_sq;
        num *= -kI * dot(f.alpha, lambda);
        log_b += log_b_factor(f, -z);
    }
    return num * std::exp(-log_b);
}

std::complex<double> Plancherel::b_minus(const Vec& xi, const Vec& eta) const {
    if (!space_->in_closed_chamber(eta, 1e-9))
        throw std::domain_error(
            "b_minus: imaginary part must lie in the closed positive chamber");
    std::complex<double> log_b = 0.0;
    for (const auto& f : factors_) {
        const std::complex<double> z = -cdot(f.alpha, xi, eta) / f.alpha_sq;
        log_b += log_b_factor(f, z);
    }
    return std::exp(log_b);
}

std::complex<double> Plancherel::b_minus_inv(const Vec& xi, const Vec& eta) const {
    return 1.0 / b_minus(xi, eta);
}

double Plancherel::log_b_growth_model(const Vec& lambda) const {
    double s = 0.0;
    for (const auto& f : factors_)
        s += (1.0 - 0.5 * (f.m1 + f.m2)) * std::log1p(std::abs(dot(f.alpha, lambda)));
    return s;
}

}  // namespace heatlab
