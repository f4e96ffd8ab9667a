#include "heatlab/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "heatlab/gammafn.hpp"
#include "heatlab/ode.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Bernoulli numbers B_2, B_4, ..., B_14: enough odd-part coefficients of
// coth/tanh for the Taylor zone r < 0.05 (the truncation error is ~r^16).
constexpr double kBernoulli[7] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                  5.0 / 66, -691.0 / 2730, 7.0 / 6};

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

// ---------------------------------------------------------------------------
// Rank-one Harish-Chandra series
// ---------------------------------------------------------------------------

std::vector<std::complex<double>> rank1_wave_coeffs(const Plancherel& pl, std::complex<double> lam,
                                                    int k_cap) {
    const auto& sp = pl.space();
    if (!sp.is_rank_one()) throw std::logic_error("rank1_wave_coeffs needs a rank-one space");
    if (std::imag(lam) < -1.0 + kLambdaRegTol)
        throw std::domain_error("rank1_wave_coeffs: recursion poles at lambda = -ik");
    const int m1 = sp.m1(), m2 = sp.m2();
    const double rho = sp.rho_scalar();
    const cd ilam = kI * lam;
    std::vector<cd> gam;
    gam.push_back(1.0);
    for (int k = 1; k <= k_cap; ++k) {
        cd acc = 0.0;
        for (int j = 1; j <= k; ++j) {
            const double coeff = 2.0 * m1 + (j % 2 == 0 ? 4.0 * m2 : 0.0);
            acc += coeff * (rho + 2.0 * (k - j) - ilam) * gam[static_cast<std::size_t>(k - j)];
        }
        const cd g = acc / (4.0 * k * (static_cast<double>(k) - ilam));
        gam.push_back(g);
        if (k >= 8 && std::abs(g) * std::exp(-2.0 * k) < 1e-18) break;
    }
    return gam;
}

RankOneSeries::RankOneSeries(const Plancherel& pl, double lam) : lam_(lam) {
    if (std::abs(lam) < kLambdaRegTol)
        throw std::domain_error(
            "RankOneSeries: spectral parameter too close to 0; use the ODE engine");
    gam_ = rank1_wave_coeffs(pl, lam);
    c_lam_ = pl.c_function(Vec{lam}, Vec::zero(1));
    c_inv_minus_ = pl.c_inv_minus(Vec{lam});
}

std::complex<double> RankOneSeries::wave(double r) const {
    const double q = std::exp(-2.0 * r);
    cd sum = 0.0;
    double qk = 1.0;
    for (const cd& g : gam_) {
        sum += g * qk;
        qk *= q;
    }
    return std::exp(kI * (lam_ * r)) * sum;
}

double RankOneSeries::phi_hat(double r) const { return 2.0 * std::real(c_lam_ * wave(r)); }

double RankOneSeries::weighted_phi_hat(double r) const {
    return 2.0 * std::real(c_inv_minus_ * wave(r));
}

// ---------------------------------------------------------------------------
// Rank-two Harish-Chandra series
// ---------------------------------------------------------------------------

RankTwoSeries::RankTwoSeries(const Plancherel& pl, const Vec& lam, int order)
    : pl_(&pl), order_(order) {
    const auto& sp = pl.space();
    if (sp.rank() != 2) throw std::logic_error("RankTwoSeries needs a rank-two space");
    for (const auto& r : sp.reduced_roots())
        if (std::abs(dot(r.alpha, lam)) < kLambdaRegTol)
            throw std::domain_error("RankTwoSeries: spectral parameter is nearly singular");
    s1_ = sp.reduced_roots()[static_cast<std::size_t>(sp.simple_indices()[0])].alpha;
    s2_ = sp.reduced_roots()[static_cast<std::size_t>(sp.simple_indices()[1])].alpha;

    // Full positive roots with integer coordinates in the simple basis.
    struct Full {
        Vec v;
        int mult, c1, c2;
    };
    std::vector<Full> full;
    const double den = cross2(s1_, s2_);
    auto coords = [&](const Vec& v, int mult) {
        const double c1 = cross2(v, s2_) / den, c2 = cross2(s1_, v) / den;
        const int i1 = static_cast<int>(std::lround(c1)), i2 = static_cast<int>(std::lround(c2));
        if (std::abs(c1 - i1) > 1e-9 || std::abs(c2 - i2) > 1e-9 || i1 < 0 || i2 < 0)
            throw std::logic_error("positive root is not a lattice point of the simple basis");
        full.push_back({v, mult, i1, i2});
    };
    for (const auto& r : sp.reduced_roots()) {
        coords(r.alpha, r.m_alpha);
        if (r.m_2alpha > 0) coords(r.alpha * 2.0, r.m_2alpha);
    }

    const int nsz = order_ + 1;
    for (const auto& w : sp.weyl()) {
        Branch br;
        br.wlam = w.apply(lam);
        br.c_wlam = pl.c_function(br.wlam, Vec::zero(2));
        br.gamma.assign(static_cast<std::size_t>(nsz * nsz), 0.0);
        auto g = [&](int a, int b) -> cd& {
            return br.gamma[static_cast<std::size_t>(a * nsz + b)];
        };
        g(0, 0) = 1.0;
        for (int d = 1; d <= 2 * order_; ++d) {
            for (int n1 = std::max(0, d - order_); n1 <= std::min(d, order_); ++n1) {
                const int n2 = d - n1;
                const Vec q = (s1_ * static_cast<double>(n1) + s2_ * static_cast<double>(n2)) * 2.0;
                const cd denom = norm_sq(q) - 2.0 * kI * dot(q, br.wlam);
                cd acc = 0.0;
                for (const auto& f : full) {
                    for (int k = 1;; ++k) {
                        const int p1 = n1 - k * f.c1, p2 = n2 - k * f.c2;
                        if (p1 < 0 || p2 < 0) break;
                        const Vec qp =
                            (s1_ * static_cast<double>(p1) + s2_ * static_cast<double>(p2)) * 2.0;
                        const cd fac = dot(f.v, qp + sp.rho()) - kI * dot(f.v, br.wlam);
                        acc += static_cast<double>(f.mult) * fac * g(p1, p2);
                        if (f.c1 == 0 && f.c2 == 0)
                            throw std::logic_error("zero positive root coordinates");
                    }
                }
                g(n1, n2) = 2.0 * acc / denom;
            }
        }
        branches_.push_back(std::move(br));
    }
}

std::complex<double> RankTwoSeries::phi_hat(const Vec& H) const {
    const double x1 = std::exp(-2.0 * dot(s1_, H)), x2 = std::exp(-2.0 * dot(s2_, H));
    const int nsz = order_ + 1;
    cd total = 0.0;
    for (const auto& br : branches_) {
        cd lat = 0.0;
        double p1 = 1.0;
        for (int n1 = 0; n1 <= order_; ++n1) {
            double p12 = p1;
            for (int n2 = 0; n2 <= order_; ++n2) {
                lat += br.gamma[static_cast<std::size_t>(n1 * nsz + n2)] * p12;
                p12 *= x2;
            }
            p1 *= x1;
        }
        total += br.c_wlam * std::exp(kI * dot(br.wlam, H)) * lat;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Engine facade
// ---------------------------------------------------------------------------

SphericalEngine::SphericalEngine(const SymmetricSpace& space) : space_(&space), pl_(space) {
    if (space.rank() >= 2) {
        complex_type_ = true;
        for (const auto& r : space.reduced_roots())
            if (r.m_alpha != 2 || r.m_2alpha != 0) complex_type_ = false;
        if (complex_type_) {
            const int d = space.num_reduced_positive();
            const Vec p = space.rho0();
            double alt = 0.0;
            for (const auto& w : space.weyl())
                alt += w.det() * std::pow(dot(w.apply(p), p), d);
            kappa_ = alt / (space.pi_prod(p) * space.pi_prod(p));
            if (!(kappa_ > 0.0))
                throw std::logic_error("alternating-sum constant must be positive");
        }
    }
    if (space.rank() == 1) {
        const double c1 = space.m1() + space.m2();  // 2a+1 for the coth part
        const double c2 = space.m2();               // 2b+1 for the tanh part
        for (int j = 1; j <= 7; ++j) {
            const double p4 = std::pow(4.0, j), f = kBernoulli[j - 1] / factorial(2 * j);
            taylor_A_[j] = c1 * p4 * f + c2 * p4 * (p4 - 1.0) * f;
        }
    }
}

void SphericalEngine::taylor_u(std::complex<double> lam, double r, std::complex<double>& u,
                               std::complex<double>& du) const {
    const double a_jac = 0.5 * (space_->m1() + space_->m2() - 1.0);
    const double rho = space_->rho_scalar();
    const cd ev = lam * lam + rho * rho;
    const double r2 = r * r;
    std::array<cd, 61> um;
    um[0] = 1.0;
    u = 1.0;
    du = 0.0;
    double rpow = 1.0;
    for (int m = 1; m <= 60; ++m) {
        cd s = ev * um[static_cast<std::size_t>(m - 1)];
        for (int j = 1; j <= std::min(m - 1, 7); ++j)
            s += taylor_A_[j] * 2.0 * (m - j) * um[static_cast<std::size_t>(m - j)];
        um[static_cast<std::size_t>(m)] = -s / (4.0 * m * (m + a_jac));
        rpow *= r2;
        const cd term = um[static_cast<std::size_t>(m)] * rpow;
        u += term;
        du += 2.0 * m * term / r;
        if (m >= 6 && std::abs(term) < 1e-19 * std::max(1.0, std::abs(u))) break;
    }
}

std::complex<double> SphericalEngine::ode_phi_hat_rank1(std::complex<double> lam, double r) const {
    const double rho = space_->rho_scalar();
    if (std::abs(lam.imag()) * r > 600.0)
        throw std::domain_error("ode_phi_hat_rank1: e^{|Im lambda| r} would overflow");
    const int m1 = space_->m1(), m2 = space_->m2();
    const cd ev2 = lam * lam + 2.0 * rho * rho;
    auto rhs = [&](double t, const OdeState<2>& y, OdeState<2>& dy) {
        const double A = m1 / std::tanh(t) + 2.0 * m2 / std::tanh(2.0 * t);
        dy[0] = y[1];
        dy[1] = -(A - 2.0 * rho) * y[1] - (ev2 - rho * A) * y[0];
    };
    cd u, du;
    taylor_u(lam, kTaylorRadius, u, du);
    const double e = std::exp(rho * kTaylorRadius);
    OdeState<2> y{e * u, e * (du + rho * u)};
    ode_integrate<2>(rhs, kTaylorRadius, r, y, 1e-11, 1e-13, "spherical radial ODE");
    return y[0];
}

std::complex<double> SphericalEngine::phi_hat_rank1(std::complex<double> lam, double r) const {
    if (r < 0.0) throw std::invalid_argument("phi_hat: radius must be nonnegative");
    if (r < 1e-12) return 1.0;
    if (r < kTaylorRadius) {
        cd u, du;
        taylor_u(lam, r, u, du);
        return std::exp(space_->rho_scalar() * r) * u;
    }
    const bool real_lam = std::abs(lam.imag()) < 1e-14;
    if (real_lam && std::abs(lam.real()) >= kLambdaRegTol && r >= kSeriesRadius)
        return RankOneSeries(pl_, lam.real()).phi_hat(r);
    return ode_phi_hat_rank1(lam, r);
}

std::complex<double> SphericalEngine::phi_hat(const Vec& xi, const Vec& eta, const Vec& H) const {
    if (xi.dim() != space_->rank() || eta.dim() != space_->rank() || H.dim() != space_->rank())
        throw std::invalid_argument("phi_hat: dimension mismatch with the space rank");
    if (norm(eta) > std::sqrt(space_->rho_norm_sq()) + 1e-9)
        throw std::domain_error("phi_hat: spectral parameter outside the tube |Im lambda| <= |rho|");
    if (!space_->in_closed_chamber(H, 1e-9))
        throw std::invalid_argument("phi_hat: H must lie in the closed positive chamber");
    if (complex_type_) return closed_form_phi_hat(xi, eta, H);
    if (space_->rank() == 1) return phi_hat_rank1(cd(xi[0], eta[0]), H[0]);
    throw std::logic_error(
        "phi_hat: no engine for rank >= 2 spaces with multiplicities other than 2");
}

std::complex<double> SphericalEngine::phi_hat(const Vec& xi, const Vec& H) const {
    return phi_hat(xi, Vec::zero(space_->rank()), H);
}

double SphericalEngine::phi0_hat(const Vec& H) const {
    if (complex_type_) {
        // pi(rho) kappa / d! * pi(H) / prod(1 - e^{-2<a,H>}), with the wall-stable
        // per-factor form <a,H> / (1 - e^{-2<a,H>}) -> 1/2.
        double v = space_->pi_prod(space_->rho()) * kappa_ /
                   factorial(space_->num_reduced_positive());
        for (const auto& r : space_->reduced_roots()) {
            const double a = dot(r.alpha, H);
            v *= (a < 1e-12) ? 0.5 : a / -std::expm1(-2.0 * a);
        }
        return v;
    }
    if (space_->rank() == 1) return phi_hat_rank1(0.0, H[0]).real();
    throw std::logic_error("phi0_hat: unsupported space");
}

std::vector<double> SphericalEngine::phi0_hat_profile(const std::vector<double>& rs) const {
    return phi_hat_profile(0.0, rs);
}

std::vector<double> SphericalEngine::phi_hat_profile(double lam,
                                                     const std::vector<double>& rs) const {
    if (space_->rank() != 1)
        throw std::logic_error("phi_hat_profile: batched radii exist only in rank one");
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
        if (rs[i + 1] < rs[i])
            throw std::invalid_argument("phi_hat_profile: radii must be ascending");
    std::vector<double> out(rs.size());
    const bool series_ok = std::abs(lam) >= kLambdaRegTol;
    const double ode_end = series_ok ? kSeriesRadius : std::numeric_limits<double>::infinity();
    // Taylor zone.
    std::size_t i = 0;
    for (; i < rs.size() && rs[i] < kTaylorRadius; ++i)
        out[i] = phi_hat_rank1(lam, rs[i]).real();
    // One ODE sweep through every checkpoint below the series zone.
    std::vector<double> stops;
    const std::size_t ode_begin = i;
    for (; i < rs.size() && rs[i] < ode_end; ++i) stops.push_back(rs[i]);
    if (!stops.empty()) {
        const double rho = space_->rho_scalar();
        const int m1 = space_->m1(), m2 = space_->m2();
        const cd ev2 = cd(lam * lam) + 2.0 * rho * rho;
        auto rhs = [&](double t, const OdeState<2>& y, OdeState<2>& dy) {
            const double A = m1 / std::tanh(t) + 2.0 * m2 / std::tanh(2.0 * t);
            dy[0] = y[1];
            dy[1] = -(A - 2.0 * rho) * y[1] - (ev2 - rho * A) * y[0];
        };
        cd u, du;
        taylor_u(lam, kTaylorRadius, u, du);
        const double e = std::exp(rho * kTaylorRadius);
        OdeState<2> y{e * u, e * (du + rho * u)};
        std::size_t slot = ode_begin;
        ode_integrate_path<2>(
            rhs, kTaylorRadius, stops, y,
            [&](double, const OdeState<2>& st) { out[slot++] = st[0].real(); }, 1e-11, 1e-13,
            "spherical radial ODE sweep");
    }
    // Series zone.
    if (i < rs.size()) {
        RankOneSeries series(pl_, lam);
        for (; i < rs.size(); ++i) out[i] = series.phi_hat(rs[i]);
    }
    return out;
}

std::vector<std::complex<double>> SphericalEngine::phi_hat_profile_c(
    std::complex<double> lam, const std::vector<double>& rs) const {
    if (space_->rank() != 1)
        throw std::logic_error("phi_hat_profile_c: batched radii exist only in rank one");
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
        if (rs[i + 1] < rs[i])
            throw std::invalid_argument("phi_hat_profile_c: radii must be ascending");
    const double sig = std::abs(lam.imag());
    if (!rs.empty() && sig * rs.back() > 600.0)
        throw std::domain_error("phi_hat_profile_c: e^{|Im lambda| r} would overflow");
    std::vector<cd> out(rs.size());
    // Taylor zone, then one ODE sweep through every remaining checkpoint. No
    // series zone: the second wave would need coefficients at -lambda, whose
    // recursion breaks down once Im lambda >= 1. The sweep itself is regular
    // for any imaginary shift; the only hard limit is e^{|Im lambda| r}
    // overflow, guarded above.
    std::size_t i = 0;
    for (; i < rs.size() && rs[i] < kTaylorRadius; ++i) out[i] = phi_hat_rank1(lam, rs[i]);
    if (i < rs.size()) {
        const double rho = space_->rho_scalar();
        const int m1 = space_->m1(), m2 = space_->m2();
        const cd ev2 = lam * lam + 2.0 * rho * rho;
        auto rhs = [&](double t, const OdeState<2>& y, OdeState<2>& dy) {
            const double A = m1 / std::tanh(t) + 2.0 * m2 / std::tanh(2.0 * t);
            dy[0] = y[1];
            dy[1] = -(A - 2.0 * rho) * y[1] - (ev2 - rho * A) * y[0];
        };
        cd u, du;
        taylor_u(lam, kTaylorRadius, u, du);
        const double e = std::exp(rho * kTaylorRadius);
        OdeState<2> y{e * u, e * (du + rho * u)};
        std::vector<double> stops(rs.begin() + static_cast<std::ptrdiff_t>(i), rs.end());
        std::size_t slot = i;
        ode_integrate_path<2>(
            rhs, kTaylorRadius, stops, y,
            [&](double, const OdeState<2>& st) { out[slot++] = st[0]; }, 1e-11, 1e-13,
            "spherical radial ODE sweep (complex)");
    }
    return out;
}

std::complex<double> SphericalEngine::weighted_phi_hat(const Vec& lam, const Vec& H) const {
    if (complex_type_) {
        if (space_->mu_min(H) < 1e-6)
            return pl_.density(lam) * closed_form_phi_hat(lam, Vec::zero(2), H);
        // i pi(lam) S(lam, H) / (pi(rho) prod(1 - e^{-2<a,H>})): exact for every
        // real lam, vanishing smoothly on the spectral walls.
        cd S = 0.0;
        for (const auto& w : space_->weyl())
            S += w.det() * std::exp(kI * dot(w.apply(lam), H));
        double D = 1.0;
        for (const auto& r : space_->reduced_roots()) D *= -std::expm1(-2.0 * dot(r.alpha, H));
        return kI * space_->pi_prod(lam) * S / (space_->pi_prod(space_->rho()) * D);
    }
    const double l = lam[0], r = H[0];
    if (std::abs(l) >= kLambdaRegTol && r >= kSeriesRadius)
        return RankOneSeries(pl_, l).weighted_phi_hat(r);
    return pl_.density(lam) * phi_hat_rank1(l, r).real();
}

std::complex<double> SphericalEngine::closed_form_raw(const Vec& xi, const Vec& eta,
                                                      const Vec& H) const {
    cd S = 0.0;
    for (const auto& w : space_->weyl()) {
        const Vec wxi = w.apply(xi), weta = w.apply(eta);
        const cd expo(-dot(weta, H), dot(wxi, H));
        S += w.det() * std::exp(expo);
    }
    cd pi_il = 1.0;
    double D = 1.0;
    for (const auto& r : space_->reduced_roots()) {
        pi_il *= cd(-dot(r.alpha, eta), dot(r.alpha, xi));
        D *= -std::expm1(-2.0 * dot(r.alpha, H));
    }
    return space_->pi_prod(space_->rho()) * S / (pi_il * D);
}

std::complex<double> SphericalEngine::closed_form_wallsafe(const Vec& xi, const Vec& eta,
                                                           const Vec& H) const {
    double amin = std::numeric_limits<double>::infinity();
    for (const auto& r : space_->reduced_roots())
        amin = std::min(amin, std::abs(dot(r.alpha, H)));
    if (amin > 1e-6) return closed_form_raw(xi, eta, H);
    // Fourth-order extrapolation along the regular direction rho0.
    const Vec dir = space_->rho0() * (1.0 / norm(space_->rho0()));
    const double h = 1e-4;
    auto g = [&](double s) {
        return 0.5 * (closed_form_raw(xi, eta, H + dir * s) +
                      closed_form_raw(xi, eta, H - dir * s));
    };
    return (4.0 * g(0.5 * h) - g(h)) / 3.0;
}

std::complex<double> SphericalEngine::closed_form_phi_hat(const Vec& xi, const Vec& eta,
                                                          const Vec& H) const {
    if (!complex_type_) throw std::logic_error("closed form exists only for complex-type spaces");
    // At the origin every root factor degenerates at once and the extrapolated
    // quotient below loses six digits to cancellation; the value there is the
    // normalization itself.
    if (norm(H) < 1e-10) return 1.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& r : space_->reduced_roots())
        dmin = std::min(dmin, std::abs(cdot(r.alpha, xi, eta)));
    if (dmin > 1e-6) return closed_form_wallsafe(xi, eta, H);
    if (norm(xi) + norm(eta) < 1e-12) return phi0_hat(H);
    // Singular spectral parameter: extrapolate through regular neighbors.
    const Vec dir = space_->rho0() * (1.0 / norm(space_->rho0()));
    const double h = 2e-4;
    auto g = [&](double s) {
        return 0.5 * (closed_form_wallsafe(xi + dir * s, eta, H) +
                      closed_form_wallsafe(xi - dir * s, eta, H));
    };
    return (4.0 * g(0.5 * h) - g(h)) / 3.0;
}

std::complex<double> phi_hat_integral_rep(const SymmetricSpace& space, std::complex<double> lam,
                                          double r) {
    if (space.rank() != 1 || space.m2() != 0)
        throw std::logic_error("integral representation implemented for the real hyperbolic family");
    const int n = space.dim();
    const double rho = space.rho_scalar();
    if (rho * r > 300.0)
        throw std::domain_error("phi_hat_integral_rep: radius too large for direct quadrature");
    const double cn =
        std::exp(std::lgamma(0.5 * n) - std::lgamma(0.5 * (n - 1))) / std::sqrt(std::numbers::pi_v<double>);
    const double sh = std::sinh(r), emr = std::exp(-r);
    const cd expo = -(kI * lam + rho);
    // The base cosh r - sinh r cos(th) collapses into an e^{-r} boundary layer
    // at th = 0, so the panels refine geometrically toward it; below theta_min
    // the base is flat to 1e-8 relative and one plain panel finishes the tail.
    const double theta_min = 1e-4 * emr;
    std::vector<double> cuts{0.0, theta_min};
    for (double b = std::numbers::pi_v<double>; b > theta_min; b *= 0.5) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> xs, ws;
    for (std::size_t i = 1; i < cuts.size(); ++i)
        append_gauss_panels(cuts[i - 1], cuts[i], 1, 24, xs, ws);
    cd acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double sp = std::sin(0.5 * xs[i]);
        const double base = emr + 2.0 * sh * sp * sp;
        acc += ws[i] * std::exp(expo * std::log(base) + rho * r) *
               std::pow(std::sin(xs[i]), n - 2);
    }
    return cn * acc;
}

}  // namespace heatlab
