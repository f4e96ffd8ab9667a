#include "heatlab/solvable.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "heatlab/hyper2.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double law_of_cosines(double a, double b, double theta) {
    const double m = std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(theta);
    return std::acosh(m < 1.0 ? 1.0 : m);
}

/// Appends `n` panels on [a, b] whose widths shrink geometrically toward the
/// `toward_a` end; used where an integrand has a sqrt-type kink at one end.
void append_geo_panels(double a, double b, bool toward_a, int n, int per_panel,
                       std::vector<double>& x, std::vector<double>& w) {
    std::vector<double> cuts{a};
    double len = b - a;
    for (int j = n - 1; j >= 1; --j) cuts.push_back(a + std::ldexp(len, -j));
    cuts.push_back(b);
    if (!toward_a)
        for (auto& c : cuts) c = a + b - c;
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        append_gauss_panels(cuts[i], cuts[i + 1], 1, per_panel, x, w);
}

}  // namespace

SolvableLab::SolvableLab(const HeatEngine& eng) : eng_(&eng), space_(&eng.space()) {
    rho2_ = space_->rho_norm_sq();
    cm_ = space_->meas_const();
    if (space_->is_rank_one()) rho_ = space_->rho_scalar();
}

void SolvableLab::require_rank_one(const char* who) const {
    if (!space_->is_rank_one())
        throw std::logic_error(std::string(who) + ": rank-one space required");
}

void SolvableLab::require_half_space(const char* who) const {
    require_rank_one(who);
    if (space_->m2() != 0 || space_->dim() > 3)
        throw std::logic_error(std::string(who) +
                               ": half-space model covers real hyperbolic dimensions 2 and 3");
}

void SolvableLab::require_plane(const char* who) const {
    require_half_space(who);
    if (space_->dim() != 2)
        throw std::logic_error(std::string(who) + ": hyperbolic plane required");
}

double SolvableLab::norm_exponent() const {
    return 0.5 * (space_->rank() + space_->num_reduced_positive());
}

// --- half-space model --------------------------------------------------------

double SolvableLab::model_distance(const HalfSpacePoint& p) const {
    if (p.height <= 0.0) throw std::domain_error("model_distance: height must be positive");
    return half_space_dist(std::hypot(p.x1, p.x2), p.height);
}

double SolvableLab::iwasawa_coordinate(const HalfSpacePoint& p) {
    if (p.height <= 0.0) throw std::domain_error("iwasawa_coordinate: height must be positive");
    return std::log(p.height);
}

double SolvableLab::modular_weight(const HalfSpacePoint& p) const {
    require_half_space("modular_weight");
    return std::exp(-rho_ * iwasawa_coordinate(p));
}

double SolvableLab::h_tilde(double t, const HalfSpacePoint& p) const {
    require_half_space("h_tilde");
    const double r = model_distance(p);
    return std::exp(-rho_ * iwasawa_coordinate(p) + rho2_ * t +
                    eng_->log_kernel(t, Vec{r}));
}

bool SolvableLab::kostant_inequality(const HalfSpacePoint& p, double slack) const {
    require_half_space("kostant_inequality");
    return rho_ * iwasawa_coordinate(p) <= rho_ * model_distance(p) + slack;
}

int SolvableLab::kostant_failures(double box, int npoints, unsigned seed) const {
    require_half_space("kostant_failures");
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-box, box);
    int bad = 0;
    for (int i = 0; i < npoints; ++i) {
        HalfSpacePoint p;
        p.x1 = u(gen);
        if (space_->dim() == 3) p.x2 = u(gen);
        p.height = std::exp(u(gen));
        if (!kostant_inequality(p)) ++bad;
    }
    return bad;
}

// --- right-Haar radial reduction ---------------------------------------------

SolvableLab::Grid SolvableLab::radial_grid(double lo, double hi, double panel_width) const {
    if (!(hi > lo)) throw std::invalid_argument("radial_grid: empty interval");
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    Grid g;
    append_gauss_panels(lo, hi, panels, 16, g.x, g.w);
    return g;
}

double SolvableLab::right_haar_radial(const std::function<double(double)>& F, double r_lo,
                                      double r_hi) const {
    require_rank_one("right_haar_radial");
    const Grid g = radial_grid(r_lo, r_hi, 0.25);
    const auto ph = eng_->spherical().phi0_hat_profile(g.x);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double r = g.x[i];
        acc += g.w[i] * space_->density(Vec{r}) * std::exp(std::log(ph[i]) - rho_ * r) * F(r);
    }
    return cm_ * acc;
}

double SolvableLab::hat_mass_sum(double t, const Grid& g) const {
    const auto ph = eng_->spherical().phi0_hat_profile(g.x);
    const auto hh = eng_->hhat_profile(t, g.x);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        acc += g.w[i] * space_->density_hat(Vec{g.x[i]}) * ph[i] * hh[i];
    return cm_ * acc;
}

double SolvableLab::dr_total_mass(double t) const {
    eng_->check_time(t);
    if (!space_->is_rank_one()) return rank2_window_mass(t, -1.0);
    const double r_max = 10.0 * std::sqrt(t) + 10.0;
    return hat_mass_sum(t, radial_grid(0.0, r_max, std::min(0.5, std::sqrt(t) / 8.0)));
}

double SolvableLab::dr_mass_on(double t, double r_lo, double r_hi) const {
    require_rank_one("dr_mass_on");
    eng_->check_time(t);
    return hat_mass_sum(
        t, radial_grid(r_lo, r_hi, std::min(0.25, (r_hi - r_lo) / 40.0)));
}

double SolvableLab::shell_weight_radial(double r_lo, double r_hi) const {
    return right_haar_radial([](double) { return 1.0; }, r_lo, r_hi);
}

double SolvableLab::shell_weight_2d(double r_lo, double r_hi) const {
    require_plane("shell_weight_2d");
    if (!(0.0 < r_lo && r_lo < r_hi))
        throw std::invalid_argument("shell_weight_2d: need 0 < r_lo < r_hi");
    // Half-plane slice at height h meets the shell in |x| between the exact
    // section endpoints below; the h-integrand picks up sqrt kinks where a
    // section opens or closes, so panels refine geometrically toward each of
    // the four breakpoints e^{+-r_lo}, e^{+-r_hi}.
    auto half_width = [](double h, double r) {
        const double s = 2.0 * h * (std::cosh(r) - 1.0) - (h - 1.0) * (h - 1.0);
        return s > 0.0 ? std::sqrt(s) : 0.0;
    };
    std::vector<double> hx, hw;
    const double a = std::exp(-r_hi), b = std::exp(-r_lo), c = std::exp(r_lo),
                 d = std::exp(r_hi);
    append_geo_panels(a, std::sqrt(a * b), true, 24, 16, hx, hw);
    append_geo_panels(std::sqrt(a * b), b, false, 24, 16, hx, hw);
    append_geo_panels(b, std::sqrt(b * c), true, 24, 16, hx, hw);
    append_geo_panels(std::sqrt(b * c), c, false, 24, 16, hx, hw);
    append_geo_panels(c, std::sqrt(c * d), true, 24, 16, hx, hw);
    append_geo_panels(std::sqrt(c * d), d, false, 24, 16, hx, hw);
    double acc = 0.0;
    for (std::size_t i = 0; i < hx.size(); ++i) {
        const double h = hx[i];
        const double width = half_width(h, r_hi) - half_width(h, r_lo);
        if (width > 0.0) acc += hw[i] * 2.0 * width * std::pow(h, rho_ - 2.0);
    }
    return acc;
}

// --- horospherical projection ------------------------------------------------

double SolvableLab::euclidean_gauss(double t, double a_coord) {
    return std::exp(-a_coord * a_coord / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

double SolvableLab::horospherical_projection(double t, double a_coord) const {
    require_half_space("horospherical_projection");
    eng_->check_time(t);
    if (std::abs(a_coord) > 4.0 * std::sqrt(t))
        throw std::domain_error("horospherical_projection: |A| <= 4 sqrt(t) required");
    const double h = std::exp(a_coord);
    // The x-integrand decays like exp(w - (2w)^2/4t) once x = e^w dominates
    // the distance; W solves w^2/t - w = 40, plus margins for the height.
    const double W = 0.5 * (t + std::sqrt(t * t + 160.0 * t)) + 0.5 * std::abs(a_coord) + 2.0;
    const double d_max = half_space_dist(std::exp(W), h) + 0.5;
    const auto tab = eng_->log_hhat_table(t, d_max);
    auto kernel_at = [&](double x) {
        const double dist = half_space_dist(x, h);
        return std::exp(tab(dist) - rho_ * dist);
    };
    const bool plane = space_->dim() == 2;
    std::vector<double> xs, ws;
    append_gauss_panels(0.0, 2.0, 6, 16, xs, ws);
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        acc += ws[i] * kernel_at(xs[i]) * (plane ? 1.0 : xs[i]);
    std::vector<double> us, uw;  // x = e^u beyond x = 2
    append_gauss_panels(std::log(2.0), W, std::max(4, static_cast<int>(std::ceil(W / 0.4))), 16,
                        us, uw);
    for (std::size_t i = 0; i < us.size(); ++i) {
        const double x = std::exp(us[i]);
        acc += uw[i] * kernel_at(x) * (plane ? x : x * x);
    }
    const double angular = plane ? 2.0 : 2.0 * kPi;
    return std::exp(-rho_ * a_coord) * angular * acc;
}

// --- critical window ---------------------------------------------------------

WindowTilde SolvableLab::window_tilde(double t, double eps) const {
    if (t < 1.0) throw std::domain_error("window_tilde: t >= 1 required");
    WindowTilde w;
    w.t = t;
    w.eps = eps > 0.0 ? eps : std::pow(t, -0.25);
    w.lo = w.eps * std::sqrt(t);
    w.hi = std::sqrt(t) / w.eps;
    if (space_->is_rank_one()) {
        const double muhat = space_->mu_min(space_->axis());
        w.lo = std::max(w.lo, w.eps * std::sqrt(t) / muhat);
    }
    if (w.lo >= w.hi) throw std::domain_error("window_tilde: empty window (eps too large)");
    return w;
}

double SolvableLab::mass_outside_tilde(double t, double eps) const {
    eng_->check_time(t);
    if (!space_->is_rank_one()) {
        const WindowTilde w = window_tilde(t, eps);
        return 1.0 - rank2_window_mass(t, w.eps);
    }
    const WindowTilde w = window_tilde(t, eps);
    return 1.0 - dr_mass_on(t, w.lo, w.hi);
}

double SolvableLab::rank2_window_mass(double t, double eps) const {
    const auto& sph = eng_->spherical();
    const auto [th_lo, th_hi] = eng_->chamber_wedge();
    const double rt = std::sqrt(t);
    auto muhat = [&](double th) {
        return space_->mu_min(Vec{std::cos(th), std::sin(th)});
    };
    // Radial band per direction: the wall constraint raises the lower cut to
    // eps sqrt(t)/muhat(theta); eps <= 0 integrates the whole chamber.
    double band_lo = 0.0, band_hi = 10.0 * rt + 10.0;
    double ta = th_lo, tb = th_hi;
    if (eps > 0.0) {
        band_lo = eps * rt;
        band_hi = rt / eps;
        const double mu_cut = eps * eps;  // muhat below this empties the band
        const double mid = 0.5 * (th_lo + th_hi);
        if (muhat(mid) <= mu_cut)
            throw std::domain_error("rank2_window_mass: window empty at every direction");
        double lo = th_lo, hi = mid;
        for (int i = 0; i < 80; ++i) {
            const double m = 0.5 * (lo + hi);
            (muhat(m) > mu_cut ? hi : lo) = m;
        }
        ta = hi;
        lo = mid, hi = th_hi;
        for (int i = 0; i < 80; ++i) {
            const double m = 0.5 * (lo + hi);
            (muhat(m) > mu_cut ? lo : hi) = m;
        }
        tb = lo;
    }
    std::vector<double> tx, tw;
    if (eps > 0.0) {
        const double tm = 0.5 * (ta + tb);
        append_geo_panels(ta, tm, true, 14, 12, tx, tw);
        append_geo_panels(tm, tb, false, 14, 12, tx, tw);
    } else {
        append_gauss_panels(ta, tb, 12, 16, tx, tw);
    }
    const double rw_width = std::min(0.5, rt / 8.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        const double ct = std::cos(tx[i]), st = std::sin(tx[i]);
        double r_start = band_lo;
        if (eps > 0.0) r_start = std::max(band_lo, eps * rt / muhat(tx[i]));
        if (r_start >= band_hi) continue;
        std::vector<double> rx, rwt;
        append_gauss_panels(r_start, band_hi,
                            std::max(1, static_cast<int>(std::ceil((band_hi - r_start) / rw_width))),
                            12, rx, rwt);
        double row = 0.0;
        for (std::size_t j = 0; j < rx.size(); ++j) {
            const Vec H{rx[j] * ct, rx[j] * st};
            row += rwt[j] * rx[j] * space_->density_hat(H) * sph.phi0_hat(H) *
                   eng_->closed_form_hhat(t, H);
        }
        acc += tw[i] * row;
    }
    return cm_ * acc;
}

// --- refined chamber asymptotics ---------------------------------------------

std::array<double, 2> SolvableLab::refined_residuals(double t, double r, double eps) const {
    require_rank_one("refined_residuals");
    const WindowTilde w = window_tilde(t, eps);
    if (r < w.lo || r > w.hi)
        throw std::domain_error("refined_residuals: radius outside the critical window");
    const double pi_h = space_->pi_prod(Vec{r});
    const double model = std::pow(t, -0.5 * space_->pseudo_dim()) * pi_h *
                         std::exp(-r * r / (4.0 * t));
    const double first = (eng_->hhat(t, r) / model - eng_->crit_c3()) * w.eps * std::sqrt(t);
    const double second =
        (eng_->spherical().phi0_hat(Vec{r}) / pi_h - eng_->crit_c2()) * space_->mu_min(Vec{r});
    return {first, second};
}

// --- mass function -----------------------------------------------------------

SolvableLab::Grid SolvableLab::angular_rule(double depth_scale, int per_panel) const {
    // Geometric refinement of [0, pi] toward 0, deep enough to resolve the
    // e^{-r}-wide Iwasawa peak of the weight at the largest radius used.
    const int depth = std::max(12, static_cast<int>(std::ceil(depth_scale / std::log(2.0))));
    Grid g;
    append_gauss_panels(0.0, std::ldexp(kPi, -depth), 1, per_panel, g.x, g.w);
    for (int j = depth - 1; j >= 0; --j)
        append_gauss_panels(std::ldexp(kPi, -j - 1), std::ldexp(kPi, -j), 1, per_panel, g.x,
                            g.w);
    return g;
}

UniformCubicTable SolvableLab::log_phi0_table(double r_max) const {
    const double dr = 0.01;
    const auto n = static_cast<std::size_t>(std::ceil(r_max / dr)) + 2;
    std::vector<double> rs(n);
    for (std::size_t i = 0; i < n; ++i) rs[i] = dr * static_cast<double>(i);
    auto vals = eng_->spherical().phi0_hat_profile(rs);
    for (auto& v : vals) v = std::log(v);
    return UniformCubicTable(0.0, dr, std::move(vals));
}

double SolvableLab::mass_function_radial(const RadialDatum& v0, double r) const {
    require_half_space("mass_function_radial");
    if (r < 0.0) throw std::domain_error("mass_function_radial: negative radius");
    const auto lphi = log_phi0_table(r + v0.support() + 2.0);
    // Orbit average of phi_0 against the sin^{n-2} sphere weight.
    std::vector<double> ax, aw;
    append_gauss_panels(0.0, kPi, 12, 16, ax, aw);
    const double sin_pow = space_->dim() - 2;
    double wsum = 0.0;
    for (std::size_t j = 0; j < ax.size(); ++j) {
        aw[j] *= std::pow(std::sin(ax[j]), sin_pow);
        wsum += aw[j];
    }
    const Grid s = radial_grid(0.0, v0.support(), 0.2);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double si = s.x[i], vi = v0.value(si);
        if (vi == 0.0) continue;
        double avg = 0.0;
        for (std::size_t j = 0; j < ax.size(); ++j) {
            const double dist = law_of_cosines(r, si, ax[j]);
            avg += aw[j] * std::exp(lphi(dist) - rho_ * dist);
        }
        acc += s.w[i] * space_->density(Vec{si}) * vi * avg / wsum;
    }
    return cm_ * acc / std::exp(lphi(r) - rho_ * r);
}

namespace {

/// Hyperboloid coordinates of the half-plane point (x, h); the polar axis
/// theta = 0 is the height direction, so (0, e^s) maps to (cosh s, sinh s, 0).
H2Point plane_to_hyperboloid(double x, double h) {
    H2Point p;
    p.x0 = (x * x + h * h + 1.0) / (2.0 * h);
    p.x1 = (x * x + h * h - 1.0) / (2.0 * h);
    p.x2 = x / h;
    return p;
}

}  // namespace

double SolvableLab::mass_function_translated(const RadialDatum& u0, double c,
                                             const HalfSpacePoint& p) const {
    require_plane("mass_function_translated");
    const H2Point target = plane_to_hyperboloid(p.x1, p.height);
    const double rp = h2_radius(target);
    const auto lphi = log_phi0_table(rp + std::abs(c) + u0.support() + 2.0);
    const Grid s = radial_grid(0.0, u0.support(), 0.2);
    std::vector<double> ax, aw;
    append_gauss_panels(0.0, 2.0 * kPi, 24, 8, ax, aw);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double si = s.x[i], vi = u0.value(si);
        if (vi == 0.0) continue;
        double ring = 0.0;
        for (std::size_t j = 0; j < ax.size(); ++j) {
            const double dist = h2_dist(h2_about(c, si, ax[j]), target);
            ring += aw[j] * std::exp(lphi(dist) - rho_ * dist);
        }
        acc += s.w[i] * std::sinh(si) * vi * ring;
    }
    return acc / std::exp(lphi(rp) - rho_ * rp);
}

// --- kernel/ground ratio gap -------------------------------------------------

double SolvableLab::ratio_gap(double t, double R, double s, double theta) const {
    require_half_space("ratio_gap");
    const double d = law_of_cosines(R, s, theta);
    const auto& sph = eng_->spherical();
    const double kernel_ratio =
        std::exp(eng_->log_hhat(t, d) - rho_ * d - eng_->log_hhat(t, R) + rho_ * R);
    const double ground_ratio = std::exp(std::log(sph.phi0_hat(Vec{d})) - rho_ * d -
                                         std::log(sph.phi0_hat(Vec{R})) + rho_ * R);
    return kernel_ratio - ground_ratio;
}

// --- sup norms ---------------------------------------------------------------

double SolvableLab::sup_norm_htilde(double t) const {
    eng_->check_time(t);
    const double rt = std::sqrt(t);
    const double pow_t = std::pow(t, norm_exponent());
    if (space_->is_rank_one()) {
        const double step = rt / 60.0;
        std::vector<double> rs;
        for (double r = 0.0; r <= 4.0 * rt + 12.0; r += step) rs.push_back(r);
        const auto hh = eng_->hhat_profile(t, rs);
        std::size_t k = 0;
        for (std::size_t i = 1; i < hh.size(); ++i)
            if (hh[i] > hh[k]) k = i;
        double best = hh[k];
        if (k > 0 && k + 1 < hh.size()) {
            // One parabolic refinement through the three bracketing samples.
            const double denom = hh[k - 1] - 2.0 * hh[k] + hh[k + 1];
            if (denom < 0.0) {
                const double dr = 0.5 * step * (hh[k - 1] - hh[k + 1]) / denom;
                best = std::max(best, eng_->hhat(t, rs[k] + dr));
            }
        }
        return pow_t * best;
    }
    const auto [th_lo, th_hi] = eng_->chamber_wedge();
    double best = 0.0;
    const int nth = 64;
    for (int i = 0; i < nth; ++i) {
        const double th = th_lo + (th_hi - th_lo) * (i + 0.5) / nth;
        const double ct = std::cos(th), st = std::sin(th);
        for (double r = rt / 50.0; r <= 4.0 * rt + 12.0; r += rt / 50.0)
            best = std::max(best, eng_->closed_form_hhat(t, Vec{r * ct, r * st}));
    }
    return pow_t * best;
}

double SolvableLab::sup_probe_ratio(double t) const {
    const double rt = std::sqrt(t);
    double probe;
    if (space_->is_rank_one()) {
        probe = eng_->hhat(t, rt);
    } else {
        Vec dir = space_->rho();
        dir *= rt / std::sqrt(space_->rho_norm_sq());
        probe = eng_->closed_form_hhat(t, dir);
    }
    return std::pow(t, norm_exponent()) * probe / sup_norm_htilde(t);
}

double SolvableLab::outside_sup_tilde(double t, double eps) const {
    const auto cases = outside_sup_cases(t, eps);
    return std::max({cases[0], cases[1], cases[2]});
}

std::array<double, 3> SolvableLab::outside_sup_cases(double t, double eps) const {
    eng_->check_time(t);
    const WindowTilde w = window_tilde(t, eps);
    const double rt = std::sqrt(t);
    const double pow_t = std::pow(t, norm_exponent());
    const double far = w.hi + 10.0 * rt + 5.0;
    if (space_->is_rank_one()) {
        auto scan_max = [&](double lo, double hi, double step) {
            std::vector<double> rs;
            for (double r = lo; r <= hi; r += step) rs.push_back(r);
            rs.push_back(hi);
            const auto hh = eng_->hhat_profile(t, rs);
            return *std::max_element(hh.begin(), hh.end());
        };
        const double below = scan_max(0.0, w.lo, w.lo / 150.0);
        const double beyond = scan_max(w.hi, far, rt / 60.0);
        return {pow_t * below, pow_t * beyond, 0.0};
    }
    const auto [th_lo, th_hi] = eng_->chamber_wedge();
    const int nth = 48;
    auto dir_max = [&](double r_lo, double r_hi, double step) {
        double best = 0.0;
        for (int i = 0; i < nth; ++i) {
            const double th = th_lo + (th_hi - th_lo) * (i + 0.5) / nth;
            const double ct = std::cos(th), st = std::sin(th);
            for (double r = std::max(r_lo, step / 4.0); r <= r_hi; r += step)
                best = std::max(best, eng_->closed_form_hhat(t, Vec{r * ct, r * st}));
        }
        return best;
    };
    const double below = dir_max(0.0, w.lo, w.lo / 60.0);
    const double beyond = dir_max(w.hi, far, rt / 60.0);
    // Wall strips: mu(H) <= eps sqrt(t) inside the radial band, probed by
    // geometric angular offsets from each wedge edge.
    double wall = 0.0;
    auto muhat = [&](double th) { return space_->mu_min(Vec{std::cos(th), std::sin(th)}); };
    for (double r = w.lo; r <= w.hi; r += (w.hi - w.lo) / 40.0) {
        for (int edge = 0; edge < 2; ++edge) {
            const double base = edge == 0 ? th_lo : th_hi;
            const double sgn = edge == 0 ? 1.0 : -1.0;
            for (int j = 0; j <= 14; ++j) {
                const double th = base + sgn * std::ldexp(th_hi - th_lo, -j - 1) * 0.5;
                if (th <= th_lo || th >= th_hi) continue;
                if (muhat(th) * r > w.eps * rt) continue;
                wall = std::max(wall,
                                eng_->closed_form_hhat(
                                    t, Vec{r * std::cos(th), r * std::sin(th)}));
            }
        }
    }
    return {pow_t * below, pow_t * beyond, pow_t * wall};
}

// --- deviation norms of the conjugated flow ----------------------------------

SolvableLab::DistDeviation SolvableLab::deviation_radial(const RadialDatum& v0, double t) const {
    require_rank_one("deviation_radial");
    eng_->check_time(t);
    const double rt = std::sqrt(t);
    const double r_max = 10.0 * rt + v0.support() + 10.0;
    // Quadrature panels with interleaved scan nodes for the sup.
    Grid g = radial_grid(0.0, r_max, std::min(0.4, rt / 8.0));
    for (double r = 0.0; r <= r_max; r += rt / 50.0) {
        g.x.push_back(r);
        g.w.push_back(0.0);
    }
    std::vector<std::size_t> order(g.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.x[a] < g.x[b]; });
    Grid sg;
    for (std::size_t i : order) {
        if (!sg.x.empty() && g.x[i] - sg.x.back() < 1e-12) {
            sg.w.back() += g.w[i];
            continue;
        }
        sg.x.push_back(g.x[i]);
        sg.w.push_back(g.w[i]);
    }

    const auto mult = v0.multiplier();
    const double m0 = v0.transform_real(0.0);
    Multiplier dev = [mult, m0](std::complex<double> lam) { return mult(lam) - m0; };
    const auto dd = eng_->multiplier_profiles(t, sg.x, {dev})[0];
    const auto ph = eng_->spherical().phi0_hat_profile(sg.x);

    DistDeviation out;
    out.t = t;
    double tail = 0.0;
    for (std::size_t i = 0; i < sg.x.size(); ++i) {
        const double term =
            sg.w[i] * space_->density_hat(Vec{sg.x[i]}) * ph[i] * std::abs(dd[i]);
        out.l1 += term;
        if (sg.x[i] > 0.9 * r_max) tail += term;
        out.linf = std::max(out.linf, std::abs(dd[i]));
    }
    out.l1 *= cm_;
    tail *= cm_;
    if (tail > 0.02 * out.l1 + 1e-300)
        throw std::runtime_error("deviation_radial: radial truncation left visible tail mass");
    out.linf_norm = std::pow(t, norm_exponent()) * out.linf;
    return out;
}

SolvableLab::DistDeviation SolvableLab::deviation_translated(const RadialDatum& u0, double c,
                                                             double t) const {
    require_plane("deviation_translated");
    eng_->check_time(t);
    if (c < 0.0) throw std::domain_error("deviation_translated: center must be >= 0");
    const double rt = std::sqrt(t);
    const double r_max = 8.0 * rt + c + u0.support() + 10.0;
    const double d_max = r_max + c + 1.0;

    // Log tables: the evolved profile about its own center, the plain kernel,
    // and the ground function. All hat-normalized.
    const double dr = 0.02;
    const auto nd = static_cast<std::size_t>(std::ceil(d_max / dr)) + 2;
    std::vector<double> rs(nd);
    for (std::size_t i = 0; i < nd; ++i) rs[i] = dr * static_cast<double>(i);
    auto uhat = eng_->multiplier_profiles(t, rs, {u0.multiplier()})[0];
    for (auto& v : uhat) {
        if (v <= 0.0)
            throw std::runtime_error("deviation_translated: evolved profile lost positivity");
        v = std::log(v);
    }
    const UniformCubicTable lu(0.0, dr, std::move(uhat));
    const auto lh = eng_->log_hhat_table(t, r_max + 1.0);
    const auto lphi = log_phi0_table(d_max);
    const double m0 = u0.transform_real(0.0);

    Grid rg = radial_grid(1e-4, r_max, std::min(0.5, rt / 6.0));
    const Grid ang = angular_rule(r_max + 6.0, 8);

    // Row sums per radius, combined in ascending order afterwards so the
    // result is bit-stable for any worker count.
    std::vector<double> row_l1(rg.x.size()), row_sup(rg.x.size());
    parallel_for(rg.x.size(), [&](std::size_t i) {
        const double r = rg.x[i];
        const double log_sinh = std::log(std::sinh(r));
        const double lh_r = lh(r), lphi_r = lphi(r);
        double acc = 0.0, sup = 0.0;
        for (std::size_t j = 0; j < ang.x.size(); ++j) {
            const double th = ang.x[j];
            const double a_coord = h2_horo_A(r, th);
            const double dist = law_of_cosines(c, r, th);
            const double g1 = std::exp(lu(dist));
            const double g2 = m0 * std::exp(lphi(dist) - lphi_r + lh_r);
            const double gap = std::abs(g1 - g2);
            if (gap > 0.0) {
                // The S-norm carries e^{t|rho|^2} against the kernel's
                // e^{-t|rho|^2}; both are dropped here since they cancel.
                acc += ang.w[j] * std::exp(log_sinh + rho_ * (a_coord - dist) + std::log(gap));
                sup = std::max(sup, std::exp(rho_ * (a_coord - dist) + std::log(gap)));
            }
        }
        row_l1[i] = acc;
        row_sup[i] = sup;
    });

    DistDeviation out;
    out.t = t;
    double tail = 0.0;
    for (std::size_t i = 0; i < rg.x.size(); ++i) {
        const double term = 2.0 * rg.w[i] * row_l1[i];
        out.l1 += term;
        if (rg.x[i] > 0.9 * r_max) tail += term;
        out.linf = std::max(out.linf, row_sup[i]);
    }
    if (tail > 0.02 * out.l1 + 1e-300)
        throw std::runtime_error(
            "deviation_translated: radial truncation left visible tail mass");
    out.linf_norm = std::pow(t, norm_exponent()) * out.linf;
    return out;
}

// --- weighted data-class gate ------------------------------------------------

bool SolvableLab::weighted_class_gate(const std::function<double(double)>& v0,
                                      double* increment_ratio) const {
    require_rank_one("weighted_class_gate");
    // Dyadic increments of int_G |v0| e^{<rho,g+>} = c int delta_hat e^{3 rho r} |v0|.
    const double cuts[] = {0.0, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0};
    double prev = 0.0, ratio = 0.0;
    for (std::size_t k = 1; k + 0 < sizeof(cuts) / sizeof(cuts[0]); ++k) {
        const Grid g = radial_grid(cuts[k - 1], cuts[k], 0.5);
        double inc = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double r = g.x[i];
            inc += g.w[i] * space_->density_hat(Vec{r}) * std::exp(3.0 * rho_ * r) *
                   std::abs(v0(r));
        }
        inc *= cm_;
        if (k > 1 && prev > 0.0) ratio = inc / prev;
        prev = inc;
    }
    if (increment_ratio) *increment_ratio = ratio;
    return ratio < 0.5;
}

}  // namespace heatlab
