#include "heatlab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "heatlab/hyper2.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

double law_of_cosines(double a, double b, double theta) {
    const double c = std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(theta);
    return std::acosh(std::max(1.0, c));
}

}  // namespace

FitResult fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("fit_log_slope: need at least three aligned points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::domain_error("fit_log_slope: log-log fit needs positive data");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_log_slope: abscissas coincide");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ly[i] - fit.slope * lx[i] - fit.intercept;
        ssr += resid * resid;
        fit.max_resid = std::max(fit.max_resid, std::abs(resid));
    }
    if (n > 2) fit.se_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    return fit;
}

void ConvergenceLab::require_real_hyperbolic(const char* who) const {
    const auto& sp = eng_->space();
    if (!sp.is_rank_one() || sp.m2() != 0)
        throw std::logic_error(std::string(who) + ": real hyperbolic target only");
}

// ---------------------------------------------------------------------------
// Lp deviations

ConvergenceLab::Grid ConvergenceLab::deviation_grid(double t, double r_max) const {
    const double rho = eng_->space().rho_scalar();
    const double st = std::sqrt(t);
    Grid g;
    const double fine_end = std::min(8.0, r_max);
    append_gauss_panels(0.0, fine_end, std::max(1, static_cast<int>(std::ceil(fine_end / 0.25))),
                        8, g.x, g.w);
    if (r_max > fine_end)
        append_gauss_panels(fine_end, r_max,
                            std::max(1, static_cast<int>(std::ceil((r_max - fine_end) / 0.75))),
                            8, g.x, g.w);

    // Sup-scan nodes carry zero weight: dense near the origin, fine across the
    // concentration window around 2 t rho, coarse elsewhere.
    std::vector<double> scan;
    for (double r = 0.0; r <= std::min(4.0, r_max); r += 0.05) scan.push_back(r);
    const double center = 2.0 * rho * t;
    const double lo = std::max(4.0, center - 6.0 * st);
    const double hi = std::min(r_max, center + 6.0 * st);
    for (double r = 4.25; r < lo; r += 0.25) scan.push_back(r);
    for (double r = lo; r <= hi; r += st / 40.0) scan.push_back(r);
    for (double r = hi + st / 4.0; r <= r_max; r += st / 4.0) scan.push_back(r);

    std::vector<std::pair<double, double>> merged;
    merged.reserve(g.x.size() + scan.size());
    for (std::size_t i = 0; i < g.x.size(); ++i) merged.emplace_back(g.x[i], g.w[i]);
    for (double r : scan) merged.emplace_back(r, 0.0);
    std::sort(merged.begin(), merged.end());
    g.x.clear();
    g.w.clear();
    for (const auto& [x, w] : merged) {
        if (!g.x.empty() && x - g.x.back() < 1e-9) {
            g.w.back() += w;  // collapse coincident nodes, weights add
            continue;
        }
        g.x.push_back(x);
        g.w.push_back(w);
    }
    return g;
}

double ConvergenceLab::lp_sum(const Grid& g, const std::vector<double>& dev, double t,
                              double p) const {
    const auto& sp = eng_->space();
    const double rho = sp.rho_scalar(), rho2 = sp.rho_norm_sq();
    const double logc = std::log(sp.meas_const());
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        if (g.w[i] == 0.0 || dev[i] == 0.0) continue;
        const double a = logc + sp.log_density_hat(Vec{g.x[i]}) + (2.0 - p) * rho * g.x[i] -
                         p * rho2 * t + p * std::log(std::abs(dev[i]));
        acc += g.w[i] * std::exp(a);
    }
    return std::pow(acc, 1.0 / p);
}

DeviationReport ConvergenceLab::deviation(const RadialDatum& u0, double t, double p) const {
    const auto& sp = eng_->space();
    if (!sp.is_rank_one())
        throw std::logic_error("deviation: radial Lp norms are implemented in rank one");
    eng_->check_time(t);
    if (p != 0.0) {
        if (p < 1.0 || p > 3.0) throw std::invalid_argument("deviation: p must lie in [1, 3]");
        if (p * sp.rho_norm_sq() * t > 650.0)
            throw std::domain_error("deviation: e^{-p |rho|^2 t} underflows at this (p, t)");
    }
    const double rho = sp.rho_scalar(), rho2 = sp.rho_norm_sq();
    const double r_max = 2.0 * rho * t + 13.0 * std::sqrt(t) + u0.support() + 5.0;
    const Grid g = deviation_grid(t, r_max);
    const auto dev = eng_->multiplier_profiles(t, g.x, {u0.deviation_multiplier()}).front();

    DeviationReport rep;
    rep.t = t;
    const double logc = std::log(sp.meas_const());
    double tail = 0.0;
    double best = -1e308;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double r = g.x[i], d = dev[i];
        if (d != 0.0) {
            const double f = -rho * r + std::log(std::abs(d));
            if (f > best) {
                best = f;
                rep.linf_radius = r;
            }
            if (g.w[i] != 0.0) {
                const double a = logc + sp.log_density_hat(Vec{r}) + rho * r - rho2 * t +
                                 std::log(std::abs(d));
                const double term = g.w[i] * std::exp(a);
                rep.l1 += term;
                if (r > 0.9 * r_max) tail += term;
            }
        }
    }
    rep.linf = std::exp(-rho2 * t + best);
    if (rep.l1 > 0.0 && tail > 0.01 * rep.l1)
        throw std::runtime_error("deviation: radial grid too short, boundary share above 1%");
    rep.l2 = lp_sum(g, dev, t, 2.0);
    if (p != 0.0) rep.lp = lp_sum(g, dev, t, p);
    return rep;
}

RateReport ConvergenceLab::rate_scan(const RadialDatum& u0, const std::vector<double>& times,
                                     double p) const {
    RateReport rep;
    std::vector<double> l1s;
    for (double t : times) {
        rep.rows.push_back(deviation(u0, t, p));
        l1s.push_back(rep.rows.back().l1);
    }
    if (times.size() >= 3) rep.l1_fit = fit_log_slope(times, l1s);
    return rep;
}

double ConvergenceLab::interpolation_excess(const DeviationReport& row, double p) {
    if (p <= 1.0 || p >= 1e9) throw std::invalid_argument("interpolation_excess: p in (1, inf)");
    const double val = (p == 2.0) ? row.l2 : row.lp;
    return val - std::pow(row.l1, 1.0 / p) * std::pow(row.linf, 1.0 - 1.0 / p);
}

// ---------------------------------------------------------------------------
// Evolved profiles

std::vector<double> ConvergenceLab::evolve_hat_profile(const RadialDatum& u0, double t,
                                                       const std::vector<double>& rs) const {
    return eng_->multiplier_profiles(t, rs, {u0.multiplier()}).front();
}

UniformCubicTable ConvergenceLab::evolve_log_hat_table(const RadialDatum& u0, double t,
                                                       double r_max, double dr) const {
    if (!(r_max > 0.0) || !(dr > 0.0))
        throw std::invalid_argument("evolve_log_hat_table: positive range required");
    const int n = std::max(4, static_cast<int>(std::ceil(r_max / dr)) + 1);
    std::vector<double> rs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rs[static_cast<std::size_t>(i)] = dr * i;
    std::vector<double> vals = evolve_hat_profile(u0, t, rs);
    for (double& v : vals) {
        if (!(v > 0.0))
            throw std::runtime_error("evolve_log_hat_table: nonpositive profile value");
        v = std::log(v);
    }
    return UniformCubicTable(0.0, dr, std::move(vals));
}

double ConvergenceLab::l1_initial_gap(const RadialDatum& u0, double t) const {
    const auto& sp = eng_->space();
    if (!sp.is_rank_one()) throw std::logic_error("l1_initial_gap: rank one only");
    eng_->check_time(t);
    const double rho = sp.rho_scalar(), rho2 = sp.rho_norm_sq();
    const double r_max = u0.support() + 10.0 * std::sqrt(t) + 3.0;
    const double width = std::min(0.1, std::sqrt(t) / 4.0);
    std::vector<double> x, w;
    append_gauss_panels(0.0, r_max, static_cast<int>(std::ceil(r_max / width)), 8, x, w);
    const std::vector<double> uhat = evolve_hat_profile(u0, t, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = std::exp(-rho2 * t - rho * x[i]) * uhat[i];
        acc += w[i] * sp.density(Vec{x[i]}) * std::abs(u - u0.value(x[i]));
    }
    return sp.meas_const() * acc;
}

// ---------------------------------------------------------------------------
// Translated kernels and the angular Poisson limit

ConvergenceLab::AngularRule ConvergenceLab::angular_rule(double kink) const {
    const int n_dim = eng_->space().dim();
    std::vector<double> bounds{0.0, kPi};
    for (int j = 1; j <= 12; ++j) bounds.push_back(kPi * std::pow(0.5, j));
    if (kink > 1e-12 && kink < kPi - 1e-12) bounds.push_back(kink);
    std::sort(bounds.begin(), bounds.end());
    AngularRule rule;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        if (bounds[i + 1] - bounds[i] < 1e-14) continue;
        append_gauss_panels(bounds[i], bounds[i + 1], 1, 16, rule.x, rule.w);
    }
    double tot = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        rule.w[i] *= std::pow(std::sin(rule.x[i]), n_dim - 2);
        tot += rule.w[i];
    }
    for (double& w : rule.w) w /= tot;
    return rule;
}

double ConvergenceLab::dirac_l1_gap(double s, double t) const {
    require_real_hyperbolic("dirac_l1_gap");
    eng_->check_time(t);
    if (s < 0.0) throw std::invalid_argument("dirac_l1_gap: s >= 0");
    if (s == 0.0) return 0.0;
    const auto& sp = eng_->space();
    const double rho = sp.rho_scalar(), rho2 = sp.rho_norm_sq();
    const double r_max = 2.0 * rho * t + 13.0 * std::sqrt(t) + s + 2.0;
    const UniformCubicTable tab = eng_->log_hhat_table(t, r_max + s + 1.0);
    const AngularRule ang = angular_rule();

    std::vector<double> rx, rw;
    const double fine_end = std::min(8.0, r_max);
    append_gauss_panels(0.0, fine_end, static_cast<int>(std::ceil(fine_end / 0.25)), 8, rx, rw);
    if (r_max > fine_end)
        append_gauss_panels(fine_end, r_max, static_cast<int>(std::ceil((r_max - fine_end) / 0.5)),
                            8, rx, rw);

    const double logc = std::log(sp.meas_const());
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double r = rx[i];
        const double base = std::exp(tab(r));
        double ga = 0.0;  // angular average of |hhat-scale difference|
        for (std::size_t j = 0; j < ang.x.size(); ++j) {
            const double d = law_of_cosines(r, s, ang.x[j]);
            ga += ang.w[j] * std::abs(std::exp(tab(d) - rho * (d - r)) - base);
        }
        if (ga <= 0.0) continue;
        const double term =
            rw[i] * std::exp(logc + sp.log_density_hat(Vec{r}) + rho * r - rho2 * t + std::log(ga));
        total += term;
        if (r > 0.9 * r_max) tail += term;
    }
    if (total > 0.0 && tail > 0.005 * total)
        throw std::runtime_error("dirac_l1_gap: truncation radius insufficient");
    return total;
}

double ConvergenceLab::k_average(double s) const {
    require_real_hyperbolic("k_average");
    if (s < 0.0 || s > 250.0) throw std::invalid_argument("k_average: s out of range");
    const double expo = -2.0 * eng_->space().rho_scalar();
    const AngularRule ang = angular_rule();
    double acc = 0.0;
    for (std::size_t j = 0; j < ang.x.size(); ++j)
        acc += ang.w[j] * std::pow(std::cosh(s) - std::sinh(s) * std::cos(ang.x[j]), expo);
    return acc;
}

double ConvergenceLab::k_integral_limit(double s) const {
    require_real_hyperbolic("k_integral_limit");
    if (s < 0.0 || s > 250.0) throw std::invalid_argument("k_integral_limit: s out of range");
    if (s == 0.0) return 0.0;
    const double expo = -2.0 * eng_->space().rho_scalar();
    // The integrand kinks where the Poisson factor crosses 1.
    const double kink = std::acos(std::tanh(0.5 * s));
    const AngularRule ang = angular_rule(kink);
    double acc = 0.0;
    for (std::size_t j = 0; j < ang.x.size(); ++j)
        acc += ang.w[j] *
               std::abs(std::pow(std::cosh(s) - std::sinh(s) * std::cos(ang.x[j]), expo) - 1.0);
    return acc;
}

double ConvergenceLab::kernel_quotient(double t, double R, double s, double theta) const {
    require_real_hyperbolic("kernel_quotient");
    eng_->check_time(t);
    if (R < 0.0 || s < 0.0) throw std::invalid_argument("kernel_quotient: R, s >= 0");
    const double rho = eng_->space().rho_scalar();
    const double d = law_of_cosines(R, s, theta);
    return std::exp(eng_->log_hhat(t, d) - rho * d - eng_->log_hhat(t, R) + rho * R);
}

double ConvergenceLab::quotient_limit(double s, double theta) const {
    require_real_hyperbolic("quotient_limit");
    return std::exp(2.0 * eng_->space().rho_scalar() * h2_horo_A(s, theta));
}

FitResult ConvergenceLab::quotient_error_fit(double s, const std::vector<double>& times,
                                             const ConcentrationSpec& conc) const {
    require_real_hyperbolic("quotient_error_fit");
    const double rho = eng_->space().rho_scalar();
    std::vector<double> xs, ys;
    for (double t : times) {
        const double rt = conc.radius(t);
        if (2.0 * rho * t - rt <= 0.0)
            throw std::invalid_argument("quotient_error_fit: window exits the chamber");
        double err = 0.0;
        for (double R : {2.0 * rho * t - rt, 2.0 * rho * t, 2.0 * rho * t + rt})
            for (double theta : {0.0, 2.0 * kPi / 3.0, kPi})
                err = std::max(err,
                               std::abs(kernel_quotient(t, R, s, theta) - quotient_limit(s, theta)));
        xs.push_back(rt / t);
        ys.push_back(err);
    }
    return fit_log_slope(xs, ys);
}

double ConvergenceLab::busemann_finite(double theta, double s, double r) {
    return law_of_cosines(r, s, theta) - r;
}

double ConvergenceLab::busemann_gap(double theta, double s, double r) {
    return std::abs(busemann_finite(theta, s, r) + h2_horo_A(s, theta));
}

// ---------------------------------------------------------------------------
// Boundary transform at lambda = +-i rho (hyperbolic plane)

double ConvergenceLab::boundary_value(const PlaneBump& u0, double theta, bool plus) const {
    require_real_hyperbolic("boundary_value");
    if (eng_->space().dim() != 2)
        throw std::logic_error("boundary_value: plane bumps live on the hyperbolic plane");
    const double expo = plus ? 2.0 * eng_->space().rho_scalar() : 0.0;
    double acc = 0.0;
    for (const auto& nd : u0.nodes)
        acc += nd.weight * nd.value * std::exp(expo * h2_horo_A(nd.dist0, nd.angle0 - theta));
    return acc;
}

double ConvergenceLab::boundary_limit_functional(const PlaneBump& u0) const {
    const AngularRule ang = angular_rule();  // dim 2: flat weight on [0, pi]
    double acc = 0.0;
    for (std::size_t j = 0; j < ang.x.size(); ++j)
        acc += ang.w[j] * std::abs(boundary_value(u0, ang.x[j], true) - u0.mass);
    return acc;
}

double ConvergenceLab::off_center_l1_gap(const RadialDatum& u0, double center, double t) const {
    require_real_hyperbolic("off_center_l1_gap");
    eng_->check_time(t);
    if (center < 0.0) throw std::invalid_argument("off_center_l1_gap: center >= 0");
    const auto& sp = eng_->space();
    const double rho = sp.rho_scalar(), rho2 = sp.rho_norm_sq();
    const double M = u0.mass();
    const double r_max = 2.0 * rho * t + 13.0 * std::sqrt(t) + center + u0.support() + 3.0;
    const UniformCubicTable logu = evolve_log_hat_table(u0, t, r_max + center + 1.0);
    const UniformCubicTable logh = eng_->log_hhat_table(t, r_max);
    const AngularRule ang = angular_rule();

    std::vector<double> rx, rw;
    const double fine_end = std::min(8.0, r_max);
    append_gauss_panels(0.0, fine_end, static_cast<int>(std::ceil(fine_end / 0.25)), 8, rx, rw);
    if (r_max > fine_end)
        append_gauss_panels(fine_end, r_max, static_cast<int>(std::ceil((r_max - fine_end) / 0.5)),
                            8, rx, rw);

    const double logc = std::log(sp.meas_const());
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double r = rx[i];
        const double base = M * std::exp(logh(r));
        double ga = 0.0;
        for (std::size_t j = 0; j < ang.x.size(); ++j) {
            const double d = law_of_cosines(center, r, ang.x[j]);
            ga += ang.w[j] * std::abs(std::exp(logu(d) - rho * (d - r)) - base);
        }
        if (ga <= 0.0) continue;
        const double term =
            rw[i] * std::exp(logc + sp.log_density_hat(Vec{r}) + rho * r - rho2 * t + std::log(ga));
        total += term;
        if (r > 0.9 * r_max) tail += term;
    }
    if (total > 0.0 && tail > 0.005 * total)
        throw std::runtime_error("off_center_l1_gap: truncation radius insufficient");
    return total;
}

// ---------------------------------------------------------------------------
// Euclidean reference

double ConvergenceLab::euclidean_linf_contrast(double xi, double t) {
    if (!(xi > 0.0) || !(t > 0.0))
        throw std::invalid_argument("euclidean_linf_contrast: positive xi, t");
    std::vector<double> y, wy;
    append_gauss_panels(-xi, xi, 8, 8, y, wy);
    std::vector<double> vals(y.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        vals[i] = bump_profile(std::abs(y[i]), xi);
        mass += wy[i] * vals[i];
    }
    const double norm = 1.0 / (std::sqrt(4.0 * kPi * t));
    auto gauss = [&](double x) { return norm * std::exp(-x * x / (4.0 * t)); };
    double sup = 0.0;
    const double step = std::min(0.05, std::sqrt(t) / 20.0);
    for (double x = 0.0; x <= xi + 8.0 * std::sqrt(t); x += step) {
        double u = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) u += wy[i] * vals[i] * gauss(x - y[i]);
        sup = std::max(sup, std::abs(u / mass - gauss(x)));
    }
    return std::sqrt(t) * sup;
}

}  // namespace heatlab
