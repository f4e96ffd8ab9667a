#include "heatlab/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "heatlab/parallel.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr double kMinTime = 0.05;

// Per-root factor <a,H> / (1 - e^{-2<a,H>}) of the closed product form,
// continuous through the walls with limit 1/2.
double wall_safe_g(double a) {
    if (a < 1e-12) return 0.5;
    return a / -std::expm1(-2.0 * a);
}

// Equal Gauss-16 panels chained over consecutive breakpoints.
void chain(double a, double b, double width, std::vector<double>& x, std::vector<double>& w) {
    if (b <= a) return;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    append_gauss_panels(a, b, panels, 16, x, w);
}

}  // namespace

double ConcentrationSpec::epsilon(double t) const {
    if (exponent <= 0.0 || exponent >= 0.5)
        throw std::invalid_argument("ConcentrationSpec: exponent must lie in (0, 1/2)");
    return std::pow(t, -exponent);
}

double ConcentrationSpec::radius(double t) const { return t * epsilon(t); }

HeatEngine::HeatEngine(const SymmetricSpace& space) : space_(&space), sph_(space) {
    rho2_ = space.rho_norm_sq();
    nu_ = space.pseudo_dim();
    dim_ = space.dim();
    dpos_ = space.num_reduced_positive();
    const int l = space.rank();
    c0_ = std::pow(2.0, dim_ - l) /
          (std::pow(2.0 * kPi, l) * space.meas_const() * space.weyl_order());
    all_two_ = true;
    for (const auto& r : space.reduced_roots())
        if (r.m_alpha != 2 || r.m_2alpha != 0) all_two_ = false;
    const double b0 = plancherel().b_zero();
    c1_ = c0_ * std::pow(2.0, -dpos_) * space.weyl_order() * std::pow(kPi, 0.5 * l) *
          space.pi_rho0() / b0;
    c2_ = b0 / space.pi_rho0();
    c3_ = c1_ / space.pi_rho0();
}

void HeatEngine::check_time(double t) const {
    if (!(t >= kMinTime))
        throw std::invalid_argument("HeatEngine: time must be at least 0.05");
    if (t * rho2_ > 600.0)
        throw std::domain_error(
            "HeatEngine: t |rho|^2 > 600 exceeds the double-precision dynamic range");
}

double HeatEngine::shift_radius(double t) const { return std::max(2.0, std::sqrt(64.0 * t)); }

Multiplier HeatEngine::unit_multiplier() {
    return [](cd) { return cd{1.0, 0.0}; };
}

// ---------------------------------------------------------------------------
// Rank-one evaluators
// ---------------------------------------------------------------------------

HeatEngine::LambdaGrid HeatEngine::direct_lambda_grid(double t, double r_resolve) const {
    const double nominal = std::max(40.0 / std::sqrt(t), 10.0);
    // Panels sized so a 16-point rule sees at most ~one oscillation period of
    // e^{i lambda r} at the largest requested radius, and at least a few panels
    // across the e^{-t lambda^2} bell when t is large.
    const double target = std::min(6.0 / std::max(r_resolve, 1.0), 2.0 / std::sqrt(t));
    const int panels = std::max(8, static_cast<int>(std::ceil(nominal / target)));
    const double width = nominal / panels;
    // Panels wholly past the e^{-t lambda^2} underflow point contribute below
    // 1e-290 and are dropped; the rule depends only on t, never on threading.
    const double lam_star = std::sqrt(710.0 / t);
    const int kept = std::max(1, std::min(panels, static_cast<int>(std::ceil(lam_star / width))));
    LambdaGrid g;
    g.x.reserve(static_cast<std::size_t>(16 * kept));
    g.w.reserve(static_cast<std::size_t>(16 * kept));
    append_gauss_panels(0.0, kept * width, kept, 16, g.x, g.w);
    return g;
}

std::vector<double> HeatEngine::direct_values(double t, const std::vector<double>& rs,
                                              const std::vector<Multiplier>& ms) const {
    const std::size_t nr = rs.size(), nk = ms.size();
    std::vector<double> out(nk * nr, 0.0);
    if (nr == 0) return out;
    const LambdaGrid grid = direct_lambda_grid(t, rs.back());
    const std::size_t nodes = grid.x.size(), block = 32;
    const std::size_t nb = (nodes + block - 1) / block;
    const auto& pl = plancherel();
    std::vector<std::vector<double>> slab(nb, std::vector<double>(nk * nr, 0.0));
    parallel_for(nb, [&](std::size_t b) {
        auto& acc = slab[b];
        const std::size_t lo = b * block, hi = std::min(nodes, lo + block);
        for (std::size_t j = lo; j < hi; ++j) {
            const double lam = grid.x[j];
            const double damp = std::exp(-t * lam * lam);
            if (damp == 0.0) continue;
            const double base = grid.w[j] * pl.density(Vec{lam}) * damp;
            const std::vector<double> prof = sph_.phi_hat_profile(lam, rs);
            for (std::size_t k = 0; k < nk; ++k) {
                const double mk = base * ms[k](cd(lam, 0.0)).real();
                for (std::size_t i = 0; i < nr; ++i) acc[k * nr + i] += mk * prof[i];
            }
        }
    });
    // Fixed reduction order: ascending block index.
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t q = 0; q < out.size(); ++q) out[q] += slab[b][q];
    for (double& v : out) v *= 2.0 * c0_;
    return out;
}

HeatEngine::ShiftedEval HeatEngine::shifted_core(double t, double r,
                                                 const std::vector<Multiplier>& ms) const {
    const auto& pl = plancherel();
    ShiftedEval ev;
    ev.log_pref = -r * r / (4.0 * t);
    ev.acc.assign(ms.size(), cd{0.0, 0.0});
    const double sig = r / (2.0 * t);
    const int kcap = std::min(250, static_cast<int>(std::ceil(22.0 / r)) + 4);
    const double span = std::sqrt(50.0 / t);
    std::vector<double> xs, ws;
    append_gauss_panels(0.0, span, std::max(6, static_cast<int>(std::ceil(span / 0.75))), 16, xs,
                        ws);
    const double q = std::exp(-2.0 * r);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double u = xs[j];
        const cd lam(u, sig);
        const auto gam = rank1_wave_coeffs(pl, lam, kcap);
        cd wave = 0.0;
        double qk = 1.0;
        for (const cd& g : gam) {
            wave += g * qk;
            qk *= q;
        }
        const cd cinv = -kI * lam * pl.b_minus_inv(Vec{u}, Vec{sig});
        const cd base = ws[j] * std::exp(-t * u * u) * cinv * wave;
        for (std::size_t k = 0; k < ms.size(); ++k) ev.acc[k] += base * ms[k](lam);
    }
    return ev;
}

std::vector<std::vector<double>> HeatEngine::multiplier_profiles(
    double t, const std::vector<double>& rs, const std::vector<Multiplier>& ms) const {
    if (!space_->is_rank_one())
        throw std::logic_error("multiplier_profiles: radial profiles exist only in rank one");
    check_time(t);
    if (ms.empty()) throw std::invalid_argument("multiplier_profiles: need at least one multiplier");
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
        if (rs[i + 1] < rs[i])
            throw std::invalid_argument("multiplier_profiles: radii must be ascending");
    for (double r : rs)
        if (r < 0.0) throw std::invalid_argument("multiplier_profiles: negative radius");

    const double rc = shift_radius(t);
    const std::size_t nsplit = static_cast<std::size_t>(
        std::lower_bound(rs.begin(), rs.end(), rc) - rs.begin());
    const std::vector<double> rs_direct(rs.begin(), rs.begin() + static_cast<std::ptrdiff_t>(nsplit));

    std::vector<std::vector<double>> out(ms.size(), std::vector<double>(rs.size(), 0.0));
    if (!rs_direct.empty()) {
        const std::vector<double> flat = direct_values(t, rs_direct, ms);
        for (std::size_t k = 0; k < ms.size(); ++k)
            for (std::size_t i = 0; i < nsplit; ++i) out[k][i] = flat[k * nsplit + i];
    }
    if (nsplit < rs.size()) {
        // Blocks share one contour shift. The residual phase |r - 2 t sig|
        // stays below half the block width, so with width <= 2 sqrt(t) the
        // remaining cancellation is at most a factor e^{-1/4}; multiplier
        // values, wave coefficients, and the c-factor are computed once per
        // block instead of once per radius.
        const double bw = std::max(0.5, std::min(4.0, 2.0 * std::sqrt(t)));
        std::vector<std::size_t> starts{nsplit};
        for (std::size_t i = nsplit + 1; i < rs.size(); ++i)
            if (rs[i] > rs[starts.back()] + bw) starts.push_back(i);
        starts.push_back(rs.size());
        parallel_for(starts.size() - 1, [&](std::size_t b) {
            shifted_block(t, rs, starts[b], starts[b + 1], ms, out);
        });
    }
    return out;
}

void HeatEngine::shifted_block(double t, const std::vector<double>& rs, std::size_t lo,
                               std::size_t hi, const std::vector<Multiplier>& ms,
                               std::vector<std::vector<double>>& out) const {
    const auto& pl = plancherel();
    const std::size_t nk = ms.size();
    const double sig = 0.25 * (rs[lo] + rs[hi - 1]) / t;  // block-center saddle
    const int kcap = std::min(250, static_cast<int>(std::ceil(22.0 / rs[lo])) + 4);
    const double span = std::sqrt(50.0 / t);
    std::vector<double> xs, ws;
    append_gauss_panels(0.0, span, std::max(6, static_cast<int>(std::ceil(span / 0.75))), 16, xs,
                        ws);
    const std::size_t nn = xs.size();
    std::vector<cd> base(nn), mvals(nk * nn);
    std::vector<std::vector<cd>> gam(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        const double u = xs[j];
        const cd lam(u, sig);
        gam[j] = rank1_wave_coeffs(pl, lam, kcap);
        base[j] = ws[j] * std::exp(-t * u * u) * (-kI * lam) * pl.b_minus_inv(Vec{u}, Vec{sig});
        for (std::size_t k = 0; k < nk; ++k) mvals[k * nn + j] = ms[k](lam);
    }
    std::vector<cd> acc(nk);
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = rs[i];
        const double q = std::exp(-2.0 * r);
        const double phase = r - 2.0 * t * sig;
        std::fill(acc.begin(), acc.end(), cd{0.0, 0.0});
        for (std::size_t j = 0; j < nn; ++j) {
            cd wave = 0.0;
            double qk = 1.0;
            for (const cd& g : gam[j]) {
                wave += g * qk;
                qk *= q;
            }
            const cd common = base[j] * wave * std::exp(cd(0.0, xs[j] * phase));
            for (std::size_t k = 0; k < nk; ++k) acc[k] += common * mvals[k * nn + j];
        }
        const double pref = 4.0 * c0_ * std::exp(t * sig * sig - sig * r);
        for (std::size_t k = 0; k < nk; ++k) out[k][i] = pref * acc[k].real();
    }
}

std::vector<double> HeatEngine::hhat_profile(double t, const std::vector<double>& rs) const {
    return multiplier_profiles(t, rs, {unit_multiplier()})[0];
}

double HeatEngine::hhat(double t, double r) const { return hhat_profile(t, {r})[0]; }

double HeatEngine::log_hhat(double t, double r) const {
    if (!space_->is_rank_one()) throw std::logic_error("log_hhat: rank one only");
    check_time(t);
    if (r < shift_radius(t)) {
        const double v = hhat(t, r);
        if (!(v > 0.0))
            throw std::runtime_error("log_hhat: nonpositive direct value (cancellation)");
        return std::log(v);
    }
    const ShiftedEval ev = shifted_core(t, r, {unit_multiplier()});
    const double re = ev.acc[0].real();
    if (!(re > 0.0)) throw std::runtime_error("log_hhat: nonpositive shifted accumulator");
    return std::log(4.0 * c0_ * re) + ev.log_pref;
}

UniformCubicTable HeatEngine::log_hhat_table(double t, double r_max, double dr) const {
    if (!space_->is_rank_one()) throw std::logic_error("log_hhat_table: rank one only");
    check_time(t);
    if (!(r_max > 4.0 * dr) || !(dr > 0.0))
        throw std::invalid_argument("log_hhat_table: bad range");
    const auto n = static_cast<std::size_t>(std::ceil(r_max / dr)) + 1;
    std::vector<double> rs(n);
    for (std::size_t i = 0; i < n; ++i) rs[i] = dr * static_cast<double>(i);
    const std::vector<double> hh = hhat_profile(t, rs);
    std::vector<double> lg(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(hh[i] > 0.0))
            throw std::runtime_error("log_hhat_table: nonpositive kernel value in range");
        lg[i] = std::log(hh[i]);
    }
    return UniformCubicTable(0.0, dr, std::move(lg));
}

// ---------------------------------------------------------------------------
// Generic points and closed forms
// ---------------------------------------------------------------------------

double HeatEngine::hhat_point(double t, const Vec& H) const {
    check_time(t);
    if (!space_->in_closed_chamber(H, 1e-9))
        throw std::invalid_argument("hhat_point: H must lie in the closed chamber");
    if (space_->is_rank_one()) return hhat(t, H[0]);
    if (all_two_) return closed_form_hhat(t, H);
    throw std::logic_error("hhat_point: no engine for this space");
}

double HeatEngine::log_hhat_point(double t, const Vec& H) const {
    check_time(t);
    if (!space_->in_closed_chamber(H, 1e-9))
        throw std::invalid_argument("log_hhat_point: H must lie in the closed chamber");
    if (space_->is_rank_one()) return log_hhat(t, H[0]);
    if (all_two_) return log_closed_form_hhat(t, H);
    throw std::logic_error("log_hhat_point: no engine for this space");
}

double HeatEngine::log_kernel(double t, const Vec& H) const {
    return log_hhat_point(t, H) - t * rho2_ - dot(space_->rho(), H);
}

double HeatEngine::heat_transform(double t, const Vec& lambda) const {
    check_time(t);
    return std::exp(-t * (norm_sq(lambda) + rho2_));
}

double HeatEngine::log_closed_form_hhat(double t, const Vec& H) const {
    if (!all_two_)
        throw std::logic_error("closed form requires every multiplicity equal to 2");
    check_time(t);
    const int l = space_->rank();
    double lg = std::log(c0_) + std::log(static_cast<double>(space_->weyl_order())) +
                0.5 * l * (std::log(kPi) - std::log(t)) - dpos_ * std::log(2.0 * t) -
                std::log(space_->pi_prod(space_->rho()));
    for (const auto& root : space_->reduced_roots())
        lg += std::log(wall_safe_g(dot(root.alpha, H)));
    return lg - norm_sq(H) / (4.0 * t);
}

double HeatEngine::closed_form_hhat(double t, const Vec& H) const {
    return std::exp(log_closed_form_hhat(t, H));
}

double HeatEngine::moment_hhat(double t, const Vec& H) const {
    if (!all_two_ || space_->rank() != 2)
        throw std::logic_error("moment_hhat: rank-two closed-form spaces only");
    check_time(t);
    if (space_->mu_min(H) < 1e-3)
        throw std::domain_error("moment_hhat: H too close to a wall for the separable route");
    if (norm_sq(H) / (4.0 * t) > 25.0)
        throw std::domain_error(
            "moment_hhat: |H|^2/4t too large; the oscillatory moments lose every digit there");
    // pi(lambda) = sum_{ab} p[a][b] lambda_1^a lambda_2^b by multiplying the
    // linear root factors.
    const int d = dpos_;
    std::vector<std::vector<double>> p(1, std::vector<double>(1, 1.0));
    for (const auto& root : space_->reduced_roots()) {
        std::vector<std::vector<double>> np(p.size() + 1,
                                            std::vector<double>(p[0].size() + 1, 0.0));
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p[0].size(); ++b) {
                np[a + 1][b] += root.alpha[0] * p[a][b];
                np[a][b + 1] += root.alpha[1] * p[a][b];
            }
        p = std::move(np);
    }
    const double span = std::min(std::max(40.0 / std::sqrt(t), 10.0), std::sqrt(710.0 / t));
    auto moments = [&](double y) {
        std::vector<cd> m(static_cast<std::size_t>(d) + 1, cd{0.0, 0.0});
        std::vector<double> xs, ws;
        const int panels =
            std::max(12, static_cast<int>(std::ceil(span * (std::abs(y) + 1.0) / 3.0)));
        append_gauss_panels(-span, span, panels, 16, xs, ws);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double lam = xs[j];
            const cd e = ws[j] * std::exp(cd(-t * lam * lam, lam * y));
            double pw = 1.0;
            for (int a = 0; a <= d; ++a) {
                m[static_cast<std::size_t>(a)] += pw * e;
                pw *= lam;
            }
        }
        return m;
    };
    cd acc = 0.0;
    for (const auto& w : space_->weyl()) {
        Vec y = Vec::zero(2);
        for (int c = 0; c < 2; ++c) {
            double s = 0.0;
            for (int rr = 0; rr < 2; ++rr) s += w.at(rr, c) * H[rr];
            y[c] = s;
        }
        const auto mx = moments(y[0]), my = moments(y[1]);
        cd term = 0.0;
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p[0].size(); ++b)
                if (p[a][b] != 0.0) term += p[a][b] * mx[a] * my[b];
        acc += w.det() * term;
    }
    double dd = 1.0;
    for (const auto& root : space_->reduced_roots())
        dd *= -std::expm1(-2.0 * dot(root.alpha, H));
    const cd val = kI * acc / (space_->pi_prod(space_->rho()) * dd);
    return c0_ * val.real();
}

std::pair<double, double> HeatEngine::chamber_wedge() const {
    if (space_->rank() != 2) throw std::logic_error("chamber_wedge: rank two only");
    const auto& roots = space_->reduced_roots();
    const auto& si = space_->simple_indices();
    std::vector<double> angles;
    for (int i = 0; i < 2; ++i) {
        const Vec& a = roots[static_cast<std::size_t>(si[static_cast<std::size_t>(i)])].alpha;
        const Vec& other =
            roots[static_cast<std::size_t>(si[static_cast<std::size_t>(1 - i)])].alpha;
        Vec d{a[1], -a[0]};
        if (dot(other, d) < 0.0) d = Vec{-a[1], a[0]};
        angles.push_back(std::atan2(d[1], d[0]));
    }
    const double lo = std::min(angles[0], angles[1]), hi = std::max(angles[0], angles[1]);
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Integral diagnostics
// ---------------------------------------------------------------------------

double HeatEngine::rank2_chamber_mass(double t, const ConcentrationSpec* conc) const {
    if (!all_two_)
        throw std::logic_error("rank-two integrals are implemented via the closed form only");
    const auto [th_lo, th_hi] = chamber_wedge();
    const double logc = std::log(space_->meas_const());
    auto point = [&](const Vec& H) -> double {
        if (!space_->in_closed_chamber(H, 0.0)) return 0.0;
        const double e = logc + dot(space_->rho(), H) - t * rho2_ +
                         space_->log_density_hat(H) + log_closed_form_hhat(t, H);
        return std::exp(e);
    };
    if (conc == nullptr) {
        const double radius = 2.0 * t * std::sqrt(rho2_) + 12.0 * std::sqrt(t) + 5.0;
        std::vector<double> rx, rw, tx, tw;
        chain(0.0, std::min(8.0, radius), 0.5, rx, rw);
        chain(std::min(8.0, radius), radius, std::clamp(std::sqrt(t) / 2.0, 0.75, 2.0), rx, rw);
        append_gauss_panels(th_lo, th_hi, 24, 16, tx, tw);
        std::vector<double> partial(tx.size(), 0.0);
        parallel_for(tx.size(), [&](std::size_t a) {
            double s = 0.0;
            for (std::size_t i = 0; i < rx.size(); ++i) {
                const Vec H{rx[i] * std::cos(tx[a]), rx[i] * std::sin(tx[a])};
                s += rw[i] * rx[i] * point(H);
            }
            partial[a] = tw[a] * s;
        });
        double total = 0.0;
        for (double v : partial) total += v;
        return total;
    }
    // Mass inside the moving window: polar disc about 2t rho (well inside the
    // wedge for every admissible t).
    const Vec center = space_->rho();
    const double cr = conc->radius(t);
    std::vector<double> ux, uw, px, pw;
    chain(0.0, cr, std::clamp(std::sqrt(t) / 3.0, 0.5, 2.0), ux, uw);
    append_gauss_panels(0.0, 2.0 * kPi, 24, 16, px, pw);
    std::vector<double> partial(px.size(), 0.0);
    parallel_for(px.size(), [&](std::size_t a) {
        double s = 0.0;
        for (std::size_t i = 0; i < ux.size(); ++i) {
            const Vec H{2.0 * t * center[0] + ux[i] * std::cos(px[a]),
                        2.0 * t * center[1] + ux[i] * std::sin(px[a])};
            s += uw[i] * ux[i] * point(H);
        }
        partial[a] = pw[a] * s;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double HeatEngine::total_mass(double t) const {
    check_time(t);
    if (!space_->is_rank_one()) return rank2_chamber_mass(t, nullptr);
    const double rb = 2.0 * t * space_->rho_scalar();
    const double radius = rb + 12.0 * std::sqrt(t) + 5.0;
    std::vector<double> rx, rw;
    chain(0.0, std::min(8.0, radius), 0.5, rx, rw);
    chain(std::min(8.0, radius), radius, std::clamp(std::sqrt(t) / 2.0, 0.75, 2.0), rx, rw);
    const std::vector<double> hh = hhat_profile(t, rx);
    const double rho = space_->rho_scalar(), logc = std::log(space_->meas_const());
    double mass = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        if (!(hh[i] > 0.0)) continue;  // far-tail underflow
        const double e =
            logc + rho * rx[i] - t * rho2_ + space_->log_density_hat(Vec{rx[i]}) + std::log(hh[i]);
        mass += rw[i] * std::exp(e);
    }
    return mass;
}

double HeatEngine::transform_roundtrip(double t, double lam) const {
    check_time(t);
    if (!space_->is_rank_one()) throw std::logic_error("transform_roundtrip: rank one only");
    const double rb = 2.0 * t * space_->rho_scalar();
    const double radius = rb + 12.0 * std::sqrt(t) + 5.0;
    const double base_w = std::clamp(std::sqrt(t) / 2.0, 0.75, 2.0);
    const double osc_w = 6.0 / std::max(std::abs(lam), 1.0);
    std::vector<double> rx, rw;
    chain(0.0, std::min(8.0, radius), std::min(0.5, osc_w), rx, rw);
    chain(std::min(8.0, radius), radius, std::min(base_w, osc_w), rx, rw);
    const std::vector<double> hh = hhat_profile(t, rx);
    const std::vector<double> ph = sph_.phi_hat_profile(lam, rx);
    double acc = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
        acc += rw[i] * space_->density_hat(Vec{rx[i]}) * ph[i] * hh[i];
    return space_->meas_const() * std::exp(-t * rho2_) * acc;
}

std::complex<double> HeatEngine::transform_roundtrip_rank2(double t, const Vec& lam) const {
    check_time(t);
    if (space_->rank() != 2 || !all_two_)
        throw std::logic_error("transform_roundtrip_rank2: closed-form rank-two spaces only");
    const auto [th_lo, th_hi] = chamber_wedge();
    const double radius = 2.0 * t * std::sqrt(rho2_) + 12.0 * std::sqrt(t) + 5.0;
    const double lnorm = norm(lam);
    std::vector<double> rx, rw, tx, tw;
    const double osc_w = 3.0 / std::max(lnorm, 0.5);
    chain(0.0, std::min(8.0, radius), std::min(0.5, osc_w), rx, rw);
    chain(std::min(8.0, radius), radius,
          std::min(std::clamp(std::sqrt(t) / 2.0, 0.75, 2.0), osc_w), rx, rw);
    const int tpanels = std::max(24, static_cast<int>(std::ceil(lnorm * radius / 4.0)));
    append_gauss_panels(th_lo, th_hi, tpanels, 16, tx, tw);
    const Vec mlam{-lam[0], -lam[1]};
    std::vector<cd> partial(tx.size(), cd{0.0, 0.0});
    parallel_for(tx.size(), [&](std::size_t a) {
        cd s = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            const Vec H{rx[i] * std::cos(tx[a]), rx[i] * std::sin(tx[a])};
            if (!space_->in_closed_chamber(H, 0.0)) continue;
            const double w = rw[i] * rx[i] * space_->density_hat(H) * closed_form_hhat(t, H);
            if (w == 0.0) continue;
            s += w * sph_.closed_form_phi_hat(mlam, Vec::zero(2), H);
        }
        partial[a] = tw[a] * s;
    });
    cd acc = 0.0;
    for (const cd& v : partial) acc += v;
    return space_->meas_const() * std::exp(-t * rho2_) * acc;
}

double HeatEngine::mass_outside(double t, const ConcentrationSpec& conc) const {
    check_time(t);
    if (!space_->is_rank_one()) return 1.0 - rank2_chamber_mass(t, &conc);
    const double rho = space_->rho_scalar();
    const double mid = 2.0 * t * rho, half = conc.radius(t);
    const double a = std::max(0.0, mid - half), b = mid + half;
    std::vector<double> rx, rw;
    chain(a, b, std::clamp(std::sqrt(t) / 3.0, 0.5, 2.0), rx, rw);
    const std::vector<double> hh = hhat_profile(t, rx);
    const double logc = std::log(space_->meas_const());
    double inside = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        if (!(hh[i] > 0.0)) continue;
        const double e =
            logc + rho * rx[i] - t * rho2_ + space_->log_density_hat(Vec{rx[i]}) + std::log(hh[i]);
        inside += rw[i] * std::exp(e);
    }
    return 1.0 - inside;
}

double HeatEngine::delayed_gap(double t, double tprime) const {
    check_time(t);
    check_time(t + tprime);
    const Vec zero = Vec::zero(space_->rank());
    const double a = hhat_point(t, zero);
    const double b = std::exp(-tprime * rho2_) * hhat_point(t + tprime, zero);
    return std::pow(t, 0.5 * nu_) * (a - b);
}

// ---------------------------------------------------------------------------
// Envelope and asymptotic models
// ---------------------------------------------------------------------------

double HeatEngine::log_envelope_hat(double t, const Vec& H) const {
    check_time(t);
    double lg = -0.5 * dim_ * std::log(t) - norm_sq(H) / (4.0 * t) +
                std::log(sph_.phi0_hat(H));
    for (const auto& root : space_->reduced_roots())
        lg += (0.5 * (root.m_alpha + root.m_2alpha) - 1.0) *
              std::log(1.0 + t + dot(root.alpha, H));
    return lg;
}

double HeatEngine::log_critical_hat(double t, const Vec& H) const {
    check_time(t);
    if (t < 5.0 || space_->mu_min(H) < 5.0)
        throw std::invalid_argument("log_critical_hat: needs t >= 5 and mu(H) >= 5");
    const Vec eta = H * (1.0 / (2.0 * t));
    const double binv = plancherel().b_minus_inv(Vec::zero(space_->rank()), eta).real();
    return std::log(c1_) - 0.5 * nu_ * std::log(t) + std::log(binv) +
           std::log(sph_.phi0_hat(H)) - norm_sq(H) / (4.0 * t);
}

double HeatEngine::log_interior_hat(double t, const Vec& H) const {
    check_time(t);
    const double ph = space_->pi_prod(H);
    if (!(ph > 0.0)) throw std::invalid_argument("log_interior_hat: H must be interior");
    return std::log(c3_) - 0.5 * nu_ * std::log(t) + std::log(ph) - norm_sq(H) / (4.0 * t);
}

std::vector<double> HeatEngine::log_envelope_hat_profile(double t,
                                                         const std::vector<double>& rs) const {
    check_time(t);
    if (!space_->is_rank_one()) throw std::logic_error("profile models: rank one only");
    const std::vector<double> p0 = sph_.phi0_hat_profile(rs);
    std::vector<double> out(rs.size());
    const auto& root = space_->reduced_roots()[0];
    const double ex = 0.5 * (root.m_alpha + root.m_2alpha) - 1.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        out[i] = -0.5 * dim_ * std::log(t) - rs[i] * rs[i] / (4.0 * t) + std::log(p0[i]) +
                 ex * std::log(1.0 + t + rs[i]);
    return out;
}

std::vector<double> HeatEngine::log_critical_hat_profile(double t,
                                                         const std::vector<double>& rs) const {
    check_time(t);
    if (!space_->is_rank_one()) throw std::logic_error("profile models: rank one only");
    if (t < 5.0 || (!rs.empty() && rs.front() < 5.0))
        throw std::invalid_argument("log_critical_hat_profile: needs t >= 5 and radii >= 5");
    const std::vector<double> p0 = sph_.phi0_hat_profile(rs);
    std::vector<double> out(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double binv =
            plancherel().b_minus_inv(Vec::zero(1), Vec{rs[i] / (2.0 * t)}).real();
        out[i] = std::log(c1_) - 0.5 * nu_ * std::log(t) + std::log(binv) + std::log(p0[i]) -
                 rs[i] * rs[i] / (4.0 * t);
    }
    return out;
}

}  // namespace heatlab
