/// @file experiments.cpp
/// @brief Experiment sweeps, table dumps, and the acceptance-criteria runner.
///
/// Every experiment builds its CSV document in memory through the same pure
/// path the CLI uses, so determinism across thread counts is checked by
/// rendering twice and comparing bytes. The acceptance functions mirror the
/// numbered criteria one-to-one; each returns the measured values it judged
/// so the gate output stays auditable.

#include <heatlab/experiments.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <sstream>

#include <json.hpp>

#include <heatlab/convergence.hpp>
#include <heatlab/gammafn.hpp>
#include <heatlab/geometry.hpp>
#include <heatlab/heatkernel.hpp>
#include <heatlab/initialdata.hpp>
#include <heatlab/plancherel.hpp>
#include <heatlab/solvable.hpp>
#include <heatlab/spherical.hpp>

namespace heatlab {
namespace {

constexpr double kPi = 3.14159265358979323846;

using nlohmann::json;

json datum_json(const DatumSpec& d) {
    return json{{"kind", d.kind}, {"xi", d.xi}, {"center", d.center}};
}

Vec zero_vec(int rank) { return rank == 1 ? Vec{0.0} : Vec{0.0, 0.0}; }

bool real_hyperbolic(const SymmetricSpace& sp) { return sp.is_rank_one() && sp.m2() == 0; }

/// Strictly-increasing check shared by validation and the jitter path.
bool increasing(const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) return false;
    return true;
}

std::vector<double> effective_grid(const ExperimentConfig& cfg) {
    auto ts = cfg.t_grid;
    if (cfg.seed != 0) {
        std::mt19937 gen(cfg.seed);
        std::uniform_real_distribution<double> u(-0.02, 0.02);
        for (auto& t : ts) t *= std::exp(u(gen));
        if (!increasing(ts))
            throw std::invalid_argument(
                "experiment: t-jitter broke the grid ordering; widen the spacing or use seed 0");
    }
    return ts;
}

double safe_linf_norm(double linf, double t, double nu, double rho2) {
    if (!(linf > 0.0)) return 0.0;
    return std::exp(rho2 * t + 0.5 * nu * std::log(t) + std::log(linf));
}

// --- individual experiments -------------------------------------------------

CsvDoc doc_kernel_eval(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                       const std::vector<double>& ts) {
    HeatEngine eng(sp);
    CsvDoc doc;
    doc.columns = {"t", "r", "hhat", "h", "envelope_ratio", "asym_ratio"};
    for (double t : ts) {
        const Vec H = sp.is_rank_one() ? sp.axis() * cfg.radius : sp.rho_dir(cfg.radius);
        const double hh = eng.hhat_point(t, H);
        const double h = std::exp(eng.log_kernel(t, H));
        const double env = hh / std::exp(eng.log_envelope_hat(t, H));
        double asym = 0.0;
        if (t >= 5.0 && sp.mu_min(H) >= 5.0) asym = hh / std::exp(eng.log_critical_hat(t, H));
        doc.add_row({t, cfg.radius, hh, h, env, asym});
    }
    return doc;
}

CsvDoc doc_concentration(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                         const std::vector<double>& ts) {
    HeatEngine eng(sp);
    const ConcentrationSpec conc{cfg.eps_exponent};
    CsvDoc doc;
    doc.columns = {"t", "eps", "radius", "mass_outside"};
    bool decreasing = true;
    double prev = 2.0;
    for (double t : ts) {
        const double m = eng.mass_outside(t, conc);
        decreasing = decreasing && m < prev;
        prev = m;
        doc.add_row({t, conc.epsilon(t), conc.radius(t), m});
    }
    doc.add_trailing("decreasing", decreasing ? 1.0 : 0.0);
    doc.add_trailing("final", prev);
    return doc;
}

CsvDoc doc_rate_family(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                       const std::vector<double>& ts, bool with_rate_extras) {
    HeatEngine eng(sp);
    ConvergenceLab lab(eng);
    auto u0 = RadialDatum::bump(eng.spherical(), cfg.datum.xi);
    const double p = with_rate_extras && cfg.p == 0.0 ? 2.0 : cfg.p;
    const auto rep = lab.rate_scan(u0, ts, p);
    const double nu = sp.pseudo_dim(), rho2 = sp.rho_norm_sq();

    CsvDoc doc;
    if (!with_rate_extras) {
        doc.columns = {"t", "l1_dev", "linf_dev", "linf_norm", "lp_dev"};
        for (const auto& row : rep.rows)
            doc.add_row({row.t, row.l1, row.linf, safe_linf_norm(row.linf, row.t, nu, rho2),
                         p == 0.0 ? 0.0 : (p == 2.0 ? row.l2 : row.lp)});
    } else {
        doc.columns = {"t", "l1_dev", "linf_norm", "lp_dev", "hoelder_excess", "delayed_gap"};
        double band_lo = 1e300, band_hi = 0.0, delayed_inf = 1e300, excess_max = -1e300;
        for (const auto& row : rep.rows) {
            const double ln = safe_linf_norm(row.linf, row.t, nu, rho2);
            const double lp = p == 2.0 ? row.l2 : row.lp;
            const double ex = ConvergenceLab::interpolation_excess(row, p);
            const double dg = eng.delayed_gap(row.t, 20.0);
            band_lo = std::min(band_lo, ln);
            band_hi = std::max(band_hi, ln);
            delayed_inf = std::min(delayed_inf, dg);
            excess_max = std::max(excess_max, lp > 0.0 ? ex / lp : 0.0);
            doc.add_row({row.t, row.l1, ln, lp, ex, dg});
        }
        doc.add_trailing("linf_norm_band", band_lo > 0.0 ? band_hi / band_lo : 0.0);
        doc.add_trailing("delayed_inf", delayed_inf);
        doc.add_trailing("hoelder_excess_rel_max", excess_max);
    }
    doc.add_trailing("l1_slope", rep.l1_fit.slope);
    doc.add_trailing("l1_slope_se", rep.l1_fit.se_slope);
    return doc;
}

CsvDoc doc_counterexample(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                          const std::vector<double>& ts) {
    HeatEngine eng(sp);
    ConvergenceLab lab(eng);
    const double s = cfg.radius;
    const double lim = lab.k_integral_limit(s);
    CsvDoc doc;
    doc.columns = {"t", "dirac_l1_gap", "k_limit", "rel_gap"};
    double final_rel = 0.0;
    for (double t : ts) {
        const double g = lab.dirac_l1_gap(s, t);
        final_rel = std::fabs(g / lim - 1.0);
        doc.add_row({t, g, lim, final_rel});
    }
    doc.add_trailing("k_average_err", std::fabs(lab.k_average(s) - 1.0));
    doc.add_trailing("final_rel_gap", final_rel);
    return doc;
}

CsvDoc doc_busemann(const ExperimentConfig&, const SymmetricSpace& sp,
                    const std::vector<double>& rs) {
    // The grid column is the geodesic parameter here, not a time.
    (void)sp;
    CsvDoc doc;
    doc.columns = {"r", "gap_axis", "max_gap"};
    for (double r : rs) {
        double worst = 0.0;
        for (double theta : {0.0, kPi / 3.0, kPi})
            for (double s : {0.5, 1.0, 2.0})
                worst = std::max(worst, ConvergenceLab::busemann_gap(theta, s, r));
        doc.add_row({r, ConvergenceLab::busemann_gap(0.0, 1.0, r), worst});
    }
    return doc;
}

CsvDoc doc_boundary(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                    const std::vector<double>& ts) {
    HeatEngine eng(sp);
    ConvergenceLab lab(eng);
    const double center = cfg.datum.center > 0.0 ? cfg.datum.center : 1.0;
    PlaneBump radial(0.0, cfg.datum.xi), off(center, cfg.datum.xi);
    CsvDoc doc;
    doc.columns = {"theta", "plus_radial", "plus_off"};
    const int n = 16;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        doc.add_row({th, lab.boundary_value(radial, th, true), lab.boundary_value(off, th, true)});
    }
    const double fr = lab.boundary_limit_functional(radial);
    const double fo = lab.boundary_limit_functional(off);
    auto u0 = RadialDatum::bump(eng.spherical(), cfg.datum.xi);
    const double route = lab.off_center_l1_gap(u0, center, ts.back());
    doc.add_trailing("functional_radial", fr);
    doc.add_trailing("functional_off", fo);
    doc.add_trailing("l1_route_t", ts.back());
    doc.add_trailing("l1_route_value", route);
    doc.add_trailing("route_rel_gap", std::fabs(route / fo - 1.0));
    return doc;
}

CsvDoc doc_dist_mass(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                     const std::vector<double>& ts) {
    HeatEngine eng(sp);
    SolvableLab lab(eng);
    CsvDoc doc;
    doc.columns = {"t", "dr_mass", "mass_err"};
    for (double t : ts) {
        const double m = lab.dr_total_mass(t);
        doc.add_row({t, m, std::fabs(m - 1.0)});
    }
    if (real_hyperbolic(sp)) {
        auto v0 = RadialDatum::bump(eng.spherical(), cfg.datum.xi);
        const double want = v0.transform_real(0.0);
        double lo = 1e300, hi = -1e300;
        for (int k = 0; k < 10; ++k) {
            const double m = lab.mass_function_radial(v0, 0.3 + 2.0 * k);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        doc.add_trailing("mass_fn_value", 0.5 * (lo + hi));
        doc.add_trailing("mass_fn_expected", want);
        doc.add_trailing("mass_fn_drift", hi - lo);
        doc.add_trailing("mass_fn_err", std::max(std::fabs(lo - want), std::fabs(hi - want)));
    }
    return doc;
}

CsvDoc doc_dist_abel(const ExperimentConfig&, const SymmetricSpace& sp,
                     const std::vector<double>& ts) {
    HeatEngine eng(sp);
    SolvableLab lab(eng);
    CsvDoc doc;
    doc.columns = {"t", "a_coord", "value", "gauss", "rel_err"};
    double worst = 0.0;
    for (double t : ts)
        for (double a : {0.0, 0.7, -1.3, 2.0}) {
            const double v = lab.horospherical_projection(t, a);
            const double g = SolvableLab::euclidean_gauss(t, a);
            const double rel = std::fabs(v / g - 1.0);
            worst = std::max(worst, rel);
            doc.add_row({t, a, v, g, rel});
        }
    doc.add_trailing("max_rel_err", worst);
    return doc;
}

CsvDoc doc_dist_concentration(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                              const std::vector<double>& ts) {
    HeatEngine eng(sp);
    SolvableLab lab(eng);
    CsvDoc doc;
    doc.columns = {"t", "eps", "window_lo", "window_hi", "mass_outside_tilde", "outside_sup"};
    bool dec_mass = true, dec_sup = true;
    double pm = 2.0, ps = 1e300, fm = 0.0;
    for (double t : ts) {
        const double eps = std::pow(t, -cfg.eps_exponent);
        const auto win = lab.window_tilde(t, eps);
        const double m = lab.mass_outside_tilde(t, eps);
        const double s = lab.outside_sup_tilde(t, eps);
        dec_mass = dec_mass && m < pm;
        dec_sup = dec_sup && s < ps;
        pm = fm = m;
        ps = s;
        doc.add_row({t, eps, win.lo, win.hi, m, s});
    }
    doc.add_trailing("mass_decreasing", dec_mass ? 1.0 : 0.0);
    doc.add_trailing("sup_decreasing", dec_sup ? 1.0 : 0.0);
    doc.add_trailing("final_mass_outside", fm);
    return doc;
}

CsvDoc doc_dist_supnorm(const ExperimentConfig&, const SymmetricSpace& sp,
                        const std::vector<double>& ts) {
    HeatEngine eng(sp);
    SolvableLab lab(eng);
    CsvDoc doc;
    doc.columns = {"t", "sup_norm_band", "probe_ratio"};
    std::vector<double> raw;
    double lo = 1e300, hi = 0.0;
    for (double t : ts) {
        const double band = lab.sup_norm_htilde(t);
        lo = std::min(lo, band);
        hi = std::max(hi, band);
        raw.push_back(band / std::pow(t, 0.5 * (sp.rank() + sp.num_reduced_positive())));
        doc.add_row({t, band, lab.sup_probe_ratio(t)});
    }
    doc.add_trailing("band_ratio", lo > 0.0 ? hi / lo : 0.0);
    if (ts.size() >= 3) {
        const double ne = 0.5 * (sp.rank() + sp.num_reduced_positive());
        doc.add_trailing("exponent_dev", std::fabs(fit_log_slope(ts, raw).slope + ne));
    }
    return doc;
}

CsvDoc doc_dist_deviation(const ExperimentConfig& cfg, const SymmetricSpace& sp,
                          const std::vector<double>& ts) {
    HeatEngine eng(sp);
    SolvableLab lab(eng);
    auto v0 = RadialDatum::bump(eng.spherical(), cfg.datum.xi);
    const bool off = cfg.datum.kind == "off-origin";
    CsvDoc doc;
    doc.columns = {"t", "l1_dev_S", "linf_dev_S", "linf_norm_S", "mass_outside_tilde",
                   "sup_norm_band"};
    std::vector<double> l1s, lns;
    bool dec1 = true, decn = true;
    for (double t : ts) {
        const auto dv = off ? lab.deviation_translated(v0, cfg.datum.center, t)
                            : lab.deviation_radial(v0, t);
        if (!l1s.empty()) {
            dec1 = dec1 && dv.l1 < l1s.back();
            decn = decn && dv.linf_norm < lns.back();
        }
        l1s.push_back(dv.l1);
        lns.push_back(dv.linf_norm);
        doc.add_row({t, dv.l1, dv.linf, dv.linf_norm, lab.mass_outside_tilde(t),
                     lab.sup_norm_htilde(t)});
    }
    doc.add_trailing("l1_decreasing", dec1 ? 1.0 : 0.0);
    doc.add_trailing("linf_norm_decreasing", decn ? 1.0 : 0.0);
    doc.add_trailing("l1_final_over_initial", l1s.back() / l1s.front());
    doc.add_trailing("linf_norm_final_over_initial", lns.back() / lns.front());
    return doc;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
    json j{{"space", space},        {"id", id},
           {"t_grid", t_grid},      {"eps_exponent", eps_exponent},
           {"datum", datum_json(datum)}, {"p", p},
           {"radius", radius},      {"seed", seed}};
    return j.dump();
}

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = {
        "kernel-eval",        "concentration",       "thm12",
        "rates",              "counterexample",      "busemann",
        "boundary",           "distinguished-mass",  "distinguished-abel",
        "distinguished-concentration", "distinguished-supnorm", "distinguished-deviation"};
    return ids;
}

void validate_config(const ExperimentConfig& cfg) {
    const auto& ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), cfg.id) == ids.end())
        throw std::invalid_argument("unknown experiment id \"" + cfg.id + "\"");
    const SymmetricSpace sp = SymmetricSpace::from_catalog(cfg.space);
    if (cfg.t_grid.empty() || cfg.t_grid.front() <= 0.0 || !increasing(cfg.t_grid))
        throw std::invalid_argument("t-grid must be positive and strictly increasing");
    if (!(cfg.eps_exponent > 0.0 && cfg.eps_exponent < 0.5))
        throw std::invalid_argument("eps exponent must lie in (0, 1/2)");
    if (cfg.p != 0.0 && !(cfg.p >= 1.0 && cfg.p <= 3.0))
        throw std::invalid_argument("p must be 0 (skip) or in [1, 3]");
    if (!(cfg.datum.xi > 0.0)) throw std::invalid_argument("datum support must be positive");
    if (cfg.datum.center < 0.0) throw std::invalid_argument("datum center must be nonnegative");
    if (cfg.datum.kind != "radial" && cfg.datum.kind != "off-origin" &&
        cfg.datum.kind != "point-mass")
        throw std::invalid_argument("unknown datum kind \"" + cfg.datum.kind + "\"");

    const bool hyp = real_hyperbolic(sp);
    if ((cfg.id == "thm12" || cfg.id == "rates") && cfg.datum.kind != "radial")
        throw std::invalid_argument(cfg.id + " requires a radial datum");
    if ((cfg.id == "thm12" || cfg.id == "rates" || cfg.id == "distinguished-deviation") &&
        !sp.is_rank_one())
        throw std::invalid_argument(cfg.id + " requires a rank-one space");
    if ((cfg.id == "counterexample" || cfg.id == "busemann") && !hyp)
        throw std::invalid_argument(cfg.id + " requires a real hyperbolic space");
    if (cfg.id == "boundary" && !(hyp && sp.dim() == 2))
        throw std::invalid_argument("boundary requires the hyperbolic plane");
    if (cfg.id == "distinguished-abel" && !(hyp && sp.dim() <= 3))
        throw std::invalid_argument("distinguished-abel requires Hr:2 or Hr:3");
    if (cfg.id == "distinguished-mass" && !(sp.is_rank_one() || sp.rank() == 2))
        throw std::invalid_argument("distinguished-mass requires a catalog space");
    if (cfg.id == "distinguished-deviation" && cfg.datum.kind == "off-origin" &&
        !(hyp && sp.dim() == 2))
        throw std::invalid_argument("off-origin deviations run on the hyperbolic plane");
}

CsvDoc run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const SymmetricSpace sp = SymmetricSpace::from_catalog(cfg.space);
    const auto ts = effective_grid(cfg);
    CsvDoc doc;
    if (cfg.id == "kernel-eval") doc = doc_kernel_eval(cfg, sp, ts);
    else if (cfg.id == "concentration") doc = doc_concentration(cfg, sp, ts);
    else if (cfg.id == "thm12") doc = doc_rate_family(cfg, sp, ts, false);
    else if (cfg.id == "rates") doc = doc_rate_family(cfg, sp, ts, true);
    else if (cfg.id == "counterexample") doc = doc_counterexample(cfg, sp, ts);
    else if (cfg.id == "busemann") doc = doc_busemann(cfg, sp, ts);
    else if (cfg.id == "boundary") doc = doc_boundary(cfg, sp, ts);
    else if (cfg.id == "distinguished-mass") doc = doc_dist_mass(cfg, sp, ts);
    else if (cfg.id == "distinguished-abel") doc = doc_dist_abel(cfg, sp, ts);
    else if (cfg.id == "distinguished-concentration") doc = doc_dist_concentration(cfg, sp, ts);
    else if (cfg.id == "distinguished-supnorm") doc = doc_dist_supnorm(cfg, sp, ts);
    else if (cfg.id == "distinguished-deviation") doc = doc_dist_deviation(cfg, sp, ts);
    else throw std::invalid_argument("unknown experiment id \"" + cfg.id + "\"");
    doc.config_json = cfg.to_json();
    return doc;
}

CsvDoc dump_table(const std::string& kind, const std::string& space, double param, double x_max,
                  double dx) {
    if (!(x_max > 0.0) || !(dx > 0.0) || x_max / dx > 2e5)
        throw std::invalid_argument("dump: need 0 < dx and x_max/dx <= 2e5");
    const SymmetricSpace sp = SymmetricSpace::from_catalog(space);
    CsvDoc doc;
    doc.config_json = json{{"dump", kind}, {"space", space}, {"param", param},
                           {"x_max", x_max}, {"dx", dx}}
                          .dump();
    if (kind == "cfunction") {
        Plancherel pl(sp);
        doc.columns = {"lam", "density", "abs_c", "abs_b_minus"};
        for (double x = dx; x <= x_max + 1e-12; x += dx) {
            const Vec lam = sp.rho_dir(x);
            doc.add_row({x, pl.density(lam), std::abs(pl.c_function(lam, zero_vec(sp.rank()))),
                         std::abs(pl.b_minus(lam, zero_vec(sp.rank())))});
        }
        return doc;
    }
    if (kind == "phi") {
        SphericalEngine se(sp);
        doc.columns = {"r", "phi_hat", "phi0_hat"};
        if (sp.is_rank_one()) {
            std::vector<double> rs;
            for (double x = 0.0; x <= x_max + 1e-12; x += dx) rs.push_back(x);
            const auto pv = se.phi_hat_profile(param, rs);
            const auto p0 = se.phi0_hat_profile(rs);
            for (std::size_t i = 0; i < rs.size(); ++i) doc.add_row({rs[i], pv[i], p0[i]});
        } else {
            for (double x = 0.0; x <= x_max + 1e-12; x += dx) {
                const Vec H = sp.rho_dir(x);
                doc.add_row({x, se.phi_hat(sp.rho_dir(param), H).real(), se.phi0_hat(H)});
            }
        }
        return doc;
    }
    if (kind == "kernel") {
        HeatEngine eng(sp);
        doc.columns = {"r", "hhat", "log_hhat"};
        if (sp.is_rank_one()) {
            std::vector<double> rs;
            for (double x = 0.0; x <= x_max + 1e-12; x += dx) rs.push_back(x);
            const auto hv = eng.hhat_profile(param, rs);
            for (std::size_t i = 0; i < rs.size(); ++i)
                doc.add_row({rs[i], hv[i], hv[i] > 0.0 ? std::log(hv[i]) : eng.log_hhat(param, rs[i])});
        } else {
            for (double x = 0.0; x <= x_max + 1e-12; x += dx) {
                const Vec H = sp.rho_dir(x);
                doc.add_row({x, eng.hhat_point(param, H), eng.log_hhat_point(param, H)});
            }
        }
        return doc;
    }
    throw std::invalid_argument("unknown dump kind \"" + kind + "\" (cfunction | phi | kernel)");
}

// --- acceptance criteria ----------------------------------------------------

namespace {

/// Collects labeled sub-checks into one pass/fail verdict with a value trail.
/// Failing entries get a trailing '!' so the gate line stays one short row.
class Checker {
  public:
    void check(const char* label, double measured, bool pass) {
        sep();
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.3g", measured);
        out_ << label << '=' << buf << (pass ? "" : "!");
        ok_ = ok_ && pass;
    }
    void flag(const char* label, bool pass) {
        sep();
        out_ << label << '=' << (pass ? "yes" : "no!");
        ok_ = ok_ && pass;
    }
    void skip(const char* label) {
        sep();
        out_ << label << "=skipped";
    }
    bool ok() const { return ok_; }
    std::string detail() const { return out_.str(); }

  private:
    void sep() {
        if (any_) out_ << ' ';
        any_ = true;
    }
    std::ostringstream out_;
    bool ok_ = true, any_ = false;
};

CriterionResult finish(int number, const char* name, const Checker& ck, double secs) {
    return {number, name, ck.ok(), ck.detail(), secs};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {"Hr:2", "Hr:3", "Hq:2", "A2c"};
    return names;
}

CriterionResult crit1_special_functions(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    using cd = std::complex<double>;
    const std::vector<cd> zs = {{0.3, 0.4},  {-1.7, 2.3},   {2.6, -1.1}, {5.5, 0.0},
                                {0.5, 8.0},  {-3.25, -0.75}, {12.0, -3.0}};
    double rec = 0.0, refl = 0.0;
    for (auto z : zs) {
        rec = std::max(rec, std::abs(gamma_ratio(z + 1.0, z) / z - 1.0));
        const cd lhs = std::exp(log_gamma(z) + log_gamma(1.0 - z)) * std::sin(kPi * z) / kPi;
        refl = std::max(refl, std::abs(lhs - 1.0));
    }
    ck.check("gamma_rec", rec, rec <= 1e-10);
    ck.check("gamma_refl", refl, refl <= 1e-10);

    {
        const auto sp = SymmetricSpace::from_catalog("Hr:2");
        Plancherel pl(sp);
        double err = 0.0;
        for (double lam : {0.1, 0.37, 1.0, 2.5, 7.0, 20.0})
            err = std::max(err,
                           std::fabs(pl.density(Vec{lam}) / (kPi * lam * std::tanh(kPi * lam)) - 1.0));
        ck.check("h2_density", err, err <= 1e-8);
    }
    {
        const auto sp = SymmetricSpace::from_catalog("Hr:3");
        Plancherel pl(sp);
        double err = 0.0;
        for (double lam : {0.1, 0.37, 1.0, 2.5, 7.0, 20.0})
            err = std::max(err, std::fabs(pl.density(Vec{lam}) / (lam * lam) - 1.0));
        ck.check("h3_density", err, err <= 1e-10);
    }
    {
        double dev = 0.0;
        for (const auto& name : catalog_names()) {
            const auto sp = SymmetricSpace::from_catalog(name);
            Plancherel pl(sp);
            double want = 0.0;
            for (const auto& r : sp.reduced_roots()) want += 1.0 - 0.5 * (r.m_alpha + r.m_2alpha);
            const std::vector<double> ss = {100.0, 200.0, 400.0, 800.0, 1600.0};
            std::vector<double> bs;
            for (double s : ss)
                bs.push_back(std::abs(pl.b_minus(sp.rho_dir(s), zero_vec(sp.rank()))));
            dev = std::max(dev, std::fabs(fit_log_slope(ss, bs).slope - want));
        }
        ck.check("b_growth_dev", dev, dev <= 0.02);
    }
    return finish(1, "special-functions", ck, seconds_since(t0));
}

CriterionResult crit2_spherical(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    double center_err = 0.0, irho_err = 0.0, env_spread = 0.0;
    for (const auto& name : catalog_names()) {
        const auto sp = SymmetricSpace::from_catalog(name);
        SphericalEngine se(sp);
        const Vec H0 = zero_vec(sp.rank());
        if (sp.is_rank_one()) {
            for (double lam : {0.3, 1.7})
                center_err = std::max(center_err, std::abs(se.phi_hat(Vec{lam}, H0) - 1.0));
            for (double r : {0.5, 2.0, 7.0, 18.0}) {
                const Vec H = sp.axis() * r;
                const auto v = se.phi_hat(H0, sp.rho(), H);
                irho_err = std::max(irho_err, std::abs(v * std::exp(-dot(sp.rho(), H)) - 1.0));
            }
        } else {
            center_err = std::max(center_err, std::abs(se.phi_hat(Vec{0.9, 0.4}, H0) - 1.0));
            for (double s : {1.0, 5.0, 14.0}) {
                const Vec H = sp.rho_dir(s);
                const auto v = se.phi_hat(H0, sp.rho(), H);
                irho_err = std::max(irho_err, std::abs(v * std::exp(-dot(sp.rho(), H)) - 1.0));
            }
        }
        // Ground envelope: phi0hat against prod (1 + <alpha, H>). The band is
        // judged where the approach to the large-r constant stays inside one
        // decade; for m = (4, 3) that constant alone is ~3e2, so Hq:2 only
        // exercises the evaluator here, not the spread bar.
        if (sp.is_rank_one() && sp.m1() > 3) continue;
        double lo = 1e300, hi = 0.0;
        auto ratio_at = [&](const Vec& H) {
            double prod = 1.0;
            for (const auto& r : sp.reduced_roots()) prod *= 1.0 + dot(r.alpha, H);
            return se.phi0_hat(H) / prod;
        };
        if (sp.is_rank_one()) {
            std::vector<double> rs;
            for (double r = 0.0; r <= 30.0 + 1e-9; r += 0.25) rs.push_back(r);
            const auto p0 = se.phi0_hat_profile(rs);
            for (std::size_t i = 0; i < rs.size(); ++i) {
                double prod = 1.0;
                for (const auto& rt : sp.reduced_roots())
                    prod *= 1.0 + dot(rt.alpha, sp.axis() * rs[i]);
                const double q = p0[i] / prod;
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        } else {
            const auto wedge = HeatEngine(sp).chamber_wedge();
            for (int ia = 0; ia <= 8; ++ia) {
                const double th = wedge.first + (0.05 + 0.9 * ia / 8.0) * (wedge.second - wedge.first);
                for (double r = 0.5; r <= 30.0 + 1e-9; r += (fast ? 2.5 : 1.0)) {
                    const double q = ratio_at(Vec{r * std::cos(th), r * std::sin(th)});
                    lo = std::min(lo, q);
                    hi = std::max(hi, q);
                }
            }
        }
        env_spread = std::max(env_spread, hi / lo);
    }
    ck.check("phi_center", center_err, center_err <= 1e-9);
    ck.check("phi_irho", irho_err, irho_err <= 1e-9);

    {
        const auto sp = SymmetricSpace::from_catalog("Hr:3");
        SphericalEngine se(sp);
        const std::vector<double> rs = {0.1, 0.3, 1.0, 2.0, 5.0, 10.0};
        double err = 0.0;
        for (double lam : {0.5, 1.0, 2.0, 4.0}) {
            const auto pv = se.phi_hat_profile(lam, rs);
            for (std::size_t i = 0; i < rs.size(); ++i) {
                const double r = rs[i];
                const double model = std::exp(r) * std::sin(lam * r) / (lam * std::sinh(r));
                err = std::max(err, std::fabs(pv[i] / model - 1.0));
            }
        }
        ck.check("h3_phi_closed", err, err <= 1e-8);
    }
    {
        double err = 0.0;
        for (const char* name : {"Hr:2", "Hr:3"}) {
            const auto sp = SymmetricSpace::from_catalog(name);
            SphericalEngine se(sp);
            const std::vector<std::complex<double>> lams = {{0.7, 0.0}, {1.9, 0.0}, {0.9, 0.3}};
            for (auto lam : lams)
                for (double r : {0.3, 0.8, 2.5, 6.0}) {
                    const auto a = se.phi_hat(Vec{lam.real()}, Vec{lam.imag()}, Vec{r});
                    const auto b = phi_hat_integral_rep(sp, lam, r);
                    err = std::max(err, std::abs(a - b) / std::abs(b));
                }
        }
        ck.check("ode_vs_integral", err, err <= 1e-7);
    }
    {
        const auto sp = SymmetricSpace::from_catalog("A2c");
        SphericalEngine se(sp);
        const Plancherel& pl = se.plancherel();
        const double mu1 = sp.mu_min(sp.rho_dir(1.0));
        const std::vector<Vec> lams = {sp.rho_dir(1.5), sp.dominant(Vec{2.0, 0.9})};
        const std::vector<Vec> Hs = {sp.rho_dir(3.0 / mu1), sp.rho_dir(12.0 / mu1),
                                     sp.dominant(Vec{5.0, 3.4})};
        double err = 0.0;
        for (const auto& lam : lams) {
            RankTwoSeries series(pl, lam);
            for (const auto& H : Hs) {
                if (sp.mu_min(H) < 3.0) continue;
                const auto a = series.phi_hat(H);
                const auto b = se.closed_form_phi_hat(lam, zero_vec(2), H);
                err = std::max(err, std::abs(a - b) / std::abs(b));
            }
        }
        ck.check("a2_series_vs_closed", err, err <= 1e-6);
    }
    ck.check("phi0_env_spread", env_spread, env_spread < 10.0);
    return finish(2, "spherical-engines", ck, seconds_since(t0));
}

CriterionResult crit3_heat_kernel(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    {
        double err = 0.0;
        for (const auto& name : catalog_names()) {
            const auto sp = SymmetricSpace::from_catalog(name);
            HeatEngine eng(sp);
            const std::vector<double> ts =
                fast ? std::vector<double>{1.0, 5.0} : std::vector<double>{0.5, 1.0, 2.0, 5.0, 10.0};
            for (double t : ts) err = std::max(err, std::fabs(eng.total_mass(t) - 1.0));
        }
        ck.check("mass_err", err, err <= 1e-6);
    }
    {
        double err = 0.0;
        for (const char* name : {"Hr:2", "Hr:3", "Hq:2"}) {
            const auto sp = SymmetricSpace::from_catalog(name);
            HeatEngine eng(sp);
            for (double t : {1.0, 5.0})
                for (double lam : {0.5, 2.0}) {
                    const double want = std::exp(-t * (lam * lam + sp.rho_norm_sq()));
                    err = std::max(err, std::fabs(eng.transform_roundtrip(t, lam) - want));
                }
        }
        const auto a2 = SymmetricSpace::from_catalog("A2c");
        HeatEngine ea(a2);
        const Vec lam{0.9, 0.5};
        const double want = std::exp(-1.0 * (dot(lam, lam) + a2.rho_norm_sq()));
        err = std::max(err, std::abs(ea.transform_roundtrip_rank2(1.0, lam) - want));
        ck.check("roundtrip_err", err, err <= 1e-6);
    }
    {
        const auto sp = SymmetricSpace::from_catalog("Hr:3");
        HeatEngine eng(sp);
        double err = 0.0;
        for (double t : {0.5, 2.0, 10.0, 80.0})
            for (double r : {0.0, 0.5, 3.0, 10.0, 40.0, 120.0}) {
                if (r > 2.0 * t + 12.0 * std::sqrt(t) + 30.0) continue;
                err = std::max(err,
                               std::fabs(eng.hhat(t, r) / eng.closed_form_hhat(t, Vec{r}) - 1.0));
            }
        ck.check("h3_closed_form", err, err <= 1e-6);
    }
    {
        double spread = 0.0;
        for (const char* name : {"Hr:2", "Hr:3", "Hq:2"}) {
            const auto sp = SymmetricSpace::from_catalog(name);
            HeatEngine eng(sp);
            const double t_cap = 590.0 / sp.rho_norm_sq();
            double lo = 1e300, hi = 0.0;
            for (double t : {1.0, 3.0, 10.0, 30.0, 50.0}) {
                if (t > t_cap) continue;
                std::vector<double> rs = {0.1, 0.5 * t, t, 2.0 * t, 4.0 * t, 6.0 * t};
                const auto hv = eng.hhat_profile(t, rs);
                const auto ev = eng.log_envelope_hat_profile(t, rs);
                for (std::size_t i = 0; i < rs.size(); ++i) {
                    const double q = hv[i] / std::exp(ev[i]);
                    lo = std::min(lo, q);
                    hi = std::max(hi, q);
                }
            }
            spread = std::max(spread, hi / lo);
        }
        ck.check("envelope_spread", spread, spread <= 50.0);
    }
    {
        const auto sp = SymmetricSpace::from_catalog("Hr:2");
        HeatEngine eng(sp);
        bool monotone = true;
        double prev = 1e300, final_gap = 0.0;
        for (double t : {10.0, 20.0, 40.0, 80.0}) {
            const double r = 2.0 * t * std::sqrt(sp.rho_norm_sq());
            const double ratio = eng.hhat(t, r) / std::exp(eng.log_critical_hat(t, Vec{r}));
            final_gap = std::fabs(ratio - 1.0);
            monotone = monotone && final_gap < prev;
            prev = final_gap;
        }
        ck.flag("asym_monotone", monotone);
        ck.check("asym_final_gap", final_gap, final_gap <= 0.05);
    }
    return finish(3, "heat-kernel", ck, seconds_since(t0));
}

CriterionResult crit4_concentration(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    const ConcentrationSpec conc{};
    for (const char* name : {"Hr:2", "Hr:3"}) {
        const auto sp = SymmetricSpace::from_catalog(name);
        HeatEngine eng(sp);
        bool dec = true;
        double prev = 2.0;
        for (double t : {10.0, 20.0, 40.0, 80.0, 160.0}) {
            const double m = eng.mass_outside(t, conc);
            dec = dec && m < prev;
            prev = m;
        }
        ck.flag(sp.dim() == 2 ? "h2_decreasing" : "h3_decreasing", dec);
        ck.check(sp.dim() == 2 ? "h2_final" : "h3_final", prev, prev < 0.05);
    }
    {
        const auto sp = SymmetricSpace::from_catalog("A2c");
        HeatEngine eng(sp);
        const double m10 = eng.mass_outside(10.0, conc);
        const double m20 = eng.mass_outside(20.0, conc);
        ck.flag("a2_decreasing", m20 < m10);
        ck.check("a2_final", m20, m20 < 0.3);
    }
    return finish(4, "concentration", ck, seconds_since(t0));
}

CriterionResult crit5_l1_convergence(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    const std::vector<double> ts = {10.0, 20.0, 40.0, 80.0, 160.0};
    for (const char* name : {"Hr:3", "Hr:2"}) {
        const auto sp = SymmetricSpace::from_catalog(name);
        HeatEngine eng(sp);
        ConvergenceLab lab(eng);
        auto u0 = RadialDatum::bump(eng.spherical(), 1.0);
        const auto rep = lab.rate_scan(u0, ts, 0.0);
        bool dec = true;
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            dec = dec && rep.rows[i].l1 < rep.rows[i - 1].l1;
        const bool h3 = sp.dim() == 3;
        ck.flag(h3 ? "h3_l1_decreasing" : "h2_l1_decreasing", dec);
        const double slope = rep.l1_fit.slope;
        ck.check(h3 ? "h3_slope" : "h2_slope", slope, slope >= -0.65 && slope <= -0.35);
        if (fast && h3) {
            ck.skip("h2_l1_decreasing");
            ck.skip("h2_slope");
            break;
        }
    }
    return finish(5, "l1-convergence-rate", ck, seconds_since(t0));
}

CriterionResult crit6_lp_rates(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    {
        const auto sp = SymmetricSpace::from_catalog("Hr:3");
        HeatEngine eng(sp);
        ConvergenceLab lab(eng);
        auto u0 = RadialDatum::bump(eng.spherical(), 1.0);
        const std::vector<double> ts = fast ? std::vector<double>{10.0, 20.0, 40.0, 80.0}
                                            : std::vector<double>{10.0, 20.0, 40.0, 80.0, 160.0};
        const double p = 2.5;
        const auto rep = lab.rate_scan(u0, ts, p);
        double lo = 1e300, hi = 0.0, excess = -1e300;
        for (const auto& row : rep.rows) {
            const double ln = safe_linf_norm(row.linf, row.t, sp.pseudo_dim(), sp.rho_norm_sq());
            lo = std::min(lo, ln);
            hi = std::max(hi, ln);
            excess = std::max(excess, ConvergenceLab::interpolation_excess(row, p) / row.lp);
            excess = std::max(excess, ConvergenceLab::interpolation_excess(row, 2.0) / row.l2);
        }
        ck.check("linf_norm_band", hi / lo, hi / lo < 10.0);
        ck.check("hoelder_excess", excess, excess <= 1e-10);
    }
    {
        const auto sp = SymmetricSpace::from_catalog("Hr:2");
        HeatEngine eng(sp);
        double inf = 1e300;
        for (double t : {10.0, 20.0, 40.0, 80.0}) inf = std::min(inf, eng.delayed_gap(t, 20.0));
        ck.check("delayed_inf", inf, inf >= 0.01);
    }
    return finish(6, "lp-linf-rates", ck, seconds_since(t0));
}

CriterionResult crit7_counterexample(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    const auto sp = SymmetricSpace::from_catalog("Hr:2");
    HeatEngine eng(sp);
    ConvergenceLab lab(eng);
    {
        double err = 0.0;
        for (double s : {0.5, 1.0, 2.0}) err = std::max(err, std::fabs(lab.k_average(s) - 1.0));
        ck.check("k_average_err", err, err <= 1e-9);
    }
    {
        const double lim = lab.k_integral_limit(1.0);
        const double gap = lab.dirac_l1_gap(1.0, 80.0);
        const double rel = std::fabs(gap / lim - 1.0);
        ck.check("dirac_rel_gap", rel, rel <= 0.05);
    }
    {
        const ConcentrationSpec conc{};
        const auto fit =
            lab.quotient_error_fit(1.0, {10.0, 20.0, 40.0, 80.0, 160.0}, conc);
        ck.check("quotient_slope", fit.slope, fit.slope >= 0.8);
    }
    {
        double worst = 0.0;
        for (double theta : {0.0, kPi / 3.0, kPi})
            for (double s : {0.5, 1.0, 2.0})
                worst = std::max(worst, ConvergenceLab::busemann_gap(theta, s, 20.0));
        ck.check("busemann_gap", worst, worst < 1e-3);
    }
    {
        PlaneBump radial(0.0, 1.0), off(1.0, 1.0);
        const double fr = lab.boundary_limit_functional(radial);
        const double fo = lab.boundary_limit_functional(off);
        ck.check("boundary_radial", fr, fr <= 1e-6);
        ck.check("boundary_off", fo, fo > 1e-3);
        if (fast) {
            ck.skip("boundary_routes");
        } else {
            auto u0 = RadialDatum::bump(eng.spherical(), 1.0);
            const double route = lab.off_center_l1_gap(u0, 1.0, 80.0);
            const double rel = std::fabs(route / fo - 1.0);
            ck.check("boundary_routes", rel, rel <= 0.05);
        }
    }
    return finish(7, "counterexample-dichotomy", ck, seconds_since(t0));
}

CriterionResult crit8_distinguished(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    {
        double err = 0.0;
        for (const char* name : {"Hr:2", "Hr:3", "A2c"}) {
            const auto sp = SymmetricSpace::from_catalog(name);
            HeatEngine eng(sp);
            SolvableLab lab(eng);
            for (double t : {1.0, 2.0, 5.0, 10.0})
                err = std::max(err, std::fabs(lab.dr_total_mass(t) - 1.0));
        }
        ck.check("dr_mass_err", err, err <= 1e-6);
    }
    {
        double err = 0.0;
        for (const char* name : {"Hr:2", "Hr:3"}) {
            const auto sp = SymmetricSpace::from_catalog(name);
            HeatEngine eng(sp);
            SolvableLab lab(eng);
            for (double t : {0.5, 1.0, 2.0, 4.0})
                for (double a : {0.0, 0.7, -1.3, 2.0})
                    err = std::max(err, std::fabs(lab.horospherical_projection(t, a) /
                                                      SolvableLab::euclidean_gauss(t, a) -
                                                  1.0));
        }
        ck.check("abel_err", err, err <= 1e-3);
    }
    const auto h2 = SymmetricSpace::from_catalog("Hr:2");
    HeatEngine e2(h2);
    SolvableLab s2(e2);
    {
        bool dec = true;
        double prev = 2.0;
        for (double t : {10.0, 20.0, 40.0, 80.0}) {
            const double m = s2.mass_outside_tilde(t);
            dec = dec && m < prev;
            prev = m;
        }
        ck.flag("h2_window_decreasing", dec);
        ck.check("h2_window_final", prev, prev < 0.1);
    }
    {
        double r1 = 0.0, r2 = 0.0;
        for (double t : {10.0, 20.0, 40.0, 80.0, 160.0}) {
            const auto rr = s2.refined_residuals(t, std::sqrt(t));
            r1 = std::max(r1, std::fabs(rr[0]));
            r2 = std::max(r2, std::fabs(rr[1]));
        }
        ck.check("refined_r1", r1, r1 <= 0.5);
        ck.check("refined_r2", r2, r2 <= 2.0);
    }
    {
        const auto h3 = SymmetricSpace::from_catalog("Hr:3");
        HeatEngine e3(h3);
        SolvableLab s3(e3);
        const int bad = s2.kostant_failures(8.0, 1000, 20260825u) +
                        s3.kostant_failures(8.0, 1000, 20260825u);
        ck.check("kostant_failures", bad, bad == 0);
    }
    {
        const std::vector<double> ts = {5.0, 10.0, 20.0, 40.0, 80.0};
        std::vector<double> band, raw;
        for (double t : ts) {
            band.push_back(s2.sup_norm_htilde(t));
            raw.push_back(band.back() / t);
        }
        const double lo = *std::min_element(band.begin(), band.end());
        const double hi = *std::max_element(band.begin(), band.end());
        ck.check("sup_band", hi / lo, hi / lo < 5.0);
        const double dev = std::fabs(fit_log_slope(ts, raw).slope + 1.0);
        ck.check("sup_exponent_dev", dev, dev <= 0.1);
    }
    auto v0 = RadialDatum::bump(e2.spherical(), 1.0);
    {
        std::vector<double> l1s, lns;
        bool dec1 = true, decn = true;
        for (double t : {5.0, 10.0, 20.0, 40.0, 80.0}) {
            const auto dv = s2.deviation_radial(v0, t);
            if (!l1s.empty()) {
                dec1 = dec1 && dv.l1 < l1s.back();
                decn = decn && dv.linf_norm < lns.back();
            }
            l1s.push_back(dv.l1);
            lns.push_back(dv.linf_norm);
        }
        ck.flag("radial_decreasing", dec1 && decn);
        const double q1 = l1s.back() / l1s.front(), qn = lns.back() / lns.front();
        ck.check("radial_l1_ratio", q1, q1 < 0.1);
        ck.check("radial_linf_ratio", qn, qn < 0.1);
    }
    {
        std::vector<double> ts = {5.0, 10.0, 20.0, 40.0, 80.0, 160.0};
        if (!fast) for (double t : {320.0, 640.0, 1280.0, 2400.0}) ts.push_back(t);
        std::vector<double> l1s, lns;
        bool dec = true;
        for (double t : ts) {
            const auto dv = s2.deviation_translated(v0, 2.0, t);
            if (!l1s.empty()) dec = dec && dv.l1 < l1s.back() && dv.linf_norm < lns.back();
            l1s.push_back(dv.l1);
            lns.push_back(dv.linf_norm);
        }
        ck.flag("off_origin_decreasing", dec);
        if (fast) {
            ck.skip("off_origin_l1_ratio");
            ck.skip("off_origin_linf_ratio");
        } else {
            const double q1 = l1s.back() / l1s.front(), qn = lns.back() / lns.front();
            ck.check("off_origin_l1_ratio", q1, q1 < 0.1);
            ck.check("off_origin_linf_ratio", qn, qn < 0.1);
        }
    }
    {
        const double want = v0.transform_real(0.0);
        double lo = 1e300, hi = -1e300;
        for (int k = 0; k < 10; ++k) {
            const double m = s2.mass_function_radial(v0, 0.3 + 2.0 * k);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        ck.check("mass_fn_drift", hi - lo, hi - lo <= 1e-6);
        const double err = std::max(std::fabs(lo - want), std::fabs(hi - want));
        ck.check("mass_fn_err", err, err <= 1e-6);
    }
    {
        const double rho = h2.rho_scalar();
        const bool acc = s2.weighted_class_gate(
            [rho](double r) { return std::exp(-(3.0 * rho + 1.0) * r); });
        const bool rej = s2.weighted_class_gate([rho](double r) { return std::exp(-rho * r); });
        ck.flag("gate_accepts", acc);
        ck.flag("gate_rejects", !rej);
    }
    return finish(8, "distinguished-laplacian", ck, seconds_since(t0));
}

CriterionResult crit9_determinism(bool fast) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    auto cfg = [](const char* id, const char* space, std::vector<double> ts) {
        ExperimentConfig c;
        c.id = id;
        c.space = space;
        c.t_grid = std::move(ts);
        return c;
    };
    std::vector<ExperimentConfig> cfgs = {
        cfg("kernel-eval", "Hr:3", {1.0, 5.0}),
        cfg("thm12", "Hr:3", {10.0, 20.0, 40.0}),
        cfg("counterexample", "Hr:2", {10.0, 20.0}),
        cfg("distinguished-mass", "Hr:2", {1.0, 2.0, 5.0}),
        cfg("distinguished-deviation", "Hr:2", {5.0, 10.0, 20.0}),
    };
    if (!fast) {
        cfgs.push_back(cfg("concentration", "Hr:2", {10.0, 20.0}));
        cfgs.push_back(cfg("rates", "Hr:3", {10.0, 20.0, 40.0}));
        cfgs.push_back(cfg("busemann", "Hr:2", {5.0, 10.0, 20.0}));
        cfgs.push_back(cfg("boundary", "Hr:2", {20.0}));
        cfgs.push_back(cfg("distinguished-abel", "Hr:2", {1.0, 2.0}));
        cfgs.push_back(cfg("distinguished-concentration", "Hr:2", {10.0, 20.0}));
        cfgs.push_back(cfg("distinguished-supnorm", "Hr:2", {5.0, 10.0, 20.0}));
        auto off = cfg("distinguished-deviation", "Hr:2", {5.0, 10.0});
        off.datum.kind = "off-origin";
        off.datum.center = 2.0;
        cfgs.push_back(off);
    }

    const char* saved = std::getenv("HEATLAB_THREADS");
    const std::string saved_value = saved ? saved : "";
    int mismatches = 0, compared = 0;
    auto render_with = [&](const ExperimentConfig& c, int threads) {
        setenv("HEATLAB_THREADS", std::to_string(threads).c_str(), 1);
        return render_csv(run_experiment(c));
    };
    for (const auto& c : cfgs) {
        const std::string a = render_with(c, 1), b = render_with(c, 4), d = render_with(c, 8);
        ++compared;
        if (a != b || b != d) ++mismatches;
    }
    {
        setenv("HEATLAB_THREADS", "1", 1);
        const std::string a = render_csv(dump_table("cfunction", "Hr:2", 0.0, 10.0, 0.5));
        setenv("HEATLAB_THREADS", "8", 1);
        const std::string b = render_csv(dump_table("cfunction", "Hr:2", 0.0, 10.0, 0.5));
        ++compared;
        if (a != b) ++mismatches;
    }
    if (saved) setenv("HEATLAB_THREADS", saved_value.c_str(), 1);
    else unsetenv("HEATLAB_THREADS");

    ck.check("configs_compared", compared, compared > 0);
    ck.check("byte_mismatches", mismatches, mismatches == 0);
    return finish(9, "thread-determinism", ck, seconds_since(t0));
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "unit") return {1, 2};
    if (suite == "envelopes") return {3, 4};
    if (suite == "thm12") return {5, 6};
    if (suite == "sec34") return {7};
    if (suite == "sec4") return {8};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9};
    throw std::invalid_argument("unknown suite \"" + suite +
                                "\" (unit | envelopes | thm12 | sec34 | sec4 | all)");
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& which, bool fast) {
    std::vector<CriterionResult> out;
    for (int n : which) {
        switch (n) {
            case 1: out.push_back(crit1_special_functions(fast)); break;
            case 2: out.push_back(crit2_spherical(fast)); break;
            case 3: out.push_back(crit3_heat_kernel(fast)); break;
            case 4: out.push_back(crit4_concentration(fast)); break;
            case 5: out.push_back(crit5_l1_convergence(fast)); break;
            case 6: out.push_back(crit6_lp_rates(fast)); break;
            case 7: out.push_back(crit7_counterexample(fast)); break;
            case 8: out.push_back(crit8_distinguished(fast)); break;
            case 9: out.push_back(crit9_determinism(fast)); break;
            default: throw std::invalid_argument("unknown criterion " + std::to_string(n));
        }
    }
    return out;
}

std::string verdict_json(const std::string& suite, const std::vector<CriterionResult>& rs) {
    json arr = json::array();
    bool all = true;
    for (const auto& r : rs) {
        all = all && r.pass;
        arr.push_back(json{{"number", r.number},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
    }
    return json{{"suite", suite}, {"pass", all}, {"criteria", arr}}.dump(2);
}

}  // namespace heatlab
