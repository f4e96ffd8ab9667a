#include "heatlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Solve the l x l system (rows a_i) x = b by Gaussian elimination with partial
// pivoting. Sizes here are at most kMaxRank.
Vec solve_rows(const std::vector<Vec>& rows, const Vec& b) {
    const int l = b.dim();
    double a[kMaxRank][kMaxRank + 1];
    for (int i = 0; i < l; ++i) {
        for (int j = 0; j < l; ++j) a[i][j] = rows[i][j];
        a[i][l] = b[i];
    }
    for (int col = 0; col < l; ++col) {
        int piv = col;
        for (int r = col + 1; r < l; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14)
            throw std::invalid_argument("root system is degenerate: simple roots do not span");
        if (piv != col)
            for (int j = col; j <= l; ++j) std::swap(a[piv][j], a[col][j]);
        for (int r = 0; r < l; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int j = col; j <= l; ++j) a[r][j] -= f * a[col][j];
        }
    }
    Vec x = Vec::zero(l);
    for (int i = 0; i < l; ++i) x[i] = a[i][l] / a[i][i];
    return x;
}

bool in_set_signed(const std::vector<RootEntry>& roots, const Vec& v, double tol) {
    for (const auto& r : roots)
        if (dist(r.alpha, v) < tol || dist(r.alpha, -v) < tol) return true;
    return false;
}

// log(sinh x) for x > 0 without overflow.
double log_sinh(double x) {
    if (x > 20.0) return x - std::numbers::ln2_v<double> + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

}  // namespace

RootDatum root_datum_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("root datum: invalid JSON: ") + e.what());
    }
    RootDatum d;
    if (!j.contains("rank") || !j["rank"].is_number_integer())
        throw std::invalid_argument("root datum: missing integer field \"rank\"");
    d.rank = j["rank"].get<int>();
    if (d.rank < 1 || d.rank > kMaxRank)
        throw std::invalid_argument("root datum: rank must be between 1 and " +
                                    std::to_string(kMaxRank));
    if (!j.contains("roots") || !j["roots"].is_array() || j["roots"].empty())
        throw std::invalid_argument("root datum: missing non-empty array \"roots\"");
    if (!j.contains("mult") || !j["mult"].is_array() || j["mult"].size() != j["roots"].size())
        throw std::invalid_argument("root datum: \"mult\" must match \"roots\" in length");
    for (std::size_t k = 0; k < j["roots"].size(); ++k) {
        const auto& rv = j["roots"][k];
        if (!rv.is_array() || static_cast<int>(rv.size()) != d.rank)
            throw std::invalid_argument("root datum: each root needs exactly rank components");
        RootEntry e;
        e.alpha = Vec::zero(d.rank);
        for (int i = 0; i < d.rank; ++i) e.alpha[i] = rv[i].get<double>();
        const auto& mv = j["mult"][k];
        if (mv.is_number_integer()) {
            e.m_alpha = mv.get<int>();
        } else if (mv.is_array() && (mv.size() == 1 || mv.size() == 2)) {
            e.m_alpha = mv[0].get<int>();
            if (mv.size() == 2) e.m_2alpha = mv[1].get<int>();
        } else {
            throw std::invalid_argument("root datum: mult entries are m or [m, m2]");
        }
        d.roots.push_back(e);
    }
    return d;
}

SymmetricSpace SymmetricSpace::from_catalog(const std::string& name) {
    auto rank_one = [&](int m1, int m2) {
        RootDatum d;
        d.rank = 1;
        d.roots.push_back({Vec{1.0}, m1, m2});
        return from_datum(d, name);
    };
    if (name == "A2c") {
        // A2 realized isometrically in R^2; simple roots at 120 degrees, |alpha|^2 = 2.
        const double s2 = std::sqrt(2.0), s32 = std::sqrt(1.5);
        RootDatum d;
        d.rank = 2;
        d.roots.push_back({Vec{s2, 0.0}, 2, 0});
        d.roots.push_back({Vec{-1.0 / s2, s32}, 2, 0});
        d.roots.push_back({Vec{1.0 / s2, s32}, 2, 0});
        return from_datum(d, name);
    }
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        const std::string fam = name.substr(0, colon);
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(name.substr(colon + 1), &used);
            if (colon + 1 + used != name.size()) n = 0;
        } catch (...) {
            n = 0;
        }
        if (n >= 2) {
            if (fam == "Hr") return rank_one(n - 1, 0);
            if (fam == "Hc") return rank_one(2 * (n - 1), 1);
            if (fam == "Hq") return rank_one(4 * (n - 1), 3);
        }
    }
    throw std::invalid_argument(
        "unknown space \"" + name +
        "\"; expected Hr:n, Hc:n, Hq:n (n >= 2), A2c, or an abstract root datum");
}

SymmetricSpace SymmetricSpace::from_datum(const RootDatum& datum, std::string name) {
    SymmetricSpace sp;
    sp.name_ = std::move(name);
    sp.rank_ = datum.rank;
    sp.roots_ = datum.roots;
    if (sp.rank_ < 1 || sp.rank_ > kMaxRank)
        throw std::invalid_argument("rank must be between 1 and " + std::to_string(kMaxRank));
    for (auto& r : sp.roots_) {
        if (r.alpha.dim() != sp.rank_)
            throw std::invalid_argument("root dimension does not match rank");
        if (norm(r.alpha) < 1e-12) throw std::invalid_argument("zero vector listed as a root");
        if (r.m_alpha < 1) throw std::invalid_argument("root multiplicity must be >= 1");
        if (r.m_2alpha < 0) throw std::invalid_argument("double-root multiplicity must be >= 0");
    }
    for (std::size_t i = 0; i < sp.roots_.size(); ++i)
        for (std::size_t j = i + 1; j < sp.roots_.size(); ++j)
            if (dist(sp.roots_[i].alpha, sp.roots_[j].alpha) < 1e-9 ||
                dist(sp.roots_[i].alpha, -sp.roots_[j].alpha) < 1e-9)
                throw std::invalid_argument("duplicate root in datum");
    // Crystallographic checks: integral Cartan pairings, reflections permute the set.
    for (const auto& a : sp.roots_) {
        for (const auto& b : sp.roots_) {
            const double cart = 2.0 * dot(b.alpha, a.alpha) / dot(a.alpha, a.alpha);
            if (std::abs(cart - std::round(cart)) > 1e-9) {
                std::ostringstream os;
                os << "non-integral Cartan pairing " << cart << " between listed roots";
                throw std::invalid_argument(os.str());
            }
            const Vec refl = b.alpha - a.alpha * cart;
            if (!in_set_signed(sp.roots_, refl, 1e-9))
                throw std::invalid_argument(
                    "root set is not closed under reflections: not a root system");
        }
    }
    sp.finish_build();
    return sp;
}

void SymmetricSpace::finish_build() {
    const int l = rank_;
    // 2*rho0 must be regular for a genuine positive system.
    Vec two_rho0 = Vec::zero(l);
    for (const auto& r : roots_) two_rho0 = two_rho0 + r.alpha;
    for (const auto& r : roots_)
        if (dot(r.alpha, two_rho0) <= 1e-9)
            throw std::invalid_argument("listed roots are not a positive subsystem");
    rho0_ = two_rho0 * 0.5;

    // Simple roots: positive roots that are not sums of two positive roots.
    simple_.clear();
    for (std::size_t i = 0; i < roots_.size(); ++i) {
        bool decomposable = false;
        for (std::size_t a = 0; a < roots_.size() && !decomposable; ++a)
            for (std::size_t b = 0; b < roots_.size() && !decomposable; ++b)
                if (dist(roots_[a].alpha + roots_[b].alpha, roots_[i].alpha) < 1e-9)
                    decomposable = true;
        if (!decomposable) simple_.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(simple_.size()) != l)
        throw std::invalid_argument("expected exactly rank-many simple roots; datum rank is off");

    rho_ = Vec::zero(l);
    dim_n_ = l;
    for (const auto& r : roots_) {
        rho_ = rho_ + r.alpha * (0.5 * r.m_alpha + r.m_2alpha);
        dim_n_ += r.m_alpha + r.m_2alpha;
    }
    rho_sq_ = norm_sq(rho_);
    nu_ = l + 2 * static_cast<int>(roots_.size());
    pi_rho0_ = pi_prod(rho0_);

    // Weyl group: closure of the simple reflections.
    weyl_.clear();
    weyl_.push_back(Mat::identity(l));
    for (int si : simple_) weyl_.push_back(reflection(roots_[si].alpha));
    constexpr std::size_t kWeylCap = 1024;
    bool grew = true;
    while (grew) {
        grew = false;
        const std::size_t cur = weyl_.size();
        for (std::size_t i = 0; i < cur && !grew; ++i) {
            for (int si : simple_) {
                const Mat cand = reflection(roots_[si].alpha) * weyl_[i];
                bool known = false;
                for (const auto& w : weyl_)
                    if (w.max_abs_diff(cand) < 1e-9) {
                        known = true;
                        break;
                    }
                if (!known) {
                    weyl_.push_back(cand);
                    if (weyl_.size() > kWeylCap)
                        throw std::invalid_argument("Weyl closure exceeded cap; datum is corrupt");
                    grew = true;
                }
            }
        }
    }
    bool found_w0 = false;
    for (const auto& w : weyl_)
        if (dist(w.apply(rho0_), -rho0_) < 1e-9) {
            w0_ = w;
            found_w0 = true;
        }
    if (!found_w0) throw std::invalid_argument("no longest Weyl element found; datum is corrupt");

    // Flat-limit measure constant: pi^{n/2} / \int_{a+} prod <a,H>^{m_a} <2a,H>^{m_2a} e^{-|H|^2}.
    // The chamber is the simplicial cone spanned by the dual basis f_j of the
    // simple roots; integrate in those coordinates with a half-line map per axis.
    std::vector<Vec> srows;
    for (int si : simple_) srows.push_back(roots_[si].alpha);
    std::vector<Vec> fdir(l);
    Mat F(l);
    for (int j = 0; j < l; ++j) {
        Vec e = Vec::zero(l);
        e[j] = 1.0;
        fdir[j] = solve_rows(srows, e);
        fdir[j] = fdir[j] * (1.0 / norm(fdir[j]));
        for (int i = 0; i < l; ++i) F.at(i, j) = fdir[j][i];
    }
    const double jac = std::abs(F.det());
    const auto& rule = gauss_legendre(16);
    constexpr int kPanels = 8;
    std::vector<double> node, wgt;  // nodes of u in (0,1), mapped to s = u/(1-u)
    for (int p = 0; p < kPanels; ++p) {
        const double a = static_cast<double>(p) / kPanels, b = (p + 1.0) / kPanels;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[q];
            node.push_back(u / (1.0 - u));
            wgt.push_back(0.5 * (b - a) * rule.w[q] / ((1.0 - u) * (1.0 - u)));
        }
    }
    const int nn = static_cast<int>(node.size());
    double integral = 0.0;
    std::vector<int> idx(l, 0);
    while (true) {
        Vec H = Vec::zero(l);
        double wt = jac;
        for (int j = 0; j < l; ++j) {
            H = H + fdir[j] * node[idx[j]];
            wt *= wgt[idx[j]];
        }
        double f = std::exp(-norm_sq(H));
        for (const auto& r : roots_) {
            const double a = dot(r.alpha, H);
            for (int k = 0; k < r.m_alpha; ++k) f *= a;
            for (int k = 0; k < r.m_2alpha; ++k) f *= 2.0 * a;
        }
        integral += wt * f;
        int j = 0;
        while (j < l && ++idx[j] == nn) idx[j++] = 0;
        if (j == l) break;
    }
    c_meas_ = std::pow(std::numbers::pi_v<double>, 0.5 * dim_n_) / integral;
}

bool SymmetricSpace::in_closed_chamber(const Vec& H, double tol) const {
    if (H.dim() != rank_) return false;
    for (int si : simple_)
        if (dot(roots_[si].alpha, H) < -tol) return false;
    return true;
}

ChamberPoint SymmetricSpace::chamber_point(const Vec& H) const {
    if (!in_closed_chamber(H))
        throw std::invalid_argument("point is outside the closed positive chamber");
    return ChamberPoint{H};
}

double SymmetricSpace::mu_min(const Vec& H) const {
    double m = std::numeric_limits<double>::infinity();
    for (int si : simple_) m = std::min(m, dot(roots_[si].alpha, H));
    return m;
}

double SymmetricSpace::pi_prod(const Vec& H) const {
    double p = 1.0;
    for (const auto& r : roots_) p *= dot(r.alpha, H);
    return p;
}

double SymmetricSpace::cartan_distance(const ChamberPoint& a, const ChamberPoint& b) const {
    return dist(a.H, b.H);
}

std::vector<Vec> SymmetricSpace::weyl_orbit(const Vec& lambda, double tol) const {
    std::vector<Vec> orbit;
    for (const auto& w : weyl_) {
        const Vec v = w.apply(lambda);
        bool known = false;
        for (const auto& u : orbit)
            if (dist(u, v) < tol) {
                known = true;
                break;
            }
        if (!known) orbit.push_back(v);
    }
    return orbit;
}

Vec SymmetricSpace::dominant(const Vec& H) const {
    Vec best = H;
    double best_pair = dot(H, rho0_);
    for (const auto& w : weyl_) {
        const Vec v = w.apply(H);
        const double p = dot(v, rho0_);
        if (p > best_pair + 1e-15) {
            best_pair = p;
            best = v;
        }
    }
    return best;
}

double SymmetricSpace::density(const Vec& H) const {
    double d = 1.0;
    for (const auto& r : roots_) {
        const double a = dot(r.alpha, H);
        d *= std::pow(std::sinh(a), r.m_alpha);
        if (r.m_2alpha > 0) d *= std::pow(std::sinh(2.0 * a), r.m_2alpha);
    }
    return d;
}

double SymmetricSpace::log_density(const Vec& H) const {
    double ld = 0.0;
    for (const auto& r : roots_) {
        const double a = dot(r.alpha, H);
        if (a <= 0.0) return -std::numeric_limits<double>::infinity();
        ld += r.m_alpha * log_sinh(a);
        if (r.m_2alpha > 0) ld += r.m_2alpha * log_sinh(2.0 * a);
    }
    return ld;
}

double SymmetricSpace::density_hat(const Vec& H) const {
    double d = 1.0;
    for (const auto& r : roots_) {
        const double a = dot(r.alpha, H);
        d *= std::pow(0.5 * -std::expm1(-2.0 * a), r.m_alpha);
        if (r.m_2alpha > 0) d *= std::pow(0.5 * -std::expm1(-4.0 * a), r.m_2alpha);
    }
    return d;
}

double SymmetricSpace::log_density_hat(const Vec& H) const {
    double ld = 0.0;
    for (const auto& r : roots_) {
        const double a = dot(r.alpha, H);
        if (a <= 0.0) return -std::numeric_limits<double>::infinity();
        ld += r.m_alpha * (std::log(-std::expm1(-2.0 * a)) - kLn2);
        if (r.m_2alpha > 0) ld += r.m_2alpha * (std::log(-std::expm1(-4.0 * a)) - kLn2);
    }
    return ld;
}

double SymmetricSpace::log_density_envelope(const Vec& H) const {
    double le = 2.0 * dot(rho_, H);
    for (const auto& r : roots_) {
        const double a = dot(r.alpha, H);
        if (a <= 0.0) return -std::numeric_limits<double>::infinity();
        le += r.m_alpha * std::log(a / (1.0 + a));
        if (r.m_2alpha > 0) le += r.m_2alpha * std::log(2.0 * a / (1.0 + 2.0 * a));
    }
    return le;
}

int SymmetricSpace::m1() const {
    if (rank_ != 1) throw std::logic_error("m1() is a rank-one accessor");
    return roots_[0].m_alpha;
}

int SymmetricSpace::m2() const {
    if (rank_ != 1) throw std::logic_error("m2() is a rank-one accessor");
    return roots_[0].m_2alpha;
}

double SymmetricSpace::rho_scalar() const {
    if (rank_ != 1) throw std::logic_error("rho_scalar() is a rank-one accessor");
    return dot(rho_, axis());
}

Vec SymmetricSpace::axis() const {
    if (rank_ != 1) throw std::logic_error("axis() is a rank-one accessor");
    return roots_[0].alpha * (1.0 / norm(roots_[0].alpha));
}

Vec SymmetricSpace::rho_dir(double s) const { return rho_ * (s / std::sqrt(rho_sq_)); }

}  // namespace heatlab
