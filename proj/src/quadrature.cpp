#include "heatlab/quadrature.hpp"

#include <map>
#include <mutex>

namespace heatlab {

namespace {

QuadRule make_gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadRule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[static_cast<std::size_t>(i)] = -z;
        r.x[static_cast<std::size_t>(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[static_cast<std::size_t>(i)] = w;
        r.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

void gauss_nodes(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    const QuadRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    x.resize(r.x.size());
    w.resize(r.w.size());
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        x[i] = mid + half * r.x[i];
        w[i] = half * r.w[i];
    }
}

void append_gauss_panels(double a, double b, int panels, int points_per_panel,
                         std::vector<double>& x, std::vector<double>& w) {
    if (panels < 1 || b < a) throw std::invalid_argument("append_gauss_panels: bad range");
    const QuadRule& r = gauss_legendre(points_per_panel);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width, half = 0.5 * width;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            x.push_back(mid + half * r.x[i]);
            w.push_back(half * r.w[i]);
        }
    }
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels,
                       int points_per_panel) {
    const QuadRule& r = gauss_legendre(points_per_panel);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h, half = 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
        total += half * s;
    }
    return total;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor, int initial_panels,
                          int points_per_panel, int max_doublings, const char* what) {
    if (!(b >= a)) throw std::invalid_argument(std::string(what) + ": inverted interval");
    if (a == b) return 0.0;
    int panels = initial_panels;
    double prev = integrate_fixed(f, a, b, panels, points_per_panel);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        const double cur = integrate_fixed(f, a, b, panels, points_per_panel);
        const double diff = std::abs(cur - prev);
        if (diff <= rel_tol * std::abs(cur) + abs_floor) return cur;
        prev = cur;
    }
    throw std::runtime_error(std::string(what) + ": quadrature did not converge to rel_tol=" +
                             std::to_string(rel_tol) + " on [" + std::to_string(a) + "," +
                             std::to_string(b) + "]");
}

}  // namespace heatlab
