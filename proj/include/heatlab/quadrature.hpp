/// @file quadrature.hpp
/// @brief Gauss-Legendre rules and adaptive composite integration.
///
/// All integrands in this project are smooth on the panels we feed them
/// (spectral densities, sinh products, bump profiles), so composite
/// Gauss-Legendre with panel doubling is both simple and spectrally accurate.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlab {

/// One-dimensional quadrature rule on [-1,1].
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Gauss-Legendre nodes/weights by Newton iteration on the Legendre recurrence.
/// Deterministic and accurate to ~1e-15 for n up to several hundred.
const QuadRule& gauss_legendre(int n);

/// Nodes/weights of the n-point rule mapped to [a,b].
void gauss_nodes(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

/// Appends `panels` equal Gauss panels spanning [a,b] to (x,w); nodes ascend.
void append_gauss_panels(double a, double b, int panels, int points_per_panel,
                         std::vector<double>& x, std::vector<double>& w);

/// Integrate f over [a,b] with composite Gauss panels, doubling the panel count
/// until successive estimates agree to rel_tol (or abs_floor absolutely).
/// Throws on non-convergence so callers cannot silently accept garbage.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor = 0.0, int initial_panels = 4,
                          int points_per_panel = 16, int max_doublings = 9,
                          const char* what = "integrate_adaptive");

/// Fixed composite rule: `panels` panels of an n-point Gauss rule on [a,b].
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels,
                       int points_per_panel);

}  // namespace heatlab
