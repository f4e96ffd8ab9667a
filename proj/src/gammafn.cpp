#include "heatlab/gammafn.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace heatlab {

namespace {

// Lanczos coefficients for g = 7, 9 terms; relative accuracy ~1e-15 on Re z >= 1/2.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

std::complex<double> log_gamma_core(std::complex<double> z) {
    // Requires Re z >= 1/2.
    std::complex<double> x = kLanczos[0];
    for (int k = 1; k < 9; ++k) x += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    const std::complex<double> t = z + 6.5;
    return 0.5 * std::log(2.0 * std::numbers::pi_v<double>) + (z - 0.5) * std::log(t) - t +
           std::log(x);
}

}  // namespace

double gamma_pole_distance(std::complex<double> z) {
    const double re = z.real();
    if (re > 0.5) return std::abs(z - std::complex<double>(1.0, 0.0)) + 1.0;  // never close
    const double k = std::min(0.0, std::round(re));
    return std::hypot(re - k, z.imag());
}

bool near_gamma_pole(std::complex<double> z, double tol) {
    return gamma_pole_distance(z) < tol;
}

std::complex<double> log_gamma(std::complex<double> z) {
    if (near_gamma_pole(z)) {
        std::ostringstream os;
        os << "log_gamma: argument (" << z.real() << ", " << z.imag() << ") is within " << kPoleTol
           << " of a pole of Gamma";
        throw std::domain_error(os.str());
    }
    if (z.real() >= 0.5) return log_gamma_core(z);
    // Shift right past Re = 1/2 and divide the shift factors back out.
    const int m = static_cast<int>(std::ceil(0.5 - z.real()));
    std::complex<double> shift_log = 0.0;
    for (int j = 0; j < m; ++j) shift_log += std::log(z + static_cast<double>(j));
    return log_gamma_core(z + static_cast<double>(m)) - shift_log;
}

std::complex<double> gamma_ratio(std::complex<double> a, std::complex<double> b) {
    return std::exp(log_gamma(a) - log_gamma(b));
}

}  // namespace heatlab
