/// @file linalg.hpp
/// @brief Tiny fixed-capacity vectors and matrices for flat-space (rank <= 3) root algebra.
///
/// Ranks in this library are 1 or 2 (3 for user-supplied root data), so a
/// heap-free value type is enough and keeps quadrature inner loops allocation-free.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace heatlab {

constexpr int kMaxRank = 3;

/// Euclidean vector of dimension <= kMaxRank with value semantics.
class Vec {
  public:
    Vec() = default;
    explicit Vec(int dim) : dim_(check_dim(dim)) {}
    Vec(std::initializer_list<double> xs) {
        if (xs.size() == 0 || xs.size() > kMaxRank)
            throw std::invalid_argument("Vec: dimension must be 1.." + std::to_string(kMaxRank));
        dim_ = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) c_[i++] = x;
    }

    static Vec zero(int dim) { return Vec(dim); }

    int dim() const { return dim_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < dim_; ++i) c_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator-(Vec a) {
        for (int i = 0; i < a.dim_; ++i) a.c_[i] = -a.c_[i];
        return a;
    }

  private:
    static int check_dim(int dim) {
        if (dim < 1 || dim > kMaxRank)
            throw std::invalid_argument("Vec: dimension must be 1.." + std::to_string(kMaxRank));
        return dim;
    }
    std::array<double, kMaxRank> c_{};
    int dim_ = 1;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

/// Pairing <a, xi + i*eta> with a real; the workhorse for tube-domain arguments.
inline std::complex<double> cdot(const Vec& a, const Vec& xi, const Vec& eta) {
    return {dot(a, xi), dot(a, eta)};
}

/// Square matrix of dimension <= kMaxRank (used for Weyl group elements).
class Mat {
  public:
    Mat() = default;
    explicit Mat(int dim) : dim_(dim) {}

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    double at(int i, int j) const { return c_[static_cast<std::size_t>(i * kMaxRank + j)]; }
    double& at(int i, int j) { return c_[static_cast<std::size_t>(i * kMaxRank + j)]; }

    Vec apply(const Vec& v) const {
        Vec r(dim_);
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += at(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        Mat r(a.dim_);
        for (int i = 0; i < a.dim_; ++i)
            for (int j = 0; j < a.dim_; ++j) {
                double s = 0.0;
                for (int k = 0; k < a.dim_; ++k) s += a.at(i, k) * b.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    double det() const {
        switch (dim_) {
            case 1: return at(0, 0);
            case 2: return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
            case 3:
                return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                       at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                       at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
            default: throw std::logic_error("Mat::det: unsupported dimension");
        }
    }

    double max_abs_diff(const Mat& o) const {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs(at(i, j) - o.at(i, j)));
        return m;
    }

  private:
    std::array<double, kMaxRank * kMaxRank> c_{};
    int dim_ = 1;
};

/// Reflection through the hyperplane orthogonal to root alpha.
inline Mat reflection(const Vec& alpha) {
    const int d = alpha.dim();
    const double a2 = norm_sq(alpha);
    Mat m = Mat::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) -= 2.0 * alpha[i] * alpha[j] / a2;
    return m;
}

inline Vec reflect(const Vec& alpha, const Vec& v) {
    return v - (2.0 * dot(alpha, v) / norm_sq(alpha)) * alpha;
}

}  // namespace heatlab
