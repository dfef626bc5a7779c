#ifndef GWAVE_TRIG_POLY_HPP
#define GWAVE_TRIG_POLY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace gwave {

using cplx = std::complex<double>;

/// Coefficients with modulus at or below this are trimmed from both ends.
inline constexpr double kTrimThreshold = 1e-14;

/// e^{2 pi i s}, with s reduced mod 1 first so large arguments keep their phase accuracy.
inline cplx unit_circle(double s) {
    const double frac = s - std::floor(s);
    const double angle = 2.0 * std::numbers::pi * frac;
    return {std::cos(angle), std::sin(angle)};
}

/*
 * Trigonometric polynomial sum_j coeffs[j] z^{kmin + j} on the unit circle.
 *
 * Values are kept canonical: no leading or trailing coefficient at or below
 * kTrimThreshold, and the zero polynomial is the empty sequence with kmin = 0.
 * All arithmetic acts on coefficients, so products, conjugation and the
 * substitution z -> z^N are exact up to floating-point rounding.
 */
class TrigPoly {
public:
    TrigPoly() = default;

    TrigPoly(int kmin, std::vector<cplx> coeffs) : kmin_(kmin), coeffs_(std::move(coeffs)) {
        canonicalize();
    }

    static TrigPoly constant(cplx c) { return TrigPoly(0, {c}); }
    static TrigPoly monomial(int k, cplx c = 1.0) { return TrigPoly(k, {c}); }

    int kmin() const { return kmin_; }
    /// Highest mode; equals kmin() - 1 for the zero polynomial.
    int kmax() const { return kmin_ + static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    /// Coefficient of z^k, zero outside the support.
    cplx operator[](int k) const {
        if (k < kmin_ || k > kmax()) return 0.0;
        return coeffs_[static_cast<std::size_t>(k - kmin_)];
    }

    /// Evaluation at an arbitrary nonzero complex point (Horner).
    cplx operator()(cplx z) const {
        if (coeffs_.empty()) return 0.0;
        cplx acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
        return acc * std::pow(z, kmin_);
    }

    /// Evaluation at z = e^{2 pi i s}.
    cplx at(double s) const {
        if (coeffs_.empty()) return 0.0;
        const cplx z = unit_circle(s);
        cplx acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
        const double frac = s - std::floor(s);
        return acc * unit_circle(frac * kmin_);
    }

    /// p*(z) := conj(p(z)) on the circle: coefficient of z^{-k} is conj(c_k).
    TrigPoly conj() const {
        std::vector<cplx> out(coeffs_.rbegin(), coeffs_.rend());
        for (auto& c : out) c = std::conj(c);
        return TrigPoly(-kmax(), std::move(out));
    }

    /// p(z^N).
    TrigPoly dilate(int n) const {
        if (coeffs_.empty()) return {};
        if (n == 1) return *this;
        std::vector<cplx> out((coeffs_.size() - 1) * static_cast<std::size_t>(n) + 1, 0.0);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) out[j * static_cast<std::size_t>(n)] = coeffs_[j];
        return TrigPoly(kmin_ * n, std::move(out));
    }

    /// Keeps the modes divisible by N and relabels z^{N m} -> x^m. This is the
    /// average of p over the N preimages of x under z -> z^N.
    TrigPoly decimate(int n) const {
        if (coeffs_.empty()) return {};
        const int lo = ceil_div(kmin_, n);
        const int hi = floor_div(kmax(), n);
        if (hi < lo) return {};
        std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
        for (int m = lo; m <= hi; ++m) out[static_cast<std::size_t>(m - lo)] = (*this)[m * n];
        return TrigPoly(lo, std::move(out));
    }

    /// p(-z).
    TrigPoly reflect() const {
        std::vector<cplx> out = coeffs_;
        for (std::size_t j = 0; j < out.size(); ++j)
            if ((kmin_ + static_cast<int>(j)) % 2 != 0) out[j] = -out[j];
        return TrigPoly(kmin_, std::move(out));
    }

    /// z^k p(z).
    TrigPoly shift(int k) const {
        if (coeffs_.empty()) return {};
        return TrigPoly(kmin_ + k, coeffs_);
    }

    /// Max coefficient modulus.
    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    /// L^2 norm on the circle w.r.t. normalized Lebesgue measure.
    double norm() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += std::norm(c);
        return std::sqrt(s);
    }

    TrigPoly& operator+=(const TrigPoly& o) { return *this = *this + o; }
    TrigPoly& operator-=(const TrigPoly& o) { return *this = *this - o; }
    TrigPoly& operator*=(const TrigPoly& o) { return *this = *this * o; }
    TrigPoly& operator*=(cplx s) { return *this = *this * s; }

    friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) { return combine(a, b, 1.0); }
    friend TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) { return combine(a, b, -1.0); }
    friend TrigPoly operator-(const TrigPoly& a) { return a * cplx(-1.0); }

    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<cplx> out(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return TrigPoly(a.kmin_ + b.kmin_, std::move(out));
    }

    friend TrigPoly operator*(const TrigPoly& a, cplx s) {
        std::vector<cplx> out = a.coeffs_;
        for (auto& c : out) c *= s;
        return TrigPoly(a.kmin_, std::move(out));
    }
    friend TrigPoly operator*(cplx s, const TrigPoly& a) { return a * s; }
    friend TrigPoly operator*(const TrigPoly& a, double s) { return a * cplx(s); }
    friend TrigPoly operator*(double s, const TrigPoly& a) { return a * cplx(s); }

    static int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }
    static int ceil_div(int a, int b) { return -floor_div(-a, b); }

private:
    static TrigPoly combine(const TrigPoly& a, const TrigPoly& b, double sign) {
        if (a.is_zero()) return b * sign;
        if (b.is_zero()) return a;
        const int lo = std::min(a.kmin_, b.kmin_);
        const int hi = std::max(a.kmax(), b.kmax());
        std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (std::size_t j = 0; j < a.size(); ++j) out[static_cast<std::size_t>(a.kmin_ - lo) + j] += a.coeffs_[j];
        for (std::size_t j = 0; j < b.size(); ++j)
            out[static_cast<std::size_t>(b.kmin_ - lo) + j] += sign * b.coeffs_[j];
        return TrigPoly(lo, std::move(out));
    }

    void canonicalize() {
        std::size_t first = 0;
        while (first < coeffs_.size() && std::abs(coeffs_[first]) <= kTrimThreshold) ++first;
        if (first == coeffs_.size()) {
            coeffs_.clear();
            kmin_ = 0;
            return;
        }
        std::size_t last = coeffs_.size();
        while (std::abs(coeffs_[last - 1]) <= kTrimThreshold) --last;
        if (first > 0 || last < coeffs_.size())
            coeffs_ = std::vector<cplx>(coeffs_.begin() + static_cast<std::ptrdiff_t>(first),
                                        coeffs_.begin() + static_cast<std::ptrdiff_t>(last));
        kmin_ += static_cast<int>(first);
    }

    int kmin_ = 0;
    std::vector<cplx> coeffs_;
};

/// L^2(T) pairing <a, b> = sum conj(a_k) b_k.
inline cplx l2_inner(const TrigPoly& a, const TrigPoly& b) {
    cplx s = 0.0;
    const int lo = std::max(a.kmin(), b.kmin());
    const int hi = std::min(a.kmax(), b.kmax());
    for (int k = lo; k <= hi; ++k) s += std::conj(a[k]) * b[k];
    return s;
}

/// Max coefficient distance.
inline double max_distance(const TrigPoly& a, const TrigPoly& b) { return (a - b).max_abs(); }

/// L^2 distance.
inline double l2_distance(const TrigPoly& a, const TrigPoly& b) { return (a - b).norm(); }

} // namespace gwave

#endif // GWAVE_TRIG_POLY_HPP
