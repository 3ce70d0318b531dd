#include "ctrlsyn/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "ctrlsyn/errors.hpp"

namespace ctrlsyn {

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double leading) {
    // running product of (s - r) factors, ascending coefficients
    std::vector<Complex> c{leading};
    for (const Complex& r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k) {
            c[k] = c[k - 1] - r * c[k];
        }
        c[0] *= -r;
    }
    std::vector<double> real(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        real[k] = c[k].real();
    }
    return Polynomial(std::move(real));
}

Complex Polynomial::eval(Complex s) const {
    Complex acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        acc = acc * s + coeffs_[k];
    }
    return acc;
}

double Polynomial::eval(double x) const {
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        acc = acc * x + coeffs_[k];
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = coeffs_[k] * static_cast<double>(k);
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = coeff(k) + rhs.coeff(k);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = coeff(k) - rhs.coeff(k);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) return {};
    std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double k) const {
    std::vector<double> out = coeffs_;
    for (double& c : out) c *= k;
    return Polynomial(std::move(out));
}

double Polynomial::coeff_norm() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

namespace {

// One Aberth-Ehrlich sweep over all current root estimates.  Returns the
// largest relative step taken.
double aberth_sweep(const Polynomial& p, const Polynomial& dp, std::vector<Complex>& z) {
    const std::size_t n = z.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex pv = p.eval(z[i]);
        if (pv == Complex(0.0, 0.0)) continue;
        Complex dv = dp.eval(z[i]);
        if (dv == Complex(0.0, 0.0)) {
            // sitting on a critical point; nudge off it
            z[i] += Complex(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
            worst = 1.0;
            continue;
        }
        const Complex newton = pv / dv;
        Complex repel = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            Complex d = z[i] - z[j];
            if (std::abs(d) < 1e-30) d = Complex(1e-30, 0.0);
            repel += 1.0 / d;
        }
        const Complex denom = 1.0 - newton * repel;
        const Complex step = (std::abs(denom) < 1e-30) ? newton : newton / denom;
        z[i] -= step;
        worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
    }
    return worst;
}

}  // namespace

std::vector<Complex> poly_all_roots(const Polynomial& p) {
    if (p.degree() < 1) {
        throw ConvergenceFailure("poly_all_roots: degree >= 1 required");
    }

    // Exactly-zero low-order coefficients are roots at the origin; deflate
    // them before iterating.
    std::vector<double> c = p.coeffs();
    std::size_t zeros_at_origin = 0;
    while (zeros_at_origin < c.size() - 1 && c[zeros_at_origin] == 0.0) {
        ++zeros_at_origin;
    }
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin));

    std::vector<Complex> roots(zeros_at_origin, Complex(0.0, 0.0));
    const std::size_t n = c.size() - 1;
    if (n == 0) {
        // p was c0 * s^k
        return roots;
    }

    // Scale so the iteration works near unit magnitude coefficients.
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    for (double& v : c) v /= scale;
    const Polynomial q{std::vector<double>(c)};
    const Polynomial dq = q.derivative();

    // Cauchy bound radius, estimates spread on a slightly spiralled circle.
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k] / c[n]));
    const double radius = 1.0 + bound;
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n) + 0.4;
        const double r = radius * (0.5 + 0.5 * static_cast<double>(i + 1) / static_cast<double>(n));
        z[i] = std::polar(r, theta);
    }

    constexpr int kMaxSweeps = 500;
    for (int it = 0; it < kMaxSweeps; ++it) {
        if (aberth_sweep(q, dq, z) < 1e-15) break;
    }

    // Newton polish; skipped near multiple roots where p' collapses.
    for (Complex& r : z) {
        for (int it = 0; it < 8; ++it) {
            const Complex pv = q.eval(r);
            const Complex dv = dq.eval(r);
            if (std::abs(dv) < 1e-14 * (1.0 + std::abs(pv))) break;
            const Complex step = pv / dv;
            if (std::abs(step) > 0.5 * (1.0 + std::abs(r))) break;
            r -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(r))) break;
        }
    }

    const double norm = p.coeff_norm();
    for (const Complex& r : z) {
        if (std::abs(p.eval(r)) > 1e-8 * norm) {
            throw ConvergenceFailure("poly_all_roots: residual above 1e-8 * max|coeff|");
        }
    }

    roots.insert(roots.end(), z.begin(), z.end());
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::vector<double> poly_real_roots_positive(const Polynomial& p, double tol) {
    std::vector<double> out;
    for (const Complex& r : poly_all_roots(p)) {
        if (std::abs(r.imag()) > tol * std::max(1.0, std::abs(r))) continue;
        if (r.real() <= tol) continue;
        out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    std::vector<double> dedup;
    for (double v : out) {
        if (!dedup.empty() && std::abs(v - dedup.back()) <= tol * std::max(1.0, std::abs(v))) continue;
        dedup.push_back(v);
    }
    return dedup;
}

}  // namespace ctrlsyn
