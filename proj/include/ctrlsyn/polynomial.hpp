#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace ctrlsyn {

using Complex = std::complex<double>;

/// Real-coefficient polynomial stored with ascending powers:
/// coeffs()[k] multiplies s^k.  The zero polynomial is canonicalized to an
/// empty coefficient list and reports degree() == -1 (the degree sentinel);
/// otherwise the leading coefficient is nonzero.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) { trim(); }
    explicit Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) { trim(); }

    /// Monic-up-to-`leading` polynomial with the given roots.  Conjugate
    /// pairs in `roots` yield real coefficients; stray imaginary residue
    /// from the complex product is dropped.
    static Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Coefficient of s^k; zero outside the stored range.
    double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    Complex eval(Complex s) const;
    double eval(double x) const;

    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double k) const;
    friend Polynomial operator*(double k, const Polynomial& p) { return p * k; }

    bool operator==(const Polynomial& rhs) const = default;

    /// max |coeff|; 0 for the zero polynomial.
    double coeff_norm() const;

private:
    void trim();
    std::vector<double> coeffs_;
};

/// All complex roots (with multiplicity) by Aberth-Ehrlich iteration with
/// Newton polishing.  Accepts the result only when every root satisfies
/// |p(root)| <= 1e-8 * max|coeff|, otherwise throws ConvergenceFailure.
/// Requires degree >= 1.
std::vector<Complex> poly_all_roots(const Polynomial& p);

/// Positive real roots of p: roots r with |Im r| <= tol*max(1,|r|) and
/// Re r > tol, deduplicated within tol (relative) and sorted ascending.
std::vector<double> poly_real_roots_positive(const Polynomial& p, double tol = 1e-9);

}  // namespace ctrlsyn
