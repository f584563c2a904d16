#pragma once

// Exact polynomial algebra over Q in the three variables (z, nu, b), plus
// dense univariate polynomials with Sturm-chain root counting. nu stands in
// for (1-z)^{b-1} during elimination and is only ever re-identified with it
// for integer b, where the identification is polynomial.

#include <gmpxx.h>

#include <array>
#include <map>
#include <string>
#include <vector>

#include "bch/errors.hpp"

namespace bch {

using Rat = mpq_class;

class MPoly {
  public:
    enum Var { Z = 0, NU = 1, B = 2 };
    using Key = std::array<int, 3>;  // exponents of z, nu, b

    MPoly() = default;
    static MPoly constant(const Rat& c);
    static MPoly variable(Var v);
    static MPoly monomial(const Rat& c, int ez, int enu, int eb);

    bool is_zero() const { return terms_.empty(); }
    int degree(Var v) const;  // -1 for the zero polynomial
    Rat coefficient(const Key& k) const;
    const std::map<Key, Rat>& terms() const { return terms_; }

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const Rat& c, const MPoly& p);
    bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly pow(int e) const;

    // Coefficient of v^k as a polynomial in the remaining variables.
    MPoly coeff_in(Var v, int k) const;
    MPoly derivative(Var v) const;
    MPoly substitute(Var v, const MPoly& value) const;
    MPoly substitute(Var v, const Rat& value) const;
    Rat eval(const Rat& z, const Rat& nu, const Rat& b) const;

    // Quotient of an exact division; returns false (quotient unspecified) if
    // the divisor does not divide *this.
    bool divide_exact(const MPoly& divisor, MPoly& quotient) const;

    std::string str() const;

  private:
    void prune();
    std::map<Key, Rat> terms_;  // canonical: no zero coefficients
};

// Sylvester resultant with respect to nu, computed by fraction-free Bareiss
// elimination (all divisions exact). Throws ZeroPolynomialError if either
// polynomial is identically zero; requires positive nu-degree in both.
MPoly resultant_nu(const MPoly& p, const MPoly& q);

// Dense univariate polynomial over Q, ascending coefficients.
class QPoly {
  public:
    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs);
    // Conversion from an MPoly containing only z.
    static QPoly from_mpoly_z(const MPoly& p);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat eval(const Rat& x) const;
    QPoly derivative() const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator-() const;
    // division with remainder; divisor must be nonzero
    void divmod(const QPoly& divisor, QPoly& quot, QPoly& rem) const;
    std::string str() const;

  private:
    void trim();
    std::vector<Rat> c_;
};

// Number of distinct real roots of p in the half-open interval (lo, hi],
// by a Sturm chain on the square-free part. Throws ZeroPolynomialError for
// the zero polynomial; requires lo < hi.
int sturm_count(const QPoly& p, const Rat& lo, const Rat& hi);

}  // namespace bch
