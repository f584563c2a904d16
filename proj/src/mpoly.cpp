#include "bch/mpoly.hpp"

#include <algorithm>
#include <sstream>

namespace bch {

namespace {
// mpq_class(a, b) does not reduce; GMP arithmetic and comparisons require
// canonical operands.
Rat canonical(Rat r) {
    r.canonicalize();
    return r;
}
}  // namespace

MPoly MPoly::constant(const Rat& c) {
    MPoly p;
    const Rat cc = canonical(c);
    if (cc != 0) p.terms_[{0, 0, 0}] = cc;
    return p;
}

MPoly MPoly::variable(Var v) {
    Key k{0, 0, 0};
    k[v] = 1;
    MPoly p;
    p.terms_[k] = 1;
    return p;
}

MPoly MPoly::monomial(const Rat& c, int ez, int enu, int eb) {
    MPoly p;
    const Rat cc = canonical(c);
    if (cc != 0) p.terms_[{ez, enu, eb}] = cc;
    return p;
}

void MPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

int MPoly::degree(Var v) const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k[v]);
    return d;
}

Rat MPoly::coefficient(const Key& k) const {
    const auto it = terms_.find(k);
    return it == terms_.end() ? Rat(0) : it->second;
}

MPoly MPoly::operator-() const {
    MPoly r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
    for (const auto& [k, c] : o.terms_) terms_[k] += c;
    prune();
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
    for (const auto& [k, c] : o.terms_) terms_[k] -= c;
    prune();
    return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            const MPoly::Key k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
            r.terms_[k] += ca * cb;
        }
    r.prune();
    return r;
}

MPoly operator*(const Rat& c, const MPoly& p) {
    MPoly r;
    if (c == 0) return r;
    r = p;
    for (auto& [k, v] : r.terms_) v *= c;
    return r;
}

MPoly MPoly::pow(int e) const {
    MPoly r = constant(1);
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
}

MPoly MPoly::coeff_in(Var v, int k) const {
    MPoly r;
    for (const auto& [key, c] : terms_) {
        if (key[v] != k) continue;
        Key reduced = key;
        reduced[v] = 0;
        r.terms_[reduced] += c;
    }
    r.prune();
    return r;
}

MPoly MPoly::derivative(Var v) const {
    MPoly r;
    for (const auto& [key, c] : terms_) {
        if (key[v] == 0) continue;
        Key dk = key;
        dk[v] -= 1;
        r.terms_[dk] += c * key[v];
    }
    r.prune();
    return r;
}

MPoly MPoly::substitute(Var v, const MPoly& value) const {
    const int dmax = degree(v);
    std::vector<MPoly> powers(std::max(dmax + 1, 1));
    powers[0] = constant(1);
    for (int i = 1; i <= dmax; ++i) powers[i] = powers[i - 1] * value;
    MPoly r;
    for (const auto& [key, c] : terms_) {
        Key reduced = key;
        reduced[v] = 0;
        MPoly term;
        term.terms_[reduced] = c;
        r += term * powers[key[v]];
    }
    return r;
}

MPoly MPoly::substitute(Var v, const Rat& value) const {
    return substitute(v, constant(value));
}

Rat MPoly::eval(const Rat& z, const Rat& nu, const Rat& b) const {
    const Rat zc = canonical(z), nc = canonical(nu), bc = canonical(b);
    Rat total = 0;
    for (const auto& [key, c] : terms_) {
        Rat term = c;
        for (int i = 0; i < key[0]; ++i) term *= zc;
        for (int i = 0; i < key[1]; ++i) term *= nc;
        for (int i = 0; i < key[2]; ++i) term *= bc;
        total += term;
    }
    return total;
}

bool MPoly::divide_exact(const MPoly& divisor, MPoly& quotient) const {
    if (divisor.is_zero()) throw ZeroPolynomialError("division by the zero polynomial");
    MPoly rem = *this;
    quotient = MPoly();
    const auto& lt_d = *divisor.terms_.rbegin();  // lex-leading term
    while (!rem.is_zero()) {
        const auto& lt_r = *rem.terms_.rbegin();
        Key qk;
        for (int i = 0; i < 3; ++i) {
            qk[i] = lt_r.first[i] - lt_d.first[i];
            if (qk[i] < 0) return false;
        }
        const MPoly t = monomial(lt_r.second / lt_d.second, qk[0], qk[1], qk[2]);
        quotient += t;
        rem -= t * divisor;
    }
    return true;
}

std::string MPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // print highest terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        const bool neg = c < 0;
        Rat a = neg ? Rat(-c) : c;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        const bool has_vars = k[0] || k[1] || k[2];
        if (a != 1 || !has_vars) out << a.get_str();
        bool star = (a != 1 || !has_vars);
        auto emit = [&](const char* name, int e) {
            if (e == 0) return;
            if (star) out << "*";
            out << name;
            if (e > 1) out << "^" << e;
            star = true;
        };
        emit("z", k[0]);
        emit("nu", k[1]);
        emit("b", k[2]);
    }
    return out.str();
}

MPoly resultant_nu(const MPoly& p, const MPoly& q) {
    if (p.is_zero() || q.is_zero())
        throw ZeroPolynomialError("resultant of the zero polynomial");
    const int m = p.degree(MPoly::NU);
    const int n = q.degree(MPoly::NU);
    if (m < 1 || n < 1)
        throw ZeroPolynomialError("resultant requires positive degree in nu");
    const int size = m + n;
    std::vector<std::vector<MPoly>> mat(size, std::vector<MPoly>(size));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) mat[r][r + j] = p.coeff_in(MPoly::NU, m - j);
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) mat[n + r][r + j] = q.coeff_in(MPoly::NU, n - j);

    // Bareiss fraction-free elimination; divisions are exact.
    int sign = 1;
    MPoly prev = MPoly::constant(1);
    for (int k = 0; k + 1 < size; ++k) {
        if (mat[k][k].is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < size; ++i)
                if (!mat[i][k].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return MPoly();  // singular: resultant is zero
            std::swap(mat[k], mat[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j) {
                MPoly num = mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j];
                MPoly quot;
                if (!num.divide_exact(prev, quot))
                    throw ZeroPolynomialError("Bareiss division was not exact");
                mat[i][j] = quot;
            }
            mat[i][k] = MPoly();
        }
        prev = mat[k][k];
    }
    MPoly det = mat[size - 1][size - 1];
    return sign < 0 ? -det : det;
}

QPoly::QPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    trim();
}

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly QPoly::from_mpoly_z(const MPoly& p) {
    if (p.degree(MPoly::NU) > 0 || p.degree(MPoly::B) > 0)
        throw ZeroPolynomialError("polynomial still contains nu or b");
    std::vector<Rat> c(std::max(p.degree(MPoly::Z) + 1, 0));
    for (const auto& [k, v] : p.terms()) c[k[0]] = v;
    return QPoly(std::move(c));
}

Rat QPoly::eval(const Rat& x) const {
    const Rat xc = canonical(x);
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * xc + *it;
    return acc;
}

QPoly QPoly::derivative() const {
    if (c_.size() <= 1) return QPoly();
    std::vector<Rat> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return QPoly(std::move(d));
}

QPoly QPoly::operator*(const QPoly& o) const {
    if (is_zero() || o.is_zero()) return QPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return QPoly(std::move(r));
}

QPoly QPoly::operator-() const {
    QPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

void QPoly::divmod(const QPoly& divisor, QPoly& quot, QPoly& rem) const {
    if (divisor.is_zero()) throw ZeroPolynomialError("division by zero polynomial");
    std::vector<Rat> r = c_;
    const int dn = divisor.degree();
    std::vector<Rat> q(std::max(degree() - dn + 1, 0));
    for (int i = degree(); i >= dn; --i) {
        const Rat factor = r[i] / divisor.c_[dn];
        if (factor == 0) continue;
        q[i - dn] = factor;
        for (int j = 0; j <= dn; ++j) r[i - dn + j] -= factor * divisor.c_[j];
    }
    quot = QPoly(std::move(q));
    rem = QPoly(std::move(r));
}

std::string QPoly::str() const {
    std::ostringstream out;
    if (is_zero()) return "0";
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        if (c_[i] == 0) continue;
        const bool neg = c_[i] < 0;
        Rat a = neg ? Rat(-c_[i]) : c_[i];
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        if (a != 1 || i == 0) out << a.get_str();
        if (i > 0) {
            if (a != 1) out << "*";
            out << "z";
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

namespace {

// positive-constant normalization keeps Sturm signs intact
QPoly normalize_positive(const QPoly& p) {
    if (p.is_zero()) return p;
    Rat lead = p.coeffs().back();
    if (lead < 0) lead = -lead;
    std::vector<Rat> c = p.coeffs();
    for (auto& x : c) x /= lead;
    return QPoly(std::move(c));
}

QPoly gcd_poly(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly q, r;
        a.divmod(b, q, r);
        a = b;
        b = normalize_positive(r);
    }
    return a;
}

int sign_variations(const std::vector<QPoly>& chain, const Rat& x) {
    int variations = 0;
    int prev = 0;
    for (const auto& p : chain) {
        const Rat v = p.eval(x);
        const int s = sgn(v);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

}  // namespace

int sturm_count(const QPoly& p, const Rat& lo, const Rat& hi) {
    if (p.is_zero()) throw ZeroPolynomialError("Sturm count of the zero polynomial");
    if (!(lo < hi)) throw DomainError("Sturm count requires lo < hi");
    if (p.degree() == 0) return 0;
    // square-free part
    const QPoly g = gcd_poly(p, p.derivative());
    QPoly sf = p;
    if (g.degree() > 0) {
        QPoly q, r;
        p.divmod(g, q, r);
        sf = q;  // remainder is zero by construction
    }
    std::vector<QPoly> chain;
    chain.push_back(normalize_positive(sf));
    chain.push_back(normalize_positive(sf.derivative()));
    while (!chain.back().is_zero()) {
        QPoly q, r;
        chain[chain.size() - 2].divmod(chain.back(), q, r);
        chain.push_back(normalize_positive(-r));
    }
    chain.pop_back();
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

}  // namespace bch
