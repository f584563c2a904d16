#include "bch/proof.hpp"

namespace bch {

namespace {
const MPoly Z = MPoly::variable(MPoly::Z);
const MPoly NU = MPoly::variable(MPoly::NU);
const MPoly B = MPoly::variable(MPoly::B);
MPoly C(long num, long den = 1) { return MPoly::constant(Rat(num, den)); }
}  // namespace

MPoly poly_R() {
    return NU * ((B - C(1)) * Z * Z + (C(3) - B) * Z - C(2)) - (B + C(1)) * Z + C(2);
}

MPoly poly_Rp() {
    return (B + C(1)) * NU * ((B - C(1)) * Z + C(1)) - (B + C(1));
}

MPoly poly_P() {
    const MPoly bm1 = B - C(1);
    const MPoly c2 =
        C(2) * bm1 * bm1 * Z * Z - C(2) * (B * B - C(5) * B + C(2)) * Z - C(6) * B + C(2);
    const MPoly c1 = C(2) * B * bm1 * bm1 * Z * Z - C(4) * (C(3) * B - C(1)) * Z +
                     C(12) * B - C(4);
    const MPoly c0 = C(2) * B * (B + C(1)) * Z - C(6) * B + C(2);
    return c2 * NU * NU + c1 * NU + c0;
}

MPoly poly_Pp_scaled() {
    const MPoly bm1 = B - C(1);
    const MPoly c2 = C(-4) * B * bm1 * bm1 * Z * Z +
                     C(2) * B * (C(2) * B * B - C(9) * B + C(5)) * Z +
                     C(10) * B * B - C(6) * B;
    const MPoly c1 = C(-2) * B * (B + C(1)) * bm1 * bm1 * Z * Z +
                     C(4) * B * B * (B + C(1)) * Z - C(12) * B * B + C(4) * B;
    const MPoly c0 = C(-2) * B * (B + C(1)) * Z + C(2) * B * (B + C(1));
    return c2 * NU * NU + c1 * NU + c0;
}

MPoly poly_l() {
    const MPoly bm1 = B - C(1);
    return bm1 * bm1 * bm1 * Z * Z + (C(-12) * B + C(4)) * Z + C(12) * B - C(4);
}

MPoly nu_poly_int(long b) {
    if (b < 2) throw DomainError("nu_poly_int requires integer b >= 2");
    return (C(1) - Z).pow(static_cast<int>(b - 1));
}

MPoly A_poly_int(long b) {
    const MPoly nu = nu_poly_int(b);
    return C(2) * (C(1) + C(b - 1) * Z) * nu - C(2);
}

MPoly B_poly_int(long b) {
    return A_poly_int(b) + C(b * (b - 1)) * Z * Z * nu_poly_int(b);
}

MPoly f_poly_int(long b) {
    const MPoly w = (C(1) - Z) * nu_poly_int(b);  // (1-z)^b
    return C(2) - C(2) * w - C(b + 1) * Z - C(b - 1) * Z * w;
}

FactorReport eliminant_P_report() {
    FactorReport rep;
    rep.resultant = resultant_nu(poly_P(), poly_Pp_scaled());
    MPoly rest = rep.resultant;
    MPoly quot;
    while (rest.divide_exact(Z, quot)) {
        rest = quot;
        ++rep.z_power;
    }
    rep.quotient = rest;
    rep.l_divides = rest.divide_exact(poly_l(), quot);
    if (rep.l_divides) rep.cofactor = quot;
    return rep;
}

CertificateReport certify_no_common_roots(EliminantPair which, const Rat& b) {
    if (!(b > 1)) throw DomainError("certificate requires rational b > 1");
    CertificateReport rep;
    MPoly elim;
    if (which == EliminantPair::R_pair) {
        rep.pair = "R";
        elim = resultant_nu(poly_R(), poly_Rp());
    } else {
        rep.pair = "P";
        elim = resultant_nu(poly_P(), poly_Pp_scaled());
    }
    rep.b = b;
    const QPoly q = QPoly::from_mpoly_z(elim.substitute(MPoly::B, b));
    if (q.is_zero())
        throw ZeroPolynomialError("eliminant vanished identically: identity failure");
    rep.eliminant_coeffs = q.coeffs();
    // roots in the open interval: count over (0,1] and drop a root at z = 1
    int count = sturm_count(q, Rat(0), Rat(1));
    if (q.eval(Rat(1)) == 0) --count;
    rep.roots_in_01 = count;
    rep.pass = (count == 0);
    return rep;
}

IdentityReport verify_identity_expansions(const std::vector<long>& bs, bool corrupt_R) {
    IdentityReport rep;
    rep.pass = true;
    MPoly nu_form_R = poly_R();
    if (corrupt_R) nu_form_R += Z * NU;  // negative-control defect
    const MPoly nu_form_P = poly_P();
    const Rat half(1, 2);
    for (long b : bs) {
        IdentityRow row;
        row.b = b;
        const Rat rb(b);
        const MPoly nu = nu_poly_int(b);
        const MPoly A = A_poly_int(b);
        const MPoly Bp_ = B_poly_int(b);
        const MPoly f = f_poly_int(b);
        const MPoly Ap = A.derivative(MPoly::Z);
        const MPoly Bprime = Bp_.derivative(MPoly::Z);
        const MPoly fp = f.derivative(MPoly::Z);
        const MPoly one_m_z = C(1) - Z;

        const MPoly h2 = half * (Z * one_m_z * Bprime) +
                         MPoly::constant(Rat(b - 1, 2)) * Z * Bp_ - one_m_z * Bp_;
        const MPoly h1 =
            C(2) * one_m_z * Ap * f + C(b - 1) * A * f - one_m_z * A * fp;

        const MPoly r_sub = nu_form_R.substitute(MPoly::B, rb).substitute(MPoly::NU, nu);
        const MPoly p_sub = nu_form_P.substitute(MPoly::B, rb).substitute(MPoly::NU, nu);

        row.h2_ok = (h2 == r_sub);
        row.h1_ok = (h1 == p_sub);
        if (!row.h2_ok) row.h2_diff = (h2 - r_sub).str();
        if (!row.h1_ok) row.h1_diff = (h1 - p_sub).str();

        // leading Taylor coefficients: R at z^3, P at z^4
        const Rat r3_expect = Rat(b) * Rat(1 - b) * Rat(1 + b) / 6;
        const Rat p4_expect = Rat(b) * Rat(b) * Rat(b + 1) * Rat(b - 1) * Rat(b - 1) / 6;
        row.taylor_ok = (r_sub.coefficient({3, 0, 0}) == r3_expect) &&
                        (r_sub.coefficient({0, 0, 0}) == 0) &&
                        (r_sub.coefficient({1, 0, 0}) == 0) &&
                        (r_sub.coefficient({2, 0, 0}) == 0) &&
                        (p_sub.coefficient({4, 0, 0}) == p4_expect) &&
                        (p_sub.coefficient({0, 0, 0}) == 0) &&
                        (p_sub.coefficient({1, 0, 0}) == 0) &&
                        (p_sub.coefficient({2, 0, 0}) == 0) &&
                        (p_sub.coefficient({3, 0, 0}) == 0);
        if (!(row.h1_ok && row.h2_ok && row.taylor_ok)) rep.pass = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

nlohmann::json to_json(const CertificateReport& r) {
    nlohmann::json j;
    j["pair"] = r.pair;
    j["b"] = r.b.get_str();
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : r.eliminant_coeffs) coeffs.push_back(c.get_str());
    j["eliminant_coeffs_ascending_z"] = coeffs;
    j["roots_in_open_01"] = r.roots_in_01;
    j["verdict"] = r.pass ? "PASS" : "FAIL";
    return j;
}

nlohmann::json to_json(const IdentityReport& r) {
    nlohmann::json j;
    j["verdict"] = r.pass ? "PASS" : "FAIL";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json jr;
        jr["b"] = row.b;
        jr["h1_identity"] = row.h1_ok ? "PASS" : "FAIL";
        jr["h2_identity"] = row.h2_ok ? "PASS" : "FAIL";
        jr["taylor_coefficients"] = row.taylor_ok ? "PASS" : "FAIL";
        if (!row.h1_diff.empty()) jr["h1_difference"] = row.h1_diff;
        if (!row.h2_diff.empty()) jr["h2_difference"] = row.h2_diff;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

nlohmann::json to_json(const FactorReport& r) {
    nlohmann::json j;
    j["resultant"] = r.resultant.str();
    j["z_power"] = r.z_power;
    j["quotient"] = r.quotient.str();
    j["l_divides_quotient"] = r.l_divides;
    if (r.l_divides) j["cofactor"] = r.cofactor.str();
    return j;
}

}  // namespace bch
