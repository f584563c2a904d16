#pragma once

// Exact proof objects: the nu-form polynomials R, R', P, (1-z)P' in (z, nu, b),
// their eliminants, root-count certificates for fixed rational b, and the
// exact identity between the nu-form polynomials and the kernel combinations
// for integer b (where nu = (1-z)^{b-1} is itself a polynomial).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bch/mpoly.hpp"

namespace bch {

MPoly poly_R();          // nu((b-1)z^2 + (3-b)z - 2) - (b+1)z + 2
MPoly poly_Rp();         // (b+1) nu ((b-1)z + 1) - (b+1)
MPoly poly_P();          // quadratic in nu
MPoly poly_Pp_scaled();  // (1-z) P'(z), quadratic in nu
MPoly poly_l();          // (b-1)^3 z^2 + (-12b+4) z + (12b-4)

// (1-z)^{b-1} expanded as a z-polynomial; integer b >= 2.
MPoly nu_poly_int(long b);
// Exact closed forms for integer b >= 2, as z-polynomials.
MPoly A_poly_int(long b);
MPoly B_poly_int(long b);
MPoly f_poly_int(long b);

struct FactorReport {
    MPoly resultant;   // Res_nu(P, (1-z)P')
    int z_power = 0;   // maximal z power dividing it
    MPoly quotient;    // resultant / z^z_power
    bool l_divides = false;
    MPoly cofactor;    // quotient / l(z) when l_divides
};

// Exact eliminant of the P pair with the z-power and l(z) factors split off.
FactorReport eliminant_P_report();

enum class EliminantPair { R_pair, P_pair };

struct CertificateReport {
    std::string pair;
    Rat b;
    std::vector<Rat> eliminant_coeffs;  // ascending powers of z
    int roots_in_01 = 0;                // distinct real roots in the open (0,1)
    bool pass = false;
};

// Substitutes the rational b into the exact eliminant of the chosen pair and
// certifies through a Sturm chain that it has no roots on (0,1).
CertificateReport certify_no_common_roots(EliminantPair which, const Rat& b);

struct IdentityRow {
    long b = 0;
    bool h1_ok = false;       // (H1) combination == nu-form P after substitution
    bool h2_ok = false;       // (H2) combination == nu-form R after substitution
    bool taylor_ok = false;   // leading Taylor coefficients match the closed forms
    std::string h1_diff;      // difference polynomial when a check fails
    std::string h2_diff;
};

struct IdentityReport {
    std::vector<IdentityRow> rows;
    bool pass = false;
};

// For each integer b, expands the (H1)/(H2) combinations from the exact closed
// forms of A, B, f (with polynomial derivatives) and checks exact equality
// with poly_P / poly_R under nu := (1-z)^{b-1}. corrupt_R perturbs one
// coefficient of the nu-form R -- the negative-control hook.
IdentityReport verify_identity_expansions(const std::vector<long>& bs = {2, 3, 4, 5},
                                          bool corrupt_R = false);

nlohmann::json to_json(const CertificateReport& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const FactorReport& r);

}  // namespace bch
