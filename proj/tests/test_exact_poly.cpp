#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bch/mpoly.hpp"
#include "bch/proof.hpp"

using namespace bch;

namespace {
const MPoly Z = MPoly::variable(MPoly::Z);
const MPoly NU = MPoly::variable(MPoly::NU);
const MPoly B = MPoly::variable(MPoly::B);
MPoly C(long n, long d = 1) { return MPoly::constant(Rat(n, d)); }

MPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(0, 5), expo(0, 3), coef(-6, 6);
    MPoly p;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i)
        p += MPoly::monomial(Rat(coef(rng)), expo(rng), expo(rng), expo(rng));
    return p;
}
}  // namespace

TEST_CASE("ring laws on random polynomials") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const MPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == MPoly());
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> num(-4, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const MPoly a = random_poly(rng), b = random_poly(rng);
        const Rat z(num(rng), 3), nu(num(rng), 5), bb(num(rng), 7);
        CHECK((a * b).eval(z, nu, bb) == a.eval(z, nu, bb) * b.eval(z, nu, bb));
        CHECK((a + b).eval(z, nu, bb) == a.eval(z, nu, bb) + b.eval(z, nu, bb));
        // substitution commutes with evaluation
        const MPoly sub = a.substitute(MPoly::NU, b);
        CHECK(sub.eval(z, Rat(0), bb) == a.eval(z, b.eval(z, Rat(0), bb), bb));
    }
}

TEST_CASE("exact division round trip") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const MPoly a = random_poly(rng);
        MPoly d = random_poly(rng);
        if (d.is_zero()) d = C(3);
        const MPoly prod = a * d;
        MPoly q;
        REQUIRE(prod.divide_exact(d, q));
        CHECK(q == a);
    }
    // non-divisible case
    MPoly q;
    CHECK(!(Z * Z + C(1)).divide_exact(Z, q));
}

TEST_CASE("nu-form derivatives are exactly consistent under the chain rule") {
    // (1-z) dR/dz - (b-1) nu dR/dnu == (1-z) * the nu-form R'
    const MPoly R = poly_R();
    const MPoly lhs_R = (C(1) - Z) * R.derivative(MPoly::Z) -
                        (B - C(1)) * NU * R.derivative(MPoly::NU);
    CHECK(lhs_R == (C(1) - Z) * poly_Rp());
    // same chain rule for P against the nu-form (1-z)P'
    const MPoly P = poly_P();
    const MPoly lhs_P = (C(1) - Z) * P.derivative(MPoly::Z) -
                        (B - C(1)) * NU * P.derivative(MPoly::NU);
    CHECK(lhs_P == poly_Pp_scaled());
}

TEST_CASE("boundary values of the nu-form polynomials") {
    // at z = 1 (so nu = 0 for b > 1): R -> 1 - b, P -> 2(b-1)^2
    const MPoly R1 = poly_R().substitute(MPoly::Z, Rat(1)).substitute(MPoly::NU, Rat(0));
    CHECK(R1 == C(1) - B);
    const MPoly P1 = poly_P().substitute(MPoly::Z, Rat(1)).substitute(MPoly::NU, Rat(0));
    CHECK(P1 == C(2) * (B - C(1)) * (B - C(1)));
}

TEST_CASE("R eliminant reproduces b(b+1)(b-1) z^2 exactly") {
    const MPoly res = resultant_nu(poly_R(), poly_Rp());
    const MPoly expected = B * (B + C(1)) * (B - C(1)) * Z * Z;
    CHECK(res == expected);
    // substitution spot checks
    CHECK(res.substitute(MPoly::B, Rat(2)) == C(6) * Z * Z);
    CHECK(res.substitute(MPoly::B, Rat(3, 2)) == C(15, 8) * Z * Z);
}

TEST_CASE("resultant of a polynomial with itself vanishes") {
    CHECK(resultant_nu(poly_R(), poly_R()).is_zero());
    CHECK(resultant_nu(poly_P(), poly_P()).is_zero());
    CHECK_THROWS_AS(resultant_nu(MPoly(), poly_R()), ZeroPolynomialError);
}

TEST_CASE("P eliminant structure: z^4 times l(z) times a cofactor") {
    const FactorReport rep = eliminant_P_report();
    CHECK(rep.z_power >= 4);
    CHECK(rep.l_divides);
    CHECK(!rep.cofactor.is_zero());
    // reassemble exactly
    MPoly rebuilt = rep.cofactor * poly_l();
    for (int i = 0; i < rep.z_power; ++i) rebuilt = rebuilt * Z;
    CHECK(rebuilt == rep.resultant);
    // cofactor at b = 2 is nonzero on sample points of (0,1)
    const MPoly cof2 = rep.cofactor.substitute(MPoly::B, Rat(2));
    for (int num = 1; num <= 3; ++num) {
        const Rat v = cof2.eval(Rat(num, 4), Rat(0), Rat(0));
        CHECK(v != 0);
    }
    // the cofactor factors as 16 b^4 (b-1)^4 (b+1)(1-z): positive on (0,1)
    const MPoly factored =
        C(16) * B.pow(4) * (B - C(1)).pow(4) * (B + C(1)) * (C(1) - Z);
    CHECK(rep.cofactor == factored);
}

TEST_CASE("sturm counting on explicit polynomials") {
    const QPoly z2({Rat(0), Rat(0), Rat(1)});  // z^2
    CHECK(sturm_count(z2, Rat(0), Rat(1)) == 0);
    // (z - 1/2)(z - 3) = z^2 - 7/2 z + 3/2
    const QPoly p({Rat(3, 2), Rat(-7, 2), Rat(1)});
    CHECK(sturm_count(p, Rat(0), Rat(1)) == 1);
    CHECK(sturm_count(p, Rat(0), Rat(4)) == 2);
    CHECK(sturm_count(p, Rat(1), Rat(2)) == 0);
    // l(z) at b = 2: z^2 - 20 z + 20, roots 10 +- 4 sqrt(5) outside (0,1)
    const QPoly l2 = QPoly::from_mpoly_z(poly_l().substitute(MPoly::B, Rat(2)));
    CHECK(sturm_count(l2, Rat(0), Rat(1)) == 0);
    CHECK(sturm_count(l2, Rat(0), Rat(20)) == 2);
    // and l has no roots on (0,1) for every tested rational b
    for (const Rat& b : {Rat(3, 2), Rat(2), Rat(5, 2), Rat(3), Rat(4), Rat(10)}) {
        const QPoly lb = QPoly::from_mpoly_z(poly_l().substitute(MPoly::B, b));
        CHECK(sturm_count(lb, Rat(0), Rat(1)) == 0);
    }
    // endpoint conventions: root at hi counted, root at lo not
    const QPoly lin({Rat(-1), Rat(1)});  // z - 1
    CHECK(sturm_count(lin, Rat(0), Rat(1)) == 1);
    CHECK(sturm_count(lin, Rat(1), Rat(2)) == 0);
    // repeated roots counted once
    const QPoly sq = lin * lin;
    CHECK(sturm_count(sq, Rat(0), Rat(2)) == 1);
    CHECK_THROWS_AS(sturm_count(QPoly(), Rat(0), Rat(1)), ZeroPolynomialError);
}

TEST_CASE("certificates for the R and P pairs") {
    for (const Rat& b : {Rat(3), Rat(2), Rat(3, 2), Rat(5, 2), Rat(4), Rat(10)}) {
        const CertificateReport r = certify_no_common_roots(EliminantPair::R_pair, b);
        CHECK(r.pass);
        CHECK(r.roots_in_01 == 0);
        const CertificateReport p = certify_no_common_roots(EliminantPair::P_pair, b);
        CHECK(p.pass);
        CHECK(p.roots_in_01 == 0);
    }
    // frozen eliminant values: b(b+1)(b-1) z^2
    const CertificateReport r3 = certify_no_common_roots(EliminantPair::R_pair, Rat(3));
    REQUIRE(r3.eliminant_coeffs.size() == 3);
    CHECK(r3.eliminant_coeffs[2] == Rat(24));
    const CertificateReport r32 = certify_no_common_roots(EliminantPair::R_pair, Rat(3, 2));
    CHECK(r32.eliminant_coeffs[2] == Rat(15, 8));
    CHECK_THROWS_AS(certify_no_common_roots(EliminantPair::R_pair, Rat(1)), DomainError);
}

TEST_CASE("identity expansions for integer b") {
    const IdentityReport rep = verify_identity_expansions({2, 3, 4, 5});
    CHECK(rep.pass);
    for (const auto& row : rep.rows) {
        CHECK(row.h1_ok);
        CHECK(row.h2_ok);
        CHECK(row.taylor_ok);
    }
}

TEST_CASE("special cases: R at b=3 and P at b=2") {
    // (H2) combination at b = 3 is 2z^3(z-2) = 2z^4 - 4z^3
    const MPoly r3 = poly_R().substitute(MPoly::B, Rat(3)).substitute(MPoly::NU, nu_poly_int(3));
    CHECK(r3 == C(2) * Z.pow(4) - C(4) * Z.pow(3));
    // value at z = 1 equals 1 - b = -2
    CHECK(r3.eval(Rat(1), Rat(0), Rat(0)) == Rat(-2));
    // (H1) combination at b = 2 is 2z^4
    const MPoly p2 = poly_P().substitute(MPoly::B, Rat(2)).substitute(MPoly::NU, nu_poly_int(2));
    CHECK(p2 == C(2) * Z.pow(4));
    // b = 2 (H2) combination at z = 1 -> 1 - b = -1
    const MPoly r2 = poly_R().substitute(MPoly::B, Rat(2)).substitute(MPoly::NU, nu_poly_int(2));
    CHECK(r2.eval(Rat(1), Rat(0), Rat(0)) == Rat(-1));
}

TEST_CASE("negative control: corrupted R fails with a difference polynomial") {
    const IdentityReport rep = verify_identity_expansions({2, 3}, /*corrupt_R=*/true);
    CHECK(!rep.pass);
    for (const auto& row : rep.rows) {
        CHECK(!row.h2_ok);
        CHECK(!row.h2_diff.empty());
        CHECK(row.h1_ok);  // P untouched
    }
}

TEST_CASE("f' = (b+1) A / 2 as exact polynomials") {
    for (long b : {2L, 3L, 5L, 7L}) {
        const MPoly lhs = C(2) * f_poly_int(b).derivative(MPoly::Z);
        const MPoly rhs = C(b + 1) * A_poly_int(b);
        CHECK(lhs == rhs);
    }
}
