#include "fivecubes/localsolv.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace fivecubes;
using arith::Int;
using localsolv::Local;

namespace {

Int pow_int(const Int& b, unsigned e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

bool solves(const Int& A, const Int& B, const Int& C, unsigned p, const Int& w2, const Int& w1) {
    return A * pow_int(w2, p) - B * pow_int(w1, 2 * p) == C;
}

// exhaustive residue enumeration mod q^e, the independent oracle
bool has_roots_mod(const Int& A, const Int& B, const Int& C, unsigned p, uint64_t q, unsigned e) {
    Int mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), q, e);
    const uint64_t m = mpz_get_ui(mod.get_mpz_t());
    for (uint64_t rho = 0; rho < m; ++rho)
        for (uint64_t sigma = 0; sigma < m; ++sigma) {
            Int f = A * pow_int(Int(static_cast<unsigned long>(rho)), p) -
                    B * pow_int(Int(static_cast<unsigned long>(sigma)), 2 * p) - C;
            if (mpz_divisible_p(f.get_mpz_t(), mod.get_mpz_t())) return true;
        }
    return false;
}

} // namespace

TEST(Reduce, AlreadyCoprimeIsIdentity) {
    auto red = localsolv::reduce(cases::instantiate(5, 5, 1)); // (5^4, 1, 6)
    EXPECT_EQ(red.A, 625);
    EXPECT_EQ(red.B, 1);
    EXPECT_EQ(red.C, 6);
    EXPECT_TRUE(red.trace.empty());
    EXPECT_FALSE(red.coprime_obstruction);
    EXPECT_EQ(red.w1_divisor, 1);
    EXPECT_EQ(red.w2_divisor, 1);
}

TEST(Reduce, Case1R5AbsorbsSharedFive) {
    // (1, 5^8, 150): h = 5 absorbed into w2, then a common 5 stripped,
    // leaving (125, 5^6, 6) with an A-B obstruction at 5
    auto red = localsolv::reduce(cases::instantiate(1, 5, 5));
    ASSERT_FALSE(red.trace.empty());
    EXPECT_EQ(red.trace[0].kind, localsolv::ReductionStep::Kind::absorb_w2);
    EXPECT_EQ(red.trace[0].factor, 5);
    EXPECT_EQ(red.A, 125);
    EXPECT_EQ(red.B, 15625);
    EXPECT_EQ(red.C, 6);
    ASSERT_TRUE(red.coprime_obstruction);
    EXPECT_EQ(*red.coprime_obstruction, 5);
}

TEST(Reduce, PairwiseCoprimeUnlessObstructed) {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
        Int a(long(1 + rng() % 400)), b(long(1 + rng() % 400)), c(long(1 + rng() % 400));
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g != 1) continue;
        auto red = localsolv::reduce_raw(a, b, c, 5);
        Int ac, bc, ab;
        mpz_gcd(ac.get_mpz_t(), red.A.get_mpz_t(), red.C.get_mpz_t());
        mpz_gcd(bc.get_mpz_t(), red.B.get_mpz_t(), red.C.get_mpz_t());
        mpz_gcd(ab.get_mpz_t(), red.A.get_mpz_t(), red.B.get_mpz_t());
        EXPECT_EQ(ac, 1);
        EXPECT_EQ(bc, 1);
        if (!red.coprime_obstruction) {
            EXPECT_EQ(ab, 1);
        } else {
            EXPECT_EQ(ab % *red.coprime_obstruction, 0);
            EXPECT_NE(red.C % *red.coprime_obstruction, 0);
        }
    }
}

TEST(Reduce, PreservesSolutionSets) {
    // (w1, w2) solves the original iff (w1 / w1_divisor, w2 / w2_divisor)
    // solves the reduced form, on a +-20 box
    std::mt19937_64 rng(1717);
    int checked = 0;
    for (int trial = 0; trial < 500 && checked < 100; ++trial) {
        const unsigned p = 5;
        Int a(long(1 + rng() % 40)), b(long(1 + rng() % 40)), c(long(1 + rng() % 40));
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g != 1) continue;
        ++checked;
        auto red = localsolv::reduce_raw(a, b, c, p);
        for (long w1 = -20; w1 <= 20; ++w1) {
            for (long w2 = -20; w2 <= 20; ++w2) {
                const bool orig = solves(a, b, c, p, Int(w2), Int(w1));
                bool mapped = false;
                if (Int(w1) % red.w1_divisor == 0 && Int(w2) % red.w2_divisor == 0)
                    mapped = solves(red.A, red.B, red.C, p, Int(w2) / red.w2_divisor,
                                    Int(w1) / red.w1_divisor);
                if (orig) {
                    ASSERT_EQ(Int(w1) % red.w1_divisor, 0);
                    ASSERT_EQ(Int(w2) % red.w2_divisor, 0);
                }
                ASSERT_EQ(orig, mapped)
                    << "a=" << a << " b=" << b << " c=" << c << " w1=" << w1 << " w2=" << w2;
            }
        }
    }
    ASSERT_EQ(checked, 100);
}

TEST(QrTest, HandValues) {
    localsolv::ReducedEquation r1;
    r1.A = 1;
    r1.B = 7;
    r1.C = 13;
    r1.p = 5;
    EXPECT_TRUE(localsolv::qr_necessary_test(r1).pass); // no odd prime divides A

    localsolv::ReducedEquation r2;
    r2.A = 625;
    r2.B = 1;
    r2.C = 6;
    r2.p = 5;
    EXPECT_TRUE(localsolv::qr_necessary_test(r2).pass); // -6 = 4 = 2^2 mod 5

    localsolv::ReducedEquation r3;
    r3.A = 7;
    r3.B = 1;
    r3.C = 1;
    r3.p = 5;
    const auto v = localsolv::qr_necessary_test(r3);
    EXPECT_FALSE(v.pass); // -1 is a non-residue mod 7
    EXPECT_EQ(v.witness_q, 7);
}

TEST(LocalSolubility, InsolubleToyInstance) {
    // 7 rho^5 - sigma^10 = 1 mod 7 needs sigma^10 = -1, impossible
    localsolv::ReducedEquation red;
    red.A = 7;
    red.B = 1;
    red.C = 1;
    red.p = 5;
    EXPECT_EQ(localsolv::local_solubility(red, 7), Local::insoluble);
    const auto witness = localsolv::run_local_battery(red);
    ASSERT_TRUE(witness);
    EXPECT_EQ(*witness, 7);
}

TEST(LocalSolubility, KnownSolutionInstancesAreSoluble) {
    auto red = localsolv::reduce(cases::instantiate(2, 17, 6561)); // has (w2, w1) = (3, 0)
    for (Int q : {2, 3, 5, 7, 11, 13, 17, 19}) {
        EXPECT_NE(localsolv::local_solubility(red, q), Local::insoluble) << "q=" << q;
    }
    EXPECT_FALSE(localsolv::run_local_battery(red));
}

TEST(LocalSolubility, AgreesWithEnumerationOnGenericPrimes) {
    // for q not dividing 2pABC, solubility is equivalent to the existence
    // of roots mod q^3 (all roots there are smooth)
    std::mt19937_64 rng(5150);
    int compared = 0;
    for (int trial = 0; trial < 400 && compared < 60; ++trial) {
        const unsigned p = (rng() % 2) ? 5 : 7;
        const uint64_t q = (rng() % 2) ? 3 : 7;
        localsolv::ReducedEquation red;
        red.A = Int(long(1 + rng() % 50));
        red.B = Int(long(1 + rng() % 50));
        red.C = Int(long(1 + rng() % 50));
        red.p = p;
        if (mpz_divisible_ui_p(red.A.get_mpz_t(), q) || mpz_divisible_ui_p(red.B.get_mpz_t(), q) ||
            mpz_divisible_ui_p(red.C.get_mpz_t(), q) || q == p)
            continue;
        ++compared;
        const auto verdict = localsolv::local_solubility(red, Int(static_cast<unsigned long>(q)));
        ASSERT_NE(verdict, Local::budget_exceeded);
        ASSERT_EQ(verdict == Local::soluble, has_roots_mod(red.A, red.B, red.C, p, q, 1))
            << red.A << " " << red.B << " " << red.C << " p=" << p << " q=" << q;
        if (verdict == Local::soluble)
            ASSERT_TRUE(has_roots_mod(red.A, red.B, red.C, p, q, 3));
    }
    ASSERT_EQ(compared, 60);
}

TEST(LocalSolubility, StructuredLargePrimeAgreesWithUnitEnumeration) {
    // q = 71 exercises the structured (non-tree) decider. For q coprime to
    // 2pAB and v_q(C) < p, q-adic solubility is equivalent to an F_q point:
    // any point when C is a unit, a point with both coordinates nonzero
    // when q | C (zero coordinates then force 0 = C mod q^p, impossible).
    std::mt19937_64 rng(31337);
    int compared = 0;
    for (int trial = 0; trial < 200 && compared < 60; ++trial) {
        const unsigned p = 5;
        const uint64_t q = 71;
        localsolv::ReducedEquation red;
        red.A = Int(long(1 + rng() % 30));
        red.B = Int(long(1 + rng() % 30));
        const unsigned w = unsigned(rng() % 3); // v_q(C) in {0, 1, 2}
        Int c(long(1 + rng() % 30));
        for (unsigned i = 0; i < w; ++i) c *= int64_t(q);
        red.C = c;
        red.p = p;
        if (mpz_divisible_ui_p(red.A.get_mpz_t(), q) || mpz_divisible_ui_p(red.B.get_mpz_t(), q))
            continue;
        ++compared;
        const auto verdict = localsolv::local_solubility(red, Int(static_cast<unsigned long>(q)));
        ASSERT_NE(verdict, Local::budget_exceeded);
        const uint64_t a = mpz_fdiv_ui(red.A.get_mpz_t(), q);
        const uint64_t b = mpz_fdiv_ui(red.B.get_mpz_t(), q);
        const uint64_t cc = mpz_fdiv_ui(red.C.get_mpz_t(), q);
        bool ref = false;
        for (uint64_t rho = 0; rho < q && !ref; ++rho)
            for (uint64_t sigma = 0; sigma < q; ++sigma) {
                if (w > 0 && (rho == 0 || sigma == 0)) continue;
                const uint64_t lhs = arith::mul_mod(a, arith::mod_pow(rho, p, q), q);
                const uint64_t rhs =
                    arith::add_mod(arith::mul_mod(b, arith::mod_pow(sigma, 2 * p, q), q), cc, q);
                if (lhs == rhs) {
                    ref = true;
                    break;
                }
            }
        ASSERT_EQ(verdict == Local::soluble, ref)
            << red.A << " " << red.B << " " << red.C << " w=" << w;
    }
    ASSERT_EQ(compared, 60);
}

TEST(Battery, ObstructionShortCircuits) {
    auto red = localsolv::reduce(cases::instantiate(1, 5, 5));
    const auto witness = localsolv::run_local_battery(red);
    ASSERT_TRUE(witness);
    EXPECT_EQ(*witness, 5);
}

TEST(Battery, NeverEliminatesInstancesWithRealSolutions) {
    struct KnownSolution {
        int case_id;
        unsigned p;
        int64_t r;
    };
    const KnownSolution known[] = {
        {2, 17, 6561}, {2, 19, 19683}, {3, 17, 256}, {3, 19, 512}, {3, 23, 2048},
    };
    for (const auto& ks : known) {
        auto red = localsolv::reduce(cases::instantiate(ks.case_id, ks.p, ks.r));
        EXPECT_FALSE(localsolv::run_local_battery(red)) << "case " << ks.case_id << " p=" << ks.p;
    }
}
