#include "fivecubes/cases.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace fivecubes;
using arith::Int;

namespace {

// direct re-statement of the eight rows' conditions, independent of classify()
bool matches(const cases::CaseDescriptor& d, long x) {
    const bool d5 = (x % 5 == 0);
    const bool d2 = (x % 2 == 0);
    const bool d3 = (x % 3 == 0);
    if (d5 != d.div5) return false;
    switch (d.mod6) {
    case cases::Mod6::coprime: return !d2 && !d3;
    case cases::Mod6::two_only: return d2 && !d3;
    case cases::Mod6::three_only: return !d2 && d3;
    case cases::Mod6::six_divides: return d2 && d3;
    }
    return false;
}

} // namespace

TEST(Classify, HandValues) {
    EXPECT_EQ(cases::classify(5, 1), 1);
    EXPECT_EQ(cases::classify(30, 7), 4);
    EXPECT_EQ(cases::classify(7, 2), 5);
    EXPECT_THROW(cases::classify(10, 5), std::invalid_argument); // gcd != 1
    EXPECT_THROW(cases::classify(0, 3), std::invalid_argument);
}

TEST(Classify, PartitionOverBox) {
    for (long x = -1000; x <= 1000; ++x) {
        if (x == 0) continue;
        for (long r = 1; r <= 100; ++r) {
            if (std::gcd(x, r) != 1) continue;
            int hits = 0, hit_id = 0;
            for (const auto& d : cases::case_table()) {
                if (matches(d, x)) {
                    ++hits;
                    hit_id = d.id;
                }
            }
            ASSERT_EQ(hits, 1) << "x=" << x;
            ASSERT_EQ(cases::classify(Int(x), Int(r)), hit_id) << "x=" << x << " r=" << r;
        }
    }
}

TEST(Instantiate, TableShapes) {
    auto i1 = cases::instantiate(1, 5, 1);
    EXPECT_EQ(i1.a, 1);
    EXPECT_EQ(i1.b, 390625); // 5^8
    EXPECT_EQ(i1.c, 6);

    auto i4 = cases::instantiate(4, 5, 2);
    EXPECT_EQ(i4.a, 1);
    Int b4;
    mpz_ui_pow_ui(b4.get_mpz_t(), 6, 7);
    b4 *= 390625; // 6^7 * 5^8
    EXPECT_EQ(i4.b, b4);
    EXPECT_EQ(i4.c, 4);

    auto i8 = cases::instantiate(8, 7, 1);
    Int a8;
    mpz_ui_pow_ui(a8.get_mpz_t(), 5, 6);
    EXPECT_EQ(i8.a, a8);
    Int b8;
    mpz_ui_pow_ui(b8.get_mpz_t(), 6, 11);
    EXPECT_EQ(i8.b, b8);
    EXPECT_EQ(i8.c, 1);
}

TEST(Instantiate, ResidueShortcutsMatchBignums) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const int c = 1 + int(rng() % 8);
        const unsigned p = std::vector<unsigned>{5, 7, 11, 13, 17}[rng() % 5];
        const int64_t r = 1 + int64_t(rng() % 5000);
        const uint64_t q = std::vector<uint64_t>{11, 31, 41, 71, 101, 9973}[rng() % 6];
        auto inst = cases::instantiate(c, p, r);
        EXPECT_EQ(inst.a_mod(q), mpz_fdiv_ui(inst.a.get_mpz_t(), q));
        EXPECT_EQ(inst.b_mod(q), mpz_fdiv_ui(inst.b.get_mpz_t(), q));
        EXPECT_EQ(inst.c_mod(q), mpz_fdiv_ui(inst.c.get_mpz_t(), q));
    }
}

TEST(Instantiate, CoefficientsCoprimeForNonVacuousRows) {
    for (int c = 1; c <= 8; ++c) {
        for (unsigned p : {5u, 7u, 11u}) {
            for (int64_t r = 1; r <= 60; ++r) {
                if (cases::vacuous_for(c, r)) continue;
                auto inst = cases::instantiate(c, p, r);
                Int g;
                mpz_gcd(g.get_mpz_t(), inst.a.get_mpz_t(), inst.b.get_mpz_t());
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), inst.c.get_mpz_t());
                ASSERT_EQ(g, 1) << "case " << c << " p=" << p << " r=" << r;
            }
        }
    }
}

TEST(DescentIdentity, ThueTableSolutions) {
    // w1 = 0 solutions of the two resolved Thue families
    Int r2 = 1;
    for (int i = 0; i < 8; ++i) r2 *= 3; // 3^8
    EXPECT_TRUE(cases::verify_descent_identity(2, 17, 6561, 0, 3));
    EXPECT_TRUE(cases::verify_descent_identity(3, 19, 512, 0, 2)); // r = 2^9
    EXPECT_FALSE(cases::verify_descent_identity(1, 5, 1, 1, 1));   // 1 - 5^8 != 6
}

TEST(DescentIdentity, ImpliesSignatureEquation) {
    // m * (a w2^p - b w1^(2p) - c_mult r^2) == descent2_rhs - (x^2 + 6 r^2)
    // identically in (w1, w2), where x is built from w1 by the first descent
    // equation. Checked on random integers, so a solution of both descent
    // equations is a solution of the signature equation.
    std::mt19937_64 rng(1234);
    for (int c = 1; c <= 8; ++c) {
        const auto& d = cases::descriptor(c);
        for (int trial = 0; trial < 50; ++trial) {
            const unsigned p = std::vector<unsigned>{5, 7, 11}[rng() % 3];
            const int64_t r = 1 + int64_t(rng() % 50);
            const Int w1(long(rng() % 7) - 3);
            const Int w2(long(rng() % 7) - 3);
            auto inst = cases::instantiate(c, p, r);
            Int w1p, w2p, w12p;
            mpz_pow_ui(w2p.get_mpz_t(), w2.get_mpz_t(), p);
            mpz_pow_ui(w12p.get_mpz_t(), w1.get_mpz_t(), 2 * p);
            const Int sig = inst.a * w2p - inst.b * w12p - inst.c;

            Int pref;
            mpz_ui_pow_ui(pref.get_mpz_t(), uint64_t(d.quad_multiplier) * (d.div5 ? 5 : 1), p - 1);
            mpz_pow_ui(w1p.get_mpz_t(), w1.get_mpz_t(), p);
            const Int x = pref * w1p;
            Int descent2_rhs = Int(d.quad_multiplier) * w2p;
            if (!d.div5) {
                Int f;
                mpz_ui_pow_ui(f.get_mpz_t(), 5, p - 1);
                descent2_rhs *= f;
            }
            const Int rhs = descent2_rhs - (x * x + 6 * Int(long(r)) * Int(long(r)));
            ASSERT_EQ(Int(d.quad_multiplier) * sig, rhs)
                << "case " << c << " p=" << p << " r=" << r;
        }
    }
}

TEST(Vacuous, ForcedDivisorRule) {
    EXPECT_TRUE(cases::vacuous_for(1, 5));   // 5 | x and 5 | r
    EXPECT_FALSE(cases::vacuous_for(1, 2));  // case 1 forces only 5 | x
    EXPECT_TRUE(cases::vacuous_for(2, 10));  // forces 2 and 5
    EXPECT_TRUE(cases::vacuous_for(4, 3));
    EXPECT_FALSE(cases::vacuous_for(5, 30)); // case 5 forces nothing
    EXPECT_TRUE(cases::vacuous_for(8, 9));   // forces 2 and 3
    EXPECT_FALSE(cases::vacuous_for(8, 35));
}
