#pragma once

// Descent of 5x(x^2 + 6r^2) = y^p into eight cases by the divisibility of
// x by 2, 3 and 5. Writing m = gcd(x, 6) and d5 = [5 | x], each case forces
//
//   x           = (m * 5^d5)^(p-1) * w1^p
//   x^2 + 6r^2  = m * 5^((1-d5)(p-1)) * w2^p
//
// and substituting the first into the second yields the signature equation
//
//   a * w2^p - b * w1^(2p) = c,   a = 5^((1-d5)(p-1)),
//                                 b = m^(2p-3) * 5^(2*d5*(p-1)),
//                                 c = (6/m) * r^2.
//
// The y = 5w substitution that produces the 5^(p-1) factor never needs
// materializing; only w1, w2 appear downstream.

#include "fivecubes/arith.hpp"

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace fivecubes::cases {

using arith::Int;

enum class Mod6 { coprime, two_only, three_only, six_divides };

struct CaseDescriptor {
    int id;              // 1..8
    bool div5;           // whether 5 | x
    Mod6 mod6;
    int quad_multiplier; // m = gcd(x, x^2 + 6r^2) in {1, 2, 3, 6}

    int c_multiplier() const { return 6 / quad_multiplier; }

    // exponents of 2, 3, 5 in the x-prefactor (m * 5^d5)^(p-1)
    int e2() const { return quad_multiplier % 2 == 0 ? 1 : 0; }
    int e3() const { return quad_multiplier % 3 == 0 ? 1 : 0; }
    int e5() const { return div5 ? 1 : 0; }
};

inline const std::array<CaseDescriptor, 8>& case_table() {
    static const std::array<CaseDescriptor, 8> table = {{
        {1, true, Mod6::coprime, 1},
        {2, true, Mod6::two_only, 2},
        {3, true, Mod6::three_only, 3},
        {4, true, Mod6::six_divides, 6},
        {5, false, Mod6::coprime, 1},
        {6, false, Mod6::two_only, 2},
        {7, false, Mod6::three_only, 3},
        {8, false, Mod6::six_divides, 6},
    }};
    return table;
}

inline const CaseDescriptor& descriptor(int case_id) {
    if (case_id < 1 || case_id > 8)
        throw std::invalid_argument("descriptor: case_id must be in 1..8");
    return case_table()[size_t(case_id - 1)];
}

// The unique case whose divisibility conditions x satisfies.
inline int classify(const Int& x, const Int& r) {
    if (x == 0) throw std::invalid_argument("classify: x must be nonzero");
    if (r < 1) throw std::invalid_argument("classify: r must be positive");
    Int g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), r.get_mpz_t());
    if (g != 1) throw std::invalid_argument("classify: gcd(x, r) must be 1");
    const bool d5 = mpz_divisible_ui_p(x.get_mpz_t(), 5);
    const bool d2 = mpz_divisible_ui_p(x.get_mpz_t(), 2);
    const bool d3 = mpz_divisible_ui_p(x.get_mpz_t(), 3);
    int row;
    if (d2 && d3) row = 4;
    else if (d2) row = 2;
    else if (d3) row = 3;
    else row = 1;
    return d5 ? row : row + 4;
}

// One concrete a*w2^p - b*w1^(2p) = c with c = c_multiplier * r^2.
struct EquationInstance {
    int case_id = 0;
    unsigned p = 0;
    int64_t r = 0;
    Int a, b, c;

    // Residues straight from the case shape; no bignum reduction. Lets the
    // sieve handle coefficients like 5^(2p-2) at any p.
    uint64_t a_mod(uint64_t q) const {
        const auto& d = descriptor(case_id);
        return arith::mod_pow(5, uint64_t(d.e5() ? 0 : 1) * (p - 1), q);
    }
    uint64_t b_mod(uint64_t q) const {
        const auto& d = descriptor(case_id);
        uint64_t v = arith::mod_pow(uint64_t(d.quad_multiplier) % q, 2 * uint64_t(p) - 3, q);
        if (d.e5()) v = arith::mul_mod(v, arith::mod_pow(5, 2 * (uint64_t(p) - 1), q), q);
        return v;
    }
    uint64_t c_mod(uint64_t q) const {
        const auto& d = descriptor(case_id);
        uint64_t rr = uint64_t(r) % q;
        return arith::mul_mod(uint64_t(d.c_multiplier()) % q, arith::mul_mod(rr, rr, q), q);
    }
};

inline EquationInstance instantiate(int case_id, unsigned p, int64_t r) {
    if (p < 5) throw std::invalid_argument("instantiate: p must be a prime >= 5");
    if (r < 1) throw std::invalid_argument("instantiate: r must be positive");
    const auto& d = descriptor(case_id);
    EquationInstance inst;
    inst.case_id = case_id;
    inst.p = p;
    inst.r = r;
    inst.a = 1;
    if (!d.div5) mpz_ui_pow_ui(inst.a.get_mpz_t(), 5, p - 1);
    mpz_ui_pow_ui(inst.b.get_mpz_t(), uint64_t(d.quad_multiplier), 2 * p - 3);
    if (d.div5) {
        Int f;
        mpz_ui_pow_ui(f.get_mpz_t(), 5, 2 * (p - 1));
        inst.b *= f;
    }
    inst.c = Int(long(d.c_multiplier())) * Int(long(r)) * Int(long(r));
    return inst;
}

// True iff (w1, w2) satisfies both descent equations of the row for the
// implied x.
inline bool verify_descent_identity(int case_id, unsigned p, int64_t r,
                                    const Int& w1, const Int& w2) {
    const auto& d = descriptor(case_id);
    Int pref;
    mpz_ui_pow_ui(pref.get_mpz_t(), uint64_t(d.quad_multiplier) * (d.div5 ? 5 : 1), p - 1);
    Int x, w1p, w2p;
    mpz_pow_ui(w1p.get_mpz_t(), w1.get_mpz_t(), p);
    x = pref * w1p;
    Int lhs = x * x + 6 * Int(long(r)) * Int(long(r));
    Int rhs;
    mpz_pow_ui(w2p.get_mpz_t(), w2.get_mpz_t(), p);
    rhs = Int(d.quad_multiplier) * w2p;
    if (!d.div5) {
        Int f;
        mpz_ui_pow_ui(f.get_mpz_t(), 5, p - 1);
        rhs *= f;
    }
    return lhs == rhs;
}

// A case row is vacuous for r when its forced divisors of x contradict
// gcd(x, r) = 1.
inline bool vacuous_for(int case_id, int64_t r) {
    const auto& d = descriptor(case_id);
    int64_t forced = d.quad_multiplier * (d.div5 ? 5 : 1);
    return std::gcd(forced, r) != 1;
}

} // namespace fivecubes::cases
