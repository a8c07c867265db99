#pragma once

// Independent brute-force verification. The five-cube sum collapses to
//
//   (x-2r)^3 + (x-r)^3 + x^3 + (x+r)^3 + (x+2r)^3 = 5x(x^2 + 6r^2),
//
// so box searches only need perfect-power tests on 5x(x^2+6r^2), and sieve
// verdicts can be audited by exhaustive residue enumeration mod q.

#include "fivecubes/arith.hpp"
#include "fivecubes/cases.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fivecubes::oracle {

using arith::Int;

inline Int sum_of_five_cubes(const Int& x, const Int& r) {
    return 5 * x * (x * x + 6 * r * r);
}

struct SearchBox {
    int64_t x_min = 0, x_max = 0;
    int64_t r_min = 1, r_max = 1;
    std::vector<unsigned> p_set;
};

struct Solution {
    int64_t x;
    int64_t r;
    Int y;
    unsigned p;
};

// All (x, r, y, p) in the box with 5x(x^2+6r^2) = y^p, restricted to
// gcd(x, r) = 1; x = 0 rows are always reported (they are the trivial
// y = 0 family). Output is ordered by (r, x, p).
inline std::vector<Solution> search(const SearchBox& box) {
    if (box.x_min > box.x_max || box.r_min > box.r_max || box.r_min < 1)
        throw std::invalid_argument("search: malformed box");
    if (box.x_min < -1'000'000'000 || box.x_max > 1'000'000'000 || box.r_max > 1'000'000'000)
        throw std::invalid_argument("search: box exceeds desk scale");
    for (unsigned p : box.p_set)
        if (p < 5 || !arith::is_prime(p))
            throw std::invalid_argument("search: p_set must contain primes >= 5");

    std::vector<Solution> out;
    Int s, absval;
    for (int64_t r = box.r_min; r <= box.r_max; ++r) {
        for (int64_t x = box.x_min; x <= box.x_max; ++x) {
            if (x == 0) {
                for (unsigned p : box.p_set) out.push_back({x, r, Int(0), p});
                continue;
            }
            if (std::gcd(x, r) != 1) continue;
            const __int128 xx = x;
            const __int128 mag = 5 * xx * (xx * xx + 6 * __int128(r) * r);
            const bool neg = mag < 0;
            const unsigned __int128 um = neg ? (unsigned __int128)(-mag) : (unsigned __int128)mag;
            absval = Int(uint64_t(um >> 64));
            absval <<= 64;
            absval += Int(uint64_t(um));
            for (unsigned p : box.p_set) {
                auto [root, exact] = arith::integer_root(absval, p);
                if (!exact) continue;
                out.push_back({x, r, neg ? Int(-root) : root, p});
            }
        }
    }
    return out;
}

// True iff a w2^p = b w1^(2p) + c has a solution mod q; by the sieve
// criterion this must be false whenever q was reported as a witness.
inline bool residue_audit(const cases::EquationInstance& inst, uint64_t q) {
    if (q < 2 || q >= 10'000'000ull || !arith::is_prime(q))
        throw std::invalid_argument("residue_audit: q must be a prime small enough to enumerate");
    const uint64_t a = inst.a_mod(q);
    const uint64_t b = inst.b_mod(q);
    const uint64_t c = inst.c_mod(q);
    std::vector<uint8_t> lhs(q, 0);
    for (uint64_t w = 0; w < q; ++w) lhs[arith::mul_mod(a, arith::mod_pow(w, inst.p, q), q)] = 1;
    for (uint64_t w = 0; w < q; ++w) {
        const uint64_t rhs = arith::add_mod(arith::mul_mod(b, arith::mod_pow(w, 2 * inst.p, q), q), c, q);
        if (lhs[rhs]) return true;
    }
    return false;
}

} // namespace fivecubes::oracle
