#pragma once

// Mignotte's bound for |a X^n - b Y^n| <= c: with A = max{a, b, 3},
//
//   n <= max{ 3 log(1.5 |c/b|),  7400 log A / log(1 + log A / log|a/b|) }.
//
// Each signature equation a w2^p - b w1^(2p) = c_mult * r^2 is first scaled
// by a constant so both terms become genuine p-th powers:
//
//   cases 1-4 (m = quad multiplier): 25 m^3 * (eqn) gives
//       25 m^3 * w2^p - (25 m^2 w1^2)^p = 150 m^2 * r^2
//   cases 5-8: 5 m^3 * (eqn) gives
//       m^3 * (5 w2)^p - 5 * (m^2 w1^2)^p = 5 m^3 * (6/m) * r^2
//
// The scaled pair is then ordered so a_norm > b_norm, which the theorem
// permits (the inequality is symmetric in the two terms up to sign) and
// which keeps log|a/b| positive.

#include "fivecubes/arith.hpp"
#include "fivecubes/cases.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fivecubes::bounds {

using arith::Int;

struct NormalizedInequality {
    int case_id;
    long a_norm;    // a_norm > b_norm >= 1
    long b_norm;
    long c_factor;  // |a_norm X^p - b_norm Y^p| <= c_factor * r^2
    long multiplier; // constant the signature equation was scaled by

    // scaled-term layout, for identity checks:
    //   multiplier * (a w2^p - b w1^(2p)) == ta*(sa*w2)^p - tb*(sb*w1^2)^p
    long ta, sa, tb, sb;

    double big_a() const { return double(std::max(a_norm, 3L)); }
};

inline NormalizedInequality normalize(int case_id) {
    const auto& d = cases::descriptor(case_id);
    const long m = d.quad_multiplier;
    NormalizedInequality n{};
    n.case_id = case_id;
    if (d.div5) {
        n.multiplier = 25 * m * m * m;
        n.ta = n.multiplier;
        n.sa = 1;
        n.tb = 1;
        n.sb = 25 * m * m;
    } else {
        n.multiplier = 5 * m * m * m;
        n.ta = m * m * m;
        n.sa = 5;
        n.tb = 5;
        n.sb = m * m;
    }
    n.c_factor = n.multiplier * d.c_multiplier();
    n.a_norm = std::max(n.ta, n.tb);
    n.b_norm = std::min(n.ta, n.tb);
    return n;
}

struct BoundReport {
    int case_id;
    long p_max;
    double r_threshold_log10; // |r| range within which p_max holds
};

namespace detail {

inline double log_natural(const Int& v) {
    signed long exp2;
    double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + double(exp2) * std::log(2.0);
}

// the r-independent branch 7400 log A / log(1 + log A / log(a/b))
inline double branch2(const NormalizedInequality& n) {
    if (n.a_norm == n.b_norm)
        throw std::domain_error("mignotte: a_norm == b_norm, log ratio vanishes");
    const double la = std::log(n.big_a());
    const double lr = std::log(double(n.a_norm) / double(n.b_norm));
    return 7400.0 * la / std::log1p(la / lr);
}

} // namespace detail

inline long mignotte_p_max_branch2(const NormalizedInequality& n) {
    return long(std::ceil(detail::branch2(n)));
}

// Largest log10 |r| for which 3 log(1.5 c_factor r^2 / b_norm) stays below
// p_max, i.e. the range where the r-independent branch governs.
inline double r_threshold_log10(const NormalizedInequality& n, long p_max) {
    const double ln10 = std::log(10.0);
    return (double(p_max) / (3.0 * ln10) +
            std::log10(double(n.b_norm) / (1.5 * double(n.c_factor)))) / 2.0;
}

inline BoundReport mignotte_p_max(const NormalizedInequality& n, const Int& r_max) {
    if (r_max < 1) throw std::invalid_argument("mignotte_p_max: r_max must be positive");
    const double b2 = detail::branch2(n);
    const double lc = std::log(1.5 * double(n.c_factor) / double(n.b_norm)) +
                      2.0 * detail::log_natural(r_max);
    const double b1 = 3.0 * lc;
    BoundReport rep;
    rep.case_id = n.case_id;
    rep.p_max = std::max(5L, long(std::ceil(std::max(b1, b2))));
    rep.r_threshold_log10 = r_threshold_log10(n, long(std::ceil(b2)));
    return rep;
}

// The eight per-case bounds in the regime where the r-independent branch
// governs (every |r| below the reported threshold).
inline std::array<BoundReport, 8> bounds_table() {
    std::array<BoundReport, 8> out;
    for (int c = 1; c <= 8; ++c) {
        auto n = normalize(c);
        BoundReport rep;
        rep.case_id = c;
        rep.p_max = mignotte_p_max_branch2(n);
        rep.r_threshold_log10 = r_threshold_log10(n, rep.p_max);
        out[size_t(c - 1)] = rep;
    }
    return out;
}

} // namespace fivecubes::bounds
