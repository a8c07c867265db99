#pragma once

// Lehmer sequences for gamma = u + v sqrt(-6), alpha = gamma / sqrt(6),
// beta = conj(gamma) / sqrt(6):
//
//   R = (alpha+beta)^2 = 2u^2/3,   Q = alpha beta = (u^2 + 6v^2)/6,
//
//   u~_n = (alpha^n - beta^n)/(alpha - beta)     (n odd)
//        = (alpha^n - beta^n)/(alpha^2 - beta^2) (n even).
//
// Both parity classes satisfy the integer two-step recurrence
//
//   u~_1 = u~_2 = 1,  u~_3 = R - Q,  u~_4 = R - 2Q,
//   u~_n = (R - 2Q) u~_{n-2} - Q^2 u~_{n-4},
//
// since alpha^n - beta^n = (alpha^2+beta^2)(alpha^{n-2}-beta^{n-2})
//                        - (alpha beta)^2 (alpha^{n-4}-beta^{n-4}).
//
// R and Q are integers once 6 | u, the situation the case-4, r = 1
// resolution forces. Primitive-divisor bookkeeping uses
// (alpha^2-beta^2)^2 = R(R-4Q), which is rational while alpha^2-beta^2 is
// not; squaring leaves the prime support unchanged.
//
// The Bilu-Hanrot-Voutier theorem (u~_n has a primitive divisor for every
// n > 30 and every prime n > 13) caps the exponent at p <= 13 whenever
// u~_p = +-1, which is exactly what the case-4, r = 1 argument needs.

#include "fivecubes/arith.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace fivecubes::lehmer {

using arith::Int;

class LehmerContext {
public:
    LehmerContext(Int u, Int v) : u_(std::move(u)), v_(std::move(v)) {
        if (u_ == 0 || v_ == 0)
            throw std::invalid_argument("LehmerContext: u and v must be nonzero");
        mpq_class uu(u_), vv(v_);
        r_exact_ = 2 * uu * uu / 3;
        q_exact_ = (uu * uu + 6 * vv * vv) / 6;
        r_exact_.canonicalize();
        q_exact_.canonicalize();
    }

    const Int& u() const { return u_; }
    const Int& v() const { return v_; }
    const mpq_class& R() const { return r_exact_; }
    const mpq_class& Q() const { return q_exact_; }

    // both R and Q land in Z exactly when 6 | u
    bool integral() const { return r_exact_.get_den() == 1 && q_exact_.get_den() == 1; }

    // (alpha^2 - beta^2)^2 = R(R - 4Q), an integer for integral contexts
    Int alpha2_beta2_squared() const {
        require_integral();
        const Int R = r_exact_.get_num(), Q = q_exact_.get_num();
        return R * (R - 4 * Q);
    }

    const Int& term(unsigned n) const {
        if (n == 0) throw std::invalid_argument("LehmerContext: n must be positive");
        require_integral();
        const Int R = r_exact_.get_num(), Q = q_exact_.get_num();
        while (cache_.size() < n) {
            const size_t k = cache_.size() + 1;
            switch (k) {
            case 1:
            case 2: cache_.emplace_back(1); break;
            case 3: cache_.push_back(R - Q); break;
            case 4: cache_.push_back(R - 2 * Q); break;
            default:
                cache_.push_back((R - 2 * Q) * cache_[k - 3] - Q * Q * cache_[k - 5]);
            }
        }
        return cache_[n - 1];
    }

private:
    void require_integral() const {
        if (!integral())
            throw std::domain_error("LehmerContext: R, Q not integral (need 6 | u)");
    }

    Int u_, v_;
    mpq_class r_exact_, q_exact_;
    mutable std::vector<Int> cache_;
};

inline Int lehmer_term(const LehmerContext& ctx, unsigned n) { return ctx.term(n); }

// Primes p >= 5 for which u~_p = +-1 escapes the primitive-divisor theorem.
inline std::set<unsigned> bhv_exponent_cap() { return {5, 7, 11, 13}; }

// A prime dividing u~_n but not R(R-4Q) * u~_1 ... u~_{n-1}, if any.
inline std::optional<Int> primitive_divisor_witness(const LehmerContext& ctx, unsigned n) {
    if (n < 2) throw std::invalid_argument("primitive_divisor_witness: n must be >= 2");
    Int target = ctx.term(n);
    if (target < 0) target = -target;
    if (target <= 1) return std::nullopt;

    std::set<Int> forbidden;
    Int disc = ctx.alpha2_beta2_squared();
    if (disc < 0) disc = -disc;
    if (disc > 1)
        for (const auto& f : arith::factor_smooth(disc)) forbidden.insert(f.prime);
    for (unsigned i = 1; i < n; ++i) {
        Int t = ctx.term(i);
        if (t < 0) t = -t;
        if (t > 1)
            for (const auto& f : arith::factor_smooth(t)) forbidden.insert(f.prime);
    }
    for (const auto& f : arith::factor_smooth(target))
        if (!forbidden.count(f.prime)) return f.prime;
    return std::nullopt;
}

// --- case 4, r = 1 --------------------------------------------------------

// integer polynomial, coefficients ascending by degree
struct Polynomial {
    std::vector<Int> coeffs;

    size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    Int eval(const Int& x) const {
        Int acc = 0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }
};

// The condition u~_p = 1 written out: the odd-index binomial expansion of
// ((u + v sqrt(-6))^p - (u - v sqrt(-6))^p) / (2 sqrt(-6)), divided by
// 6^((p-1)/2), minus one -- cleared to a primitive integer polynomial in u
// with positive leading coefficient.
inline Polynomial case4_r1_polynomial(unsigned p, int v) {
    if (p < 5 || p % 2 == 0) throw std::invalid_argument("case4_r1_polynomial: p must be an odd prime >= 5");
    if (v != 1 && v != -1) throw std::invalid_argument("case4_r1_polynomial: v must be +-1");
    Polynomial poly;
    poly.coeffs.assign(p, 0);
    Int binom;
    for (unsigned j = 1; j <= p; j += 2) {
        mpz_bin_uiui(binom.get_mpz_t(), p, j);
        Int term = binom;
        if (v < 0) term = -term;          // v^j, j odd
        Int six;
        mpz_ui_pow_ui(six.get_mpz_t(), 6, (j - 1) / 2);
        if (((j - 1) / 2) % 2 == 1) six = -six; // (-6)^((j-1)/2)
        poly.coeffs[p - j] = term * six;
    }
    Int constant;
    mpz_ui_pow_ui(constant.get_mpz_t(), 6, (p - 1) / 2);
    poly.coeffs[0] -= constant;

    if (poly.coeffs.back() < 0)
        for (auto& c : poly.coeffs) c = -c;
    Int content = 0;
    for (const auto& c : poly.coeffs) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content > 1)
        for (auto& c : poly.coeffs) c /= content;
    return poly;
}

// All integer roots, by the rational-root theorem on the primitive part.
inline std::vector<Int> integer_roots(const Polynomial& poly) {
    std::vector<Int> roots;
    std::vector<Int> c = poly.coeffs;
    while (!c.empty() && c.front() == 0) {
        if (roots.empty()) roots.push_back(0);
        c.erase(c.begin());
    }
    if (c.size() <= 1) return roots;
    Polynomial stripped{c};
    Int constant = c.front();
    if (constant < 0) constant = -constant;

    std::vector<Int> divisors = {1};
    for (const auto& f : arith::factor_smooth(constant)) {
        std::vector<Int> next;
        for (const Int& d : divisors) {
            Int pk = 1;
            for (unsigned e = 0; e <= f.exponent; ++e) {
                next.push_back(d * pk);
                pk *= f.prime;
            }
        }
        divisors = std::move(next);
    }
    for (const Int& d : divisors) {
        if (stripped.eval(d) == 0) roots.push_back(d);
        if (stripped.eval(-d) == 0) roots.push_back(-d);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

struct Case4Entry {
    unsigned p;
    int v;
    Polynomial poly;
    std::vector<Int> roots;
    std::vector<Int> admissible; // nonzero roots with 6 | u
};

struct Case4Report {
    std::vector<Case4Entry> entries;
    bool no_solutions = true;
};

// For every p in the BHV cap and v = +-1: find the integer roots of the
// cleared polynomial and keep those satisfying the constraints u != 0 and
// 6 | u. An empty admissible set everywhere resolves case 4 with r = 1.
inline Case4Report resolve_case4_r1() {
    Case4Report report;
    for (unsigned p : bhv_exponent_cap()) {
        for (int v : {1, -1}) {
            Case4Entry e;
            e.p = p;
            e.v = v;
            e.poly = case4_r1_polynomial(p, v);
            e.roots = integer_roots(e.poly);
            for (const Int& root : e.roots)
                if (root != 0 && mpz_divisible_ui_p(root.get_mpz_t(), 6))
                    e.admissible.push_back(root);
            if (!e.admissible.empty()) report.no_solutions = false;
            report.entries.push_back(std::move(e));
        }
    }
    return report;
}

} // namespace fivecubes::lehmer
