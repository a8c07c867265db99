#pragma once

// Coefficient reduction of a w2^p - b w1^(2p) = c to a pairwise-coprime
// form A rho^p - B sigma^(2p) = C, plus local solubility tests.
//
// Reduction rounds (each strictly decreases C, so the loop terminates):
//   * common:  d = gcd(A,B,C) > 1  ->  divide the equation by d
//   * g-step:  g = Rad(gcd(A,C)) > 1. gcd(g,B) = 1 forces g | w1; writing
//              w1 = g w1' and dividing by g gives (A/g, B g^(2p-1), C/g).
//   * h-step:  h = Rad(gcd(B,C)) > 1. gcd(h,A) = 1 forces h | w2; writing
//              w2 = h w2' and dividing by h gives (A h^(p-1), B/h, C/h).
//
// If afterwards gcd(A,B) > 1, a prime q dividing it cannot divide C, and
// the equation is insoluble mod q outright; the prime is reported as an
// obstruction instead of forcing the coprimality invariant.
//
// Local solubility at a prime q is decided by depth-first enumeration of
// residues mod q^e with Newton-style certificates: a candidate lifts once
// e exceeds twice the valuation of one partial derivative at it. "Budget
// exceeded" is only ever collapsed to "soluble/unknown", never insoluble.

#include "fivecubes/arith.hpp"
#include "fivecubes/cases.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace fivecubes::localsolv {

using arith::Int;

struct ReductionStep {
    enum class Kind { strip_common, absorb_w1, absorb_w2 };
    Kind kind;
    Int factor;
};

struct ReducedEquation {
    Int A, B, C;
    unsigned p = 0;
    std::vector<ReductionStep> trace;
    Int w1_divisor = 1; // original w1 = w1_divisor * sigma
    Int w2_divisor = 1; // original w2 = w2_divisor * rho
    std::optional<Int> coprime_obstruction; // prime of gcd(A,B); insoluble mod it
};

inline ReducedEquation reduce_raw(Int a, Int b, Int c, unsigned p) {
    if (a < 1 || b < 1 || c < 1)
        throw std::invalid_argument("reduce: coefficients must be positive");
    Int g0;
    mpz_gcd(g0.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g0.get_mpz_t(), g0.get_mpz_t(), c.get_mpz_t());
    if (g0 != 1) throw std::invalid_argument("reduce: gcd(a,b,c) must be 1");

    ReducedEquation red;
    red.A = std::move(a);
    red.B = std::move(b);
    red.C = std::move(c);
    red.p = p;

    auto gcd = [](const Int& x, const Int& y) {
        Int g;
        mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        return g;
    };

    for (;;) {
        Int d = gcd(gcd(red.A, red.B), red.C);
        if (d > 1) {
            red.A /= d;
            red.B /= d;
            red.C /= d;
            red.trace.push_back({ReductionStep::Kind::strip_common, d});
            continue;
        }
        Int g = gcd(red.A, red.C);
        if (g > 1) {
            g = arith::radical(g);
            Int gpow;
            mpz_pow_ui(gpow.get_mpz_t(), g.get_mpz_t(), 2 * p - 1);
            red.A /= g;
            red.B *= gpow;
            red.C /= g;
            red.w1_divisor *= g;
            red.trace.push_back({ReductionStep::Kind::absorb_w1, g});
            continue;
        }
        Int h = gcd(red.B, red.C);
        if (h > 1) {
            h = arith::radical(h);
            Int hpow;
            mpz_pow_ui(hpow.get_mpz_t(), h.get_mpz_t(), p - 1);
            red.A *= hpow;
            red.B /= h;
            red.C /= h;
            red.w2_divisor *= h;
            red.trace.push_back({ReductionStep::Kind::absorb_w2, h});
            continue;
        }
        break;
    }

    Int ab = gcd(red.A, red.B);
    if (ab > 1) red.coprime_obstruction = arith::factor_smooth(ab).front().prime;
    return red;
}

inline ReducedEquation reduce(const cases::EquationInstance& inst) {
    return reduce_raw(inst.a, inst.b, inst.c, inst.p);
}

struct QrVerdict {
    bool pass;
    Int witness_q; // meaningful when !pass
};

// Necessary condition: for any odd prime q | A, the residue -BC must be a
// square mod q.
inline QrVerdict qr_necessary_test(const ReducedEquation& red) {
    for (const auto& f : arith::factor_smooth(red.A)) {
        if (f.prime == 2) continue;
        Int t = -(red.B * red.C);
        if (arith::jacobi(t, f.prime) == -1) return {false, f.prime};
    }
    return {true, 0};
}

enum class Local { soluble, insoluble, budget_exceeded };

namespace detail {

struct BudgetExceeded {};

inline unsigned valuation(const Int& n, uint64_t q) {
    Int tmp;
    return unsigned(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), Int(static_cast<unsigned long>(q)).get_mpz_t()));
}

class LocalSolver {
public:
    LocalSolver(Int A, Int B, Int C, unsigned p, uint64_t q, int depth)
        : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), p_(p), q_(q), depth_(depth) {
        vA_ = valuation(A_, q_);
        vB_ = valuation(B_, q_);
        vC_ = valuation(C_, q_);
        vp_ = valuation(Int(static_cast<unsigned long>(p_)), q_);
        v2_ = (q_ == 2) ? 1 : 0;
        cap_ = 2 * (v2_ + vp_ + vA_ + vB_ + vC_) + 3;
    }

    bool solve() { // throws BudgetExceeded
        if (depth_ > 6) throw BudgetExceeded{};
        if (q_ <= 64) return solve_dfs();
        return solve_structured();
    }

private:
    Int A_, B_, C_;
    unsigned p_;
    uint64_t q_;
    int depth_;
    unsigned vA_, vB_, vC_, vp_, v2_;
    unsigned cap_;
    long nodes_ = 0;

    Int qpow(unsigned e) const {
        Int m;
        mpz_ui_pow_ui(m.get_mpz_t(), q_, e);
        return m;
    }

    Int eval(const Int& rho, const Int& sigma, const Int& mod) const {
        Int t1, t2;
        mpz_powm_ui(t1.get_mpz_t(), rho.get_mpz_t(), p_, mod.get_mpz_t());
        mpz_powm_ui(t2.get_mpz_t(), sigma.get_mpz_t(), 2 * p_, mod.get_mpz_t());
        Int f = (A_ * t1 - B_ * t2 - C_) % mod;
        if (f < 0) f += mod;
        return f;
    }

    // exact valuation of F_rho / F_sigma at integer residues; -1 = infinite
    long partial_rho_val(const Int& rho) const {
        if (rho == 0) return -1;
        return long(vp_) + long(vA_) + long(p_ - 1) * valuation(rho, q_);
    }
    long partial_sigma_val(const Int& sigma) const {
        if (sigma == 0) return -1;
        return long(v2_) + long(vp_) + long(vB_) + long(2 * p_ - 1) * valuation(sigma, q_);
    }

    // Candidates with rho = sigma = 0 mod q^e form the class rho = q^e rho',
    // sigma = q^e sigma'. Compare valuations and recurse on the divided-out
    // equation; the C-valuation strictly drops, so this bottoms out.
    bool solve_zero_class(unsigned e) {
        const unsigned mA = vA_ + p_ * e;
        const unsigned mB = vB_ + 2 * p_ * e;
        if (vC_ < std::min(mA, mB)) return false;
        const unsigned delta = std::min({mA, mB, vC_});
        Int A2 = A_ * qpow(p_ * e) / qpow(delta);
        Int B2 = B_ * qpow(2 * p_ * e) / qpow(delta);
        Int C2 = C_ / qpow(delta);
        return LocalSolver(std::move(A2), std::move(B2), std::move(C2), p_, q_, depth_ + 1).solve();
    }

    struct Node {
        Int rho, sigma;
        unsigned e;
    };

    bool solve_dfs() {
        std::vector<Node> stack;
        {
            const Int mod = qpow(1);
            for (uint64_t i = 0; i < q_; ++i)
                for (uint64_t j = 0; j < q_; ++j) {
                    Int rho(static_cast<unsigned long>(i)), sigma(static_cast<unsigned long>(j));
                    if (eval(rho, sigma, mod) == 0) stack.push_back({rho, sigma, 1});
                }
        }
        while (!stack.empty()) {
            Node n = std::move(stack.back());
            stack.pop_back();
            if (++nodes_ > 200000) throw BudgetExceeded{};

            const long vr = partial_rho_val(n.rho);
            if (vr >= 0 && 2 * vr < long(n.e)) return true;
            const long vs = partial_sigma_val(n.sigma);
            if (vs >= 0 && 2 * vs < long(n.e)) return true;

            if (n.rho == 0 && n.sigma == 0) {
                if (solve_zero_class(n.e)) return true;
                continue;
            }
            if (n.e >= cap_) throw BudgetExceeded{};

            const Int step = qpow(n.e);
            const Int mod = qpow(n.e + 1);
            for (uint64_t i = 0; i < q_; ++i)
                for (uint64_t j = 0; j < q_; ++j) {
                    Int rho = n.rho + Int(static_cast<unsigned long>(i)) * step;
                    Int sigma = n.sigma + Int(static_cast<unsigned long>(j)) * step;
                    if (eval(rho, sigma, mod) == 0)
                        stack.push_back({std::move(rho), std::move(sigma), n.e + 1});
                }
        }
        return false;
    }

    // Large q never divides 2pAB for the pipeline's {2,3,5}-smooth
    // coefficient shapes; under that hypothesis the valuation split
    // (v(rho), v(sigma)) admits a complete case analysis whenever
    // v_q(C) < p, without any residue tree.
    bool solve_structured() {
        if (q_ == 2 || vA_ > 0 || vB_ > 0 || vp_ > 0) throw BudgetExceeded{};
        const uint64_t a = mpz_fdiv_ui(A_.get_mpz_t(), q_);
        const uint64_t b = mpz_fdiv_ui(B_.get_mpz_t(), q_);
        const uint64_t c = mpz_fdiv_ui(C_.get_mpz_t(), q_);
        const uint64_t inv_a = arith::mod_inverse(a, q_);
        const uint64_t d2p = std::gcd(2 * uint64_t(p_), q_ - 1);
        const uint64_t dp = std::gcd(uint64_t(p_), q_ - 1);
        const uint64_t pexp = (q_ - 1) / dp;

        // unit-unit points: sigma^(2p) ranges over the 2p-th power units
        const uint64_t h = arith::mod_pow(arith::primitive_root(q_), d2p, q_);
        uint64_t u = 1;
        const uint64_t subgroup = (q_ - 1) / d2p;
        for (uint64_t i = 0; i < subgroup; ++i) {
            const uint64_t t = arith::mul_mod(arith::add_mod(arith::mul_mod(b, u, q_), c, q_), inv_a, q_);
            if (t != 0 && arith::mod_pow(t, pexp, q_) == 1) return true; // smooth point, lifts
            u = arith::mul_mod(u, h, q_);
        }
        if (vC_ == 0) {
            // v(rho) > 0 needs -C/B a 2p-th power unit; v(sigma) > 0 needs
            // C/A a p-th power unit. Either gives a smooth one-variable
            // root whose value can be steered onto the needed power.
            const uint64_t t1 = arith::mul_mod(q_ - c % q_, arith::mod_inverse(b, q_), q_);
            if (t1 != 0 && arith::mod_pow(t1, (q_ - 1) / d2p, q_) == 1) return true;
            const uint64_t t2 = arith::mul_mod(c, inv_a, q_);
            if (t2 != 0 && arith::mod_pow(t2, pexp, q_) == 1) return true;
            return false;
        }
        if (vC_ < p_) {
            // nonunit solutions need min(p v(rho), 2p v(sigma)) <= v(C) < p
            return false;
        }
        throw BudgetExceeded{};
    }
};

} // namespace detail

// q-adic solubility of A rho^p - B sigma^(2p) = C.
inline Local local_solubility(const ReducedEquation& red, const Int& q) {
    if (q < 2 || !mpz_fits_ulong_p(q.get_mpz_t()) ||
        !arith::is_prime(mpz_get_ui(q.get_mpz_t())))
        throw std::invalid_argument("local_solubility: q must be a machine-word prime");
    try {
        detail::LocalSolver solver(red.A, red.B, red.C, red.p, mpz_get_ui(q.get_mpz_t()), 0);
        return solver.solve() ? Local::soluble : Local::insoluble;
    } catch (const detail::BudgetExceeded&) {
        return Local::budget_exceeded;
    }
}

// The full battery: coprimality obstruction, the -BC quadratic-residue
// test, then q-adic solubility at every prime dividing A, B, C and every
// prime q <= 19. Returns the witness prime of the first insolubility, or
// nullopt for survivors. Budget overruns count as soluble.
inline std::optional<Int> run_local_battery(const ReducedEquation& red) {
    if (red.coprime_obstruction) return red.coprime_obstruction;
    auto qr = qr_necessary_test(red);
    if (!qr.pass) return qr.witness_q;

    std::set<Int> qs = {2, 3, 5, 7, 11, 13, 17, 19};
    for (const Int& v : {red.A, red.B, red.C})
        for (const auto& f : arith::factor_smooth(v)) qs.insert(f.prime);

    for (const Int& q : qs) {
        if (local_solubility(red, q) == Local::insoluble) return q;
    }
    return std::nullopt;
}

} // namespace fivecubes::localsolv
