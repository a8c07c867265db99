#pragma once

// Nonexistence sieve for a w2^p - b w1^(2p) = c at primes q = 2kp + 1 with
// q not dividing a. Over F_q the set of 2p-th powers is
//
//   mu(p,q) = {eta^(2p)} = {0} union { zeta in F_q^* : zeta^k = 1 },
//
// and any integral solution forces some zeta in mu(p,q) with
// ((b zeta + c)/a)^(2k) in {0, 1}  (Fermat applied to w2^p). If no zeta
// passes -- B(p,q) empty -- the equation has no integral solutions, and in
// fact no solutions mod q at all, which is what the residue audit checks.

#include "fivecubes/arith.hpp"
#include "fivecubes/cases.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fivecubes::sieve {

struct SieveConfig {
    unsigned k_max = 1000; // search budget over k in q = 2kp+1
    bool early_exit = true;
};

enum class Status { eliminated, surviving };

struct SieveVerdict {
    Status status = Status::surviving;
    std::optional<uint64_t> witness_q;
    std::optional<unsigned> k_used;
    unsigned checked_count = 0; // primes q actually tested
};

namespace detail {

// generator of the order-k subgroup of F_q^* (the 2p-th powers)
inline uint64_t subgroup_generator(unsigned p, uint64_t q) {
    return arith::mod_pow(arith::primitive_root(q), 2 * uint64_t(p), q);
}

inline void check_q(unsigned p, uint64_t q) {
    if (!arith::is_prime(q)) throw std::invalid_argument("sieve: q must be prime");
    if (q % (2 * uint64_t(p)) != 1)
        throw std::invalid_argument("sieve: q must be 1 mod 2p");
}

// true iff B(p,q) is empty for coefficients (a, b, c) mod q
inline bool b_set_empty(uint64_t a, uint64_t b, uint64_t c, unsigned p, uint64_t q) {
    const uint64_t k = (q - 1) / (2 * uint64_t(p));
    const uint64_t inv_a = arith::mod_inverse(a, q);
    auto passes = [&](uint64_t zeta) {
        const uint64_t u = arith::mul_mod(arith::add_mod(arith::mul_mod(b, zeta, q), c, q), inv_a, q);
        return u == 0 || arith::mod_pow(u, 2 * k, q) == 1;
    };
    if (passes(0)) return false;
    const uint64_t h = subgroup_generator(p, q);
    uint64_t zeta = 1;
    for (uint64_t j = 0; j < k; ++j) {
        if (passes(zeta)) return false;
        zeta = arith::mul_mod(zeta, h, q);
    }
    return true;
}

} // namespace detail

// {0} union the k-th roots of unity in F_q, sorted; size exactly k+1.
inline std::vector<uint64_t> mu_set(unsigned p, uint64_t q) {
    detail::check_q(p, q);
    const uint64_t k = (q - 1) / (2 * uint64_t(p));
    std::vector<uint64_t> mu;
    mu.reserve(size_t(k) + 1);
    mu.push_back(0);
    const uint64_t h = detail::subgroup_generator(p, q);
    uint64_t zeta = 1;
    for (uint64_t j = 0; j < k; ++j) {
        mu.push_back(zeta);
        zeta = arith::mul_mod(zeta, h, q);
    }
    std::sort(mu.begin(), mu.end());
    return mu;
}

// The subset of mu(p,q) passing the 2k-power test for the instance's
// coefficients reduced mod q.
inline std::vector<uint64_t> b_set(const cases::EquationInstance& inst, uint64_t q) {
    detail::check_q(inst.p, q);
    const uint64_t a = inst.a_mod(q);
    if (a == 0) throw std::invalid_argument("b_set: q divides a");
    const uint64_t b = inst.b_mod(q);
    const uint64_t c = inst.c_mod(q);
    const uint64_t k = (q - 1) / (2 * uint64_t(inst.p));
    const uint64_t inv_a = arith::mod_inverse(a, q);
    std::vector<uint64_t> out;
    for (uint64_t zeta : mu_set(inst.p, q)) {
        const uint64_t u = arith::mul_mod(arith::add_mod(arith::mul_mod(b, zeta, q), c, q), inv_a, q);
        if (u == 0 || arith::mod_pow(u, 2 * k, q) == 1) out.push_back(zeta);
    }
    return out;
}

// Hunt for a witness prime q = 2kp+1 with empty B(p,q).
inline SieveVerdict run_sieve(const cases::EquationInstance& inst, const SieveConfig& config = {}) {
    if (config.k_max < 1) throw std::invalid_argument("run_sieve: k_max must be >= 1");
    SieveVerdict verdict;
    for (unsigned k = 1; k <= config.k_max; ++k) {
        const uint64_t q = 2 * uint64_t(k) * inst.p + 1;
        if (!arith::is_prime(q)) continue;
        const uint64_t a = inst.a_mod(q);
        if (a == 0) continue; // the lemma requires q coprime to a
        ++verdict.checked_count;
        if (detail::b_set_empty(a, inst.b_mod(q), inst.c_mod(q), inst.p, q)) {
            verdict.status = Status::eliminated;
            if (!verdict.witness_q) {
                verdict.witness_q = q;
                verdict.k_used = k;
            }
            if (config.early_exit) return verdict;
        }
    }
    return verdict;
}

} // namespace fivecubes::sieve
