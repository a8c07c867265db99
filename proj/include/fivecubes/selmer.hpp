#pragma once

// Further-descent elimination criteria operating on externally supplied
// descent data. For A rho^p - B sigma^(2p) = C write B B' = v^2 with B' the
// product of primes of odd valuation in B, u = A B', C B' = m n^2 with m
// squarefree; then any solution satisfies
//
//   v sigma^p + n sqrt(-m) = epsilon eta^p
//
// for some eta in Q(sqrt(-m)) and epsilon drawn from a finite set the
// caller computes elsewhere (class-group / S-unit machinery is out of
// scope here, so epsilon is an input, never derived).
//
// Two tests rule such an identity out:
//   * valuative: three prime-ideal valuations pairwise distinct mod p;
//   * split prime q = 2kp+1 with (-m | q) = 1: under both embeddings
//     sqrt(-m) -> s, q - s, every p-th power zeta must give
//     ((v zeta + n s)/epsilon_s)^(2k) in {0, 1}; if no zeta passes both,
//     there is no eta.

#include "fivecubes/arith.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fivecubes::selmer {

using arith::Int;

enum class Check { eliminated, inconclusive };

// epsilon = sign * (num1 + num2 sqrt(-m)) / den
struct DescentDatum {
    int case_id = 0;
    unsigned p = 0;
    int64_t r = 0;
    Int m;   // squarefree positive; field is Q(sqrt(-m))
    Int v;   // v^2 = B B'
    Int n;   // C B' = m n^2
    Int u;   // u = A B'
    Int eps_num1, eps_num2, eps_den;
    int sign = 1;
};

// pairwise distinct valuations mod p rule the identity out
inline Check valuative_check(const std::array<long, 3>& ord, unsigned p) {
    const long a = ((ord[0] % long(p)) + long(p)) % long(p);
    const long b = ((ord[1] % long(p)) + long(p)) % long(p);
    const long c = ((ord[2] % long(p)) + long(p)) % long(p);
    return (a != b && b != c && a != c) ? Check::eliminated : Check::inconclusive;
}

namespace detail {

inline uint64_t reduce(const Int& v, uint64_t q) { return mpz_fdiv_ui(v.get_mpz_t(), q); }

} // namespace detail

// Split-prime criterion at q = 2kp+1. Preconditions: q prime, -m a nonzero
// square mod q (q splits), epsilon a unit at both primes above q (its
// denominator and norm are coprime to q), and v, n not both divisible by q.
inline Check split_prime_check(const DescentDatum& d, unsigned p, uint64_t q) {
    if (!arith::is_prime(q) || q % (2 * uint64_t(p)) != 1)
        throw std::invalid_argument("split_prime_check: q must be a prime 2kp+1");
    const uint64_t m = detail::reduce(d.m, q);
    if (m == 0 || arith::jacobi(-int64_t(m), q) != 1)
        throw std::invalid_argument("split_prime_check: q must split in Q(sqrt(-m))");
    const uint64_t den = detail::reduce(d.eps_den, q);
    const Int norm = d.eps_num1 * d.eps_num1 + d.m * d.eps_num2 * d.eps_num2;
    if (den == 0 || detail::reduce(norm, q) == 0)
        throw std::invalid_argument("split_prime_check: epsilon must be a unit above q");
    const uint64_t v = detail::reduce(d.v, q);
    const uint64_t n = detail::reduce(d.n, q);
    if (v == 0 && n == 0)
        throw std::invalid_argument("split_prime_check: q ramifies the datum (q | v and q | n)");

    const uint64_t k = (q - 1) / (2 * uint64_t(p));
    const uint64_t s0 = *arith::sqrt_mod(q - m, q); // a root of -m
    const std::array<uint64_t, 2> roots = {s0, q - s0};

    std::array<uint64_t, 2> eps{};
    const uint64_t inv_den = arith::mod_inverse(den, q);
    const uint64_t num1 = detail::reduce(d.sign >= 0 ? d.eps_num1 : -d.eps_num1, q);
    const uint64_t num2 = detail::reduce(d.sign >= 0 ? d.eps_num2 : -d.eps_num2, q);
    for (int j = 0; j < 2; ++j)
        eps[size_t(j)] = arith::mul_mod(arith::add_mod(num1, arith::mul_mod(num2, roots[size_t(j)], q), q), inv_den, q);
    if (eps[0] == 0 || eps[1] == 0)
        throw std::invalid_argument("split_prime_check: epsilon must be a unit above q");

    const std::array<uint64_t, 2> inv_eps = {arith::mod_inverse(eps[0], q),
                                             arith::mod_inverse(eps[1], q)};

    auto passes = [&](uint64_t zeta) {
        for (int j = 0; j < 2; ++j) {
            const uint64_t t = arith::mul_mod(
                arith::add_mod(arith::mul_mod(v, zeta, q), arith::mul_mod(n, roots[size_t(j)], q), q),
                inv_eps[size_t(j)], q);
            if (t != 0 && arith::mod_pow(t, 2 * k, q) != 1) return false;
        }
        return true;
    };

    // chi(p,q) = {eta^p} = {0} union the order-2k subgroup
    if (passes(0)) return Check::inconclusive;
    const uint64_t g = arith::mod_pow(arith::primitive_root(q), uint64_t(p), q);
    uint64_t zeta = 1;
    for (uint64_t j = 0; j < 2 * k; ++j) {
        if (passes(zeta)) return Check::inconclusive;
        zeta = arith::mul_mod(zeta, g, q);
    }
    return Check::eliminated;
}

// Nonthrowing wrapper for witness hunts: nullopt when q fails a
// precondition and should simply be skipped.
inline std::optional<Check> try_split_prime_check(const DescentDatum& d, unsigned p, uint64_t q) {
    try {
        return split_prime_check(d, p, q);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

// Hunt q = 2kp+1, k <= k_max, for a split prime with empty C(p,q).
inline std::optional<uint64_t> find_split_witness(const DescentDatum& d, unsigned k_max) {
    for (unsigned k = 1; k <= k_max; ++k) {
        const uint64_t q = 2 * uint64_t(k) * d.p + 1;
        if (!arith::is_prime(q)) continue;
        auto res = try_split_prime_check(d, d.p, q);
        if (res && *res == Check::eliminated) return q;
    }
    return std::nullopt;
}

// --- descent-datum file format ------------------------------------------
//
// Line-oriented plain text, one record per line, '#' starts a comment:
//
//   case_id p r m v n u num1 num2 den sign
//
// with epsilon = sign * (num1 + num2 sqrt(-m)) / den.

inline std::vector<DescentDatum> parse_descent_data(std::istream& in) {
    std::vector<DescentDatum> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string c, p, r, m, v, n, u, n1, n2, den, sign;
        if (!(ss >> c)) continue; // blank
        if (!(ss >> p >> r >> m >> v >> n >> u >> n1 >> n2 >> den >> sign))
            throw std::runtime_error("descent data: short record at line " + std::to_string(lineno));
        std::string extra;
        if (ss >> extra)
            throw std::runtime_error("descent data: trailing fields at line " + std::to_string(lineno));
        DescentDatum d;
        d.case_id = std::stoi(c);
        d.p = unsigned(std::stoul(p));
        d.r = std::stoll(r);
        d.m = Int(m);
        d.v = Int(v);
        d.n = Int(n);
        d.u = Int(u);
        d.eps_num1 = Int(n1);
        d.eps_num2 = Int(n2);
        d.eps_den = Int(den);
        d.sign = std::stoi(sign);
        if (d.case_id < 1 || d.case_id > 8 || d.p < 5 || d.r < 1 || d.m < 1 ||
            d.eps_den == 0 || (d.sign != 1 && d.sign != -1))
            throw std::runtime_error("descent data: invalid record at line " + std::to_string(lineno));
        out.push_back(std::move(d));
    }
    return out;
}

inline std::vector<DescentDatum> load_descent_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("descent data: cannot open " + path);
    return parse_descent_data(in);
}

} // namespace fivecubes::selmer
