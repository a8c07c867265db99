#pragma once

// Exact integer and modular arithmetic kernel: 64-bit modular operations,
// deterministic Miller-Rabin primality, Jacobi symbols, Tonelli-Shanks
// square roots, integer k-th roots and smooth-number factoring on top of
// GMP integers. Every routine here is a pure function; all modules build
// on this file.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fivecubes::arith {

using Int = mpz_class;

// Thrown when factoring meets a composite cofactor beyond the trial-division
// budget that is not a perfect power. Callers treat it as "cannot decide",
// never as a verdict.
class UnfactoredPart : public std::runtime_error {
public:
    explicit UnfactoredPart(const std::string& what) : std::runtime_error(what) {}
};

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t q) {
    const uint64_t c = (a >= q - b) ? q : 0;
    return a + b - c;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t q) {
    const uint64_t c = (a < b) ? q : 0;
    return a - b + c;
}

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t q) {
    return uint64_t((__uint128_t(a) * b) % q);
}

// base^exp mod q by square-and-multiply, O(log exp) multiplications.
inline uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t q) {
    if (q == 1) return 0;
    uint64_t r = 1;
    uint64_t b = base % q;
    while (exp != 0) {
        if (exp & 1) r = mul_mod(r, b, q);
        b = mul_mod(b, b, q);
        exp >>= 1;
    }
    return r;
}

namespace detail {

inline bool strong_probable_prime(uint64_t n, uint64_t base, uint64_t d, int s) {
    uint64_t x = mod_pow(base % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

// Deterministic for all 64-bit inputs: the 12 bases 2..37 cover the range
// (A014233 shows the first composite passing all of them exceeds 2^64).
inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t base : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!detail::strong_probable_prime(n, base, d, s)) return false;
    }
    return true;
}

// Jacobi symbol (a|n) for odd positive n; equals the Legendre symbol when
// n is prime.
inline int jacobi(int64_t a, uint64_t n) {
    if (n == 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi: modulus must be odd and positive");
    uint64_t m = uint64_t(((a % int64_t(n)) + int64_t(n))) % n;
    int k = 1;
    while (m != 0) {
        while (m % 2 == 0) {
            m /= 2;
            if (n % 8 == 3 || n % 8 == 5) k = -k;
        }
        std::swap(m, n);
        if (m % 4 == 3 && n % 4 == 3) k = -k;
        m %= n;
    }
    return n == 1 ? k : 0;
}

inline int jacobi(const Int& a, const Int& n) {
    if (n <= 0 || mpz_even_p(n.get_mpz_t()))
        throw std::invalid_argument("jacobi: modulus must be odd and positive");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

// floor(n^(1/k)) together with an exactness flag.
inline std::pair<Int, bool> integer_root(const Int& n, unsigned k) {
    if (k == 0) throw std::invalid_argument("integer_root: k must be positive");
    if (n < 0) throw std::invalid_argument("integer_root: n must be nonnegative");
    Int root, rem;
    mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), k);
    return {root, rem == 0};
}

// Modular inverse of a mod q for gcd(a, q) = 1.
inline uint64_t mod_inverse(uint64_t a, uint64_t q) {
    int64_t t = 0, newt = 1;
    uint64_t r = q, newr = a % q;
    while (newr != 0) {
        uint64_t quot = r / newr;
        t = std::exchange(newt, t - int64_t(quot) * newt);
        r = std::exchange(newr, r - quot * newr);
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: arguments not coprime");
    return t < 0 ? uint64_t(t + int64_t(q)) : uint64_t(t);
}

// Tonelli-Shanks: a square root of a mod odd prime q, or nullopt when a is
// a non-residue.
inline std::optional<uint64_t> sqrt_mod(uint64_t a, uint64_t q) {
    a %= q;
    if (a == 0) return 0;
    if (jacobi(int64_t(a), q) != 1) return std::nullopt;
    if (q % 4 == 3) return mod_pow(a, (q + 1) / 4, q);

    uint64_t s = q - 1;
    int e = 0;
    while ((s & 1) == 0) { s >>= 1; ++e; }
    uint64_t z = 2;
    while (jacobi(int64_t(z), q) != -1) ++z;

    uint64_t m = uint64_t(e);
    uint64_t c = mod_pow(z, s, q);
    uint64_t t = mod_pow(a, s, q);
    uint64_t r = mod_pow(a, (s + 1) / 2, q);
    while (t != 1) {
        uint64_t i = 0;
        uint64_t tt = t;
        while (tt != 1) { tt = mul_mod(tt, tt, q); ++i; }
        uint64_t b = c;
        for (uint64_t j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        r = mul_mod(r, b, q);
    }
    return r;
}

inline std::vector<uint32_t> primes_up_to(uint32_t limit) {
    std::vector<bool> composite(size_t(limit) + 1, false);
    std::vector<uint32_t> primes;
    for (uint32_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) composite[size_t(j)] = true;
    }
    return primes;
}

struct PrimeFactor {
    Int prime;
    unsigned exponent;
};

namespace detail {

constexpr uint64_t kTrialBound = 1'000'000;

inline uint64_t root_u64(uint64_t n, unsigned k) {
    Int r, rem;
    Int nn(static_cast<unsigned long>(n));
    mpz_rootrem(r.get_mpz_t(), rem.get_mpz_t(), nn.get_mpz_t(), k);
    return rem == 0 ? mpz_get_ui(r.get_mpz_t()) : 0;
}

} // namespace detail

// Factor n completely, or throw UnfactoredPart. Budget: trial division to
// 10^6, then perfect-power reduction, then deterministic 64-bit primality
// on the cofactor. The pipeline's inputs are {2,3,5}-smooth times r^2 with
// r <= 10^6, so the budget always suffices there.
inline std::vector<PrimeFactor> factor_smooth(Int n) {
    if (n < 1) throw std::invalid_argument("factor_smooth: n must be positive");
    std::vector<PrimeFactor> out;
    auto push = [&out](const Int& prime, unsigned exponent) {
        for (auto& f : out) {
            if (f.prime == prime) { f.exponent += exponent; return; }
        }
        out.push_back({prime, exponent});
    };
    for (uint64_t d : {2ull, 3ull, 5ull}) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
            ++e;
        }
        if (e) push(Int(static_cast<unsigned long>(d)), e);
    }
    // 6k+-1 wheel
    for (uint64_t d = 7; d <= detail::kTrialBound && n > 1; d += (d % 6 == 1) ? 4 : 2) {
        if (Int(static_cast<unsigned long>(d)) * static_cast<unsigned long>(d) > n) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
            ++e;
        }
        if (e) push(Int(static_cast<unsigned long>(d)), e);
    }
    if (n == 1) return out;
    // cofactor has no prime factor <= 10^6
    unsigned power = 1;
    while (mpz_perfect_power_p(n.get_mpz_t())) {
        size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
        for (unsigned k = 2; k <= bits; ++k) {
            Int r, rem;
            mpz_rootrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), k);
            if (rem == 0) { n = r; power *= k; break; }
        }
    }
    bool prime;
    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        prime = is_prime(mpz_get_ui(n.get_mpz_t()));
    } else if (n < Int(static_cast<unsigned long>(detail::kTrialBound)) * static_cast<unsigned long>(detail::kTrialBound)) {
        prime = true; // below bound^2 with no divisor below bound
    } else {
        throw UnfactoredPart("factor_smooth: cofactor exceeds word size: " + n.get_str());
    }
    if (!prime)
        throw UnfactoredPart("factor_smooth: composite cofactor beyond budget: " + n.get_str());
    push(n, power);
    return out;
}

inline std::vector<std::pair<uint64_t, unsigned>> factor_u64(uint64_t n) {
    auto fs = factor_smooth(Int(static_cast<unsigned long>(n)));
    std::vector<std::pair<uint64_t, unsigned>> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.emplace_back(mpz_get_ui(f.prime.get_mpz_t()), f.exponent);
    return out;
}

// Product of the distinct prime divisors of n.
inline Int radical(const Int& n) {
    if (n < 1) throw std::invalid_argument("radical: n must be positive");
    Int out = 1;
    for (const auto& f : factor_smooth(n)) out *= f.prime;
    return out;
}

// Smallest generator of F_q^*.
inline uint64_t primitive_root(uint64_t q) {
    if (q == 2) return 1;
    auto factors = factor_u64(q - 1);
    for (uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (const auto& [ell, e] : factors) {
            if (mod_pow(g, (q - 1) / ell, q) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: no generator found (q not prime?)");
}

// The field F_q for a machine-word prime q; elements are canonical
// residues in [0, q).
class PrimeField {
public:
    explicit PrimeField(uint64_t q) : q_(q) {
        if (!is_prime(q)) throw std::invalid_argument("PrimeField: modulus not prime");
    }

    uint64_t modulus() const { return q_; }

    uint64_t reduce(const Int& v) const { return mpz_fdiv_ui(v.get_mpz_t(), q_); }
    uint64_t reduce(int64_t v) const {
        int64_t r = v % int64_t(q_);
        return r < 0 ? uint64_t(r + int64_t(q_)) : uint64_t(r);
    }

    uint64_t add(uint64_t a, uint64_t b) const { return add_mod(a, b, q_); }
    uint64_t sub(uint64_t a, uint64_t b) const { return sub_mod(a, b, q_); }
    uint64_t mul(uint64_t a, uint64_t b) const { return mul_mod(a, b, q_); }
    uint64_t pow(uint64_t a, uint64_t e) const { return mod_pow(a, e, q_); }
    uint64_t inv(uint64_t a) const { return mod_inverse(a, q_); }

private:
    uint64_t q_;
};

} // namespace fivecubes::arith
