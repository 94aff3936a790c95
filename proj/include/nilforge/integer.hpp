#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace nilforge {

using Integer = mpz_class;

inline std::string to_string(const Integer& a) { return a.get_str(); }

// n(n-1)/2, valid for negative n.
inline Integer binom2(const Integer& n) { return n * (n - 1) / 2; }
constexpr std::int64_t binom2(std::int64_t n) { return n * (n - 1) / 2; }

// Floor division with a positive divisor.
inline Integer floor_div(const Integer& a, const Integer& m)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return q;
}
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t m)
{
    std::int64_t q = a / m;
    if ((a % m) != 0 && ((a < 0) != (m < 0)))
        --q;
    return q;
}

// Non-negative residue modulo m > 0.
constexpr std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t to_int64(const Integer& a)
{
    if (!a.fits_slong_p())
        throw std::overflow_error("integer " + a.get_str() + " exceeds 64-bit range");
    return a.get_si();
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// Inverse of a modulo prime p; a must be a unit.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t p)
{
    std::int64_t t = 0, new_t = 1, r = p, new_r = mod(a, p);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1)
        throw std::domain_error("not invertible modulo " + std::to_string(p));
    return mod(t, p);
}

} // namespace nilforge
