#pragma once

// Exact integer/rational arithmetic helpers shared by the whole library.
// Everything is arbitrary precision (GMP); no floating point anywhere.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pentasum {

using Int = mpz_class;
using Rat = mpq_class;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Int pow_ui(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int pow2(unsigned long e) { return pow_ui(Int(2), e); }
inline Int pow5(unsigned long e) { return pow_ui(Int(5), e); }

// 2^e * 5^f
inline Int pow25(unsigned long e, unsigned long f) { return pow2(e) * pow5(f); }

inline Int sqr(const Int& x) { return x * x; }

// Largest e with p^e | n.  n must be nonzero, p >= 2.
inline unsigned long valuation(const Int& n, const Int& p) {
  if (n == 0) throw error("valuation: undefined for n = 0");
  if (p < 2) throw error("valuation: p must be >= 2");
  Int reduced;
  return mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

// n with all factors of p removed.
inline Int strip_factor(const Int& n, const Int& p) {
  if (n == 0) return 0;
  Int reduced;
  mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  return reduced;
}

inline bool is_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// Legendre symbol (a | l), l an odd prime.
inline int legendre(const Int& a, const Int& l) {
  if (l < 3 || !is_prime(l)) throw error("legendre: modulus must be an odd prime");
  return mpz_legendre(a.get_mpz_t(), l.get_mpz_t());
}

// Ascending primes in [lo, hi] that are not in `excluded`.
inline std::vector<long> primes_in(long lo, long hi,
                                   const std::set<long>& excluded = {}) {
  if (lo > hi) throw error("primes_in: lo > hi");
  std::vector<long> out;
  Int p = lo > 2 ? Int(lo - 1) : Int(1);
  for (;;) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (p > hi) break;
    long v = mpz_get_si(p.get_mpz_t());
    if (!excluded.count(v)) out.push_back(v);
  }
  return out;
}

// Evaluate a monic integer polynomial given low-to-high coefficients
// (leading 1 included) at t.  Used for N_{K/Q}(t - a) via charpoly(t).
inline Int eval_monic_poly(const std::vector<Int>& coeffs, const Int& t) {
  if (coeffs.size() < 2 || coeffs.back() != 1)
    throw error("eval_monic_poly: need a monic polynomial of degree >= 1");
  Int acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it)
    acc = acc * t + *it;
  return acc;
}

// Exact n-th root: returns r with r^n == x, or nullopt if x is not a
// perfect n-th power.  Negative x allowed for odd n.
inline std::optional<Int> exact_nth_root(const Int& x, unsigned long n) {
  if (n == 0) throw error("exact_nth_root: n must be >= 1");
  if (x < 0 && n % 2 == 0) return std::nullopt;
  Int r;
  int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), n);
  if (!exact) return std::nullopt;
  return r;
}

inline bool is_perfect_square(const Int& x) {
  return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int isqrt(const Int& x) {
  if (x < 0) throw error("isqrt: negative input");
  Int r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

// Deterministic pseudo-random big integers for property tests and the CLI's
// randomized suites (gmp's Mersenne-Twister based generator, explicit seed).
class IntRng {
 public:
  explicit IntRng(unsigned long seed) : state_(gmp_randinit_mt) {
    state_.seed(seed);
  }

  // Uniform in [0, 2^bits).
  Int bits(unsigned long nbits) { return state_.get_z_bits(nbits); }

  // Uniform in [0, m).
  Int below(const Int& m) { return state_.get_z_range(m); }

  // Uniform in [lo, hi] (inclusive).
  long range(long lo, long hi) {
    return lo + mpz_get_si(Int(state_.get_z_range(Int(hi - lo + 1))).get_mpz_t());
  }

  // Nonzero, mixed sign, up to `nbits` bits.
  Int signed_nonzero(unsigned long nbits) {
    Int v = bits(nbits);
    if (v == 0) v = 1;
    return range(0, 1) ? v : Int(-v);
  }

 private:
  gmp_randclass state_;
};

}  // namespace pentasum
