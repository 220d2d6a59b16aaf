#pragma once

// Arithmetic in F_ell for small odd primes ell (the sieve never needs
// ell beyond a few thousand).  Everything fits in uint64 with __int128
// intermediates; a precomputed quadratic-character table makes point
// counting over F_ell an O(ell) scan per curve.

#include <cstdint>
#include <vector>

#include "pentasum/arith.hpp"

namespace pentasum {

class Fp {
 public:
  explicit Fp(uint64_t ell) : ell_(ell), chi_(ell, 0) {
    if (ell < 3) throw error("Fp: need an odd prime");
    // chi_[x] = quadratic character of x: 0, 1 or (ell-1) standing for -1.
    for (uint64_t x = 1; x < ell; ++x) chi_[mul(x, x)] = 1;
    for (uint64_t x = 1; x < ell; ++x)
      if (chi_[x] == 0) chi_[x] = 2;  // marker for non-residue
  }

  uint64_t ell() const { return ell_; }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= ell_ ? s - ell_ : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const {
    return a >= b ? a - b : a + ell_ - b;
  }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : ell_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % ell_);
  }
  uint64_t pow(uint64_t a, uint64_t e) const {
    uint64_t r = 1 % ell_;
    a %= ell_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  uint64_t inv(uint64_t a) const {
    if (a % ell_ == 0) throw error("Fp: inverse of zero");
    return pow(a, ell_ - 2);
  }

  // Reduce an arbitrary big integer into [0, ell).
  uint64_t reduce(const Int& x) const {
    Int r = x % static_cast<long>(ell_);
    if (r < 0) r += static_cast<long>(ell_);
    return mpz_get_ui(r.get_mpz_t());
  }

  // Legendre character as an int in {-1, 0, 1}.
  int chi(uint64_t a) const {
    uint64_t v = chi_[a % ell_];
    return v == 0 ? 0 : (v == 1 ? 1 : -1);
  }

  bool is_square(uint64_t a) const { return chi_[a % ell_] != 2; }

  // All nonzero squares of F_ell, ascending.
  std::vector<uint64_t> nonzero_squares() const {
    std::vector<uint64_t> out;
    for (uint64_t x = 1; x < ell_; ++x)
      if (chi_[x] == 1) out.push_back(x);
    return out;
  }

 private:
  uint64_t ell_;
  std::vector<uint8_t> chi_;
};

// Multiplicative order of a mod ell.
inline uint64_t mult_order(const Fp& F, uint64_t a) {
  a %= F.ell();
  if (a == 0) throw error("mult_order: zero");
  uint64_t v = a, n = 1;
  while (v != 1) {
    v = F.mul(v, a);
    ++n;
    if (n > F.ell()) throw error("mult_order: did not terminate");
  }
  return n;
}

}  // namespace pentasum
