#include <catch2/catch_amalgamated.hpp>

#include "pentasum/arith.hpp"

using namespace pentasum;

TEST_CASE("valuation on fixed values", "[arith]") {
  CHECK(valuation(Int(48), Int(2)) == 4);
  CHECK(valuation(Int(243), Int(5)) == 0);
  CHECK(valuation(Int(250), Int(5)) == 3);
  CHECK(valuation(Int(-96), Int(2)) == 5);
  CHECK(valuation(Int(1), Int(7)) == 0);
  CHECK_THROWS_AS(valuation(Int(0), Int(2)), error);
  CHECK_THROWS_AS(valuation(Int(10), Int(1)), error);
}

TEST_CASE("valuation properties", "[arith]") {
  IntRng rng(20240517);
  for (int i = 0; i < 200; ++i) {
    Int n = rng.signed_nonzero(64);
    for (long p : {2L, 3L, 5L, 7L}) {
      unsigned long v = valuation(n, p);
      Int pv = pow_ui(Int(p), v);
      CHECK(n % pv == 0);
      CHECK((n / pv) % p != 0);
    }
  }
}

TEST_CASE("legendre symbol on fixed values", "[arith]") {
  CHECK(legendre(Int(-1), Int(7)) == -1);
  CHECK(legendre(Int(0), Int(11)) == 0);
  CHECK(legendre(Int(4), Int(13)) == 1);
  CHECK(legendre(Int(2), Int(7)) == 1);
  CHECK(legendre(Int(3), Int(7)) == -1);
  CHECK(legendre(Int(10), Int(11)) == -1);
  CHECK_THROWS_AS(legendre(Int(3), Int(8)), error);
  CHECK_THROWS_AS(legendre(Int(3), Int(2)), error);
}

TEST_CASE("legendre symbol is multiplicative and detects squares", "[arith]") {
  IntRng rng(99173);
  const long ells[] = {11, 13, 17, 19, 23, 29};
  for (long l : ells) {
    // Every nonzero square is a QR; multiplicativity on random pairs.
    for (long a = 1; a < l; ++a) {
      CHECK(legendre(Int(a) * a, Int(l)) == 1);
    }
    for (int i = 0; i < 50; ++i) {
      Int a = rng.below(Int(l));
      Int b = rng.below(Int(l));
      CHECK(legendre(a * b, Int(l)) == legendre(a, Int(l)) * legendre(b, Int(l)));
    }
  }
}

TEST_CASE("primes_in enumerates and filters", "[arith]") {
  std::set<long> ex{2, 3, 5, 7};
  CHECK(primes_in(11, 19, ex) == std::vector<long>{11, 13, 17, 19});
  CHECK(primes_in(2, 10, ex).empty());
  CHECK(primes_in(2, 10) == std::vector<long>{2, 3, 5, 7});

  auto sieve_range = primes_in(11, 59, ex);
  CHECK(sieve_range.size() == 13);
  CHECK(sieve_range.front() == 11);
  CHECK(sieve_range.back() == 59);
  for (long p : sieve_range) CHECK(is_prime(Int(p)));
  CHECK(std::is_sorted(sieve_range.begin(), sieve_range.end()));
  CHECK_THROWS_AS(primes_in(10, 5), error);
}

TEST_CASE("eval_monic_poly on fixed values", "[arith]") {
  // x - 2 at 5
  CHECK(eval_monic_poly({Int(-2), Int(1)}, Int(5)) == 3);
  // x^2 - 2 at 0
  CHECK(eval_monic_poly({Int(-2), Int(0), Int(1)}, Int(0)) == -2);
  // x^2 + x - 1 at 3
  CHECK(eval_monic_poly({Int(-1), Int(1), Int(1)}, Int(3)) == 11);
  // Degenerate / non-monic inputs are rejected.
  CHECK_THROWS_AS(eval_monic_poly({Int(1)}, Int(3)), error);
  CHECK_THROWS_AS(eval_monic_poly({Int(1), Int(2)}, Int(3)), error);
}

TEST_CASE("eval_monic_poly matches direct expansion", "[arith]") {
  IntRng rng(777);
  for (int i = 0; i < 100; ++i) {
    int deg = static_cast<int>(rng.range(1, 6));
    std::vector<Int> coeffs;
    for (int j = 0; j < deg; ++j) coeffs.push_back(rng.signed_nonzero(20));
    coeffs.push_back(1);
    Int t = rng.signed_nonzero(20);
    Int expect = 0;
    Int tp = 1;
    for (int j = 0; j <= deg; ++j) {
      expect += coeffs[j] * tp;
      tp *= t;
    }
    CHECK(eval_monic_poly(coeffs, t) == expect);
  }
}

TEST_CASE("powers and roots", "[arith]") {
  CHECK(pow2(10) == 1024);
  CHECK(pow5(3) == 125);
  CHECK(pow25(3, 1) == 40);
  CHECK(pow_ui(Int(-2), 5) == -32);

  CHECK(exact_nth_root(Int(243), 5).value() == 3);
  CHECK(exact_nth_root(Int(-243), 5).value() == -3);
  CHECK(!exact_nth_root(Int(244), 5).has_value());
  CHECK(!exact_nth_root(Int(-4), 2).has_value());
  CHECK(exact_nth_root(Int(0), 3).value() == 0);
  CHECK(exact_nth_root(Int(1), 17).value() == 1);

  CHECK(is_perfect_square(Int(0)));
  CHECK(is_perfect_square(Int(1849)));  // 43^2
  CHECK(!is_perfect_square(Int(1850)));
  CHECK(!is_perfect_square(Int(-4)));

  CHECK(isqrt(Int(1849)) == 43);
  CHECK(isqrt(Int(1850)) == 43);
}

TEST_CASE("strip_factor removes exactly the named prime", "[arith]") {
  CHECK(strip_factor(Int(600), Int(2)) == 75);
  CHECK(strip_factor(Int(600), Int(5)) == 24);
  CHECK(strip_factor(Int(-600), Int(5)) == -24);
  CHECK(strip_factor(Int(0), Int(2)) == 0);
}

TEST_CASE("deterministic rng reproduces itself", "[arith]") {
  IntRng a(42), b(42);
  for (int i = 0; i < 20; ++i) {
    CHECK(a.bits(64) == b.bits(64));
    CHECK(a.range(0, 100) == b.range(0, 100));
  }
}
