#include <doctest.h>
#include <kuhom/local_scalar.hpp>

#include <random>

using namespace kuhom;

TEST_CASE("valuation") {
  CHECK(*valuation(LocalScalar(18), 2) == 1);
  CHECK(!valuation(LocalScalar(0), 3).has_value());
  CHECK(*valuation(LocalScalar(6, 5), 2) == 1);
  CHECK(*valuation(LocalScalar(1, 9), 2) == 0);
}

TEST_CASE("unit_part") {
  CHECK(unit_part(LocalScalar(18), 2) == LocalScalar(9));
  CHECK(unit_part(LocalScalar(-6), 2) == LocalScalar(-3));
  CHECK(unit_part(LocalScalar(7, 2), 3) == LocalScalar(7, 2));
  CHECK_THROWS_AS(unit_part(LocalScalar(0), 2), std::domain_error);
}

TEST_CASE("invert_unit") {
  CHECK(invert_unit(LocalScalar(9), 2) == LocalScalar(1, 9));
  CHECK_THROWS_AS(invert_unit(LocalScalar(2), 2), std::domain_error);
  CHECK(LocalScalar(2, 5) * LocalScalar(5, 2) == LocalScalar(1));
}

TEST_CASE("reduce_mod") {
  CHECK(reduce_mod(LocalScalar(1, 9), 2, 4) == 9);  // 9*9 = 81 = 1 mod 16
  CHECK(reduce_mod(LocalScalar(6), 2, 2) == 2);
  CHECK(reduce_mod(LocalScalar(0), 3, 3) == 0);
  CHECK(reduce_mod(LocalScalar(-1), 2, 3) == 7);
}

TEST_CASE("canonicalization makes equality structural") {
  CHECK(LocalScalar(2, 4) == LocalScalar(1, 2));
  CHECK(LocalScalar(3, -6) == LocalScalar(-1, 2));
  CHECK(LocalScalar(0, 7) == LocalScalar(0));
  CHECK(LocalScalar(3, -6).den() == 2);
}

TEST_CASE("valuation is additive and ultrametric") {
  std::mt19937_64 rng(7);
  auto rand_scalar = [&](long p) {
    std::uniform_int_distribution<long> num(-50, 50);
    long dens[] = {1, 3, 5, 7, 9, 11};
    long d = dens[rng() % 6];
    while (d % p == 0) d = dens[rng() % 6];
    return LocalScalar(num(rng), d);
  };
  for (long p : {2L, 3L, 5L}) {
    for (int it = 0; it < 200; ++it) {
      LocalScalar a = rand_scalar(p), b = rand_scalar(p);
      if (a.is_zero() || b.is_zero()) continue;
      CHECK(*valuation(a * b, p) == *valuation(a, p) + *valuation(b, p));
      LocalScalar s = a + b;
      long lo = std::min(*valuation(a, p), *valuation(b, p));
      if (!s.is_zero()) CHECK(*valuation(s, p) >= lo);
      if (*valuation(a, p) != *valuation(b, p)) CHECK(*valuation(s, p) == lo);
    }
  }
}

TEST_CASE("invert_unit is an exact inverse") {
  for (long p : {2L, 3L, 5L}) {
    for (long n = -20; n <= 20; ++n) {
      if (n == 0) continue;
      LocalScalar u = unit_part(LocalScalar(n, 7 % p == 0 ? 11 : 7), p);
      CHECK(invert_unit(u, p) * u == LocalScalar(1));
    }
  }
}

TEST_CASE("reduce_mod is a ring homomorphism") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-30, 30);
  for (long p : {2L, 3L}) {
    mpz_class mod = pow_z(p, 5);
    for (int it = 0; it < 100; ++it) {
      LocalScalar a(num(rng), p == 2 ? 3 : 4), b(num(rng), p == 2 ? 5 : 7);
      CHECK(reduce_mod(a + b, p, 5) == (reduce_mod(a, p, 5) + reduce_mod(b, p, 5)) % mod);
      CHECK(reduce_mod(a * b, p, 5) == (reduce_mod(a, p, 5) * reduce_mod(b, p, 5)) % mod);
    }
  }
}

TEST_CASE("carry_count matches binomial valuations") {
  for (long p : {2L, 3L, 5L}) {
    for (long n = 1; n <= 4; ++n) {
      mpz_class m = pow_z(p, n);
      for (long r = 1; r < m; ++r) {
        mpz_class binom = binomial(m, static_cast<unsigned long>(r));
        LocalScalar s(binom);
        CHECK(*valuation(s, p) == carry_count(mpz_class(r), m - r, p));
      }
    }
  }
}
