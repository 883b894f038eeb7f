#include <doctest.h>
#include <kuhom/series.hpp>

using namespace kuhom;

TEST_CASE("m_series closed form, small cases") {
  const PSeries& s21 = m_series(2, 1, Convention::Unsigned);
  REQUIRE(s21.size() == 2);
  CHECK(s21.a(0) == LocalScalar(2));
  CHECK(s21.a(1) == LocalScalar(1));

  const PSeries& s22 = m_series(2, 2, Convention::Unsigned);
  REQUIRE(s22.size() == 4);
  CHECK(s22.a(0) == LocalScalar(4));
  CHECK(s22.a(1) == LocalScalar(6));
  CHECK(s22.a(2) == LocalScalar(4));
  CHECK(s22.a(3) == LocalScalar(1));

  const PSeries& sgn = m_series(2, 2, Convention::Signed);
  CHECK(sgn.a(0) == LocalScalar(4));
  CHECK(sgn.a(1) == LocalScalar(-6));
  CHECK(sgn.a(2) == LocalScalar(4));
  CHECK(sgn.a(3) == LocalScalar(-1));
}

TEST_CASE("m_series rejects bad input") {
  CHECK_THROWS_AS(m_series(4, 1, Convention::Unsigned), std::invalid_argument);
  CHECK_THROWS_AS(m_series(2, 0, Convention::Unsigned), std::invalid_argument);
}

TEST_CASE("a_0 is p^n and top coefficient is the unsigned unit") {
  for (long p : {2L, 3L, 5L}) {
    for (int n = 1; n <= 3; ++n) {
      const PSeries& s = m_series(p, n, Convention::Unsigned);
      CHECK(s.a(0) == LocalScalar(pow_z(p, n)));
      CHECK(s.a(s.g(n)) == LocalScalar(1));
    }
  }
}

TEST_CASE("Kummer valuation pattern of series coefficients") {
  for (long p : {2L, 3L, 5L}) {
    for (int n = 1; n <= 4; ++n) {
      const PSeries& s = m_series(p, n, Convention::Unsigned);
      mpz_class m = pow_z(p, n);
      for (long t = 0; t < static_cast<long>(s.size()); ++t) {
        long expect = carry_count(mpz_class(t + 1), m - (t + 1), p);
        CHECK(*valuation(s.a(t), p) == expect);
      }
      for (int i = 1; i <= n; ++i) CHECK(*valuation(s.a(s.g(i)), p) == n - i);
    }
  }
}

TEST_CASE("named_coefficient factorization") {
  NamedCoefficient nc = named_coefficient(2, 2, 1, Convention::Unsigned);
  CHECK(nc.unit == LocalScalar(3));
  CHECK(nc.p_power == 1);
  CHECK(nc.v_power == 1);

  nc = named_coefficient(2, 2, 3, Convention::Unsigned);
  CHECK(nc.unit == LocalScalar(1));
  CHECK(nc.p_power == 0);
  CHECK(nc.v_power == 3);

  nc = named_coefficient(3, 2, 2, Convention::Unsigned);
  CHECK(nc.unit == LocalScalar(28));
  CHECK(nc.p_power == 1);
  CHECK(nc.v_power == 2);
}

TEST_CASE("fgl_add unit axiom and doubling") {
  int order = 6;
  TruncSeries x = TruncSeries::x(order);
  TruncSeries zero(order);
  CHECK(fgl_add(x, zero, Convention::Signed, order) == x);

  TruncSeries two = fgl_add(x, x, Convention::Signed, order);
  CHECK(two.c[1] == KuPoly::monomial(LocalScalar(2), 0));
  CHECK(two.c[2] == KuPoly::monomial(LocalScalar(-1), 1));
  for (int d = 3; d <= order; ++d) CHECK(two.c[d].is_zero());
}

TEST_CASE("iterative FGL oracle agrees with closed form") {
  for (Convention conv : {Convention::Unsigned, Convention::Signed}) {
    for (long p : {2L, 3L}) {
      for (int n = 1; n <= 2; ++n) {
        const PSeries& s = m_series(p, n, conv);
        int order = static_cast<int>(s.size());
        TruncSeries closed = series_to_trunc(s, order);
        TruncSeries iter = m_series_iterative(p, n, conv);
        CHECK(closed == iter);
      }
    }
  }
}

TEST_CASE("series composition: [p^2] = [p] o [p]") {
  for (Convention conv : {Convention::Unsigned, Convention::Signed}) {
    for (long p : {2L, 3L, 5L}) {
      const PSeries& inner = m_series(p, 1, conv);
      const PSeries& outer = m_series(p, 2, conv);
      int order = static_cast<int>(outer.size());
      TruncSeries t = series_to_trunc(inner, order);
      TruncSeries composed = compose_series(inner, t, order);
      CHECK(composed == series_to_trunc(outer, order));
    }
  }
}

TEST_CASE("conventions are exchanged by v -> -v") {
  for (long p : {2L, 3L}) {
    for (int n = 1; n <= 3; ++n) {
      const PSeries& u = m_series(p, n, Convention::Unsigned);
      const PSeries& s = m_series(p, n, Convention::Signed);
      for (long t = 0; t < static_cast<long>(u.size()); ++t) {
        LocalScalar flipped = (t % 2 == 0) ? u.a(t) : -u.a(t);
        CHECK(flipped == s.a(t));
      }
    }
  }
}
