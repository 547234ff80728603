#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <numeric>

#include "alsv/prime_sets.hpp"

using namespace alsv;

TEST_CASE("ap_set construction") {
  CHECK(*PrimeSet::ap(4, 1).analytic_density() == Rational(1, 2));
  CHECK(*PrimeSet::ap(1, 1).analytic_density() == Rational(1));
  CHECK_THROWS_AS(PrimeSet::ap(4, 2), std::domain_error);
  CHECK_THROWS_AS(PrimeSet::ap(4, 5), std::domain_error);
  CHECK_THROWS_AS(PrimeSet::ap(4, 0), std::domain_error);
  CHECK(*PrimeSet::ap(5, 2).analytic_density() == Rational(1, 4));
}

TEST_CASE("contains") {
  CHECK(PrimeSet::ap(4, 1).contains(13));
  CHECK(!PrimeSet::ap(4, 1).contains(7));
  CHECK(PrimeSet::ap(1, 1).contains(2));
  CHECK(PrimeSet::kronecker_split(5).contains(11));  // 4^2 = 16 = 5 (mod 11)
  CHECK(!PrimeSet::kronecker_split(5).contains(2));
  CHECK(!PrimeSet::kronecker_split(5).contains(5));
  for (const auto& set : {PrimeSet::all(), PrimeSet::ap(4, 1), PrimeSet::kronecker_split(5),
                          PrimeSet::complement(PrimeSet::ap(4, 1))})
    CHECK(!set.contains(kSpfInfinity));
}

TEST_CASE("kronecker symbol against direct quadratic residues") {
  const auto primes = primes_upto(200);
  for (long long d : {-11, -7, -4, -3, -1, 2, 3, 5, 6, 7, 10, 13}) {
    for (uint32_t p : primes) {
      if (p == 2) continue;
      if (((d % p) + p) % p == 0) {
        CHECK(kronecker_symbol(d, p) == 0);
        continue;
      }
      bool residue = false;
      for (uint64_t a = 1; a < p; ++a)
        if (a * a % p == static_cast<uint64_t>(((d % p) + p) % p)) {
          residue = true;
          break;
        }
      CHECK(kronecker_symbol(d, p) == (residue ? 1 : -1));
    }
  }
  CHECK(kronecker_symbol(1, 0) == 1);
  CHECK(kronecker_symbol(2, 0) == 0);
}

TEST_CASE("kronecker_split rejects square and zero d") {
  CHECK_THROWS_AS(PrimeSet::kronecker_split(0), std::domain_error);
  CHECK_THROWS_AS(PrimeSet::kronecker_split(9), std::domain_error);
  CHECK_THROWS_AS(PrimeSet::kronecker_split(1), std::domain_error);
  CHECK_NOTHROW(PrimeSet::kronecker_split(-4));
}

TEST_CASE("empirical density examples") {
  FactorTable t(100);
  const auto all = empirical_density(PrimeSet::all(), 100, t);
  CHECK(all.in_set == 25);
  CHECK(all.primes == 25);
  CHECK(all.density() == 1.0);

  const auto ap41 = empirical_density(PrimeSet::ap(4, 1), 100, t);
  CHECK(ap41.in_set == 11);
  CHECK(ap41.density() == doctest::Approx(0.44));

  const auto ap43 = empirical_density(PrimeSet::ap(4, 3), 100, t);
  CHECK(ap43.in_set == 13);
  CHECK(ap41.in_set + ap43.in_set + 1 == all.primes);  // p = 2 in neither class

  // segmented variant agrees with the table variant
  const auto seg = empirical_density(PrimeSet::ap(4, 1), 100);
  CHECK(seg.in_set == ap41.in_set);
  CHECK(seg.primes == ap41.primes);

  CHECK_THROWS_AS(empirical_density(PrimeSet::all(), 1, t), std::domain_error);
}

TEST_CASE("residue classes partition the primes") {
  const uint64_t xs[] = {10'000, 100'000, 1'000'000};
  FactorTable t(1'000'000);
  for (uint64_t k : {3, 4, 5, 8}) {
    std::vector<PrimeSet> classes;
    for (uint64_t l = 1; l <= k; ++l)
      if (std::gcd(k, l) == 1) classes.push_back(PrimeSet::ap(k, l));
    for (uint64_t x : xs) {
      uint64_t total = 0, ramified = 0, primes = 0;
      for (uint64_t n = 2; n <= x; ++n) {
        if (!t.is_prime(n)) continue;
        ++primes;
        if (k % n == 0) ++ramified;
        for (const auto& c : classes)
          if (c.contains(n)) ++total;
      }
      CHECK(total + ramified == primes);
    }
  }
}

TEST_CASE("empirical densities approach 1/phi(k) at 1e7") {
  // One streaming pass; every (k, l) class with k <= 8 is counted mod 840.
  const uint64_t x = 10'000'000;
  std::map<std::pair<uint64_t, uint64_t>, uint64_t> counts;
  uint64_t primes = 0;
  auto stream = stream_segments(2, x + 1);
  while (auto seg = stream.next()) {
    for (const auto& rec : seg->records) {
      if (!rec.is_prime()) continue;
      ++primes;
      for (uint64_t k = 1; k <= 8; ++k) ++counts[{k, rec.n % k}];
    }
  }
  for (uint64_t k = 1; k <= 8; ++k) {
    for (uint64_t l = 1; l <= k; ++l) {
      if (std::gcd(k, l) != 1) continue;
      const double density = static_cast<double>(counts[{k, l % k}]) / static_cast<double>(primes);
      const double target = PrimeSet::ap(k, l).analytic_density()->to_double();
      CHECK(std::abs(density - target) < 0.01);
    }
  }
}

TEST_CASE("complement and union densities") {
  const auto ap = PrimeSet::ap(4, 1);
  CHECK(*PrimeSet::complement(ap).analytic_density() == Rational(1, 2));
  CHECK(*PrimeSet::complement(PrimeSet::all()).analytic_density() == Rational(0));

  const auto u = PrimeSet::union_of({PrimeSet::ap(4, 1), PrimeSet::ap(4, 3)});
  CHECK(*u.analytic_density() == Rational(1));
  CHECK(u.contains(5));
  CHECK(u.contains(7));
  CHECK(!u.contains(2));

  const auto adj = PrimeSet::finite_adjust(PrimeSet::ap(4, 1), {2}, {5});
  CHECK(*adj.analytic_density() == Rational(1, 2));
  CHECK(adj.contains(2));
  CHECK(!adj.contains(5));
  CHECK(adj.contains(13));
}

TEST_CASE("cyclotomic classes agree with ap away from ramified primes") {
  const auto cyclo = PrimeSet::cyclotomic_class(5, 2);
  const auto ap = PrimeSet::ap(5, 2);
  CHECK(*cyclo.analytic_density() == Rational(1, 4));
  auto stream = stream_segments(2, 1'000'001);
  while (auto seg = stream.next())
    for (const auto& rec : seg->records) {
      if (!rec.is_prime() || 5 % rec.n == 0) continue;
      REQUIRE(cyclo.contains(rec.n) == ap.contains(rec.n));
    }
  CHECK(!cyclo.contains(5));
}

TEST_CASE("descriptor round-trip") {
  const std::string descriptors[] = {
      "all",
      "ap:4,1",
      "kronecker:5",
      "kronecker:-11",
      "cyclo:5,2",
      "complement:(ap:4,1)",
      "union:(ap:4,1);(ap:4,3)",
      "union:(ap:8,1);(complement:(kronecker:5));(cyclo:3,2)",
      "adjust:(ap:4,1);add:2;remove:5,13",
  };
  for (const auto& d : descriptors) {
    const auto set = PrimeSet::parse(d);
    CHECK(set.descriptor() == d);
    // parse(descriptor()) is stable too
    CHECK(PrimeSet::parse(set.descriptor()).descriptor() == d);
  }

  for (const std::string bad : {"", "nope", "ap:4", "ap:4,2", "kronecker:", "kronecker:4",
                                "union:(ap:4,1);", "complement:(ap:4,1)x", "cyclo:a,b"}) {
    CHECK_THROWS(PrimeSet::parse(bad));
  }

  // membership semantics survive the round trip
  const auto original = PrimeSet::union_of(
      {PrimeSet::ap(8, 1), PrimeSet::complement(PrimeSet::kronecker_split(5))});
  const auto reparsed = PrimeSet::parse(original.descriptor());
  for (uint32_t p : primes_upto(2000)) CHECK(original.contains(p) == reparsed.contains(p));
  CHECK(original.analytic_density().has_value() == reparsed.analytic_density().has_value());
}
