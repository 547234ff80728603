#pragma once
// Prime sets with membership predicates and exact analytic densities where
// known: arithmetic progressions, Kronecker-split primes, cyclotomic
// Frobenius classes, and the closure under union / complement / finite
// adjustment. Densities are exact rationals; sets without a known analytic
// density carry none and callers fall back to measured densities.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "alsv/factor.hpp"
#include "alsv/rational.hpp"

namespace alsv {

// Kronecker symbol (a|n), fully general n >= 0.
int kronecker_symbol(long long a, unsigned long long n);

class PrimeSet {
 public:
  PrimeSet() : PrimeSet(all()) {}

  // Membership for a prime p. The p(1) sentinel is never a member.
  bool contains(uint64_t p) const;
  const std::optional<Rational>& analytic_density() const { return density_; }
  std::string descriptor() const;

  static PrimeSet all();
  // p == l (mod k); requires gcd(k, l) = 1, 1 <= l <= k. Density 1/phi(k).
  static PrimeSet ap(uint64_t k, uint64_t l);
  // Primes p with p ∤ 2d and (d|p) = +1; d must not be 0 or a perfect
  // square. Density 1/2.
  static PrimeSet kronecker_split(int64_t d);
  // Frobenius class of l in Q(zeta_k): as ap(k, l) but excluding the
  // ramified primes p | k. Density 1/phi(k).
  static PrimeSet cyclotomic_class(uint64_t k, uint64_t l);
  // Density adds up when the parts are disjoint (the caller's contract).
  static PrimeSet union_of(std::vector<PrimeSet> parts);
  static PrimeSet complement(PrimeSet base);
  // Finitely many primes added/removed; density is unchanged.
  static PrimeSet finite_adjust(PrimeSet base, std::vector<uint64_t> added,
                                std::vector<uint64_t> removed);

  // Grammar: all | ap:k,l | kronecker:d | cyclo:k,l | complement:(...) |
  // union:(...);(...) | adjust:(...);add:p,..;remove:p,..
  static PrimeSet parse(const std::string& descriptor);

 private:
  struct Node;
  explicit PrimeSet(std::shared_ptr<const Node> node, std::optional<Rational> density)
      : node_(std::move(node)), density_(std::move(density)) {}
  std::shared_ptr<const Node> node_;
  std::optional<Rational> density_;
};

struct DensityCount {
  uint64_t in_set = 0;
  uint64_t primes = 0;
  double density() const { return primes ? static_cast<double>(in_set) / primes : 0.0; }
};

// pi_S(x) / pi(x) with the raw counts; x >= 2.
DensityCount empirical_density(const PrimeSet& set, uint64_t x, const FactorTable& table);
DensityCount empirical_density(const PrimeSet& set, uint64_t x,
                               uint64_t segment_size = kDefaultSegmentSize);

}  // namespace alsv
