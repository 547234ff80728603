#pragma once
// Independent reference implementations used only to cross-check the fast
// paths: trial division, the defining exponential sum for c_n(m), brute-force
// sum-of-squares representation counts, direct E8 lattice enumeration, and
// the closed form of the b-transform. Deliberately naive.

#include <cstdint>
#include <span>
#include <vector>

#include "alsv/factor.hpp"
#include "alsv/rational.hpp"

namespace alsv::oracles {

// Pure trial division, no sieve involved.
uint64_t smallest_prime_factor(uint64_t n);
NClassification classify_by_trial_division(uint64_t n);

// c_n(m) as the literal sum of e^(2*pi*i*q*m/n) over q <= n coprime to n.
struct ExponentialSum {
  long long rounded_real = 0;
  double real = 0;
  double imag_abs = 0;
};
ExponentialSum ramanujan_exponential(uint64_t n, uint64_t m);

// counts[v] = #{(m_1..m_k) in Z^k : sum m_i^2 = v} for v <= limit,
// k in {1, 2, 4, 8}, by iterated convolution.
std::vector<uint64_t> sum_of_squares_counts(uint32_t k, uint64_t limit);

// Number of E8 lattice vectors of squared norm `norm2` (norm2 <= 8), by
// direct enumeration of the integer and half-integer coordinate branches.
uint64_t e8_vector_count(uint64_t norm2);

// Theta coefficients of E8+E8 from enumerated E8 counts (r(0) = 1).
uint64_t e8_plus_e8_count(uint64_t n, std::span<const uint64_t> e8_counts_by_n);

// b(n) = sum over e | n with gcd(e, n/e) = 1 of (e/phi(e)) a(e)
// prod_{p | n/e} 1/(1 - p).
Rational b_closed_form(uint64_t n, std::span<const Rational> a, const FactorTable& table);

}  // namespace alsv::oracles
