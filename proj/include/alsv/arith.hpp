#pragma once
// Catalog of multiplicative arithmetic functions: divisor sums, Dedekind psi,
// Ramanujan sums (Hölder closed form), sum-of-squares representation counts,
// even unimodular lattice theta coefficients, Dirichlet convolution and the
// b-transform on exact rational sequences.

#include <cstdint>
#include <span>
#include <vector>

#include "alsv/factor.hpp"
#include "alsv/rational.hpp"

namespace alsv {

// sigma_k(n) = sum of d^k over d | n. Arbitrary-precision: sigma_7 already
// overflows 64 bits near n = 10^3.
Integer sigma_k(uint64_t n, uint32_t k);

// psi(n) = n * prod_{p|n} (1 + 1/p).
uint64_t dedekind_psi(uint64_t n);

// Ramanujan sum c_n(m) via Hölder's identity mu(n/g) * phi(n) / phi(n/g),
// g = gcd(n, m). The defining exponential sum is kept as a test oracle only.
int64_t ramanujan_sum(uint64_t n, uint64_t m);
int64_t ramanujan_sum(std::span<const PrimePower> n_factors, std::span<const PrimePower> m_factors);

// Representations of n as an ordered sum of 4 / 8 squares:
// r4(n) = 8 * sum_{d|n, 4 ∤ d} d, r8(n) = 16 * sum_{d|n} (-1)^(n-d) d^3.
uint64_t r4(uint64_t n);
Integer r8(uint64_t n);

// Even unimodular lattices whose theta series is an Eisenstein series:
// dim 8 (E8) and dim 16 (E8+E8, or the odd cousin Gamma16 with the same
// theta function).
enum class Lattice { E8, E8PlusE8OrGamma16 };

inline constexpr uint32_t lattice_half_weight(Lattice lat) {  // k = dim/4
  return lat == Lattice::E8 ? 2 : 4;
}

// Signed Bernoulli numbers; fixed here so the Eisenstein prefactor sign is
// pinned rather than convention-dependent.
inline const Rational kBernoulliB4{-1, 30};
inline const Rational kBernoulliB8{-1, 30};

// 4k / B_{2k}: -240 for E8, -480 for the 16-dimensional lattices.
Rational theta_prefactor(Lattice lat);

// r_Gamma(n) = -(4k/B_{2k}) * sigma_{2k-1}(n): 240*sigma_3 resp. 480*sigma_7.
Integer theta_coeff(Lattice lat, uint64_t n);

// Sequences are 1-indexed: v[0] is unused, v[n] is the value at n.
// (a*b)(n) = sum_{d|n} a(d) b(n/d); inputs must have equal length.
std::vector<Rational> dirichlet_convolve(std::span<const Rational> a, std::span<const Rational> b);

// Identity element of Dirichlet convolution (1 at n=1, 0 elsewhere).
std::vector<Rational> epsilon_seq(size_t n_max);
// mu as a rational sequence.
std::vector<Rational> mobius_seq(size_t n_max);

// b(n) = sum_{d|n} (mu*a)(d) d/phi(d). Requires a(1) = 1. Satisfies
// (mu*a)(n)/phi(n) = (mu*b)(n)/n for all n.
std::vector<Rational> b_transform(std::span<const Rational> a);

}  // namespace alsv
