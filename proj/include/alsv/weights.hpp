#pragma once
// Weight families for the density series: descriptors, the CLI grammar, and
// per-term evaluation (float and exact rational) from factored integers.
//
// Every family is normalized so that the streamed series
//   sum over 2 <= n <= x with p(n) in S of summand(n)
// converges to the prime density delta(S). For the mu/c_n families that is
// the usual leading minus sign; for the theta families the minus is carried
// by the negative Eisenstein prefactor 4k/B_{2k}, which cancels against the
// matching constant inside r_Gamma(n).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "alsv/arith.hpp"
#include "alsv/factor.hpp"
#include "alsv/rational.hpp"

namespace alsv {

enum class WeightFamily {
  MuOverN,           // mu(n)/n
  MuOverPhi,         // mu(n)/phi(n)
  RamanujanOverPhi,  // c_n(m)/phi(n)
  RamanujanOverN,    // c_n(m)/n
  LambdaOverN,       // lambda(n)/n
  MuOverPsi,         // mu(n)/psi(n)
  MuOverSigma,       // mu(n)/sigma(n)
  MuOverG,           // mu(n)/g(n), g multiplicative via callback
  Theta,             // mu(n) n^{2k-2} / r_Gamma(n), Eisenstein prefactor folded in
};

// Value of a multiplicative denominator factor at p^e.
using MultiplicativeFn = std::function<Rational(uint64_t prime, uint32_t exp)>;

struct WeightSpec {
  WeightFamily family = WeightFamily::MuOverN;
  uint64_t m = 1;  // Ramanujan parameter
  Lattice lattice = Lattice::E8;
  MultiplicativeFn g;  // MuOverG only
  std::string g_name;  // descriptor token for g, e.g. "sigma_k=3"
  Rational prefactor{1};
  std::optional<Rational> alpha_hint;  // documented decay exponent of a(n)

  static WeightSpec mu_over_n();
  static WeightSpec mu_over_phi();
  static WeightSpec ramanujan_over_phi(uint64_t m);
  static WeightSpec ramanujan_over_n(uint64_t m);
  static WeightSpec lambda_over_n();
  static WeightSpec mu_over_psi();
  static WeightSpec mu_over_sigma();
  static WeightSpec mu_over_g(MultiplicativeFn g, std::string name,
                              std::optional<Rational> alpha = std::nullopt);
  static WeightSpec mu_over_sigma_k(uint32_t k);  // g(n) = sigma_k(n)/n^{k-1}
  static WeightSpec theta(Lattice lat);

  // Grammar: mu/n, mu/phi, lambda/n, mu/psi, mu/sigma, ramanujan/n:m=M,
  // ramanujan/phi:m=M, theta:e8, theta:e8e8, mu/g:sigma_k=K.
  static WeightSpec parse(const std::string& descriptor);
  std::string descriptor() const;

  // True for the families with denominator exactly n (the duality theorem's
  // hypothesis).
  bool denominator_is_n() const;
};

class WeightEvaluator {
 public:
  explicit WeightEvaluator(const WeightSpec& spec);

  // Cheap exact zero test, evaluated before any set-membership check.
  bool nonzero(const NClassification& cls, std::span<const PrimePower> factors) const;
  double summand(const NClassification& cls, std::span<const PrimePower> factors) const;
  Rational summand_exact(const NClassification& cls, std::span<const PrimePower> factors) const;

  const WeightSpec& spec() const { return spec_; }

 private:
  WeightSpec spec_;
  std::vector<PrimePower> m_factors_;  // Ramanujan families
  uint32_t two_k_ = 0;                 // theta families
};

}  // namespace alsv
