#include "alsv/arith.hpp"

#include <numeric>
#include <stdexcept>

namespace alsv {

namespace {

std::vector<PrimePower> trial_factorize(uint64_t n) {
  std::vector<PrimePower> f;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

Integer pow_int(uint64_t base, uint32_t exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return r;
}

}  // namespace

Integer sigma_k(uint64_t n, uint32_t k) {
  if (n == 0) throw std::domain_error("sigma_k: n must be >= 1");
  Integer s = 1;
  for (const auto& [p, e] : trial_factorize(n)) {
    if (k == 0) {
      s *= e + 1;
    } else {
      // (p^{k(e+1)} - 1) / (p^k - 1)
      Integer pk = pow_int(p, k);
      Integer geo = (pow_int(p, k * (e + 1)) - 1) / (pk - 1);
      s *= geo;
    }
  }
  return s;
}

uint64_t dedekind_psi(uint64_t n) {
  if (n == 0) throw std::domain_error("dedekind_psi: n must be >= 1");
  uint64_t psi = 1;
  for (const auto& [p, e] : trial_factorize(n)) {
    psi *= p + 1;
    for (uint32_t i = 1; i < e; ++i) psi *= p;
  }
  return psi;
}

int64_t ramanujan_sum(std::span<const PrimePower> n_factors, std::span<const PrimePower> m_factors) {
  // Hölder: c_n(m) = mu(n/g) phi(n) / phi(n/g), g = gcd(n, m).
  // Zero unless n/g is squarefree.
  int mu_sign = 1;
  uint64_t phi_n = 1, phi_ng = 1;
  for (const auto& [p, e] : n_factors) {
    uint32_t vm = 0;
    for (const auto& [q, f] : m_factors)
      if (q == p) {
        vm = f;
        break;
      }
    const uint32_t residual = e > vm ? e - vm : 0;  // v_p(n/g)
    if (residual >= 2) return 0;
    phi_n *= p - 1;
    for (uint32_t i = 1; i < e; ++i) phi_n *= p;
    if (residual == 1) {
      mu_sign = -mu_sign;
      phi_ng *= p - 1;
    }
  }
  return mu_sign * static_cast<int64_t>(phi_n / phi_ng);
}

int64_t ramanujan_sum(uint64_t n, uint64_t m) {
  if (n == 0 || m == 0) throw std::domain_error("ramanujan_sum: n, m must be >= 1");
  auto nf = trial_factorize(n);
  auto mf = trial_factorize(m);
  return ramanujan_sum(nf, mf);
}

namespace {

void divisors_rec(std::span<const PrimePower> f, size_t i, uint64_t d, std::vector<uint64_t>& out) {
  if (i == f.size()) {
    out.push_back(d);
    return;
  }
  uint64_t q = 1;
  for (uint32_t e = 0; e <= f[i].exp; ++e) {
    divisors_rec(f, i + 1, d * q, out);
    q *= f[i].prime;
  }
}

std::vector<uint64_t> divisors_of(uint64_t n) {
  std::vector<uint64_t> out;
  auto f = trial_factorize(n);
  divisors_rec(f, 0, 1, out);
  return out;
}

}  // namespace

uint64_t r4(uint64_t n) {
  if (n == 0) throw std::domain_error("r4: n must be >= 1");
  uint64_t s = 0;
  for (uint64_t d : divisors_of(n))
    if (d % 4 != 0) s += d;
  return 8 * s;
}

Integer r8(uint64_t n) {
  if (n == 0) throw std::domain_error("r8: n must be >= 1");
  Integer s = 0;
  for (uint64_t d : divisors_of(n)) {
    Integer cube = pow_int(d, 3);
    if ((n - d) % 2 == 0)
      s += cube;
    else
      s -= cube;
  }
  return 16 * s;
}

Rational theta_prefactor(Lattice lat) {
  const uint32_t k = lattice_half_weight(lat);
  const Rational& b2k = lat == Lattice::E8 ? kBernoulliB4 : kBernoulliB8;
  return Rational(static_cast<long>(4 * k)) / b2k;
}

Integer theta_coeff(Lattice lat, uint64_t n) {
  if (n == 0) throw std::domain_error("theta_coeff: n must be >= 1");
  const uint32_t k = lattice_half_weight(lat);
  const Rational c = -theta_prefactor(lat);  // 240 or 480
  return c.num() * sigma_k(n, 2 * k - 1);
}

std::vector<Rational> dirichlet_convolve(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw std::domain_error("dirichlet_convolve: length mismatch");
  if (a.size() < 2) throw std::domain_error("dirichlet_convolve: need values for n >= 1");
  const size_t n_max = a.size() - 1;
  std::vector<Rational> out(n_max + 1);
  for (size_t d = 1; d <= n_max; ++d) {
    if (a[d].sign() == 0) continue;
    for (size_t q = 1; d * q <= n_max; ++q) out[d * q] += a[d] * b[q];
  }
  return out;
}

std::vector<Rational> epsilon_seq(size_t n_max) {
  std::vector<Rational> v(n_max + 1);
  if (n_max >= 1) v[1] = 1;
  return v;
}

std::vector<Rational> mobius_seq(size_t n_max) {
  std::vector<Rational> v(n_max + 1);
  if (n_max >= 1) v[1] = 1;
  if (n_max >= 2) {
    FactorTable table(n_max);
    for (size_t n = 2; n <= n_max; ++n) v[n] = Rational(long{table.classify(n).mu});
  }
  return v;
}

std::vector<Rational> b_transform(std::span<const Rational> a) {
  if (a.size() < 2) throw std::domain_error("b_transform: need values for n >= 1");
  if (a[1] != Rational(1)) throw std::domain_error("b_transform: requires a(1) = 1");
  const size_t n_max = a.size() - 1;
  const auto mu_a = dirichlet_convolve(mobius_seq(n_max), a);

  std::vector<uint64_t> phi(n_max + 1, 1);
  if (n_max >= 2) {
    FactorTable table(n_max);
    for (size_t n = 2; n <= n_max; ++n) phi[n] = table.classify(n).phi;
  }

  std::vector<Rational> b(n_max + 1);
  for (size_t d = 1; d <= n_max; ++d) {
    if (mu_a[d].sign() == 0) continue;
    const Rational term = mu_a[d] * Rational::ratio(d, phi[d]);
    for (size_t n = d; n <= n_max; n += d) b[n] += term;
  }
  return b;
}

}  // namespace alsv
