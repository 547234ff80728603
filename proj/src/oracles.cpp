#include "alsv/oracles.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace alsv::oracles {

uint64_t smallest_prime_factor(uint64_t n) {
  if (n < 2) throw std::domain_error("smallest_prime_factor: n must be >= 2");
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

NClassification classify_by_trial_division(uint64_t n) {
  if (n == 0) throw std::domain_error("classify: n must be >= 1");
  NClassification c;
  c.n = n;
  if (n == 1) return c;
  uint64_t rem = n;
  bool squarefree = true;
  uint32_t distinct = 0;
  c.phi = 1;
  for (uint64_t p = 2; p * p <= rem; ++p) {
    if (rem % p != 0) continue;
    uint32_t e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    if (distinct == 0) c.spf = p;
    c.lpf = p;
    c.phi *= p - 1;
    for (uint32_t i = 1; i < e; ++i) c.phi *= p;
    c.big_omega += e;
    if (e > 1) squarefree = false;
    ++distinct;
  }
  if (rem > 1) {
    if (distinct == 0) c.spf = rem;
    c.lpf = rem;
    c.phi *= rem - 1;
    c.big_omega += 1;
    ++distinct;
  }
  c.mu = squarefree ? (distinct % 2 == 0 ? 1 : -1) : 0;
  c.lambda = c.big_omega % 2 == 0 ? 1 : -1;
  return c;
}

ExponentialSum ramanujan_exponential(uint64_t n, uint64_t m) {
  if (n == 0 || m == 0) throw std::domain_error("ramanujan_exponential: n, m must be >= 1");
  long double re = 0, im = 0;
  for (uint64_t q = 1; q <= n; ++q) {
    if (std::gcd(q, n) != 1) continue;
    // e^(2 pi i q m / n); reduce the phase before multiplying out.
    const long double angle =
        2.0L * std::numbers::pi_v<long double> * static_cast<long double>((q * m) % n) /
        static_cast<long double>(n);
    re += std::cos(angle);
    im += std::sin(angle);
  }
  ExponentialSum s;
  s.real = static_cast<double>(re);
  s.imag_abs = static_cast<double>(std::fabs(im));
  s.rounded_real = std::llround(static_cast<double>(re));
  return s;
}

std::vector<uint64_t> sum_of_squares_counts(uint32_t k, uint64_t limit) {
  if (k != 1 && k != 2 && k != 4 && k != 8)
    throw std::domain_error("sum_of_squares_counts: k must be 1, 2, 4 or 8");
  std::vector<uint64_t> r1(limit + 1, 0);
  for (uint64_t m = 0; m * m <= limit; ++m) r1[m * m] += m == 0 ? 1 : 2;
  auto convolve = [limit](const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    std::vector<uint64_t> c(limit + 1, 0);
    for (uint64_t i = 0; i <= limit; ++i) {
      if (a[i] == 0) continue;
      for (uint64_t j = 0; i + j <= limit; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  auto counts = r1;
  for (uint32_t doubled = 1; doubled < k; doubled *= 2) counts = convolve(counts, counts);
  return counts;
}

uint64_t e8_vector_count(uint64_t norm2) {
  if (norm2 > 8) throw std::domain_error("e8_vector_count: supported for norm^2 <= 8");
  uint64_t count = 0;

  // Integer branch: x in Z^8, sum x_i even, sum x_i^2 = norm2.
  {
    const int64_t bound = 2;  // |x_i| <= 2 suffices for norm2 <= 8 (3^2 > 8)
    int64_t x[8];
    auto rec = [&](auto&& self, int i, int64_t sum, uint64_t sq) -> void {
      if (sq > norm2) return;
      if (i == 8) {
        if (sq == norm2 && sum % 2 == 0) ++count;
        return;
      }
      for (int64_t v = -bound; v <= bound; ++v) {
        x[i] = v;
        self(self, i + 1, sum + v, sq + static_cast<uint64_t>(v * v));
      }
    };
    rec(rec, 0, 0, 0);
  }

  // Half-integer branch: x_i = h_i / 2 with h_i odd; sum h_i^2 = 4*norm2 and
  // sum x_i even means sum h_i = 0 (mod 4).
  {
    const uint64_t target = 4 * norm2;
    int64_t h[8];
    auto rec = [&](auto&& self, int i, int64_t sum, uint64_t sq) -> void {
      if (sq > target) return;
      if (i == 8) {
        if (sq == target && ((sum % 4) + 4) % 4 == 0) ++count;
        return;
      }
      for (int64_t v = -5; v <= 5; v += 2) {
        h[i] = v;
        self(self, i + 1, sum + v, sq + static_cast<uint64_t>(v * v));
      }
    };
    rec(rec, 0, 0, 0);
  }
  return count;
}

uint64_t e8_plus_e8_count(uint64_t n, std::span<const uint64_t> e8_counts_by_n) {
  // r(u + v = n) with r(0) = 1 on each factor; e8_counts_by_n[j] = r_E8(j).
  if (n > e8_counts_by_n.size()) throw std::domain_error("e8_plus_e8_count: n out of range");
  auto r = [&](uint64_t j) -> uint64_t { return j == 0 ? 1 : e8_counts_by_n[j - 1]; };
  uint64_t total = 0;
  for (uint64_t j = 0; j <= n; ++j) total += r(j) * r(n - j);
  return total;
}

Rational b_closed_form(uint64_t n, std::span<const Rational> a, const FactorTable& table) {
  if (n == 0 || n >= a.size()) throw std::domain_error("b_closed_form: n out of range");
  Rational b(0);
  for (uint64_t e = 1; e <= n; ++e) {
    if (n % e != 0) continue;
    const uint64_t cofactor = n / e;
    if (std::gcd(e, cofactor) != 1) continue;
    if (a[e].sign() == 0) continue;
    Rational term = a[e];
    if (e > 1) term *= Rational::ratio(e, table.classify(e).phi);
    if (cofactor > 1) {
      for (const auto& [p, exp] : table.factorize(cofactor))
        term *= Rational(Integer(1), Integer(1) - Integer(static_cast<unsigned long>(p)));
    }
    b += term;
  }
  return b;
}

}  // namespace alsv::oracles
