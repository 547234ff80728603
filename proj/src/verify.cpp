#include "alsv/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "alsv/arith.hpp"
#include "alsv/oracles.hpp"

namespace alsv::verify {

namespace {

struct Failure {
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// --- suite bodies; return the PASS detail string, throw Failure otherwise ---

std::string suite_holder(const EngineOptions&) {
  const uint64_t m_values[] = {1, 2, 3, 4, 12};
  double worst_imag = 0;
  for (uint64_t n = 1; n <= 2000; ++n) {
    for (uint64_t m : m_values) {
      const auto exp_sum = oracles::ramanujan_exponential(n, m);
      if (exp_sum.imag_abs >= 1e-6)
        throw Failure{"imaginary part " + fmt(exp_sum.imag_abs) + " at n=" + std::to_string(n)};
      worst_imag = std::max(worst_imag, exp_sum.imag_abs);
      const int64_t closed = ramanujan_sum(n, m);
      if (closed != exp_sum.rounded_real)
        throw Failure{"c_" + std::to_string(n) + "(" + std::to_string(m) +
                      "): closed form " + std::to_string(closed) + " vs exponential sum " +
                      std::to_string(exp_sum.rounded_real)};
    }
  }
  return "n <= 2000, m in {1,2,3,4,12}; max |imag| = " + fmt(worst_imag);
}

std::string suite_cn1(const EngineOptions& opts) {
  uint64_t checked = 0;
  SegmentFactorizer factorizer;
  FactoredSegment seg;
  auto base_primes = primes_upto(1000);
  for (uint64_t lo = 1; lo <= 1'000'000; lo += opts.segment_size) {
    const uint64_t hi = std::min<uint64_t>(1'000'001, lo + opts.segment_size);
    factorizer.run(lo, hi, base_primes, seg);
    for (size_t i = 0; i < seg.records.size(); ++i) {
      const auto& cls = seg.records[i];
      if (cls.n < 1) continue;
      const int64_t c = ramanujan_sum(seg.factors(i), {});
      if (c != cls.mu)
        throw Failure{"c_n(1) != mu(n) at n=" + std::to_string(cls.n)};
      ++checked;
    }
  }
  return "c_n(1) = mu(n) for all n <= 1e6 (" + std::to_string(checked) + " values)";
}

std::string suite_rsum(const EngineOptions& opts) {
  const std::vector<uint64_t> xs = {1, 10, 100, 1'000, 10'000, 100'000, 1'000'000};
  const uint64_t ys[] = {1, 2, 3, 5, 10, 100, 1000};
  uint64_t checked = 0;
  std::vector<Rational> y1_values;
  for (uint64_t y : ys) {
    // r_sum_series re-checks |R| <= 1 internally on every value.
    auto series = r_sum_series(y, xs, SumMode::Exact, opts);
    for (const auto& q : series) {
      if (abs(q.value_exact) > Rational(1))
        throw Failure{"|R(" + std::to_string(q.x) + "," + std::to_string(y) + ")| > 1"};
      ++checked;
    }
    if (y == 1)
      for (const auto& q : series) y1_values.push_back(q.value_exact);
  }
  // Qualitative decay of the y = 1 column across 1e3..1e6.
  for (size_t j = 3; j + 1 < xs.size(); ++j)
    if (!(abs(y1_values[j + 1]) < abs(y1_values[j])))
      throw Failure{"|R(x,1)| did not decay from x=" + std::to_string(xs[j])};
  return "|R(x,y)| <= 1 on the full grid (" + std::to_string(checked) +
         " queries), decaying along y=1";
}

std::string suite_mertens(const EngineOptions& opts) {
  const auto q = r_sum(1'000'000, 1, SumMode::Exact, opts);
  if (!(abs(q.value_exact) < Rational(1, 100)))
    throw Failure{"|sum mu(n)/n| = " + fmt(std::fabs(q.value_as_double())) + " >= 0.01"};
  return "|sum_{n<=1e6} mu(n)/n| = " + fmt(std::fabs(q.value_as_double())) + " < 0.01";
}

std::string suite_rk(const EngineOptions&) {
  const auto counts4 = oracles::sum_of_squares_counts(4, 200);
  const auto counts8 = oracles::sum_of_squares_counts(8, 200);
  for (uint64_t n = 1; n <= 200; ++n) {
    if (r4(n) != counts4[n]) throw Failure{"r4(" + std::to_string(n) + ") mismatch"};
    if (r8(n) != Integer(static_cast<unsigned long>(counts8[n])))
      throw Failure{"r8(" + std::to_string(n) + ") mismatch"};
  }
  std::vector<uint64_t> e8_counts;
  for (uint64_t n = 1; n <= 3; ++n) {
    e8_counts.push_back(oracles::e8_vector_count(2 * n));
    if (theta_coeff(Lattice::E8, n) != Integer(static_cast<unsigned long>(e8_counts.back())))
      throw Failure{"theta E8 coefficient mismatch at n=" + std::to_string(n)};
  }
  for (uint64_t n = 1; n <= 3; ++n) {
    const uint64_t doubled = oracles::e8_plus_e8_count(n, e8_counts);
    if (theta_coeff(Lattice::E8PlusE8OrGamma16, n) != Integer(static_cast<unsigned long>(doubled)))
      throw Failure{"theta E8+E8 coefficient mismatch at n=" + std::to_string(n)};
  }
  return "r4/r8 vs brute force for n <= 200; theta coefficients vs lattice enumeration";
}

std::string suite_btransform(const EngineOptions&) {
  const size_t n_max = 5000;
  const FactorTable table(n_max);

  std::vector<std::vector<Rational>> inputs;
  inputs.push_back(epsilon_seq(n_max));
  // One random decaying input: a(n) = r_n / n^2 with small random r_n.
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 9);
  std::vector<Rational> random_a(n_max + 1);
  random_a[1] = 1;
  for (size_t n = 2; n <= n_max; ++n)
    random_a[n] = Rational(num(rng), den(rng)) /
                  Rational(Integer(static_cast<unsigned long>(n * n)));
  inputs.push_back(std::move(random_a));

  for (const auto& a : inputs) {
    const auto b = b_transform(a);
    for (uint64_t n = 1; n <= n_max; ++n)
      if (b[n] != oracles::b_closed_form(n, a, table))
        throw Failure{"b-transform closed form mismatch at n=" + std::to_string(n)};
    // (mu*a)(n)/phi(n) = (mu*b)(n)/n
    const auto mu = mobius_seq(n_max);
    const auto mu_a = dirichlet_convolve(mu, a);
    const auto mu_b = dirichlet_convolve(mu, b);
    for (uint64_t n = 1; n <= n_max; ++n) {
      const uint64_t phi = n == 1 ? 1 : table.classify(n).phi;
      if (mu_a[n] / Rational::from_uint(phi) != mu_b[n] / Rational::from_uint(n))
        throw Failure{"(mu*a)/phi != (mu*b)/n at n=" + std::to_string(n)};
    }
  }
  return "definition = closed form and (mu*a)/phi = (mu*b)/n for n <= 5000, two inputs";
}

std::string suite_dirichlet(const EngineOptions& opts) {
  // sum_{n<=1e6} c_n(m)/n^2 vs sigma_{-1}(m) * 6/pi^2, m in {1, 2, 6}.
  const uint64_t ms[] = {1, 2, 6};
  std::vector<std::vector<PrimePower>> m_factors;
  std::map<uint64_t, double> targets;
  for (uint64_t m : ms) {
    std::vector<PrimePower> f;
    uint64_t rem = m;
    for (uint64_t p = 2; p <= rem; ++p) {
      if (rem % p != 0) continue;
      uint32_t e = 0;
      while (rem % p == 0) {
        rem /= p;
        ++e;
      }
      f.push_back({p, e});
    }
    m_factors.push_back(std::move(f));
    const Rational sigma_minus_1 = Rational(sigma_k(m, 1), Integer(static_cast<unsigned long>(m)));
    targets[m] = sigma_minus_1.to_double() * 6.0 / (std::numbers::pi * std::numbers::pi);
  }

  double sums[3] = {0, 0, 0}, carries[3] = {0, 0, 0};
  auto add = [](double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  };

  SegmentFactorizer factorizer;
  FactoredSegment seg;
  auto base_primes = primes_upto(1000);
  for (uint64_t lo = 1; lo <= 1'000'000; lo += opts.segment_size) {
    const uint64_t hi = std::min<uint64_t>(1'000'001, lo + opts.segment_size);
    factorizer.run(lo, hi, base_primes, seg);
    for (size_t i = 0; i < seg.records.size(); ++i) {
      const auto& cls = seg.records[i];
      const double inv_n2 = 1.0 / (static_cast<double>(cls.n) * static_cast<double>(cls.n));
      for (size_t mi = 0; mi < 3; ++mi) {
        const int64_t c = ramanujan_sum(seg.factors(i), m_factors[mi]);
        if (c != 0) add(sums[mi], carries[mi], c * inv_n2);
      }
    }
  }
  double worst = 0;
  for (size_t mi = 0; mi < 3; ++mi) {
    const double err = std::abs(sums[mi] + carries[mi] - targets[ms[mi]]);
    worst = std::max(worst, err);
    if (err >= 1e-4)
      throw Failure{"Dirichlet series residue at m=" + std::to_string(ms[mi]) +
                    ": err=" + fmt(err)};
  }
  return "sum c_n(m)/n^2 matches sigma_{-1}(m)*6/pi^2 within 1e-4; worst err " + fmt(worst);
}

std::string suite_xval(const EngineOptions& opts) {
  const std::vector<uint64_t> cps = {1'000, 10'000, 100'000};
  const std::pair<std::string, std::string> cases[] = {
      {"mu/n", "ap:3,2"},          {"mu/phi", "ap:4,1"},       {"ramanujan/phi:m=3", "cyclo:5,2"},
      {"lambda/n", "ap:2,1"},      {"theta:e8", "ap:3,1"},
  };
  double worst = 0;
  for (const auto& [wdesc, sdesc] : cases) {
    const auto weight = WeightSpec::parse(wdesc);
    const auto set = PrimeSet::parse(sdesc);
    const auto f = alladi_series(weight, set, cps, SumMode::Float, opts);
    const auto e = alladi_series(weight, set, cps, SumMode::Exact, opts);
    const double diff = cross_validate(f, e);
    worst = std::max(worst, diff);
    if (diff > 1e-10)
      throw Failure{wdesc + " / " + sdesc + ": |float-exact| = " + fmt(diff)};
  }
  // Bit-identical float results across thread counts.
  EngineOptions o1 = opts, o4 = opts, o8 = opts;
  o1.threads = 1;
  o4.threads = 4;
  o8.threads = 8;
  const auto weight = WeightSpec::mu_over_phi();
  const auto set = PrimeSet::ap(4, 1);
  const auto v1 = alladi_series(weight, set, cps, SumMode::Float, o1).values;
  const auto v4 = alladi_series(weight, set, cps, SumMode::Float, o4).values;
  const auto v8 = alladi_series(weight, set, cps, SumMode::Float, o8).values;
  if (v1 != v4 || v1 != v8) throw Failure{"float results differ across thread counts"};
  return "five weight/set pairs at x <= 1e5, worst |float-exact| = " + fmt(worst) +
         "; thread counts 1/4/8 bit-identical";
}

using SuiteFn = std::function<std::string(const EngineOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"holder", suite_holder},       {"cn1", suite_cn1},
      {"rsum", suite_rsum},           {"mertens", suite_mertens},
      {"rk", suite_rk},               {"btransform", suite_btransform},
      {"dirichlet", suite_dirichlet}, {"xval", suite_xval},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const EngineOptions& opts) {
  for (const auto& [suite_name, fn] : registry()) {
    if (suite_name != name) continue;
    SuiteResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      result.detail = fn(opts);
      result.pass = true;
    } catch (const Failure& f) {
      result.detail = f.detail;
      result.pass = false;
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
  throw std::invalid_argument("unknown verify suite: '" + name + "'");
}

std::vector<SuiteResult> run_all(const EngineOptions& opts) {
  std::vector<SuiteResult> results;
  for (const auto& name : suite_names()) results.push_back(run_suite(name, opts));
  return results;
}

}  // namespace alsv::verify
