#include "alsv/weights.hpp"

#include <numeric>
#include <stdexcept>

namespace alsv {

namespace {

std::vector<PrimePower> small_factorize(uint64_t n) {
  std::vector<PrimePower> f;
  for (uint64_t p = 2; p * p <= n; ++p) {
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

double pow_d(double base, uint32_t e) {
  double r = 1;
  while (e--) r *= base;
  return r;
}

Integer pow_z(uint64_t base, uint32_t e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

}  // namespace

WeightSpec WeightSpec::mu_over_n() { return WeightSpec{}; }

WeightSpec WeightSpec::mu_over_phi() {
  WeightSpec w;
  w.family = WeightFamily::MuOverPhi;
  w.alpha_hint = Rational(1);
  return w;
}

WeightSpec WeightSpec::ramanujan_over_phi(uint64_t m) {
  if (m < 1) throw std::domain_error("ramanujan weight: m must be >= 1");
  WeightSpec w;
  w.family = WeightFamily::RamanujanOverPhi;
  w.m = m;
  w.alpha_hint = Rational(1);
  return w;
}

WeightSpec WeightSpec::ramanujan_over_n(uint64_t m) {
  if (m < 1) throw std::domain_error("ramanujan weight: m must be >= 1");
  WeightSpec w;
  w.family = WeightFamily::RamanujanOverN;
  w.m = m;
  return w;
}

WeightSpec WeightSpec::lambda_over_n() {
  WeightSpec w;
  w.family = WeightFamily::LambdaOverN;
  return w;
}

WeightSpec WeightSpec::mu_over_psi() {
  WeightSpec w;
  w.family = WeightFamily::MuOverPsi;
  w.alpha_hint = Rational(1);
  return w;
}

WeightSpec WeightSpec::mu_over_sigma() {
  WeightSpec w;
  w.family = WeightFamily::MuOverSigma;
  return w;
}

WeightSpec WeightSpec::mu_over_g(MultiplicativeFn g, std::string name, std::optional<Rational> alpha) {
  if (!g) throw std::domain_error("mu/g weight: missing multiplicative callback");
  WeightSpec w;
  w.family = WeightFamily::MuOverG;
  w.g = std::move(g);
  w.g_name = std::move(name);
  w.alpha_hint = std::move(alpha);
  return w;
}

WeightSpec WeightSpec::mu_over_sigma_k(uint32_t k) {
  if (k < 1) throw std::domain_error("mu/g:sigma_k weight: k must be >= 1");
  auto g = [k](uint64_t p, uint32_t e) {
    // sigma_k(p^e) / p^{e(k-1)}
    Integer num = 0;
    for (uint32_t j = 0; j <= e; ++j) num += pow_z(p, j * k);
    return Rational(num, pow_z(p, e * (k - 1)));
  };
  return mu_over_g(g, "sigma_k=" + std::to_string(k));
}

WeightSpec WeightSpec::theta(Lattice lat) {
  WeightSpec w;
  w.family = WeightFamily::Theta;
  w.lattice = lat;
  w.prefactor = theta_prefactor(lat);
  return w;
}

bool WeightSpec::denominator_is_n() const {
  return family == WeightFamily::MuOverN || family == WeightFamily::RamanujanOverN ||
         family == WeightFamily::LambdaOverN;
}

namespace {

uint64_t parse_param(const std::string& desc, const std::string& key) {
  // desc looks like "...:key=V"
  const auto pos = desc.find(':');
  if (pos == std::string::npos)
    throw std::invalid_argument("weight descriptor missing parameter: '" + desc + "'");
  const std::string param = desc.substr(pos + 1);
  if (param.rfind(key + "=", 0) != 0)
    throw std::invalid_argument("bad weight parameter '" + param + "' in '" + desc + "'");
  const std::string value = param.substr(key.size() + 1);
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad weight parameter value '" + value + "' in '" + desc + "'");
  uint64_t v = std::stoull(value);
  if (v == 0) throw std::invalid_argument("weight parameter must be >= 1 in '" + desc + "'");
  return v;
}

}  // namespace

WeightSpec WeightSpec::parse(const std::string& desc) {
  if (desc == "mu/n") return mu_over_n();
  if (desc == "mu/phi") return mu_over_phi();
  if (desc == "lambda/n") return lambda_over_n();
  if (desc == "mu/psi") return mu_over_psi();
  if (desc == "mu/sigma") return mu_over_sigma();
  if (desc == "theta:e8") return theta(Lattice::E8);
  if (desc == "theta:e8e8") return theta(Lattice::E8PlusE8OrGamma16);
  const std::string head = desc.substr(0, desc.find(':'));
  if (head == "ramanujan/phi") return ramanujan_over_phi(parse_param(desc, "m"));
  if (head == "ramanujan/n") return ramanujan_over_n(parse_param(desc, "m"));
  if (head == "mu/g")
    return mu_over_sigma_k(static_cast<uint32_t>(parse_param(desc, "sigma_k")));
  throw std::invalid_argument("unknown weight descriptor: '" + desc + "'");
}

std::string WeightSpec::descriptor() const {
  switch (family) {
    case WeightFamily::MuOverN: return "mu/n";
    case WeightFamily::MuOverPhi: return "mu/phi";
    case WeightFamily::RamanujanOverPhi: return "ramanujan/phi:m=" + std::to_string(m);
    case WeightFamily::RamanujanOverN: return "ramanujan/n:m=" + std::to_string(m);
    case WeightFamily::LambdaOverN: return "lambda/n";
    case WeightFamily::MuOverPsi: return "mu/psi";
    case WeightFamily::MuOverSigma: return "mu/sigma";
    case WeightFamily::MuOverG: return "mu/g:" + g_name;
    case WeightFamily::Theta:
      return lattice == Lattice::E8 ? "theta:e8" : "theta:e8e8";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// WeightEvaluator
// ---------------------------------------------------------------------------

WeightEvaluator::WeightEvaluator(const WeightSpec& spec) : spec_(spec) {
  switch (spec_.family) {
    case WeightFamily::RamanujanOverPhi:
    case WeightFamily::RamanujanOverN:
      if (spec_.m < 1) throw std::domain_error("ramanujan weight: m must be >= 1");
      m_factors_ = small_factorize(spec_.m);
      break;
    case WeightFamily::Theta:
      two_k_ = 2 * lattice_half_weight(spec_.lattice);
      break;
    case WeightFamily::MuOverG:
      if (!spec_.g) throw std::domain_error("mu/g weight: missing multiplicative callback");
      break;
    default:
      break;
  }
}

bool WeightEvaluator::nonzero(const NClassification& cls, std::span<const PrimePower> factors) const {
  switch (spec_.family) {
    case WeightFamily::LambdaOverN:
      return true;
    case WeightFamily::RamanujanOverPhi:
    case WeightFamily::RamanujanOverN: {
      if (cls.mu != 0) return true;
      // c_n(m) != 0 iff n/gcd(n,m) is squarefree.
      for (const auto& [p, e] : factors) {
        if (e < 2) continue;
        uint32_t vm = 0;
        for (const auto& [q, f] : m_factors_)
          if (q == p) {
            vm = f;
            break;
          }
        if (e > vm + 1) return false;
      }
      return true;
    }
    default:
      return cls.mu != 0;
  }
}

double WeightEvaluator::summand(const NClassification& cls, std::span<const PrimePower> factors) const {
  const double n = static_cast<double>(cls.n);
  switch (spec_.family) {
    case WeightFamily::MuOverN:
      return -cls.mu / n;
    case WeightFamily::MuOverPhi:
      return -cls.mu / static_cast<double>(cls.phi);
    case WeightFamily::LambdaOverN:
      return -cls.lambda / n;
    case WeightFamily::RamanujanOverPhi:
      return -static_cast<double>(ramanujan_sum(factors, m_factors_)) / static_cast<double>(cls.phi);
    case WeightFamily::RamanujanOverN:
      return -static_cast<double>(ramanujan_sum(factors, m_factors_)) / n;
    case WeightFamily::MuOverPsi: {
      double psi = 1;  // squarefree here, so psi = prod (p+1)
      for (const auto& [p, e] : factors) psi *= static_cast<double>(p + 1);
      return -cls.mu / psi;
    }
    case WeightFamily::MuOverSigma: {
      double sigma = 1;  // sigma = psi on squarefree n
      for (const auto& [p, e] : factors) sigma *= static_cast<double>(p + 1);
      return -cls.mu / sigma;
    }
    case WeightFamily::MuOverG: {
      double g = 1;
      for (const auto& [p, e] : factors) g *= spec_.g(p, e).to_double();
      if (g == 0) throw std::domain_error("mu/g weight: g vanished");
      return -cls.mu / g;
    }
    case WeightFamily::Theta: {
      // mu(n) n^{2k-2} / (C sigma_{2k-1}(n)) with the prefactor -C folded in;
      // per squarefree prime: p^{2k-2} / (1 + p^{2k-1}).
      double num = 1, den = 1;
      for (const auto& [p, e] : factors) {
        const double pd = static_cast<double>(p);
        num *= pow_d(pd, two_k_ - 2);
        den *= 1.0 + pow_d(pd, two_k_ - 1);
      }
      return -cls.mu * num / den;
    }
  }
  return 0;
}

Rational WeightEvaluator::summand_exact(const NClassification& cls,
                                        std::span<const PrimePower> factors) const {
  const long mu = cls.mu;
  switch (spec_.family) {
    case WeightFamily::MuOverN:
      return Rational(Integer(-mu), Integer(static_cast<unsigned long>(cls.n)));
    case WeightFamily::MuOverPhi:
      return Rational(Integer(-mu), Integer(static_cast<unsigned long>(cls.phi)));
    case WeightFamily::LambdaOverN:
      return Rational(Integer(long{-cls.lambda}), Integer(static_cast<unsigned long>(cls.n)));
    case WeightFamily::RamanujanOverPhi:
      return Rational(Integer(static_cast<long>(-ramanujan_sum(factors, m_factors_))),
                      Integer(static_cast<unsigned long>(cls.phi)));
    case WeightFamily::RamanujanOverN:
      return Rational(Integer(static_cast<long>(-ramanujan_sum(factors, m_factors_))),
                      Integer(static_cast<unsigned long>(cls.n)));
    case WeightFamily::MuOverPsi: {
      Integer psi = 1;
      for (const auto& [p, e] : factors) psi *= static_cast<unsigned long>(p + 1);
      return Rational(Integer(-mu), psi);
    }
    case WeightFamily::MuOverSigma: {
      Integer sigma = 1;
      for (const auto& [p, e] : factors) sigma *= static_cast<unsigned long>(p + 1);
      return Rational(Integer(-mu), sigma);
    }
    case WeightFamily::MuOverG: {
      Rational g(1);
      for (const auto& [p, e] : factors) g *= spec_.g(p, e);
      if (g.sign() == 0) throw std::domain_error("mu/g weight: g vanished");
      return Rational(-mu) / g;
    }
    case WeightFamily::Theta: {
      Integer num = 1, den = 1;
      for (const auto& [p, e] : factors) {
        num *= pow_z(p, two_k_ - 2);
        den *= pow_z(p, two_k_ - 1) + 1;
      }
      return Rational(-mu * num, den);
    }
  }
  return Rational(0);
}

}  // namespace alsv
