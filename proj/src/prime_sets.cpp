#include "alsv/prime_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace alsv {

// --------------------------------------------------------------------------
// Kronecker symbol, standard reciprocity algorithm.
// --------------------------------------------------------------------------
int kronecker_symbol(long long a, unsigned long long n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  unsigned long long twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos) {
    if (a % 2 == 0) return 0;
    // (a|2) = +1 for a = ±1 (mod 8), -1 for a = ±3 (mod 8)
    const long long r = ((a % 8) + 8) % 8;
    if (twos % 2 == 1 && (r == 3 || r == 5)) result = -result;
  }
  // Jacobi symbol (x|m) for odd m via quadratic reciprocity.
  unsigned long long m = n;
  unsigned long long x = static_cast<unsigned long long>(
      ((a % static_cast<long long>(m)) + static_cast<long long>(m)) % static_cast<long long>(m));
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const unsigned long long r8 = m % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

// --------------------------------------------------------------------------
// PrimeSet
// --------------------------------------------------------------------------

struct PrimeSet::Node {
  enum class Kind { All, Ap, Kronecker, Cyclotomic, Union, Complement, FiniteAdjust };
  Kind kind = Kind::All;
  uint64_t k = 0, l = 0;
  int64_t d = 0;
  std::vector<PrimeSet> parts;                 // Union
  std::shared_ptr<const Node> base;            // Complement / FiniteAdjust
  std::vector<uint64_t> added, removed;        // FiniteAdjust, sorted

  bool contains(uint64_t p) const {
    switch (kind) {
      case Kind::All:
        return true;
      case Kind::Ap:
        return p % k == l % k;
      case Kind::Kronecker: {
        if (p == 2 || static_cast<uint64_t>(d < 0 ? -d : d) % p == 0) return false;
        return kronecker_symbol(d, p) == 1;
      }
      case Kind::Cyclotomic:
        return k % p != 0 && p % k == l % k;
      case Kind::Union:
        return std::any_of(parts.begin(), parts.end(),
                           [p](const PrimeSet& s) { return s.contains(p); });
      case Kind::Complement:
        return !base->contains(p);
      case Kind::FiniteAdjust:
        if (std::binary_search(added.begin(), added.end(), p)) return true;
        if (std::binary_search(removed.begin(), removed.end(), p)) return false;
        return base->contains(p);
    }
    return false;
  }
};

bool PrimeSet::contains(uint64_t p) const {
  if (p == kSpfInfinity) return false;
  return node_->contains(p);
}

namespace {
uint64_t phi_u64(uint64_t n) {
  uint64_t phi = 1;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    phi *= p - 1;
    n /= p;
    while (n % p == 0) {
      n /= p;
      phi *= p;
    }
  }
  if (n > 1) phi *= n - 1;
  return phi;
}

bool is_perfect_square(int64_t d) {
  if (d < 0) return false;
  const auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(d)));
  for (int64_t i = std::max<int64_t>(0, r - 2); i <= r + 2; ++i)
    if (i * i == d) return true;
  return false;
}
}  // namespace

PrimeSet PrimeSet::all() {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::All;
  return PrimeSet(std::move(node), Rational(1));
}

PrimeSet PrimeSet::ap(uint64_t k, uint64_t l) {
  if (k < 1 || l < 1 || l > k) throw std::domain_error("ap set: need k >= 1, 1 <= l <= k");
  if (std::gcd(k, l) != 1) throw std::domain_error("ap set: gcd(k,l) != 1");
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::Ap;
  node->k = k;
  node->l = l;
  return PrimeSet(std::move(node), Rational::ratio(1, phi_u64(k)));
}

PrimeSet PrimeSet::kronecker_split(int64_t d) {
  if (d == 0 || is_perfect_square(d))
    throw std::domain_error("kronecker set: d must be a non-square nonzero integer");
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::Kronecker;
  node->d = d;
  return PrimeSet(std::move(node), Rational(1, 2));
}

PrimeSet PrimeSet::cyclotomic_class(uint64_t k, uint64_t l) {
  if (k < 1 || l < 1 || l > k) throw std::domain_error("cyclo set: need k >= 1, 1 <= l <= k");
  if (std::gcd(k, l) != 1) throw std::domain_error("cyclo set: gcd(k,l) != 1");
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::Cyclotomic;
  node->k = k;
  node->l = l;
  return PrimeSet(std::move(node), Rational::ratio(1, phi_u64(k)));
}

PrimeSet PrimeSet::union_of(std::vector<PrimeSet> parts) {
  if (parts.empty()) throw std::domain_error("union set: needs at least one part");
  std::optional<Rational> density = Rational(0);
  for (const auto& part : parts) {
    if (!part.analytic_density()) {
      density.reset();
      break;
    }
    *density += *part.analytic_density();
  }
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::Union;
  node->parts = std::move(parts);
  return PrimeSet(std::move(node), std::move(density));
}

PrimeSet PrimeSet::complement(PrimeSet base) {
  std::optional<Rational> density;
  if (base.analytic_density()) density = Rational(1) - *base.analytic_density();
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::Complement;
  node->base = std::move(base.node_);
  return PrimeSet(std::move(node), std::move(density));
}

PrimeSet PrimeSet::finite_adjust(PrimeSet base, std::vector<uint64_t> added,
                                 std::vector<uint64_t> removed) {
  std::sort(added.begin(), added.end());
  std::sort(removed.begin(), removed.end());
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::FiniteAdjust;
  auto density = base.density_;
  node->base = std::move(base.node_);
  node->added = std::move(added);
  node->removed = std::move(removed);
  return PrimeSet(std::move(node), std::move(density));
}

// --------------------------------------------------------------------------
// Descriptors
// --------------------------------------------------------------------------

std::string PrimeSet::descriptor() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Kind::All:
      return "all";
    case Node::Kind::Ap:
      return "ap:" + std::to_string(n.k) + "," + std::to_string(n.l);
    case Node::Kind::Kronecker:
      return "kronecker:" + std::to_string(n.d);
    case Node::Kind::Cyclotomic:
      return "cyclo:" + std::to_string(n.k) + "," + std::to_string(n.l);
    case Node::Kind::Union: {
      std::string s = "union:";
      for (size_t i = 0; i < n.parts.size(); ++i) {
        if (i) s += ";";
        s += "(" + n.parts[i].descriptor() + ")";
      }
      return s;
    }
    case Node::Kind::Complement:
      return "complement:(" + PrimeSet(n.base, std::nullopt).descriptor() + ")";
    case Node::Kind::FiniteAdjust: {
      std::string s = "adjust:(" + PrimeSet(n.base, std::nullopt).descriptor() + ")";
      s += ";add:";
      for (size_t i = 0; i < n.added.size(); ++i) s += (i ? "," : "") + std::to_string(n.added[i]);
      s += ";remove:";
      for (size_t i = 0; i < n.removed.size(); ++i)
        s += (i ? "," : "") + std::to_string(n.removed[i]);
      return s;
    }
  }
  return "?";
}

namespace {

[[noreturn]] void bad_set(const std::string& desc) {
  throw std::invalid_argument("unknown set descriptor: '" + desc + "'");
}

// Extracts "(...)" with balanced parens starting at desc[pos]; returns the
// inner text and advances pos past the closing paren.
std::string take_parenthesized(const std::string& desc, size_t& pos) {
  if (pos >= desc.size() || desc[pos] != '(') bad_set(desc);
  int depth = 0;
  for (size_t i = pos; i < desc.size(); ++i) {
    if (desc[i] == '(') ++depth;
    if (desc[i] == ')' && --depth == 0) {
      std::string inner = desc.substr(pos + 1, i - pos - 1);
      pos = i + 1;
      return inner;
    }
  }
  bad_set(desc);
}

std::pair<uint64_t, uint64_t> parse_k_l(const std::string& desc, const std::string& args) {
  const auto comma = args.find(',');
  if (comma == std::string::npos) bad_set(desc);
  const std::string ks = args.substr(0, comma), ls = args.substr(comma + 1);
  if (ks.empty() || ls.empty() || ks.find_first_not_of("0123456789") != std::string::npos ||
      ls.find_first_not_of("0123456789") != std::string::npos)
    bad_set(desc);
  try {
    return {std::stoull(ks), std::stoull(ls)};
  } catch (const std::out_of_range&) {
    bad_set(desc);
  }
}

std::vector<uint64_t> parse_prime_list(const std::string& desc, const std::string& args) {
  std::vector<uint64_t> out;
  size_t pos = 0;
  while (pos < args.size()) {
    size_t comma = args.find(',', pos);
    if (comma == std::string::npos) comma = args.size();
    const std::string tok = args.substr(pos, comma - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) bad_set(desc);
    out.push_back(std::stoull(tok));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

PrimeSet PrimeSet::parse(const std::string& desc) {
  if (desc == "all") return all();
  if (desc.rfind("ap:", 0) == 0) {
    auto [k, l] = parse_k_l(desc, desc.substr(3));
    return ap(k, l);
  }
  if (desc.rfind("cyclo:", 0) == 0) {
    auto [k, l] = parse_k_l(desc, desc.substr(6));
    return cyclotomic_class(k, l);
  }
  if (desc.rfind("kronecker:", 0) == 0) {
    const std::string args = desc.substr(10);
    if (args.empty() || args == "-" ||
        args.find_first_not_of("0123456789-") != std::string::npos ||
        args.find('-', 1) != std::string::npos)
      bad_set(desc);
    try {
      return kronecker_split(std::stoll(args));
    } catch (const std::out_of_range&) {
      bad_set(desc);
    }
  }
  if (desc.rfind("complement:", 0) == 0) {
    size_t pos = 11;
    PrimeSet base = parse(take_parenthesized(desc, pos));
    if (pos != desc.size()) bad_set(desc);
    return complement(std::move(base));
  }
  if (desc.rfind("union:", 0) == 0) {
    size_t pos = 6;
    std::vector<PrimeSet> parts;
    while (true) {
      parts.push_back(parse(take_parenthesized(desc, pos)));
      if (pos == desc.size()) break;
      if (desc[pos] != ';') bad_set(desc);
      ++pos;
    }
    return union_of(std::move(parts));
  }
  if (desc.rfind("adjust:", 0) == 0) {
    size_t pos = 7;
    PrimeSet base = parse(take_parenthesized(desc, pos));
    if (desc.rfind(";add:", pos) != pos) bad_set(desc);
    pos += 5;
    const size_t rem = desc.find(";remove:", pos);
    if (rem == std::string::npos) bad_set(desc);
    auto added = parse_prime_list(desc, desc.substr(pos, rem - pos));
    auto removed = parse_prime_list(desc, desc.substr(rem + 8));
    return finite_adjust(std::move(base), std::move(added), std::move(removed));
  }
  bad_set(desc);
}

// --------------------------------------------------------------------------
// Empirical density
// --------------------------------------------------------------------------

DensityCount empirical_density(const PrimeSet& set, uint64_t x, const FactorTable& table) {
  if (x < 2) throw std::domain_error("empirical_density: x must be >= 2");
  if (x > table.limit()) throw std::domain_error("empirical_density: x exceeds table limit");
  DensityCount dc;
  for (uint64_t n = 2; n <= x; ++n) {
    if (!table.is_prime(n)) continue;
    ++dc.primes;
    if (set.contains(n)) ++dc.in_set;
  }
  return dc;
}

DensityCount empirical_density(const PrimeSet& set, uint64_t x, uint64_t segment_size) {
  if (x < 2) throw std::domain_error("empirical_density: x must be >= 2");
  DensityCount dc;
  auto stream = stream_segments(2, x + 1, segment_size);
  while (auto seg = stream.next()) {
    for (const auto& rec : seg->records) {
      if (!rec.is_prime()) continue;
      ++dc.primes;
      if (set.contains(rec.n)) ++dc.in_set;
    }
  }
  return dc;
}

}  // namespace alsv
