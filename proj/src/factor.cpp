#include "alsv/factor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace alsv {

namespace {

// Overflow-safe floor sqrt (r*r can wrap for n near 2^64).
uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

}  // namespace

std::vector<uint32_t> primes_upto(uint64_t limit) {
  if (limit > FactorTable::kMaxLimit)
    throw std::length_error("primes_upto: limit exceeds 2^32 - 1");
  std::vector<uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<uint8_t> composite(limit + 1, 0);
  for (uint64_t p = 2; p * p <= limit; ++p) {
    if (composite[p]) continue;
    for (uint64_t m = p * p; m <= limit; m += p) composite[m] = 1;
  }
  for (uint64_t n = 2; n <= limit; ++n)
    if (!composite[n]) primes.push_back(static_cast<uint32_t>(n));
  return primes;
}

NClassification classify_from_factors(uint64_t n, std::span<const PrimePower> factors) {
  NClassification c;
  c.n = n;
  if (n == 1) return c;
  bool squarefree = true;
  uint32_t distinct = 0;
  for (const auto& [p, e] : factors) {
    c.phi *= p - 1;
    for (uint32_t i = 1; i < e; ++i) c.phi *= p;
    c.big_omega += e;
    if (e > 1) squarefree = false;
    ++distinct;
    c.lpf = p;  // ascending order: last one is the largest
  }
  c.spf = factors.front().prime;
  c.mu = squarefree ? (distinct % 2 == 0 ? 1 : -1) : 0;
  c.lambda = c.big_omega % 2 == 0 ? 1 : -1;
  return c;
}

// ---------------------------------------------------------------------------
// FactorTable
// ---------------------------------------------------------------------------

FactorTable::FactorTable(uint64_t limit) {
  if (limit < 2 || limit > kMaxLimit)
    throw std::length_error("FactorTable: limit must be in [2, 2^32 - 1]");
  limit_ = limit;
  spf_.assign(limit + 1, 0);
  for (uint64_t p = 2; p * p <= limit; ++p) {
    if (spf_[p] != 0) continue;
    for (uint64_t m = p * p; m <= limit; m += p)
      if (spf_[m] == 0) spf_[m] = static_cast<uint32_t>(p);
  }
  for (uint64_t n = 2; n <= limit; ++n)
    if (spf_[n] == 0) spf_[n] = static_cast<uint32_t>(n);
}

uint32_t FactorTable::spf(uint64_t n) const {
  if (n < 2 || n > limit_) throw std::domain_error("FactorTable::spf: n out of range");
  return spf_[n];
}

std::vector<PrimePower> FactorTable::factorize(uint64_t n) const {
  if (n < 1 || n > limit_) throw std::domain_error("FactorTable::factorize: n out of range");
  std::vector<PrimePower> f;
  while (n > 1) {
    uint32_t p = spf_[n];
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  return f;
}

NClassification FactorTable::classify(uint64_t n) const {
  if (n == 0) throw std::domain_error("classify: n must be >= 1");
  return classify_from_factors(n, factorize(n));
}

NClassification classify(uint64_t n, const FactorTable& table) { return table.classify(n); }

NClassification classify(uint64_t n, std::span<const uint32_t> base_primes) {
  if (n == 0) throw std::domain_error("classify: n must be >= 1");
  if (n == 1) return NClassification{};
  std::vector<PrimePower> f;
  uint64_t rem = n;
  for (uint32_t p : base_primes) {
    if (uint64_t{p} * p > rem) break;
    if (rem % p != 0) continue;
    uint32_t e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (rem > 1) f.push_back({rem, 1});
  return classify_from_factors(n, f);
}

// ---------------------------------------------------------------------------
// SPF cache file
// ---------------------------------------------------------------------------

namespace {
constexpr char kCacheMagic[4] = {'A', 'L', 'S', 'V'};
constexpr uint8_t kCacheVersion = 0x01;

void put_le(uint8_t* out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out[i] = static_cast<uint8_t>(v >> (8 * i));
}
uint64_t get_le(const uint8_t* in, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= uint64_t{in[i]} << (8 * i);
  return v;
}

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace

void FactorTable::save(const std::string& path) const {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  uint8_t header[13];
  std::memcpy(header, kCacheMagic, 4);
  header[4] = kCacheVersion;
  put_le(header + 5, limit_, 8);
  if (std::fwrite(header, 1, sizeof header, f.get()) != sizeof header)
    throw std::runtime_error("short write: " + path);
  std::vector<uint8_t> buf;
  buf.reserve(4 << 16);
  for (uint64_t n = 2; n <= limit_; ++n) {
    uint8_t e[4];
    put_le(e, spf_[n], 4);
    buf.insert(buf.end(), e, e + 4);
    if (buf.size() >= (4 << 16)) {
      if (std::fwrite(buf.data(), 1, buf.size(), f.get()) != buf.size())
        throw std::runtime_error("short write: " + path);
      buf.clear();
    }
  }
  if (!buf.empty() && std::fwrite(buf.data(), 1, buf.size(), f.get()) != buf.size())
    throw std::runtime_error("short write: " + path);
}

FactorTable FactorTable::load(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error("cannot open SPF cache: " + path);
  uint8_t header[13];
  if (std::fread(header, 1, sizeof header, f.get()) != sizeof header)
    throw std::runtime_error("truncated SPF cache: " + path);
  if (std::memcmp(header, kCacheMagic, 4) != 0)
    throw std::runtime_error("bad SPF cache magic: " + path);
  if (header[4] != kCacheVersion)
    throw std::runtime_error("unsupported SPF cache version: " + path);
  uint64_t limit = get_le(header + 5, 8);
  if (limit < 2 || limit > kMaxLimit)
    throw std::runtime_error("SPF cache limit out of range: " + path);
  FactorTable t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  std::vector<uint8_t> buf((limit - 1) * 4);
  if (std::fread(buf.data(), 1, buf.size(), f.get()) != buf.size())
    throw std::runtime_error("truncated SPF cache: " + path);
  for (uint64_t n = 2; n <= limit; ++n)
    t.spf_[n] = static_cast<uint32_t>(get_le(buf.data() + (n - 2) * 4, 4));
  return t;
}

FactorTable build_factor_table(uint64_t limit) { return FactorTable(limit); }

// ---------------------------------------------------------------------------
// Segment factoring
// ---------------------------------------------------------------------------

void SegmentFactorizer::run(uint64_t lo, uint64_t hi, std::span<const uint32_t> base_primes,
                            FactoredSegment& out) {
  const size_t m = static_cast<size_t>(hi - lo);
  out.lo = lo;
  out.hi = hi;
  out.records.resize(m);
  out.begin.resize(m);
  out.end.resize(m);
  remaining_.resize(m);
  nfactors_.assign(m, 0);
  for (size_t i = 0; i < m; ++i) remaining_[i] = lo + i;

  auto first_multiple = [&](uint64_t p) {
    uint64_t start = std::max<uint64_t>(lo, 2);
    return (start + p - 1) / p * p;
  };

  // Pass 1: count distinct base-prime hits so factor lists can be laid out
  // contiguously (one slack slot per n for a possible large leftover prime).
  for (uint32_t p : base_primes) {
    if (uint64_t{p} >= hi) break;
    for (uint64_t n = first_multiple(p); n < hi; n += p) ++nfactors_[n - lo];
  }
  uint32_t total = 0;
  for (size_t i = 0; i < m; ++i) {
    out.begin[i] = total;
    out.end[i] = total;
    total += nfactors_[i] + 1;
  }
  out.pool.resize(total);

  // Pass 2: divide out the base primes, appending (prime, exp) in ascending
  // prime order.
  for (uint32_t p : base_primes) {
    if (uint64_t{p} >= hi) break;
    for (uint64_t n = first_multiple(p); n < hi; n += p) {
      const size_t i = static_cast<size_t>(n - lo);
      uint64_t& rem = remaining_[i];
      uint32_t e = 0;
      while (rem % p == 0) {
        rem /= p;
        ++e;
      }
      out.pool[out.end[i]++] = {p, e};
    }
  }

  // Whatever remains after the base primes is 1 or a single prime > sqrt(hi).
  for (size_t i = 0; i < m; ++i) {
    const uint64_t n = lo + i;
    if (n == 1) {
      out.records[i] = NClassification{};
      continue;
    }
    if (remaining_[i] > 1) out.pool[out.end[i]++] = {remaining_[i], 1};
    out.records[i] = classify_from_factors(n, out.factors(i));
  }
}

// ---------------------------------------------------------------------------
// SegmentStream
// ---------------------------------------------------------------------------

SegmentStream::SegmentStream(uint64_t lo, uint64_t hi, uint64_t segment_size)
    : hi_(hi), size_(segment_size), cursor_(lo) {
  if (lo < 1 || lo >= hi) throw std::domain_error("stream_segments: need 1 <= lo < hi");
  if (segment_size < 1) throw std::domain_error("stream_segments: segment_size must be >= 1");
  base_primes_ = primes_upto(isqrt_u64(hi - 1));
}

std::optional<Segment> SegmentStream::next() {
  if (cursor_ >= hi_) return std::nullopt;
  const uint64_t lo = cursor_;
  const uint64_t hi = std::min(hi_, lo + size_);
  cursor_ = hi;
  factorizer_.run(lo, hi, base_primes_, scratch_);
  Segment seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.records = scratch_.records;
  return seg;
}

SegmentStream stream_segments(uint64_t lo, uint64_t hi, uint64_t segment_size) {
  return SegmentStream(lo, hi, segment_size);
}

}  // namespace alsv
