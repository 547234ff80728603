#pragma once
// Segmented smallest-prime-factor sieve and per-integer classification:
// smallest/largest prime factor, mu, phi, lambda, Omega. Streams any range
// [lo, hi) with O(segment_size + pi(sqrt(hi))) memory.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace alsv {

// p(1) sentinel: compares greater than every prime, so predicates of the
// form p(n) > y naturally include n = 1.
inline constexpr uint64_t kSpfInfinity = std::numeric_limits<uint64_t>::max();

struct NClassification {
  uint64_t n = 1;
  uint64_t spf = kSpfInfinity;  // smallest prime factor, kSpfInfinity for n = 1
  uint64_t lpf = 1;             // largest prime factor, 1 for n = 1
  uint64_t phi = 1;
  int8_t mu = 1;
  int8_t lambda = 1;
  uint32_t big_omega = 0;  // Omega(n): prime factors with multiplicity

  bool is_prime() const { return n >= 2 && spf == n; }
  bool operator==(const NClassification&) const = default;
};

struct PrimePower {
  uint64_t prime = 0;
  uint32_t exp = 0;
  bool operator==(const PrimePower&) const = default;
};

// Eratosthenes primes up to limit (inclusive), as uint32 (limit < 2^32).
std::vector<uint32_t> primes_upto(uint64_t limit);

// Classification from an ascending (prime, exp) list.
NClassification classify_from_factors(uint64_t n, std::span<const PrimePower> factors);

// ---------------------------------------------------------------------------
// Dense SPF table for n in [2, limit]. 4-byte entries cap limit at 2^32 - 1;
// memory is ~4*(limit+1) bytes, so the practical ceiling is what the host
// can allocate (a full 2^32 - 1 table needs ~16 GiB). Use segment streaming
// beyond that.
// ---------------------------------------------------------------------------
class FactorTable {
 public:
  static constexpr uint64_t kMaxLimit = 0xFFFFFFFFull;

  explicit FactorTable(uint64_t limit);

  uint64_t limit() const { return limit_; }
  // Smallest prime factor of n, 2 <= n <= limit.
  uint32_t spf(uint64_t n) const;
  bool is_prime(uint64_t n) const { return spf(n) == n; }
  NClassification classify(uint64_t n) const;  // 1 <= n <= limit
  std::vector<PrimePower> factorize(uint64_t n) const;

  // Binary cache: "ALSV" + version 0x01 + limit (8-byte LE) + spf entries
  // for n = 2..limit (4-byte LE each).
  void save(const std::string& path) const;
  static FactorTable load(const std::string& path);

 private:
  FactorTable() = default;
  uint64_t limit_ = 0;
  std::vector<uint32_t> spf_;
};

FactorTable build_factor_table(uint64_t limit);

NClassification classify(uint64_t n, const FactorTable& table);
// Trial-division classification; base_primes must cover sqrt(n).
NClassification classify(uint64_t n, std::span<const uint32_t> base_primes);

// ---------------------------------------------------------------------------
// Segment streaming
// ---------------------------------------------------------------------------
struct Segment {
  uint64_t lo = 0, hi = 0;  // [lo, hi)
  std::vector<NClassification> records;
};

// One factored block [lo, hi): classification plus the full (prime, exp)
// list of every n, factors in ascending prime order.
struct FactoredSegment {
  uint64_t lo = 0, hi = 0;
  std::vector<NClassification> records;
  std::span<const PrimePower> factors(size_t i) const {
    return {pool.data() + begin[i], pool.data() + end[i]};
  }

  std::vector<PrimePower> pool;
  std::vector<uint32_t> begin, end;
};

// Reusable scratch buffers for factoring consecutive segments.
class SegmentFactorizer {
 public:
  // base_primes must cover sqrt(hi - 1).
  void run(uint64_t lo, uint64_t hi, std::span<const uint32_t> base_primes, FactoredSegment& out);

 private:
  std::vector<uint64_t> remaining_;
  std::vector<uint8_t> nfactors_;
};

// Pull-based stream of segments partitioning [lo, hi) in ascending order.
// Record streams are identical for every segment_size.
class SegmentStream {
 public:
  SegmentStream(uint64_t lo, uint64_t hi, uint64_t segment_size);
  std::optional<Segment> next();

 private:
  uint64_t hi_, size_, cursor_;
  std::vector<uint32_t> base_primes_;
  SegmentFactorizer factorizer_;
  FactoredSegment scratch_;
};

inline constexpr uint64_t kDefaultSegmentSize = uint64_t{1} << 20;

SegmentStream stream_segments(uint64_t lo, uint64_t hi, uint64_t segment_size = kDefaultSegmentSize);

}  // namespace alsv
