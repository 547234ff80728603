#pragma once
// Checkpointed evaluation of the density series: weighted sums over n with
// p(n) in S, duality-side counts over P(n) in S, and R(x,y) remainder sums.
// One streaming pass is shared across all checkpoints of a run. Float mode
// uses compensated summation with per-segment partials folded in ascending
// segment order, so results are bit-identical for any thread count; exact
// mode accumulates rationals.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alsv/prime_sets.hpp"
#include "alsv/rational.hpp"
#include "alsv/weights.hpp"

namespace alsv {

enum class SumMode { Float, Exact };

std::string to_string(SumMode mode);

struct EngineOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  uint64_t segment_size = kDefaultSegmentSize;
};

// Rational accumulation cost grows with the lcm of the denominators; the
// exact path is a validation oracle, not a production path.
inline constexpr uint64_t kExactCapacity = 1'000'000;

struct CheckpointSeries {
  std::optional<WeightSpec> weight;  // absent for duality count series
  PrimeSet set;
  SumMode mode = SumMode::Float;
  bool is_duality_count = false;
  std::vector<uint64_t> checkpoints;       // ascending x values
  std::vector<double> values;              // Float mode, one per checkpoint
  std::vector<Rational> values_exact;      // Exact mode
  std::optional<Rational> target;          // delta(S) when known
  double wall_seconds = 0;

  double value_as_double(size_t i) const {
    return mode == SumMode::Float ? values[i] : values_exact[i].to_double();
  }
  std::string weight_descriptor() const {
    return is_duality_count ? "count:P" : weight->descriptor();
  }
};

// Partial sums of sum_{2 <= n <= x, p(n) in S} summand(n) at each
// checkpoint; converges to delta(S).
CheckpointSeries alladi_series(const WeightSpec& weight, const PrimeSet& set,
                               std::vector<uint64_t> checkpoints, SumMode mode,
                               const EngineOptions& opts = {});

// (1/x) #{n <= x : P(n) in S}; P(1) = 1 never counts.
CheckpointSeries duality_series(const PrimeSet& set, std::vector<uint64_t> checkpoints,
                                SumMode mode, const EngineOptions& opts = {});

// The weighted side of the duality theorem with f = indicator of f_set.
// Requires a weight with denominator exactly n.
CheckpointSeries weighted_duality_series(const PrimeSet& f_set, const WeightSpec& weight,
                                         std::vector<uint64_t> checkpoints, SumMode mode,
                                         const EngineOptions& opts = {});

// Both sides of the duality theorem from a single streaming pass.
struct DualityPair {
  CheckpointSeries weighted;
  CheckpointSeries counts;
};
DualityPair duality_pair(const PrimeSet& set, const WeightSpec& weight,
                         std::vector<uint64_t> checkpoints, SumMode mode,
                         const EngineOptions& opts = {});

// R(x,y) = sum_{1 <= n <= x, p(n) > y} mu(n)/n; n = 1 always contributes 1.
// |R| <= 1 is checked on every evaluation.
struct RSumQuery {
  uint64_t x = 1, y = 1;
  SumMode mode = SumMode::Float;
  double value = 0;
  Rational value_exact;
  double value_as_double() const {
    return mode == SumMode::Float ? value : value_exact.to_double();
  }
};
RSumQuery r_sum(uint64_t x, uint64_t y, SumMode mode, const EngineOptions& opts = {});
// All x values of one y column in a single pass; xs ascending.
std::vector<RSumQuery> r_sum_series(uint64_t y, std::span<const uint64_t> xs, SumMode mode,
                                    const EngineOptions& opts = {});

// Max |float - exact| over the shared checkpoints of two runs of the same
// query. Callers treat <= 1e-10 as agreement.
double cross_validate(const CheckpointSeries& series_float, const CheckpointSeries& series_exact);

// Powers of 10 from `first` up to xmax, with xmax appended when it is not a
// power of 10 itself.
std::vector<uint64_t> pow10_checkpoints(uint64_t xmax, uint64_t first = 1000);

}  // namespace alsv
