#include "alsv/sum_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace alsv {

std::string to_string(SumMode mode) { return mode == SumMode::Float ? "float" : "exact"; }

namespace {

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

unsigned resolve_threads(const EngineOptions& opts) {
  if (opts.threads) return opts.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate_checkpoints(const std::vector<uint64_t>& cps, SumMode mode) {
  if (cps.empty()) throw std::domain_error("checkpoints must be nonempty");
  for (size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 1) throw std::domain_error("checkpoints must be >= 1");
    if (i && cps[i] <= cps[i - 1]) throw std::domain_error("checkpoints must be ascending");
  }
  if (mode == SumMode::Exact && cps.back() > kExactCapacity)
    throw std::length_error("exact mode is capped at x <= 1e6");
}

// --- compensated float accumulation (Neumaier) ----------------------------

struct FloatPartial {
  double sum = 0, carry = 0;
};

class NeumaierAcc {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const FloatPartial& p) {
    add(p.sum);
    add(p.carry);
  }
  FloatPartial partial() const { return {sum_, carry_}; }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0, carry_ = 0;
};

// --- exact accumulation ----------------------------------------------------

// Balanced pairwise merge: keeps intermediate denominators small compared
// with left-to-right accumulation.
Rational pairwise_sum(std::vector<Rational>& terms) {
  if (terms.empty()) return Rational(0);
  size_t n = terms.size();
  while (n > 1) {
    const size_t half = n / 2;
    for (size_t i = 0; i < half; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
    if (n % 2) {
      terms[half] = terms[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return terms[0];
}

class ExactAcc {
 public:
  void add(const Rational& r) { sum_ += r; }
  const Rational& value() const { return sum_; }

 private:
  Rational sum_;
};

// --- segment plumbing -------------------------------------------------------

// Cut points of [lo, hi): segment grid plus one cut after each checkpoint,
// independent of the thread count.
std::vector<uint64_t> segment_boundaries(uint64_t lo, uint64_t hi, uint64_t segment_size,
                                         std::span<const uint64_t> checkpoints) {
  std::vector<uint64_t> b;
  if (lo >= hi) {
    b.push_back(lo);
    return b;
  }
  b.push_back(lo);
  for (uint64_t v = lo; hi - v > segment_size;) {
    v += segment_size;
    b.push_back(v);
  }
  b.push_back(hi);
  for (uint64_t cp : checkpoints)
    if (cp + 1 > lo && cp + 1 < hi) b.push_back(cp + 1);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

template <class Partial, class SegEval>
std::vector<Partial> map_segments(const std::vector<uint64_t>& bounds, unsigned threads,
                                  std::span<const uint32_t> base_primes, const SegEval& eval) {
  const size_t nseg = bounds.size() - 1;
  std::vector<Partial> partials(nseg);
  if (nseg == 0) return partials;
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    SegmentFactorizer factorizer;
    FactoredSegment seg;
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= nseg) break;
        factorizer.run(bounds[i], bounds[i + 1], base_primes, seg);
        partials[i] = eval(seg);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };

  const unsigned n_workers = static_cast<unsigned>(std::min<size_t>(threads, nseg));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return partials;
}

// Folds partials in ascending segment order, snapshotting whenever the fold
// frontier reaches a checkpoint boundary (x is complete once everything
// below x+1 is folded).
template <class Acc, class Partial, class Snapshot>
void fold_with_checkpoints(const std::vector<uint64_t>& bounds, const std::vector<Partial>& partials,
                           std::span<const uint64_t> checkpoints, const Snapshot& snapshot) {
  Acc acc;
  size_t ci = 0;
  for (size_t i = 0; i < partials.size(); ++i) {
    while (ci < checkpoints.size() && checkpoints[ci] + 1 <= bounds[i]) snapshot(ci++, acc);
    acc.add(partials[i]);
  }
  while (ci < checkpoints.size()) snapshot(ci++, acc);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Generic checkpointed scan of [lo, xmax]: TermFloat/TermExact produce one
// per-record contribution (or skip via the Keep predicate).
template <class Keep, class TermFloat>
std::vector<double> scan_float(uint64_t lo, std::span<const uint64_t> checkpoints,
                               const EngineOptions& opts, const Keep& keep,
                               const TermFloat& term) {
  const uint64_t hi = checkpoints.back() + 1;
  const auto bounds = segment_boundaries(lo, hi, opts.segment_size, checkpoints);
  const auto base_primes = hi > lo ? primes_upto(isqrt_u64(hi - 1)) : std::vector<uint32_t>{};
  auto partials = map_segments<FloatPartial>(
      bounds, resolve_threads(opts), base_primes, [&](const FactoredSegment& seg) {
        NeumaierAcc acc;
        for (size_t i = 0; i < seg.records.size(); ++i) {
          const auto& cls = seg.records[i];
          if (cls.n < lo) continue;
          if (!keep(cls, seg.factors(i))) continue;
          acc.add(term(cls, seg.factors(i)));
        }
        return acc.partial();
      });
  std::vector<double> out(checkpoints.size());
  fold_with_checkpoints<NeumaierAcc>(bounds, partials, checkpoints,
                                     [&](size_t ci, const NeumaierAcc& acc) { out[ci] = acc.value(); });
  return out;
}

template <class Keep, class TermExact>
std::vector<Rational> scan_exact(uint64_t lo, std::span<const uint64_t> checkpoints,
                                 const EngineOptions& opts, const Keep& keep,
                                 const TermExact& term) {
  const uint64_t hi = checkpoints.back() + 1;
  const auto bounds = segment_boundaries(lo, hi, opts.segment_size, checkpoints);
  const auto base_primes = hi > lo ? primes_upto(isqrt_u64(hi - 1)) : std::vector<uint32_t>{};
  auto partials = map_segments<Rational>(
      bounds, resolve_threads(opts), base_primes, [&](const FactoredSegment& seg) {
        std::vector<Rational> terms;
        terms.reserve(seg.records.size());
        for (size_t i = 0; i < seg.records.size(); ++i) {
          const auto& cls = seg.records[i];
          if (cls.n < lo) continue;
          if (!keep(cls, seg.factors(i))) continue;
          terms.push_back(term(cls, seg.factors(i)));
        }
        return pairwise_sum(terms);
      });
  std::vector<Rational> out(checkpoints.size());
  fold_with_checkpoints<ExactAcc>(bounds, partials, checkpoints,
                                  [&](size_t ci, const ExactAcc& acc) { out[ci] = acc.value(); });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Series operations
// ---------------------------------------------------------------------------

CheckpointSeries alladi_series(const WeightSpec& weight, const PrimeSet& set,
                               std::vector<uint64_t> checkpoints, SumMode mode,
                               const EngineOptions& opts) {
  validate_checkpoints(checkpoints, mode);
  Stopwatch timer;
  CheckpointSeries s;
  s.weight = weight;
  s.set = set;
  s.mode = mode;
  s.checkpoints = std::move(checkpoints);
  s.target = set.analytic_density();

  const WeightEvaluator eval(weight);
  auto keep = [&](const NClassification& cls, std::span<const PrimePower> f) {
    return eval.nonzero(cls, f) && set.contains(cls.spf);
  };
  if (mode == SumMode::Float) {
    s.values = scan_float(2, s.checkpoints, opts, keep,
                          [&](const NClassification& cls, std::span<const PrimePower> f) {
                            return eval.summand(cls, f);
                          });
  } else {
    s.values_exact = scan_exact(2, s.checkpoints, opts, keep,
                                [&](const NClassification& cls, std::span<const PrimePower> f) {
                                  return eval.summand_exact(cls, f);
                                });
  }
  s.wall_seconds = timer.seconds();
  return s;
}

CheckpointSeries duality_series(const PrimeSet& set, std::vector<uint64_t> checkpoints,
                                SumMode mode, const EngineOptions& opts) {
  validate_checkpoints(checkpoints, mode);
  Stopwatch timer;
  CheckpointSeries s;
  s.set = set;
  s.mode = mode;
  s.is_duality_count = true;
  s.checkpoints = std::move(checkpoints);
  s.target = set.analytic_density();

  const uint64_t hi = s.checkpoints.back() + 1;
  const auto bounds = segment_boundaries(2, hi, opts.segment_size, s.checkpoints);
  const auto base_primes = hi > 2 ? primes_upto(isqrt_u64(hi - 1)) : std::vector<uint32_t>{};
  auto partials = map_segments<uint64_t>(
      bounds, resolve_threads(opts), base_primes, [&](const FactoredSegment& seg) {
        uint64_t count = 0;
        for (const auto& cls : seg.records)
          if (cls.n >= 2 && set.contains(cls.lpf)) ++count;
        return count;
      });

  struct CountAcc {
    uint64_t count = 0;
    void add(uint64_t c) { count += c; }
  };
  std::vector<uint64_t> counts(s.checkpoints.size());
  fold_with_checkpoints<CountAcc>(bounds, partials, s.checkpoints,
                                  [&](size_t ci, const CountAcc& acc) { counts[ci] = acc.count; });

  for (size_t i = 0; i < s.checkpoints.size(); ++i) {
    if (mode == SumMode::Float)
      s.values.push_back(static_cast<double>(counts[i]) / static_cast<double>(s.checkpoints[i]));
    else
      s.values_exact.push_back(Rational::ratio(counts[i], s.checkpoints[i]));
  }
  s.wall_seconds = timer.seconds();
  return s;
}

CheckpointSeries weighted_duality_series(const PrimeSet& f_set, const WeightSpec& weight,
                                         std::vector<uint64_t> checkpoints, SumMode mode,
                                         const EngineOptions& opts) {
  if (!weight.denominator_is_n())
    throw std::domain_error("duality requires a weight with denominator n (mu/n, ramanujan/n, lambda/n)");
  return alladi_series(weight, f_set, std::move(checkpoints), mode, opts);
}

DualityPair duality_pair(const PrimeSet& set, const WeightSpec& weight,
                         std::vector<uint64_t> checkpoints, SumMode mode,
                         const EngineOptions& opts) {
  if (!weight.denominator_is_n())
    throw std::domain_error("duality requires a weight with denominator n (mu/n, ramanujan/n, lambda/n)");
  validate_checkpoints(checkpoints, mode);
  Stopwatch timer;

  DualityPair pair;
  pair.weighted.weight = weight;
  pair.weighted.set = set;
  pair.weighted.mode = mode;
  pair.weighted.checkpoints = checkpoints;
  pair.weighted.target = set.analytic_density();
  pair.counts.set = set;
  pair.counts.mode = mode;
  pair.counts.is_duality_count = true;
  pair.counts.checkpoints = checkpoints;
  pair.counts.target = set.analytic_density();

  const WeightEvaluator eval(weight);
  const uint64_t hi = checkpoints.back() + 1;
  const auto bounds = segment_boundaries(2, hi, opts.segment_size, checkpoints);
  const auto base_primes = hi > 2 ? primes_upto(isqrt_u64(hi - 1)) : std::vector<uint32_t>{};

  if (mode == SumMode::Float) {
    struct Partial {
      FloatPartial weighted;
      uint64_t count = 0;
    };
    auto partials = map_segments<Partial>(
        bounds, resolve_threads(opts), base_primes, [&](const FactoredSegment& seg) {
          Partial p;
          NeumaierAcc acc;
          for (size_t i = 0; i < seg.records.size(); ++i) {
            const auto& cls = seg.records[i];
            if (cls.n < 2) continue;
            if (set.contains(cls.lpf)) ++p.count;
            if (eval.nonzero(cls, seg.factors(i)) && set.contains(cls.spf))
              acc.add(eval.summand(cls, seg.factors(i)));
          }
          p.weighted = acc.partial();
          return p;
        });
    struct Acc {
      NeumaierAcc weighted;
      uint64_t count = 0;
      void add(const Partial& p) {
        weighted.add(p.weighted);
        count += p.count;
      }
    };
    pair.weighted.values.resize(checkpoints.size());
    pair.counts.values.resize(checkpoints.size());
    fold_with_checkpoints<Acc>(bounds, partials, checkpoints, [&](size_t ci, const Acc& acc) {
      pair.weighted.values[ci] = acc.weighted.value();
      pair.counts.values[ci] =
          static_cast<double>(acc.count) / static_cast<double>(checkpoints[ci]);
    });
  } else {
    struct Partial {
      Rational weighted;
      uint64_t count = 0;
    };
    auto partials = map_segments<Partial>(
        bounds, resolve_threads(opts), base_primes, [&](const FactoredSegment& seg) {
          Partial p;
          std::vector<Rational> terms;
          for (size_t i = 0; i < seg.records.size(); ++i) {
            const auto& cls = seg.records[i];
            if (cls.n < 2) continue;
            if (set.contains(cls.lpf)) ++p.count;
            if (eval.nonzero(cls, seg.factors(i)) && set.contains(cls.spf))
              terms.push_back(eval.summand_exact(cls, seg.factors(i)));
          }
          p.weighted = pairwise_sum(terms);
          return p;
        });
    struct Acc {
      Rational weighted;
      uint64_t count = 0;
      void add(const Partial& p) {
        weighted += p.weighted;
        count += p.count;
      }
    };
    pair.weighted.values_exact.resize(checkpoints.size());
    pair.counts.values_exact.resize(checkpoints.size());
    fold_with_checkpoints<Acc>(bounds, partials, checkpoints, [&](size_t ci, const Acc& acc) {
      pair.weighted.values_exact[ci] = acc.weighted;
      pair.counts.values_exact[ci] = Rational::ratio(acc.count, checkpoints[ci]);
    });
  }
  pair.weighted.wall_seconds = pair.counts.wall_seconds = timer.seconds();
  return pair;
}

// ---------------------------------------------------------------------------
// R(x, y)
// ---------------------------------------------------------------------------

namespace {
void check_r_bound(const RSumQuery& q) {
  const bool ok = q.mode == SumMode::Float ? std::abs(q.value) <= 1.0 + 1e-9
                                           : abs(q.value_exact) <= Rational(1);
  if (!ok) throw std::logic_error("r_sum: |R(x,y)| <= 1 violated (internal error)");
}
}  // namespace

std::vector<RSumQuery> r_sum_series(uint64_t y, std::span<const uint64_t> xs, SumMode mode,
                                    const EngineOptions& opts) {
  std::vector<uint64_t> cps(xs.begin(), xs.end());
  validate_checkpoints(cps, mode);
  if (y < 1) throw std::domain_error("r_sum: y must be >= 1");

  auto keep = [y](const NClassification& cls, std::span<const PrimePower>) {
    return cls.mu != 0 && cls.spf > y;
  };
  std::vector<RSumQuery> out(cps.size());
  if (mode == SumMode::Float) {
    auto values = scan_float(1, cps, opts, keep,
                             [](const NClassification& cls, std::span<const PrimePower>) {
                               return cls.mu / static_cast<double>(cls.n);
                             });
    for (size_t i = 0; i < cps.size(); ++i) out[i] = {cps[i], y, mode, values[i], Rational(0)};
  } else {
    auto values = scan_exact(1, cps, opts, keep,
                             [](const NClassification& cls, std::span<const PrimePower>) {
                               return Rational(Integer(long{cls.mu}),
                                               Integer(static_cast<unsigned long>(cls.n)));
                             });
    for (size_t i = 0; i < cps.size(); ++i) out[i] = {cps[i], y, mode, 0.0, values[i]};
  }
  for (const auto& q : out) check_r_bound(q);
  return out;
}

RSumQuery r_sum(uint64_t x, uint64_t y, SumMode mode, const EngineOptions& opts) {
  const uint64_t xs[1] = {x};
  return r_sum_series(y, xs, mode, opts)[0];
}

// ---------------------------------------------------------------------------

double cross_validate(const CheckpointSeries& series_float, const CheckpointSeries& series_exact) {
  if (series_float.mode != SumMode::Float || series_exact.mode != SumMode::Exact)
    throw std::domain_error("cross_validate: need a (float, exact) pair");
  if (series_float.checkpoints != series_exact.checkpoints)
    throw std::domain_error("cross_validate: checkpoint grids differ");
  if (series_float.is_duality_count != series_exact.is_duality_count ||
      series_float.weight_descriptor() != series_exact.weight_descriptor() ||
      series_float.set.descriptor() != series_exact.set.descriptor())
    throw std::domain_error("cross_validate: series describe different queries");
  if (series_float.checkpoints.back() > 100'000)
    throw std::domain_error("cross_validate: checkpoints must be <= 1e5");
  double max_diff = 0;
  for (size_t i = 0; i < series_float.checkpoints.size(); ++i)
    max_diff = std::max(max_diff,
                        std::abs(series_float.values[i] - series_exact.values_exact[i].to_double()));
  return max_diff;
}

std::vector<uint64_t> pow10_checkpoints(uint64_t xmax, uint64_t first) {
  if (xmax < 1) throw std::domain_error("pow10_checkpoints: xmax must be >= 1");
  if (first < 1) throw std::domain_error("pow10_checkpoints: first must be >= 1");
  std::vector<uint64_t> cps;
  for (uint64_t v = first; v <= xmax;) {
    cps.push_back(v);
    if (v > xmax / 10) break;
    v *= 10;
  }
  if (cps.empty() || cps.back() != xmax) cps.push_back(xmax);
  return cps;
}

}  // namespace alsv
