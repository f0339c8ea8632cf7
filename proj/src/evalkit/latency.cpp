#include "evalkit/latency.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "trajkit/errors.hpp"

namespace evalkit {

LatencyReport latency_bench(const Predictor& pred, const trajkit::MaskedTrajectory& prefix,
                            int ensemble, int reps) {
  if (reps < 30) throw trajkit::DataError("latency_bench: reps must be >= 30");
  constexpr int kWarmup = 10;
  volatile double sink = 0.0;  // keeps the optimizer from dropping the calls
  for (int i = 0; i < kWarmup; ++i) sink = pred.predict(prefix).back().sum();

  std::vector<double> samples_ms;
  samples_ms.reserve(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) {
    const auto begin = std::chrono::steady_clock::now();
    sink = pred.predict(prefix).back().sum();
    const auto end = std::chrono::steady_clock::now();
    samples_ms.push_back(std::chrono::duration<double, std::milli>(end - begin).count());
  }
  (void)sink;
  std::sort(samples_ms.begin(), samples_ms.end());

  LatencyReport report;
  report.ensemble = ensemble;
  report.reps = reps;
  const std::size_t n = samples_ms.size();
  report.median_ms = n % 2 == 1 ? samples_ms[n / 2]
                                : 0.5 * (samples_ms[n / 2 - 1] + samples_ms[n / 2]);
  const auto p95_rank = static_cast<std::size_t>(std::max<long>(
      0, std::lround(std::ceil(0.95 * static_cast<double>(n))) - 1));
  report.p95_ms = samples_ms[std::min(p95_rank, n - 1)];
  report.max_ms = samples_ms.back();
  return report;
}

}  // namespace evalkit
