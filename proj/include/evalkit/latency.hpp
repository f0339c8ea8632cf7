#pragma once

#include "evalkit/eval.hpp"

namespace evalkit {

struct LatencyReport {
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
  int ensemble = 0;
  int reps = 0;
};

/// Wall-clock per full prediction (the predictor closure includes encode,
/// decodes and moment computation). The first 10 calls warm up and are
/// discarded. Requires reps >= 30.
LatencyReport latency_bench(const Predictor& pred, const trajkit::MaskedTrajectory& prefix,
                            int ensemble, int reps);

}  // namespace evalkit
