#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "aoigame/model.hpp"

namespace aoigame {

struct QueueConfig {
  std::vector<double> rates;
  double mu = 1.0;
  // Total number of arrival and service events. Ignored if horizon_time > 0.
  std::uint64_t events = 1000000;
  double horizon_time = 0.0;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.01;
  // When false, an arrival from the platform whose update is in service is
  // dropped instead of replacing it.
  bool own_preemption = true;
  int batches = 50;
};

struct PlatformAoi {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t deliveries = 0;
};

struct AoiEstimate {
  std::vector<PlatformAoi> platforms;
  std::uint64_t events = 0;
  double elapsed = 0.0;
  QueueConfig config;
};

// N sources share one exponential server; a new arrival preempts and
// discards whatever is in service. Age is integrated exactly between events.
AoiEstimate simulate(const QueueConfig& config);
AoiEstimate simulate(const RateProfile& profile, double mu, std::uint64_t events,
                     std::uint64_t seed);

// Columns: platform,estimate,stderr,events
void write_csv(const AoiEstimate& est, std::ostream& os);

}  // namespace aoigame
