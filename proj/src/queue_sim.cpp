#include "aoigame/queue_sim.hpp"

#include <cmath>
#include <numeric>

#include "aoigame/errors.hpp"
#include "aoigame/rng.hpp"

namespace aoigame {

namespace {

void validate(const QueueConfig& c) {
  if (c.rates.empty()) throw DomainError("at least one source rate is required");
  for (double r : c.rates) require_positive_rate(r, "source rate");
  require_positive_rate(c.mu, "service rate mu");
  if (c.horizon_time > 0.0) {
    if (!std::isfinite(c.horizon_time)) throw DomainError("horizon time must be finite");
  } else if (c.events == 0) {
    throw DomainError("horizon must be positive");
  }
  if (!(c.warmup_fraction >= 0.0 && c.warmup_fraction < 1.0)) {
    throw DomainError("warm-up fraction must lie in [0, 1)");
  }
  if (c.batches < 2) throw DomainError("at least two batches are required for a standard error");
}

}  // namespace

AoiEstimate simulate(const QueueConfig& config) {
  validate(config);
  const std::size_t n = config.rates.size();
  const double lambda = std::accumulate(config.rates.begin(), config.rates.end(), 0.0);
  const bool by_time = config.horizon_time > 0.0;
  const double warm_time = config.horizon_time * config.warmup_fraction;
  const auto warm_events = static_cast<std::uint64_t>(static_cast<double>(config.events) *
                                                      config.warmup_fraction);

  Rng rng(config.seed);
  double t = 0.0;
  bool busy = false;
  std::size_t owner = 0;
  double gen_time = 0.0;
  std::vector<double> last_gen(n, 0.0);

  // Batch accumulators over the measured window.
  const auto batches = static_cast<std::size_t>(config.batches);
  std::vector<std::vector<double>> area(batches, std::vector<double>(n, 0.0));
  std::vector<double> span(batches, 0.0);
  std::vector<std::uint64_t> deliveries(n, 0);

  const double measured_time = config.horizon_time - warm_time;
  const std::uint64_t measured_events = config.events - warm_events;
  bool measuring = by_time ? warm_time == 0.0 : warm_events == 0;
  double start = 0.0;
  std::uint64_t k = 0, counted = 0;

  auto integrate = [&](double a, double b) {
    if (!measuring || b <= a) return;
    std::size_t idx;
    if (by_time) {
      idx = static_cast<std::size_t>((a - start) / measured_time * static_cast<double>(batches));
    } else {
      idx = static_cast<std::size_t>(counted * batches / measured_events);
    }
    if (idx >= batches) idx = batches - 1;
    span[idx] += b - a;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = last_gen[i];
      area[idx][i] += 0.5 * ((b - u) * (b - u) - (a - u) * (a - u));
    }
  };

  while (true) {
    const double total = lambda + (busy ? config.mu : 0.0);
    double next = t + rng.exponential(total);
    if (by_time) {
      if (!measuring && next >= warm_time) {
        t = warm_time;
        measuring = true;
        start = t;
      }
      if (next >= config.horizon_time) {
        integrate(t, config.horizon_time);
        t = config.horizon_time;
        break;
      }
    }
    integrate(t, next);
    t = next;
    const double pick = rng.uniform() * total;
    if (pick < lambda) {
      double acc = 0.0;
      std::size_t src = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += config.rates[i];
        if (pick < acc) {
          src = i;
          break;
        }
      }
      if (config.own_preemption || !busy || owner != src) {
        busy = true;
        owner = src;
        gen_time = t;
      }
    } else {
      busy = false;
      last_gen[owner] = gen_time;
      if (measuring) ++deliveries[owner];
    }
    ++k;
    if (!by_time) {
      if (measuring) ++counted;
      if (!measuring && k >= warm_events) {
        measuring = true;
        start = t;
      }
      if (k >= config.events) break;
    }
  }

  AoiEstimate est;
  est.config = config;
  est.events = k;
  est.elapsed = t - start;
  est.platforms.resize(n);
  double total_span = 0.0;
  for (double s : span) total_span += s;
  for (std::size_t i = 0; i < n; ++i) {
    double tot = 0.0;
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b) {
      tot += area[b][i];
      if (span[b] > 0.0) means.push_back(area[b][i] / span[b]);
    }
    auto& p = est.platforms[i];
    p.estimate = tot / total_span;
    p.deliveries = deliveries[i];
    if (means.size() >= 2) {
      double m = 0.0;
      for (double v : means) m += v;
      m /= static_cast<double>(means.size());
      double ss = 0.0;
      for (double v : means) ss += (v - m) * (v - m);
      const double nb = static_cast<double>(means.size());
      p.stderr_ = std::sqrt(ss / (nb - 1.0) / nb);
    }
  }
  return est;
}

AoiEstimate simulate(const RateProfile& profile, double mu, std::uint64_t events,
                     std::uint64_t seed) {
  QueueConfig c;
  c.rates = profile.rates();
  c.mu = mu;
  c.events = events;
  c.seed = seed;
  return simulate(c);
}

void write_csv(const AoiEstimate& est, std::ostream& os) {
  os << "platform,estimate,stderr,events\n";
  for (std::size_t i = 0; i < est.platforms.size(); ++i) {
    const auto& p = est.platforms[i];
    os << i << ',' << p.estimate << ',' << p.stderr_ << ',' << p.deliveries << '\n';
  }
}

}  // namespace aoigame
