// Monte Carlo oracle for the GTR physical model: samples the two-LOS-plus-
// diffuse signal under any phase distribution and produces empirical
// envelope statistics, SEP, and capacity estimates.
//
// Reproducibility: every worker owns a disjoint SplitMix64 counter stream
// derived from (seed, worker index); partial results are merged in worker
// order, so summaries are bit-identical for fixed (seed, workers, n_samples)
// regardless of scheduling. Normal variates use Box-Muller on explicitly
// constructed (0,1] uniforms, which is portable across platforms.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gtr/models.hpp"
#include "gtr/perf.hpp"

namespace gtr::mcsim {

struct SimConfig {
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct EmpiricalSummary {
    double mean = 0.0;
    double raw_moment2 = 0.0;
    double raw_moment3 = 0.0;
    double raw_moment4 = 0.0;
    std::vector<double> sorted_samples;  // empirical cdf support
    std::uint64_t n = 0;
};

struct MeanEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

// Deterministic counter-based stream (SplitMix64).
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next_u64();
    double next_unit();         // uniform in (0, 1]
    double next_normal();       // standard normal, Box-Muller
    double next_uniform(double lo, double hi);

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Von Mises sample with density exp(eta cos(a - center)) / (2 pi I0(eta)),
// in [0, 2 pi), by the Best-Fisher rejection method.
double sample_von_mises(double eta, double center, Rng& rng);

// One envelope draw r = |V1 e^{j phi1} + V2 e^{j(phi1+alpha)} + X + jY|.
double sample_envelope_once(const models::ChannelModel& model, Rng& rng);

EmpiricalSummary sample_envelope(const models::ChannelModel& model,
                                 const SimConfig& cfg);

// Rao-Blackwellized SEP: averages the conditional AWGN SEP over sampled
// MRC-combined SNR.
MeanEstimate mc_sep(const perf::Modulation& mod, const perf::LinkConfig& link,
                    const SimConfig& cfg);

// Estimator of E[log2(1 + gamma)].
MeanEstimate mc_capacity(const perf::LinkConfig& link, const SimConfig& cfg);

// Kolmogorov-Smirnov distance between sorted samples and an analytic cdf.
// The cdf is tabulated on grid_points abscissae and linearly interpolated.
double ks_distance(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf,
                   int grid_points = 8001);

}  // namespace gtr::mcsim
