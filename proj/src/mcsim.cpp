#include "gtr/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gtr/specfun.hpp"

namespace gtr::mcsim {
namespace {

using models::ChannelModel;
using specfun::kPi;

constexpr double kTwoPi = 2.0 * kPi;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double sample_alpha(const ChannelModel& model, Rng& rng) {
    const models::PhaseDistribution& phase = model.phase();
    if (std::holds_alternative<models::Uniform>(phase)) {
        return rng.next_uniform(0.0, kTwoPi);
    }
    if (const auto* t = std::get_if<models::TruncatedUniform>(&phase)) {
        return rng.next_uniform(kPi * (1.0 - t->p) + t->phi,
                                kPi * (1.0 + t->p) + t->phi);
    }
    const auto& v = std::get<models::VonMises>(phase);
    return sample_von_mises(v.eta, v.centered_at_pi ? kPi : 0.0, rng);
}

// Runs fn(worker_rng, count, partial) on each worker and merges partials in
// worker order.
template <typename Partial, typename Fn>
std::vector<Partial> run_workers(const SimConfig& cfg, Fn fn) {
    if (cfg.workers < 1) throw std::invalid_argument("SimConfig: workers must be >= 1");
    if (cfg.n_samples < 1) throw std::invalid_argument("SimConfig: n_samples must be >= 1");
    const int w = cfg.workers;
    std::vector<Partial> partials(w);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (int i = 0; i < w; ++i) {
        const std::uint64_t count =
            cfg.n_samples / w + (static_cast<std::uint64_t>(i) < cfg.n_samples % w);
        threads.emplace_back([&, i, count] {
            Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
            fn(rng, count, partials[static_cast<std::size_t>(i)]);
        });
    }
    for (auto& t : threads) t.join();
    return partials;
}

struct MomentPartial {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::vector<double> samples;
};

struct MeanPartial {
    double s1 = 0, s2 = 0;
    std::uint64_t n = 0;
};

MeanEstimate merge_mean(const std::vector<MeanPartial>& partials) {
    double s1 = 0, s2 = 0;
    std::uint64_t n = 0;
    for (const auto& p : partials) {
        s1 += p.s1;
        s2 += p.s2;
        n += p.n;
    }
    const double mean = s1 / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    return {mean, std::sqrt(var / n), n};
}

double snr_sample(const ChannelModel& model, Rng& rng) {
    const double r = sample_envelope_once(model, rng);
    return r * r * model.gamma_bar() / model.mean_power();
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed) ^ mix64(stream * 0xD2B74407B1CE6E93ULL + 0x8CB92BA72F3D8DD7ULL)) {}

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::next_unit() {
    // 53-bit mantissa mapped to (0, 1].
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::next_uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
}

double Rng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = kTwoPi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
}

double sample_von_mises(double eta, double center, Rng& rng) {
    if (eta < 0.0) throw std::domain_error("sample_von_mises: eta must be >= 0");
    if (eta < 1e-10) return rng.next_uniform(0.0, kTwoPi);
    // Best-Fisher (1979) wrapped-Cauchy envelope rejection.
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * eta * eta);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * eta);
    const double rr = (1.0 + rho * rho) / (2.0 * rho);
    for (;;) {
        const double z = std::cos(kPi * rng.next_unit());
        const double f = (1.0 + rr * z) / (rr + z);
        const double c = eta * (rr - f);
        const double u2 = rng.next_unit();
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double sign = (rng.next_unit() > 0.5) ? 1.0 : -1.0;
            double a = center + sign * std::acos(f);
            a = std::fmod(a, kTwoPi);
            if (a < 0.0) a += kTwoPi;
            return a;
        }
    }
}

double sample_envelope_once(const ChannelModel& model, Rng& rng) {
    const double alpha = sample_alpha(model, rng);
    const double phi1 = rng.next_uniform(0.0, kTwoPi);
    const double sigma = model.sigma();
    const double v1 = model.v1();
    const double v2 = model.v2();
    const double re = v1 * std::cos(phi1) + v2 * std::cos(phi1 + alpha) +
                      sigma * rng.next_normal();
    const double im = v1 * std::sin(phi1) + v2 * std::sin(phi1 + alpha) +
                      sigma * rng.next_normal();
    return std::hypot(re, im);
}

EmpiricalSummary sample_envelope(const ChannelModel& model, const SimConfig& cfg) {
    auto partials = run_workers<MomentPartial>(
        cfg, [&](Rng& rng, std::uint64_t count, MomentPartial& p) {
            p.samples.reserve(count);
            for (std::uint64_t i = 0; i < count; ++i) {
                const double r = sample_envelope_once(model, rng);
                const double r2 = r * r;
                p.s1 += r;
                p.s2 += r2;
                p.s3 += r2 * r;
                p.s4 += r2 * r2;
                p.samples.push_back(r);
            }
        });
    EmpiricalSummary out;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    out.sorted_samples.reserve(cfg.n_samples);
    for (const auto& p : partials) {
        s1 += p.s1;
        s2 += p.s2;
        s3 += p.s3;
        s4 += p.s4;
        out.sorted_samples.insert(out.sorted_samples.end(), p.samples.begin(),
                                  p.samples.end());
    }
    out.n = cfg.n_samples;
    const double inv = 1.0 / static_cast<double>(out.n);
    out.mean = s1 * inv;
    out.raw_moment2 = s2 * inv;
    out.raw_moment3 = s3 * inv;
    out.raw_moment4 = s4 * inv;
    std::sort(out.sorted_samples.begin(), out.sorted_samples.end());
    return out;
}

MeanEstimate mc_sep(const perf::Modulation& mod, const perf::LinkConfig& link,
                    const SimConfig& cfg) {
    perf::validate(mod);
    if (link.branches.empty()) throw std::domain_error("mc_sep: empty link");
    auto partials = run_workers<MeanPartial>(
        cfg, [&](Rng& rng, std::uint64_t count, MeanPartial& p) {
            for (std::uint64_t i = 0; i < count; ++i) {
                double gamma = 0.0;
                for (const auto& b : link.branches) gamma += snr_sample(b, rng);
                const double v = perf::awgn_sep(mod, gamma);
                p.s1 += v;
                p.s2 += v * v;
            }
            p.n = count;
        });
    return merge_mean(partials);
}

MeanEstimate mc_capacity(const perf::LinkConfig& link, const SimConfig& cfg) {
    if (link.branches.empty()) throw std::domain_error("mc_capacity: empty link");
    auto partials = run_workers<MeanPartial>(
        cfg, [&](Rng& rng, std::uint64_t count, MeanPartial& p) {
            for (std::uint64_t i = 0; i < count; ++i) {
                double gamma = 0.0;
                for (const auto& b : link.branches) gamma += snr_sample(b, rng);
                const double v = std::log2(1.0 + gamma);
                p.s1 += v;
                p.s2 += v * v;
            }
            p.n = count;
        });
    return merge_mean(partials);
}

double ks_distance(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf, int grid_points) {
    if (sorted_samples.empty()) throw std::invalid_argument("ks_distance: no samples");
    const double hi = sorted_samples.back();
    const double step = hi / (grid_points - 1);
    std::vector<double> table(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        table[static_cast<std::size_t>(i)] = cdf(i * step);
    }
    auto interp = [&](double x) {
        if (x <= 0.0) return table.front();
        if (x >= hi) return table.back();
        const double u = x / step;
        const auto idx = static_cast<std::size_t>(u);
        const double frac = u - static_cast<double>(idx);
        return table[idx] * (1.0 - frac) + table[idx + 1] * frac;
    };
    const double n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = interp(sorted_samples[i]);
        const double lo_ecdf = static_cast<double>(i) / n;
        const double hi_ecdf = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo_ecdf, hi_ecdf - f));
    }
    return d;
}

}  // namespace gtr::mcsim
