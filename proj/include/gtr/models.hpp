// Generalized Two-Ray fading family: model parameters, the phase-averaging
// operator over the underlying Rician conditional, and channel statistics
// (pdf, cdf, SNR pdf, MGF, moments, AOF, LCR, AOD).
#pragma once

#include <functional>
#include <variant>

#include "gtr/quad.hpp"

namespace gtr::models {

// Phase-difference distribution between the two LOS components.
struct Uniform {};
struct TruncatedUniform {
    double p = 1.0;     // truncation fraction, (0, 1]
    double phi = 0.0;   // center offset, (-pi, pi); support [pi(1-p)+phi, pi(1+p)+phi]
};
struct VonMises {
    double eta = 0.0;           // concentration, >= 0
    bool centered_at_pi = true; // density exp(-eta cos a) when true
};
using PhaseDistribution = std::variant<Uniform, TruncatedUniform, VonMises>;

class ChannelModel {
  public:
    ChannelModel(double K, double delta, double gamma_bar,
                 PhaseDistribution phase = Uniform{}, double n0 = 1.0);

    double K() const { return k_; }
    double delta() const { return delta_; }
    double gamma_bar() const { return gamma_bar_; }
    double n0() const { return n0_; }
    const PhaseDistribution& phase() const { return phase_; }

    // Derived quantities (single source of truth is (K, delta, gamma_bar, n0)).
    double sigma() const { return sigma_; }
    double mean_power() const { return gamma_bar_ * n0_; }  // P_r = 2 sigma^2 (1+K)
    double v1() const;
    double v2() const;

  private:
    double k_, delta_, gamma_bar_, n0_, sigma_;
    PhaseDistribution phase_;
};

struct MobilityConfig {
    double f_d;  // maximum Doppler frequency, Hz
};

enum class Method { ClosedForm, Quadrature };

struct Statistic {
    double value = 0.0;
    Method method = Method::ClosedForm;
    double error_estimate = 0.0;
};

// Equivalent Rician K for phase difference alpha: K(1 + delta cos(alpha)).
double k_bar(const ChannelModel& model, double alpha);

// Phase-averaging operator: E_alpha[h(alpha)] under the model's phase
// distribution. h receives alpha and typically evaluates a Rician metric at
// k_bar(alpha) while holding (1+K)/gamma_bar fixed.
Statistic phase_average(const ChannelModel& model,
                        const std::function<double(double)>& h,
                        const quad::QuadSpec& spec = {});

// Rician envelope pdf, evaluated in scaled-Bessel form.
double rician_envelope_pdf(double r, double K, double sigma);

Statistic envelope_pdf(double r, const ChannelModel& model);
Statistic envelope_cdf(double r, const ChannelModel& model);
Statistic snr_pdf(double gamma, const ChannelModel& model);

// MGF of the SNR, E[exp(s gamma)]. Closed form for uniform and von Mises
// phase; quadrature for truncated uniform. Requires s gamma_bar < 1 + K.
Statistic mgf(double s, const ChannelModel& model);

// k-th raw moment of the SNR, k >= 1.
Statistic moment(int k, const ChannelModel& model);

Statistic mean_snr(const ChannelModel& model);
Statistic amount_of_fading(const ChannelModel& model);

Statistic level_crossing_rate(double r_th, const ChannelModel& model,
                              const MobilityConfig& mob);
Statistic average_outage_duration(double r_th, const ChannelModel& model,
                                  const MobilityConfig& mob);

}  // namespace gtr::models
