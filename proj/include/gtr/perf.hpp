// MGF-based system performance over GTR fading: symbol error probability
// for PSK/QAM/DPSK/FSK (single branch and MRC), DBPSK closed forms and
// asymptotes, and ergodic capacity with low/high-SNR asymptotics.
#pragma once

#include <variant>
#include <vector>

#include "gtr/models.hpp"

namespace gtr::perf {

struct MPSK { int m; };
struct MQAM { int m; };   // square constellations only
struct MDPSK { int m; };
struct MFSK { int m; };
using Modulation = std::variant<MPSK, MQAM, MDPSK, MFSK>;

// Throws std::domain_error on invalid constellation size.
void validate(const Modulation& mod);

struct LinkConfig {
    std::vector<models::ChannelModel> branches;  // independent, MRC-combined

    // Convenience: L i.i.d. branches.
    static LinkConfig iid(const models::ChannelModel& m, int l);
    double total_gamma_bar() const;
};

enum class CapacityRegime { RiceExact, GtrExact, GtrLargeKDelta, GtrDeltaOne };

struct AsymptoticCapacity {
    double slope_nu;       // bps/Hz per dB; 0.1 ln(10) log2(e) for all regimes
    double intercept_mu;   // bps/Hz
    CapacityRegime regime;
};

// Conditional symbol error probability of an AWGN channel at SNR gamma.
double awgn_sep(const Modulation& mod, double gamma);

// Average SEP over the fading link (Table-style MGF integrals).
models::Statistic sep(const Modulation& mod, const LinkConfig& link);

// Binary DPSK closed form (uniform phase): (1/2) M(-1).
double ber_dbpsk_closed_form(const models::ChannelModel& model);
// Hyper-Rayleigh (K -> inf) and high-SNR approximations of the same BER.
double ber_dbpsk_hyper_rayleigh(const models::ChannelModel& model);
double ber_dbpsk_high_snr(const models::ChannelModel& model);

// First derivative of the SNR MGF with respect to s.
models::Statistic mgf_derivative(double s, const models::ChannelModel& model);

// Ergodic capacity, optimal rate adaptation, in bps/Hz.
models::Statistic capacity_ora(const LinkConfig& link);
double capacity_low_snr(const LinkConfig& link);
AsymptoticCapacity capacity_high_snr(const models::ChannelModel& model,
                                     CapacityRegime regime);

// J(K, delta) = int_1^inf (exp(-tK)/t) I0(tK delta) dt, and its large-K*delta
// Hankel-expansion approximation.
models::Statistic j_integral(double K, double delta);
double j_integral_hankel(double K, double delta);

// Asymptotic capacity loss of GTR-U relative to Rician at equal K, SNR.
double capacity_loss(double K, double delta);

// d/dn E[gamma^n] at n = 0 for Rician fading.
double rician_moment_derivative(double K, double gamma_bar);

}  // namespace gtr::perf
