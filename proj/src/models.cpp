#include "gtr/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gtr/specfun.hpp"

namespace gtr::models {
namespace {

using specfun::bessel_i0_scaled;
using specfun::bessel_i1_scaled;
using specfun::kPi;

constexpr double kTwoPi = 2.0 * kPi;

void validate_phase(const PhaseDistribution& phase) {
    if (const auto* t = std::get_if<TruncatedUniform>(&phase)) {
        if (!(t->p > 0.0 && t->p <= 1.0)) {
            throw std::invalid_argument("TruncatedUniform: p must be in (0, 1]");
        }
        if (!(std::fabs(t->phi) <= kPi)) {
            throw std::invalid_argument("TruncatedUniform: phi must be in [-pi, pi]");
        }
    } else if (const auto* v = std::get_if<VonMises>(&phase)) {
        if (!(v->eta >= 0.0) || !std::isfinite(v->eta)) {
            throw std::invalid_argument("VonMises: eta must be >= 0 and finite");
        }
    }
}

Statistic to_statistic(const quad::QuadResult& r, const char* what) {
    if (!r.converged) {
        throw quad::NonConvergence(std::string(what) + ": quadrature did not converge");
    }
    return {r.value, Method::Quadrature, r.error_estimate};
}

}  // namespace

ChannelModel::ChannelModel(double K, double delta, double gamma_bar,
                           PhaseDistribution phase, double n0)
    : k_(K), delta_(delta), gamma_bar_(gamma_bar), n0_(n0), phase_(std::move(phase)) {
    if (!(K >= 0.0) || !std::isfinite(K)) {
        throw std::invalid_argument("ChannelModel: K must be >= 0 and finite");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("ChannelModel: delta must be in [0, 1]");
    }
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) {
        throw std::invalid_argument("ChannelModel: gamma_bar must be > 0 and finite");
    }
    if (!(n0 > 0.0) || !std::isfinite(n0)) {
        throw std::invalid_argument("ChannelModel: n0 must be > 0 and finite");
    }
    validate_phase(phase_);
    sigma_ = std::sqrt(gamma_bar_ * n0_ / (2.0 * (1.0 + k_)));
}

double ChannelModel::v1() const {
    return sigma_ * std::sqrt(0.5 * k_) *
           (std::sqrt(1.0 + delta_) + std::sqrt(1.0 - delta_));
}

double ChannelModel::v2() const {
    return sigma_ * std::sqrt(0.5 * k_) *
           (std::sqrt(1.0 + delta_) - std::sqrt(1.0 - delta_));
}

double k_bar(const ChannelModel& model, double alpha) {
    return model.K() * (1.0 + model.delta() * std::cos(alpha));
}

Statistic phase_average(const ChannelModel& model,
                        const std::function<double(double)>& h,
                        const quad::QuadSpec& spec) {
    const PhaseDistribution& phase = model.phase();
    if (std::holds_alternative<Uniform>(phase)) {
        auto r = quad::integrate_periodic(h, spec);
        r.value /= kTwoPi;
        r.error_estimate /= kTwoPi;
        return to_statistic(r, "phase_average(uniform)");
    }
    if (const auto* t = std::get_if<TruncatedUniform>(&phase)) {
        const double lo = kPi * (1.0 - t->p) + t->phi;
        const double hi = kPi * (1.0 + t->p) + t->phi;
        auto r = quad::integrate_finite(h, lo, hi, spec);
        const double norm = 1.0 / (kTwoPi * t->p);
        r.value *= norm;
        r.error_estimate *= norm;
        return to_statistic(r, "phase_average(truncated)");
    }
    const auto& v = std::get<VonMises>(phase);
    const double sign = v.centered_at_pi ? -1.0 : 1.0;
    const double i0s_eta = bessel_i0_scaled(v.eta);
    auto weighted = [&](double a) {
        // exp(sign eta cos a) / I0(eta) in overflow-safe form.
        return h(a) * std::exp(sign * v.eta * std::cos(a) - v.eta) / i0s_eta;
    };
    auto r = quad::integrate_periodic(weighted, spec);
    r.value /= kTwoPi;
    r.error_estimate /= kTwoPi;
    return to_statistic(r, "phase_average(von_mises)");
}

double rician_envelope_pdf(double r, double K, double sigma) {
    if (r < 0.0) throw std::domain_error("rician_envelope_pdf: r must be >= 0");
    if (!(sigma > 0.0)) throw std::domain_error("rician_envelope_pdf: sigma must be > 0");
    if (r == 0.0) return 0.0;
    const double u = r / sigma;
    const double d = u / std::sqrt(2.0) - std::sqrt(K);
    return u / sigma * std::exp(-d * d) * bessel_i0_scaled(u * std::sqrt(2.0 * K));
}

Statistic envelope_pdf(double r, const ChannelModel& model) {
    if (r < 0.0) throw std::domain_error("envelope_pdf: r must be >= 0");
    if (r == 0.0 || model.K() == 0.0 || model.delta() == 0.0) {
        // Constant in alpha: the phase average is the Rician pdf itself.
        return {rician_envelope_pdf(r, model.K(), model.sigma()),
                Method::ClosedForm, 0.0};
    }
    const double sigma = model.sigma();
    return phase_average(model, [&](double a) {
        return rician_envelope_pdf(r, k_bar(model, a), sigma);
    });
}

Statistic envelope_cdf(double r, const ChannelModel& model) {
    if (r < 0.0) throw std::domain_error("envelope_cdf: r must be >= 0");
    if (r == 0.0) return {0.0, Method::ClosedForm, 0.0};
    const double b = r / model.sigma();
    if (model.K() == 0.0 || model.delta() == 0.0) {
        const double v = 1.0 - specfun::marcum_q1(std::sqrt(2.0 * model.K()), b);
        return {std::clamp(v, 0.0, 1.0), Method::ClosedForm, 0.0};
    }
    Statistic s = phase_average(model, [&](double a) {
        return specfun::marcum_q1(std::sqrt(2.0 * k_bar(model, a)), b);
    });
    s.value = std::clamp(1.0 - s.value, 0.0, 1.0);
    return s;
}

Statistic snr_pdf(double gamma, const ChannelModel& model) {
    if (gamma < 0.0) throw std::domain_error("snr_pdf: gamma must be >= 0");
    const double K = model.K();
    const double pref = (1.0 + K) / model.gamma_bar();
    const double s0 = std::sqrt(gamma * pref);
    auto rice_term = [&](double kb) {
        const double rk = std::sqrt(kb);
        const double d = rk - s0;
        return std::exp(-d * d) * bessel_i0_scaled(2.0 * s0 * rk);
    };
    if (K == 0.0 || model.delta() == 0.0) {
        return {pref * rice_term(K), Method::ClosedForm, 0.0};
    }
    Statistic s = phase_average(model, [&](double a) {
        return rice_term(k_bar(model, a));
    });
    s.value *= pref;
    s.error_estimate *= pref;
    return s;
}

Statistic mgf(double s, const ChannelModel& model) {
    const double K = model.K();
    const double gb = model.gamma_bar();
    const double denom = 1.0 + K - s * gb;
    if (!(s * gb < 1.0 + K)) {
        throw std::domain_error("mgf: requires s * gamma_bar < 1 + K");
    }
    const double A = K * s * gb / denom;       // Rician exponent
    const double B = A * model.delta();        // I0 argument
    const PhaseDistribution& phase = model.phase();
    if (std::holds_alternative<Uniform>(phase)) {
        const double v = (1.0 + K) / denom *
                         std::exp(A + std::fabs(B)) * bessel_i0_scaled(B);
        return {v, Method::ClosedForm, 0.0};
    }
    if (const auto* vm = std::get_if<VonMises>(&phase)) {
        const double sign = vm->centered_at_pi ? 1.0 : -1.0;
        const double arg = sign * vm->eta - B;
        const double v = (1.0 + K) / denom * bessel_i0_scaled(arg) /
                         bessel_i0_scaled(vm->eta) *
                         std::exp(A + std::fabs(arg) - vm->eta);
        return {v, Method::ClosedForm, 0.0};
    }
    // Truncated uniform: Lemma-1 average of the Rician MGF, with the
    // (1+K)/gamma_bar factor held fixed.
    const double t = s * gb / denom;
    return phase_average(model, [&](double a) {
        return (1.0 + K) / denom * std::exp(k_bar(model, a) * t);
    });
}

Statistic moment(int k, const ChannelModel& model) {
    if (k < 1) throw std::domain_error("moment: requires k >= 1");
    const double K = model.K();
    const double gb = model.gamma_bar();
    if (std::holds_alternative<Uniform>(model.phase())) {
        if (k == 1) return {gb, Method::ClosedForm, 0.0};
        if (k == 2) {
            const double kp1 = 1.0 + K;
            const double d2 = model.delta() * model.delta();
            const double v = gb * gb / (kp1 * kp1) *
                             (2.0 + 4.0 * K + K * K * (1.0 + 0.5 * d2));
            return {v, Method::ClosedForm, 0.0};
        }
    }
    double pref = std::pow(gb / (1.0 + K), k);
    for (int i = 2; i <= k; ++i) pref *= i;  // k!
    Statistic s = phase_average(model, [&](double a) {
        return specfun::laguerre(k, -k_bar(model, a));
    });
    s.value *= pref;
    s.error_estimate *= std::fabs(pref);
    return s;
}

Statistic mean_snr(const ChannelModel& model) {
    const double gb = model.gamma_bar();
    const double K = model.K();
    const double shift_scale = model.delta() * K / (K + 1.0);
    const PhaseDistribution& phase = model.phase();
    if (std::holds_alternative<Uniform>(phase)) {
        return {gb, Method::ClosedForm, 0.0};
    }
    if (const auto* t = std::get_if<TruncatedUniform>(&phase)) {
        // Support is centered at pi + phi: phi = 0 gives the pi-centered
        // (minus-sign) case, phi = +-pi the zero-centered one.
        if (t->phi == 0.0) {
            return {gb * (1.0 - shift_scale * specfun::sinc_pi(t->p)),
                    Method::ClosedForm, 0.0};
        }
        if (std::fabs(std::fabs(t->phi) - kPi) < 1e-15) {
            return {gb * (1.0 + shift_scale * specfun::sinc_pi(t->p)),
                    Method::ClosedForm, 0.0};
        }
        return moment(1, model);
    }
    const auto& vm = std::get<VonMises>(phase);
    const double ratio = bessel_i1_scaled(vm.eta) / bessel_i0_scaled(vm.eta);
    const double sign = vm.centered_at_pi ? -1.0 : 1.0;
    return {gb * (1.0 + sign * shift_scale * ratio), Method::ClosedForm, 0.0};
}

Statistic amount_of_fading(const ChannelModel& model) {
    const double K = model.K();
    if (std::holds_alternative<Uniform>(model.phase())) {
        const double kp1 = 1.0 + K;
        const double d2 = model.delta() * model.delta();
        return {(2.0 + 4.0 * K + K * K * d2) / (2.0 * kp1 * kp1),
                Method::ClosedForm, 0.0};
    }
    const Statistic m1 = moment(1, model);
    const Statistic m2 = moment(2, model);
    const double mean2 = m1.value * m1.value;
    return {(m2.value - mean2) / mean2, Method::Quadrature,
            m2.error_estimate / mean2};
}

Statistic level_crossing_rate(double r_th, const ChannelModel& model,
                              const MobilityConfig& mob) {
    if (!(r_th > 0.0)) throw std::domain_error("level_crossing_rate: r_th must be > 0");
    if (!(mob.f_d > 0.0) || !std::isfinite(mob.f_d)) {
        throw std::domain_error("level_crossing_rate: f_d must be > 0 and finite");
    }
    const double scale = std::sqrt(0.5 * kPi) *
                         std::sqrt(model.mean_power() / (model.K() + 1.0)) *
                         mob.f_d;
    Statistic pdf = envelope_pdf(r_th, model);
    pdf.value *= scale;
    pdf.error_estimate *= scale;
    return pdf;
}

Statistic average_outage_duration(double r_th, const ChannelModel& model,
                                  const MobilityConfig& mob) {
    const Statistic lcr = level_crossing_rate(r_th, model, mob);
    if (!(lcr.value > 0.0)) {
        throw std::domain_error("average_outage_duration: envelope pdf vanishes at r_th");
    }
    const Statistic cdf = envelope_cdf(r_th, model);
    const double v = cdf.value / lcr.value;
    const Method m = (cdf.method == Method::ClosedForm &&
                      lcr.method == Method::ClosedForm)
                         ? Method::ClosedForm
                         : Method::Quadrature;
    const double err = (cdf.error_estimate +
                        cdf.value * lcr.error_estimate / lcr.value) / lcr.value;
    return {v, m, m == Method::ClosedForm ? 0.0 : err};
}

}  // namespace gtr::models
