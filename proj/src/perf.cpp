#include "gtr/perf.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "gtr/specfun.hpp"

namespace gtr::perf {
namespace {

using models::ChannelModel;
using models::Method;
using models::Statistic;
using specfun::bessel_i0_scaled;
using specfun::bessel_i1_scaled;
using specfun::kLog2E;
using specfun::kPi;

bool power_of_two(int m) { return m >= 2 && (m & (m - 1)) == 0; }

bool perfect_square(int m) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    return r * r == m;
}

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

// (1/pi) int_0^beta f(theta) dtheta.
Statistic aux_integral(const std::function<double(double)>& f, double beta) {
    quad::QuadSpec spec;
    spec.rel_tol = 1e-11;
    auto r = quad::integrate_finite(f, 0.0, beta, spec);
    if (!r.converged) {
        throw quad::NonConvergence("sep: SEP integral did not converge");
    }
    return {r.value / kPi, Method::Quadrature, r.error_estimate / kPi};
}

double mgf_product(const LinkConfig& link, double s) {
    double v = 1.0;
    for (const auto& b : link.branches) v *= models::mgf(s, b).value;
    return v;
}

// MRC MGF derivative: sum over branches of (derivative) x (product of the rest).
double mgf_product_derivative(const LinkConfig& link, double s) {
    const std::size_t n = link.branches.size();
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        double term = mgf_derivative(s, link.branches[l]).value;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != l) term *= models::mgf(s, link.branches[k]).value;
        }
        total += term;
    }
    return total;
}

double log_half_one_plus_sqrt(double delta) {
    // log((1 + sqrt(1 - delta^2)) / 2)
    return std::log(0.5 * (1.0 + std::sqrt((1.0 - delta) * (1.0 + delta))));
}

}  // namespace

void validate(const Modulation& mod) {
    if (const auto* q = std::get_if<MQAM>(&mod)) {
        if (q->m < 4 || !perfect_square(q->m)) {
            throw std::domain_error("MQAM: M must be a perfect square >= 4");
        }
        return;
    }
    const int m = std::visit([](const auto& x) { return x.m; }, mod);
    if (!power_of_two(m)) {
        throw std::domain_error("Modulation: M must be a power of two >= 2");
    }
}

LinkConfig LinkConfig::iid(const models::ChannelModel& m, int l) {
    if (l < 1) throw std::domain_error("LinkConfig: L must be >= 1");
    return {std::vector<models::ChannelModel>(static_cast<std::size_t>(l), m)};
}

double LinkConfig::total_gamma_bar() const {
    double g = 0.0;
    for (const auto& b : branches) g += b.gamma_bar();
    return g;
}

double awgn_sep(const Modulation& mod, double gamma) {
    validate(mod);
    if (gamma < 0.0) throw std::domain_error("awgn_sep: gamma must be >= 0");
    if (const auto* p = std::get_if<MPSK>(&mod)) {
        const double sp = std::sin(kPi / p->m);
        const double g = sp * sp;
        if (p->m == 2) return 0.5 * std::erfc(std::sqrt(gamma));
        const double beta = (p->m - 1.0) * kPi / p->m;
        auto r = quad::integrate_finite(
            [&](double th) {
                const double st = std::sin(th);
                return std::exp(-gamma * g / (st * st));
            },
            0.0, beta);
        return r.value / kPi;
    }
    if (const auto* q = std::get_if<MQAM>(&mod)) {
        const double c = 1.0 - 1.0 / std::sqrt(static_cast<double>(q->m));
        const double g = 1.5 / (q->m - 1.0);
        const double qf = 0.5 * std::erfc(std::sqrt(g * gamma));
        return 4.0 * c * qf - 4.0 * c * c * qf * qf;
    }
    if (const auto* d = std::get_if<MDPSK>(&mod)) {
        if (d->m == 2) return 0.5 * std::exp(-gamma);
        const double sp = std::sin(kPi / d->m);
        const double cp = std::cos(kPi / d->m);
        const double beta = (d->m - 1.0) * kPi / d->m;
        auto r = quad::integrate_finite(
            [&](double th) {
                return std::exp(-gamma * sp * sp / (1.0 + cp * std::cos(th)));
            },
            0.0, beta);
        return r.value / kPi;
    }
    const auto& f = std::get<MFSK>(mod);
    double sum = 0.0;
    for (int m = 1; m <= f.m - 1; ++m) {
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;
        sum += sign * binomial(f.m - 1, m) / (m + 1.0) *
               std::exp(-gamma * m / (m + 1.0));
    }
    return sum;
}

models::Statistic sep(const Modulation& mod, const LinkConfig& link) {
    validate(mod);
    if (link.branches.empty()) throw std::domain_error("sep: empty link");
    if (const auto* p = std::get_if<MPSK>(&mod)) {
        const double sp = std::sin(kPi / p->m);
        const double g = sp * sp;
        const double beta = (p->m - 1.0) * kPi / p->m;
        return aux_integral(
            [&](double th) {
                const double st = std::sin(th);
                if (st < 1e-120) return 0.0;  // MGF -> 0 as s -> -inf
                return mgf_product(link, -g / (st * st));
            },
            beta);
    }
    if (const auto* q = std::get_if<MQAM>(&mod)) {
        const double c = 1.0 - 1.0 / std::sqrt(static_cast<double>(q->m));
        const double g = 1.5 / (q->m - 1.0);
        auto integrand = [&](double th) {
            const double st = std::sin(th);
            if (st < 1e-120) return 0.0;
            return mgf_product(link, -g / (st * st));
        };
        const Statistic i1 = aux_integral(integrand, 0.5 * kPi);
        const Statistic i2 = aux_integral(integrand, 0.25 * kPi);
        return {4.0 * c * i1.value - 4.0 * c * c * i2.value, Method::Quadrature,
                4.0 * c * i1.error_estimate + 4.0 * c * c * i2.error_estimate};
    }
    if (const auto* d = std::get_if<MDPSK>(&mod)) {
        const double sp = std::sin(kPi / d->m);
        const double cp = std::cos(kPi / d->m);
        const double beta = (d->m - 1.0) * kPi / d->m;
        return aux_integral(
            [&](double th) {
                return mgf_product(link, -sp * sp / (1.0 + cp * std::cos(th)));
            },
            beta);
    }
    const auto& f = std::get<MFSK>(mod);
    if (link.branches.size() != 1) {
        throw std::domain_error("sep: MFSK supports single-branch reception only");
    }
    double sum = 0.0, err = 0.0;
    Method method = Method::ClosedForm;
    for (int m = 1; m <= f.m - 1; ++m) {
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;
        const Statistic ms = models::mgf(-static_cast<double>(m) / (m + 1.0),
                                         link.branches.front());
        const double w = binomial(f.m - 1, m) / (m + 1.0);
        sum += sign * w * ms.value;
        err += w * ms.error_estimate;
        if (ms.method == Method::Quadrature) method = Method::Quadrature;
    }
    return {sum, method, err};
}

double ber_dbpsk_closed_form(const ChannelModel& model) {
    const double K = model.K();
    const double gb = model.gamma_bar();
    const double denom = 1.0 + K + gb;
    const double A = -K * gb / denom;
    const double B = K * gb * model.delta() / denom;
    return 0.5 * (1.0 + K) / denom * std::exp(A + B) * bessel_i0_scaled(B);
}

double ber_dbpsk_hyper_rayleigh(const ChannelModel& model) {
    const double gb = model.gamma_bar();
    const double B = model.delta() * gb;
    return 0.5 * std::exp(-gb + B) * bessel_i0_scaled(B);
}

double ber_dbpsk_high_snr(const ChannelModel& model) {
    const double K = model.K();
    const double B = model.delta() * K;
    return 0.5 / (1.0 + model.gamma_bar() / (K + 1.0)) *
           std::exp(-K + B) * bessel_i0_scaled(B);
}

models::Statistic mgf_derivative(double s, const ChannelModel& model) {
    const double K = model.K();
    const double gb = model.gamma_bar();
    const double denom = 1.0 + K - s * gb;
    if (!(s * gb < 1.0 + K)) {
        throw std::domain_error("mgf_derivative: requires s * gamma_bar < 1 + K");
    }
    const double pref = (1.0 + K) * gb / (denom * denom);
    if (std::holds_alternative<models::Uniform>(model.phase())) {
        const double A = K * s * gb / denom;
        const double B = A * model.delta();
        const double scale = std::exp(A + std::fabs(B));
        const double bracket =
            bessel_i0_scaled(B) * (1.0 + K * (1.0 + K) / denom) +
            model.delta() * K * (1.0 + K) / denom * bessel_i1_scaled(B);
        return {pref * scale * bracket, Method::ClosedForm, 0.0};
    }
    // Lemma-1 average of the Rician MGF derivative at k_bar(alpha), holding
    // (1+K)/gamma_bar fixed.
    const double t = s * gb / denom;
    Statistic st = models::phase_average(model, [&](double a) {
        const double kb = models::k_bar(model, a);
        return std::exp(kb * t) * (1.0 + kb * (1.0 + K) / denom);
    });
    st.value *= pref;
    st.error_estimate *= pref;
    return st;
}

models::Statistic capacity_ora(const LinkConfig& link) {
    if (link.branches.empty()) throw std::domain_error("capacity_ora: empty link");
    auto integrand = [&](double s) {
        return specfun::gamma_upper_zero(s) * mgf_product_derivative(link, -s);
    };
    quad::QuadSpec spec;
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-12;
    // [0, 1] with the log singularity mapped out by s = exp(-u), then the tail.
    auto head = quad::integrate_semi_infinite(
        [&](double u) {
            const double s = std::exp(-u);
            return integrand(s) * s;
        },
        0.0, spec);
    auto tail = quad::integrate_semi_infinite(integrand, 1.0, spec);
    if (!head.converged || !tail.converged) {
        throw quad::NonConvergence("capacity_ora: integral did not converge");
    }
    return {kLog2E * (head.value + tail.value), Method::Quadrature,
            kLog2E * (head.error_estimate + tail.error_estimate)};
}

double capacity_low_snr(const LinkConfig& link) {
    if (link.branches.empty()) throw std::domain_error("capacity_low_snr: empty link");
    return link.total_gamma_bar() * kLog2E;
}

AsymptoticCapacity capacity_high_snr(const ChannelModel& model,
                                     CapacityRegime regime) {
    if (!std::holds_alternative<models::Uniform>(model.phase())) {
        throw std::domain_error("capacity_high_snr: uniform phase only");
    }
    const double K = model.K();
    const double delta = model.delta();
    if (!(K > 0.0)) throw std::domain_error("capacity_high_snr: requires K > 0");
    const double nu = 0.1 * std::log(10.0) * kLog2E;
    const double base = std::log(K / (K + 1.0));
    double mu = 0.0;
    switch (regime) {
        case CapacityRegime::RiceExact:
            mu = kLog2E * (base + specfun::gamma_upper_zero(K));
            break;
        case CapacityRegime::GtrExact: {
            const double j = (delta > 0.0) ? j_integral(K, delta).value
                                           : specfun::gamma_upper_zero(K);
            mu = kLog2E * (base + log_half_one_plus_sqrt(delta) + j);
            break;
        }
        case CapacityRegime::GtrLargeKDelta: {
            if (!(delta > 0.0)) {
                throw std::domain_error(
                    "capacity_high_snr: GtrLargeKDelta requires delta > 0");
            }
            mu = kLog2E * (base + log_half_one_plus_sqrt(delta) +
                           j_integral_hankel(K, delta));
            break;
        }
        case CapacityRegime::GtrDeltaOne:
            if (delta != 1.0) {
                throw std::domain_error(
                    "capacity_high_snr: GtrDeltaOne requires delta = 1");
            }
            mu = kLog2E * (base - std::log(2.0) + std::sqrt(2.0 / (kPi * K)));
            break;
    }
    return {nu, mu, regime};
}

models::Statistic j_integral(double K, double delta) {
    if (!(K > 0.0)) throw std::domain_error("j_integral: requires K > 0");
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::domain_error("j_integral: requires delta in (0, 1]");
    }
    quad::QuadSpec spec;
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-14;
    spec.max_evals = 500000;
    const double rate = K * (1.0 - delta);
    auto r = quad::integrate_semi_infinite(
        [&](double t) {
            return std::exp(-t * rate) * bessel_i0_scaled(t * K * delta) / t;
        },
        1.0, spec);
    if (!r.converged) {
        throw quad::NonConvergence("j_integral: integral did not converge");
    }
    return {r.value, Method::Quadrature, r.error_estimate};
}

double j_integral_hankel(double K, double delta) {
    if (!(K > 0.0)) throw std::domain_error("j_integral_hankel: requires K > 0");
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::domain_error("j_integral_hankel: requires delta in (0, 1]");
    }
    if (delta == 1.0) return std::sqrt(2.0 / (kPi * K));
    // First-term Hankel substitution evaluated exactly:
    //   (2 pi K delta)^{-1/2} int_1^inf e^{-at} t^{-3/2} dt,  a = K (1 - delta).
    const double a = K * (1.0 - delta);
    return std::sqrt(2.0 / kPi) * std::exp(-a) / std::sqrt(K * delta) -
           std::sqrt(2.0 * (1.0 / delta - 1.0)) * std::erfc(std::sqrt(a));
}

double capacity_loss(double K, double delta) {
    if (!(K > 0.0)) throw std::domain_error("capacity_loss: requires K > 0");
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::domain_error("capacity_loss: requires delta in [0, 1]");
    }
    if (delta == 0.0) return 0.0;
    return kLog2E * (specfun::gamma_upper_zero(K) - log_half_one_plus_sqrt(delta) -
                     j_integral(K, delta).value);
}

double rician_moment_derivative(double K, double gamma_bar) {
    if (!(K >= 0.0)) throw std::domain_error("rician_moment_derivative: K must be >= 0");
    if (!(gamma_bar > 0.0)) {
        throw std::domain_error("rician_moment_derivative: gamma_bar must be > 0");
    }
    if (K < 1e-300) return std::log(gamma_bar) - specfun::kEulerGamma;
    return specfun::gamma_upper_zero(K) + std::log(K) +
           std::log(gamma_bar / (K + 1.0));
}

}  // namespace gtr::perf
