// Special-function kernel for the GTR fading library.
//
// All Bessel evaluations are exposed in exponentially-scaled form so that
// statistics remain finite for very large K (deep hyper-Rayleigh regimes).
#pragma once

namespace gtr::specfun {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;  // 20 digits
inline constexpr double kLog2E = 1.44269504088896340736;

// Carrier for iteratively-computed special-function values.
struct SpecFunResult {
    double value = 0.0;
    bool converged = false;
    int terms_or_evals = 0;
};

// I0(x) * exp(-|x|). Even in x, value in (0, 1].
double bessel_i0_scaled(double x);

// I1(x) * exp(-|x|). Odd in x.
double bessel_i1_scaled(double x);

// First-order Marcum Q function, Q1(a, b), a,b >= 0.
double marcum_q1(double a, double b);
SpecFunResult marcum_q1_info(double a, double b);

// Upper incomplete gamma of order zero, Gamma(0,x) = E1(x), x > 0.
double gamma_upper_zero(double x);
SpecFunResult gamma_upper_zero_info(double x);

// Laguerre polynomial L_k(z) = 1F1(-k; 1; z) by three-term recurrence.
double laguerre(int k, double z);

// Complementary error function (finite-input checked).
double erfc(double x);

// sin(pi p) / (pi p), with sinc_pi(0) = 1.
double sinc_pi(double p);

}  // namespace gtr::specfun
