// Deterministic numerical integration used by the phase-average and
// capacity integrals: adaptive Gauss-Kronrod on finite intervals,
// trapezoidal doubling for 2pi-periodic integrands, and a doubling-window
// scheme for semi-infinite integrals with decaying tails.
#pragma once

#include <functional>
#include <stdexcept>

namespace gtr::quad {

// Thrown by higher-level statistics when a quadrature result fails to
// converge within its evaluation budget.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_evals = 200000;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evals = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

// Adaptive G7-K15 over [a, b], a < b.
QuadResult integrate_finite(const Integrand& f, double a, double b,
                            const QuadSpec& spec = {});

// Trapezoidal rule with point doubling over one period [0, 2pi].
// Spectrally accurate for smooth periodic integrands.
QuadResult integrate_periodic(const Integrand& f, const QuadSpec& spec = {});

// Integral over [a, inf) for absolutely integrable f with decaying tail.
QuadResult integrate_semi_infinite(const Integrand& f, double a,
                                   const QuadSpec& spec = {});

}  // namespace gtr::quad
