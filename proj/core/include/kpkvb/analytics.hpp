#pragma once

#include "kpkvb/params.hpp"

namespace kpkvb {

// Closed-form constants governing the matching obstruction and the degree
// limit. All pure functions.

// c_alpha = e^{1/(2a)} * (a / (pi (1/2 - a))) * (e^{1/(2a)-1} - 1), a in (0, 1/2).
double c_alpha(double alpha);

// Boundary intensity: for every nu below this value,
// e^{-1} < e^{-nu c_alpha} (1 - e^{-1}) holds.
// Equals (1 + ln(1 - e^{-1})) / c_alpha.
double nu0_bound(double alpha);

// Lower bound on the expected number of obstruction vertices:
// n e^{-nu c_alpha} (1 - e^{-1}).
double ens_lower(const ModelParams& params);

// Expected number of vertices inside radius R - s, s = 1/alpha: the
// quasi-uniform measure of that disk times n.
double ems(const ModelParams& params);

// H(a) = 1 - a + a ln a, the Poisson lower-tail rate function (H(0+) = 1).
double chernoff_rate(double a);

// P(X <= k) <= e^{-mu H(k/mu)} for X Poisson(mu), 0 < k <= mu.
double chernoff_poisson_lower_tail(double mu, double k);

// Limit of the average degree for alpha > 1/2: 2 alpha^2 nu / (pi (alpha - 1/2)^2).
double avg_degree_limit(double alpha, double nu);

// One row of the `analytic` table.
struct PhaseConstants {
    double alpha = 0.0;
    double s = 0.0;
    double c_alpha = 0.0;
    double nu0_bound = 0.0;
};

PhaseConstants phase_constants(double alpha);

}  // namespace kpkvb
