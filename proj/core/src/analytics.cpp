#include "kpkvb/analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kpkvb/sampler.hpp"

namespace kpkvb {

double c_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("c_alpha: alpha must lie in (0, 1/2)");
    double x = 1.0 / (2.0 * alpha);
    return std::exp(x) * (alpha / (std::numbers::pi * (0.5 - alpha))) * std::expm1(x - 1.0);
}

double nu0_bound(double alpha) {
    return (1.0 + std::log1p(-std::exp(-1.0))) / c_alpha(alpha);
}

double ens_lower(const ModelParams& params) {
    return static_cast<double>(params.n) * std::exp(-params.nu * c_alpha(params.alpha)) *
           (-std::expm1(-1.0));
}

double ems(const ModelParams& params) {
    double s = 1.0 / params.alpha;
    if (s >= params.R) throw std::invalid_argument("ems: annulus width >= R");
    return measure_disk(params.R - s, params);
}

double chernoff_rate(double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("chernoff_rate: negative argument");
    if (a == 0.0) return 1.0;
    return 1.0 - a + a * std::log(a);
}

double chernoff_poisson_lower_tail(double mu, double k) {
    if (!(mu > 0.0) || !(k > 0.0) || k > mu)
        throw std::invalid_argument("chernoff_poisson_lower_tail: requires 0 < k <= mu");
    return std::exp(-mu * chernoff_rate(k / mu));
}

double avg_degree_limit(double alpha, double nu) {
    if (!(alpha > 0.5)) throw std::invalid_argument("avg_degree_limit: requires alpha > 1/2");
    double d = alpha - 0.5;
    return 2.0 * alpha * alpha * nu / (std::numbers::pi * d * d);
}

PhaseConstants phase_constants(double alpha) {
    PhaseConstants pc;
    pc.alpha = alpha;
    pc.s = 1.0 / alpha;
    pc.c_alpha = c_alpha(alpha);
    pc.nu0_bound = nu0_bound(alpha);
    return pc;
}

}  // namespace kpkvb
