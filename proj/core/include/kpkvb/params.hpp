#pragma once

#include <cmath>
#include <stdexcept>

namespace kpkvb {

// Model constants (n, alpha, nu) with the derived disk radius R = 2 ln(n/nu).
// R is always recomputed on construction; it is never stored independently.
struct ModelParams {
    long long n = 0;
    double alpha = 1.0;
    double nu = 1.0;
    double R = 0.0;

    ModelParams() = default;

    ModelParams(long long n_, double alpha_, double nu_)
        : n(n_), alpha(alpha_), nu(nu_) {
        if (n < 0) throw std::invalid_argument("ModelParams: n < 0");
        if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha <= 0");
        if (!(nu > 0.0)) throw std::invalid_argument("ModelParams: nu <= 0");
        if (n > 0 && static_cast<double>(n) <= nu)
            throw std::invalid_argument("ModelParams: need n > nu so that R > 0");
        R = n > 0 ? 2.0 * std::log(static_cast<double>(n) / nu) : 0.0;
    }
};

}  // namespace kpkvb
