#include "kpkvb/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace kpkvb {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;  // fmod can round up to 2*pi
    return t;
}

double angular_distance(double theta1, double theta2) {
    double d = std::fabs(normalize_angle(theta1) - normalize_angle(theta2));
    return std::min(d, kTwoPi - d);
}

double hyperbolic_distance(const PolarPoint& p1, const PolarPoint& p2) {
    // cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos(dt), rewritten as
    // cosh(r1-r2) + sinh r1 sinh r2 (1 - cos dt) so small distances do not
    // cancel. Argument clamped to >= 1 before inversion.
    double dt = angular_distance(p1.theta, p2.theta);
    double c = std::cosh(p1.r - p2.r) +
               std::sinh(p1.r) * std::sinh(p2.r) * (1.0 - std::cos(dt));
    return std::acosh(std::max(1.0, c));
}

double critical_angle(double r1, double r2, double R) {
    if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("critical_angle: negative radius");
    if (r1 >= R || r2 >= R) throw std::invalid_argument("critical_angle: radius >= R");
    if (r1 == 0.0 || r2 == 0.0) return std::numbers::pi;
    if (r1 + r2 <= R) return std::numbers::pi;
    // Half-angle form of arccos((cosh r1 cosh r2 - cosh R)/(sinh r1 sinh r2)):
    // sin^2(theta/2) = (cosh R - cosh(r1-r2)) / (cosh(r1+r2) - cosh(r1-r2)),
    // which stays accurate when theta is tiny. Argument hard-clamped to [0,1].
    double num = std::cosh(R) - std::cosh(r1 - r2);
    double den = std::cosh(r1 + r2) - std::cosh(r1 - r2);
    double x = num / den;
    x = std::clamp(x, 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(x));
}

CriticalAngleBounds critical_angle_bounds(double r1, double r2, double R, double K) {
    if (r1 + r2 <= R) throw std::invalid_argument("critical_angle_bounds: r1 + r2 <= R");
    double est = 2.0 * std::exp(0.5 * (R - r1 - r2));
    double err = K * std::exp(1.5 * (R - r1 - r2));
    return {est - err, est + err, est};
}

bool is_adjacent(const PolarPoint& p1, const PolarPoint& p2, double R) {
    return angular_distance(p1.theta, p2.theta) <= critical_angle(p1.r, p2.r, R);
}

}  // namespace kpkvb
