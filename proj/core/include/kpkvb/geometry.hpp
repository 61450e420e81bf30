#pragma once

#include <cmath>

namespace kpkvb {

// Position in the hyperbolic disk D_R: radial coordinate r (distance from the
// origin) and angle theta in [0, 2*pi).
struct PolarPoint {
    double r;
    double theta;
};

// Two-sided band around the first-order estimate 2*exp((R-r1-r2)/2) of the
// critical angle.
struct CriticalAngleBounds {
    double lower;
    double upper;
    double point_estimate;
};

// Maps any real angle into [0, 2*pi).
double normalize_angle(double theta);

// min(|dt|, 2*pi - |dt|), in [0, pi]. Total in both arguments.
double angular_distance(double theta1, double theta2);

// Hyperbolic law of cosines. Always >= 0, symmetric.
double hyperbolic_distance(const PolarPoint& p1, const PolarPoint& p2);

// Critical angle theta_R(r1, r2): the largest angular separation at which two
// points with radii r1, r2 are still within hyperbolic distance R.
// Defined as pi when r1 + r2 <= R or either radius is 0. Throws on negative
// radii or r >= R.
double critical_angle(double r1, double r2, double R);

// First-order estimate 2*exp((R-r1-r2)/2) with error band K*exp(3(R-r1-r2)/2).
// Requires r1 + r2 > R.
CriticalAngleBounds critical_angle_bounds(double r1, double r2, double R, double K);

// Canonical adjacency predicate: angular_distance <= critical_angle. Every
// verifier and builder must go through this, not a re-derivation.
bool is_adjacent(const PolarPoint& p1, const PolarPoint& p2, double R);

}  // namespace kpkvb
