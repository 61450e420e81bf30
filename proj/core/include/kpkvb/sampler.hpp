#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kpkvb/geometry.hpp"
#include "kpkvb/params.hpp"
#include "kpkvb/rng.hpp"

namespace kpkvb {

enum class ModelKind { Binomial, Poisson };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

// Sampled vertex set. Points are sorted by angle (ties by radius) after
// sampling; vertex id i is the i-th point in that order. Regenerating with
// the same (params, seed, kind) reproduces the list bit-exactly.
struct PointSet {
    std::vector<PolarPoint> points;
    ModelParams params;
    std::uint64_t seed = 0;
    ModelKind kind = ModelKind::Binomial;

    int size() const { return static_cast<int>(points.size()); }
};

// Inverse of the radial CDF (cosh(alpha r) - 1)/(cosh(alpha R) - 1).
// Strictly increasing, maps [0,1) onto [0,R).
double radial_inverse_cdf(double u, double alpha, double R);

// One quasi-uniform point: r by inverse CDF, theta uniform on [0, 2*pi).
PolarPoint sample_point(Rng& rng, const ModelParams& params);

// Exactly n i.i.d. points.
PointSet sample_binomial(const ModelParams& params, std::uint64_t seed);

// Po(n) many i.i.d. points.
PointSet sample_poisson(const ModelParams& params, std::uint64_t seed);

// Expected number of points in the disk of radius rho:
// n * (cosh(alpha rho) - 1)/(cosh(alpha R) - 1). Requires 0 <= rho <= R.
double measure_disk(double rho, const ModelParams& params);

// Text format, round-trips bit-exactly:
//   # kpkvb v1 model=<binomial|poisson> n=<int> alpha=<f> nu=<f> R=<f> seed=<u64> count=<int>
//   <id> <r> <theta>
void write_point_set(std::ostream& os, const PointSet& ps);
PointSet read_point_set(std::istream& is);
void write_point_set_file(const std::string& path, const PointSet& ps);
PointSet read_point_set_file(const std::string& path);

}  // namespace kpkvb
