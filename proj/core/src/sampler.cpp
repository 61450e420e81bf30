#include "kpkvb/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kpkvb {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::Binomial ? "binomial" : "poisson";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "binomial") return ModelKind::Binomial;
    if (s == "poisson") return ModelKind::Poisson;
    throw std::invalid_argument("unknown model kind: " + s);
}

double radial_inverse_cdf(double u, double alpha, double R) {
    if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("radial_inverse_cdf: u outside [0,1)");
    if (!(alpha > 0.0) || !(R > 0.0)) throw std::invalid_argument("radial_inverse_cdf: bad alpha or R");
    return std::acosh(1.0 + u * (std::cosh(alpha * R) - 1.0)) / alpha;
}

PolarPoint sample_point(Rng& rng, const ModelParams& params) {
    double r = radial_inverse_cdf(rng.next_double(), params.alpha, params.R);
    double theta = rng.next_double() * 2.0 * std::numbers::pi;
    return {r, theta};
}

namespace {

PointSet sample_impl(const ModelParams& params, std::uint64_t seed, ModelKind kind, long long count) {
    PointSet ps;
    ps.params = params;
    ps.seed = seed;
    ps.kind = kind;
    Rng rng = Rng::substream(seed, {0x706f696e7473ULL});  // point stream
    ps.points.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) ps.points.push_back(sample_point(rng, params));
    // Angle order serves the pruned builder; this order is the contract.
    std::stable_sort(ps.points.begin(), ps.points.end(), [](const PolarPoint& a, const PolarPoint& b) {
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.r < b.r;
    });
    return ps;
}

}  // namespace

PointSet sample_binomial(const ModelParams& params, std::uint64_t seed) {
    return sample_impl(params, seed, ModelKind::Binomial, params.n);
}

PointSet sample_poisson(const ModelParams& params, std::uint64_t seed) {
    Rng zrng = Rng::substream(seed, {0x636f756e74ULL});  // count stream
    long long z = params.n > 0 ? zrng.poisson(static_cast<double>(params.n)) : 0;
    PointSet ps = sample_impl(params, seed, ModelKind::Poisson, z);
    return ps;
}

double measure_disk(double rho, const ModelParams& params) {
    if (!(rho >= 0.0 && rho <= params.R)) throw std::invalid_argument("measure_disk: rho outside [0,R]");
    double a = params.alpha;
    return static_cast<double>(params.n) * (std::cosh(a * rho) - 1.0) / (std::cosh(a * params.R) - 1.0);
}

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_point_set(std::ostream& os, const PointSet& ps) {
    os << "# kpkvb v1 model=" << to_string(ps.kind) << " n=" << ps.params.n
       << " alpha=" << fmt17(ps.params.alpha) << " nu=" << fmt17(ps.params.nu)
       << " R=" << fmt17(ps.params.R) << " seed=" << ps.seed
       << " count=" << ps.points.size() << "\n";
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        os << i << ' ' << fmt17(ps.points[i].r) << ' ' << fmt17(ps.points[i].theta) << "\n";
    }
}

PointSet read_point_set(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("point set: empty input");
    std::istringstream hs(header);
    std::string tag, ver, field;
    hs >> tag >> ver;
    if (tag != "#" || ver != "kpkvb") throw std::runtime_error("point set: bad header");
    std::string model;
    long long n = 0, count = 0;
    double alpha = 0, nu = 0;
    std::uint64_t seed = 0;
    while (hs >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "model") model = val;
        else if (key == "n") n = std::stoll(val);
        else if (key == "alpha") alpha = std::strtod(val.c_str(), nullptr);
        else if (key == "nu") nu = std::strtod(val.c_str(), nullptr);
        else if (key == "seed") seed = std::stoull(val);
        else if (key == "count") count = std::stoll(val);
    }
    PointSet ps;
    ps.params = ModelParams(n, alpha, nu);
    ps.seed = seed;
    ps.kind = model_kind_from_string(model);
    ps.points.reserve(static_cast<std::size_t>(count));
    long long id;
    double r, theta;
    while (is >> id >> r >> theta) ps.points.push_back({r, theta});
    if (static_cast<long long>(ps.points.size()) != count)
        throw std::runtime_error("point set: record count mismatch");
    return ps;
}

void write_point_set_file(const std::string& path, const PointSet& ps) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_point_set(os, ps);
}

PointSet read_point_set_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_point_set(is);
}

}  // namespace kpkvb
