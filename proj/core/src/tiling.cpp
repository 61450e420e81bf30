#include "kpkvb/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace kpkvb {

long long LayerGeometry::tiles_in_layer(int i) const {
    long long e = 4 - i + base_exponent;
    if (i < 0 || i > i_max || e < 0) throw std::invalid_argument("tiles_in_layer: inadmissible layer");
    return 1LL << e;
}

LayerGeometry layer_geometry(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("layer_geometry: R <= 0");
    LayerGeometry g;
    g.R = R;
    g.base_exponent = static_cast<long long>(std::floor(R / kBandWidth));
    g.i_max = static_cast<int>(std::ceil(0.9 * R / kBandWidth));
    if (4 - g.i_max + g.base_exponent < 0)
        throw std::invalid_argument("layer_geometry: R too small for tiling-based construction");
    if (g.i_max >= 60) throw std::invalid_argument("layer_geometry: R unreasonably large");
    return g;
}

std::optional<TileIndex> locate(const PolarPoint& p, const LayerGeometry& geom) {
    if (p.r >= geom.R || p.r < 0.0) throw std::invalid_argument("locate: point outside D_R");
    // Band i holds R-(i+1)w <= r < R-iw, i.e. i = ceil((R-r)/w) - 1.
    double t = (geom.R - p.r) / kBandWidth;
    long long i = static_cast<long long>(std::ceil(t)) - 1;
    if (i < 0) i = 0;
    if (i > geom.i_max) return std::nullopt;  // inner disk
    long long ni = geom.tiles_in_layer(static_cast<int>(i));
    // Sector j holds j*2pi/ni < theta <= (j+1)*2pi/ni; theta = 0 wraps to the
    // last sector.
    double theta = p.theta;
    long long j;
    if (theta <= 0.0) {
        j = ni - 1;
    } else {
        j = static_cast<long long>(std::ceil(theta * static_cast<double>(ni) / (2.0 * std::numbers::pi))) - 1;
        j = std::clamp(j, 0LL, ni - 1);
    }
    return TileIndex{static_cast<int>(i), j};
}

bool is_below(TileIndex t1, TileIndex t2) {
    if (t1.layer > t2.layer) return false;
    return (t1.pos >> (t2.layer - t1.layer)) == t2.pos;
}

TileCounts tile_counts(const PointSet& ps) {
    TileCounts tc;
    tc.geom = layer_geometry(ps.params.R);
    tc.total = ps.size();
    for (int id = 0; id < ps.size(); ++id) {
        auto tile = locate(ps.points[static_cast<std::size_t>(id)], tc.geom);
        if (tile) {
            tc.tile_points[tile_key(tile->layer, tile->pos)].push_back(id);
        } else {
            tc.inner_disk_points.push_back(id);
        }
    }
    return tc;
}

double tile_measure(int layer, const ModelParams& params) {
    LayerGeometry g = layer_geometry(params.R);
    if (layer < 0 || layer > g.i_max) throw std::invalid_argument("tile_measure: inadmissible layer");
    double a = params.alpha;
    double hi = g.band_outer(layer);
    double lo = g.band_inner(layer);
    double ni = static_cast<double>(g.tiles_in_layer(layer));
    return static_cast<double>(params.n) * (std::cosh(a * hi) - std::cosh(a * lo)) /
           (ni * (std::cosh(a * params.R) - 1.0));
}

void write_tile_counts_csv(std::ostream& os, const TileCounts& tc) {
    os << "layer,tile,count\n";
    std::vector<std::uint64_t> keys;
    keys.reserve(tc.tile_points.size());
    for (const auto& [k, v] : tc.tile_points) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t k : keys) {
        os << (k >> 52) << ',' << (k & ((1ULL << 52) - 1)) << ','
           << tc.tile_points.at(k).size() << "\n";
    }
}

}  // namespace kpkvb
