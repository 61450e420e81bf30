#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kpkvb/params.hpp"
#include "kpkvb/sampler.hpp"

namespace kpkvb {

// Radial width of every layer.
inline const double kBandWidth = 2.0 * 0.69314718055994530942;  // 2 ln 2

struct TileIndex {
    int layer = 0;       // 0 = outermost
    long long pos = 0;   // 0 <= pos < tiles_in_layer(layer)

    bool operator==(const TileIndex&) const = default;
};

// Closed-form layout of the annulus tiling. Layer i occupies the radial band
// [R-(i+1)*2ln2, R-i*2ln2) split into 2^(4-i+floor(R/2ln2)) equal sectors.
struct LayerGeometry {
    double R = 0.0;
    long long base_exponent = 0;  // floor(R / 2ln2)
    int i_max = 0;                // ceil(0.9 R / 2ln2)

    long long tiles_in_layer(int i) const;           // power of two
    double band_outer(int i) const { return R - i * kBandWidth; }
    double band_inner(int i) const { return R - (i + 1) * kBandWidth; }
    // Everything strictly inside this radius is below the tiled annulus.
    double inner_disk_radius() const { return band_inner(i_max); }
};

// Throws std::invalid_argument when R is too small for a valid tiling
// (the tile-count exponent would go negative).
LayerGeometry layer_geometry(double R);

// Tile containing p, or nullopt for the inner disk. Radial bands are
// [lo, hi); angular sectors are (j*2pi/n_i, (j+1)*2pi/n_i], with theta = 0
// read as 2pi (last sector). Throws on r >= R.
std::optional<TileIndex> locate(const PolarPoint& p, const LayerGeometry& geom);

// t1 is below t2: t1.layer <= t2.layer and t2's sector contains t1's.
// Reflexive. Points in a tile are adjacent to all points in tiles below it.
bool is_below(TileIndex t1, TileIndex t2);

inline std::uint64_t tile_key(int layer, long long pos) {
    return (static_cast<std::uint64_t>(layer) << 52) | static_cast<std::uint64_t>(pos);
}

// Bucketing of a point set by tile. Only occupied tiles are stored; tiles
// absent from the map are empty.
struct TileCounts {
    LayerGeometry geom;
    std::unordered_map<std::uint64_t, std::vector<int>> tile_points;  // sorted ids
    std::vector<int> inner_disk_points;
    long long total = 0;

    int count(int layer, long long pos) const {
        auto it = tile_points.find(tile_key(layer, pos));
        return it == tile_points.end() ? 0 : static_cast<int>(it->second.size());
    }
};

TileCounts tile_counts(const PointSet& ps);

// Exact expected number of points in any tile of layer i.
double tile_measure(int layer, const ModelParams& params);

// CSV dump `layer,tile,count` of the occupied tiles.
void write_tile_counts_csv(std::ostream& os, const TileCounts& tc);

}  // namespace kpkvb
