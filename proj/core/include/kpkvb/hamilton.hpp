#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kpkvb/sampler.hpp"
#include "kpkvb/tiling.hpp"

namespace kpkvb {

// Vertex-disjoint cycle, length >= 3, cyclic order. spare_edges lists
// consecutive pairs whose endpoints both lie in the tile most recently merged
// into this cycle; they are the splice points later merges may consume.
struct Cycle {
    std::vector<int> verts;
    std::vector<std::pair<int, int>> spare_edges;

    int min_vert() const;
};

// Working state of the procedure for one region: vertex-disjoint cycles plus
// isolated vertices.
struct CycleCover {
    std::vector<Cycle> cycles;
    std::vector<int> singletons;

    std::size_t components() const { return cycles.size() + singletons.size(); }
    bool empty() const { return cycles.empty() && singletons.empty(); }
};

// Demand values indexed by (layer, tile). Only tiles whose subtree contains at
// least one point are stored; the rest follow the closed form for an empty
// subtree, 3*(2^layer - 1).
struct DemandTable {
    LayerGeometry geom;
    bool valid = false;
    std::vector<std::unordered_map<long long, long long>> layers;

    static long long empty_subtree_demand(int layer) { return 3 * ((1LL << layer) - 1); }
    long long demand(int layer, long long pos) const;
    // True iff D_{i_max, j} = 0 for every top-layer tile.
    bool top_layer_all_zero() const;
    // hist[layer][t] = number of tiles in the layer with demand >= t.
    std::vector<std::vector<long long>> tail_counts(int t_max) const;
};

// The demand recursion: D_{0,j} = N in {1,2} else 0;
// D_{i,j} = max(D_{i-1,2j} + D_{i-1,2j+1} + 3 - N(T_{i,j}), 0).
DemandTable demands(const TileCounts& counts);

enum class HamStatus { Success, Failure };

struct HamResult {
    HamStatus status = HamStatus::Failure;
    bool fallback_used = false;
    std::string message;
    std::vector<int> cycle;  // on success: every vertex exactly once
    std::vector<Cycle> residual_cycles;
    std::vector<int> residual_singletons;
    DemandTable demand_table;
    std::vector<long long> merges_per_layer;
};

struct VerifyReport {
    bool ok = false;
    std::string violation;
};

// Cycle-merging step: forms the cycle on the >= 3 pairwise-adjacent tile
// vertices and absorbs up to |tile| components of the cover below through its
// edges. Resulting component count is max(1, x - y + 1). Every spliced edge
// is validated with is_adjacent; violations throw (misuse, not data).
CycleCover merge_into_tile_cycle(CycleCover below, std::vector<int> tile_vertices,
                                 const PointSet& ps);

// One tile of the bottom-up pass. demand_value is D_{i,j}; the resulting
// component count is checked against the D+1 cover bound.
CycleCover process_tile(CycleCover below, const std::vector<int>& tile_ids,
                        long long demand_value, int layer, const PointSet& ps);

// Full constructive procedure: bottom-up tile pass, then either the
// guaranteed final merge (all top-layer demands zero) or a bounded greedy
// fallback that reports honest failure with the residual components.
HamResult construct(const PointSet& ps);

// Independent checker: permutation of all vertex ids, length >= 3, every
// consecutive pair (wrap included) adjacent. Uses only the geometry
// predicate.
VerifyReport verify_cycle(const PointSet& ps, const std::vector<int>& cycle);

}  // namespace kpkvb
