#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "kpkvb/sampler.hpp"

namespace kpkvb {

// Immutable geometric graph: the sampled points plus CSR adjacency with
// per-vertex neighbor lists sorted by id. No self-loops; boundary ties
// (distance exactly R) count as edges.
struct GeomGraph {
    PointSet points;
    std::vector<std::size_t> offsets;  // size n+1
    std::vector<int> neighbors;
    std::size_t edge_count = 0;

    int order() const { return points.size(); }

    std::span<const int> neighbors_of(int v) const {
        return {neighbors.data() + offsets[static_cast<std::size_t>(v)],
                neighbors.data() + offsets[static_cast<std::size_t>(v) + 1]};
    }

    bool has_edge(int u, int v) const;
};

// O(n^2) reference builder: tests every unordered pair with is_adjacent.
GeomGraph build_naive(PointSet ps);

// Band/angle-pruned builder. Produces exactly the same edge set as
// build_naive: candidate pairs are pre-filtered by an angular window derived
// from the critical angle of the band inner radii (an upper bound by
// monotonicity), then confirmed with the canonical predicate.
GeomGraph build_pruned(PointSet ps);

struct DegreeStats {
    double mean = 0.0;
    int min = 0;
    int max = 0;
    std::vector<std::size_t> histogram;  // histogram[d] = #vertices of degree d
    bool degenerate = false;             // empty graph
};

DegreeStats degree_stats(const GeomGraph& g);

// Edge list `i j` with i < j, sorted lexicographically; header mirrors the
// point-set header.
void write_edge_list(std::ostream& os, const GeomGraph& g);

}  // namespace kpkvb
