#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kpkvb/graph.hpp"
#include "kpkvb/sampler.hpp"

namespace kpkvb {

// Counting obstruction to near-perfect matchings. With annulus width
// s = 1/alpha, N_s counts vertices at radius >= R-s with no neighbor at
// radius >= R-s, and M_s counts vertices at radius < R-s. Every N_s vertex
// must be matched into the M_s pool, and a near-perfect matching spares at
// most one vertex, so N_s > M_s + 1 certifies non-existence (N_s > M_s for
// perfect matchings).
struct Obstruction {
    double s = 0.0;
    long long Ns = 0;
    long long Ms = 0;
    bool certified_perfect = false;       // N_s > M_s
    bool certified_near_perfect = false;  // N_s > M_s + 1
};

// Exact counts using the prebuilt adjacency.
Obstruction obstruction_counts(const PointSet& ps, const GeomGraph& g);

// Graph-free variant: annulus neighbors are found by an angular-window scan,
// so no global adjacency structure is needed. Identical counts by
// construction (the window over-covers, the canonical predicate decides).
Obstruction obstruction_counts(const PointSet& ps);

// Certificates with the small-count carve-out: for total_vertices <= 1 the
// empty matching is near-perfect, so nothing is ever certified.
bool certify_no_perfect(const Obstruction& obs, long long total_vertices);
bool certify_no_near_perfect(const Obstruction& obs, long long total_vertices);

struct Matching {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> uncovered;
};

// Alternate edges of a Hamilton cycle: floor(|cycle|/2) pairs, one vertex
// uncovered when the length is odd. Rejects cycles shorter than 3.
Matching matching_from_cycle(const std::vector<int>& cycle);

struct MatchingReport {
    bool ok = false;
    std::string violation;
};

// Structural + geometric check: ids in range, endpoints pairwise disjoint,
// every pair adjacent, and `uncovered` exactly the complement of the paired
// vertices.
MatchingReport verify_matching(const PointSet& ps, const Matching& m);

}  // namespace kpkvb
