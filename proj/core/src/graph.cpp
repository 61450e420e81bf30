#include "kpkvb/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "kpkvb/geometry.hpp"
#include "kpkvb/tiling.hpp"

namespace kpkvb {

namespace {

GeomGraph from_edges(PointSet ps, std::vector<std::pair<int, int>>& edges) {
    GeomGraph g;
    g.points = std::move(ps);
    const std::size_t n = static_cast<std::size_t>(g.points.size());
    g.edge_count = edges.size();
    std::vector<std::size_t> deg(n, 0);
    for (auto& [u, v] : edges) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    g.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] = g.offsets[i] + deg[i];
    g.neighbors.resize(2 * edges.size());
    std::vector<std::size_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (auto& [u, v] : edges) {
        g.neighbors[cursor[static_cast<std::size_t>(u)]++] = v;
        g.neighbors[cursor[static_cast<std::size_t>(v)]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(g.neighbors.begin() + static_cast<std::ptrdiff_t>(g.offsets[i]),
                  g.neighbors.begin() + static_cast<std::ptrdiff_t>(g.offsets[i + 1]));
    }
    return g;
}

}  // namespace

bool GeomGraph::has_edge(int u, int v) const {
    auto nb = neighbors_of(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

GeomGraph build_naive(PointSet ps) {
    std::vector<std::pair<int, int>> edges;
    const int n = ps.size();
    const double R = ps.params.R;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (is_adjacent(ps.points[static_cast<std::size_t>(i)],
                            ps.points[static_cast<std::size_t>(j)], R)) {
                edges.emplace_back(i, j);
            }
        }
    }
    return from_edges(std::move(ps), edges);
}

GeomGraph build_pruned(PointSet ps) {
    const int n = ps.size();
    const double R = ps.params.R;
    const double two_pi = 2.0 * std::numbers::pi;
    if (n == 0) {
        std::vector<std::pair<int, int>> none;
        return from_edges(std::move(ps), none);
    }

    // Radial bands of width 2 ln 2, band 0 at the boundary; the innermost
    // band is clipped at r = 0.
    const int nbands = static_cast<int>(std::floor(R / kBandWidth)) + 1;
    auto band_of = [&](double r) {
        long long k = static_cast<long long>(std::ceil((R - r) / kBandWidth)) - 1;
        return static_cast<int>(std::clamp(k, 0LL, static_cast<long long>(nbands - 1)));
    };
    auto band_lo = [&](int k) { return std::max(R - (k + 1) * kBandWidth, 0.0); };

    std::vector<std::vector<int>> band_ids(static_cast<std::size_t>(nbands));
    std::vector<std::vector<double>> band_angles(static_cast<std::size_t>(nbands));
    for (int v = 0; v < n; ++v) {
        int k = band_of(ps.points[static_cast<std::size_t>(v)].r);
        band_ids[static_cast<std::size_t>(k)].push_back(v);
        band_angles[static_cast<std::size_t>(k)].push_back(ps.points[static_cast<std::size_t>(v)].theta);
    }

    std::vector<std::pair<int, int>> edges;
    auto test_pair = [&](int u, int v) {
        if (is_adjacent(ps.points[static_cast<std::size_t>(u)],
                        ps.points[static_cast<std::size_t>(v)], R)) {
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    };

    for (int a = 0; a < nbands; ++a) {
        const auto& ia = band_ids[static_cast<std::size_t>(a)];
        if (ia.empty()) continue;
        for (int b = a; b < nbands; ++b) {
            const auto& ib = band_ids[static_cast<std::size_t>(b)];
            const auto& tb = band_angles[static_cast<std::size_t>(b)];
            if (ib.empty()) continue;
            double lo_a = band_lo(a), lo_b = band_lo(b);
            double win = (lo_a == 0.0 || lo_b == 0.0 || lo_a + lo_b <= R)
                             ? std::numbers::pi
                             : critical_angle(lo_a, lo_b, R) + 1e-9;
            if (win >= std::numbers::pi) {
                for (std::size_t pi = 0; pi < ia.size(); ++pi) {
                    std::size_t q0 = (b == a) ? pi + 1 : 0;
                    for (std::size_t qi = q0; qi < ib.size(); ++qi) test_pair(ia[pi], ib[qi]);
                }
                continue;
            }
            for (std::size_t pi = 0; pi < ia.size(); ++pi) {
                int u = ia[pi];
                double th = ps.points[static_cast<std::size_t>(u)].theta;
                // Candidate angles in [th - win, th + win], with wrap-around.
                auto scan = [&](double lo, double hi) {
                    auto first = std::lower_bound(tb.begin(), tb.end(), lo);
                    auto last = std::upper_bound(tb.begin(), tb.end(), hi);
                    for (auto it = first; it != last; ++it) {
                        int v = ib[static_cast<std::size_t>(it - tb.begin())];
                        if (b == a && v <= u) continue;
                        test_pair(u, v);
                    }
                };
                double lo = th - win, hi = th + win;
                if (lo < 0.0) {
                    scan(0.0, hi);
                    scan(lo + two_pi, two_pi);
                } else if (hi > two_pi) {
                    scan(lo, two_pi);
                    scan(0.0, hi - two_pi);
                } else {
                    scan(lo, hi);
                }
            }
        }
    }
    return from_edges(std::move(ps), edges);
}

DegreeStats degree_stats(const GeomGraph& g) {
    DegreeStats s;
    const int n = g.order();
    if (n == 0) {
        s.degenerate = true;
        return s;
    }
    s.mean = 2.0 * static_cast<double>(g.edge_count) / static_cast<double>(n);
    int dmax = 0, dmin = n;
    for (int v = 0; v < n; ++v) {
        int d = static_cast<int>(g.neighbors_of(v).size());
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    s.min = dmin;
    s.max = dmax;
    s.histogram.assign(static_cast<std::size_t>(dmax) + 1, 0);
    for (int v = 0; v < n; ++v) ++s.histogram[g.neighbors_of(v).size()];
    return s;
}

void write_edge_list(std::ostream& os, const GeomGraph& g) {
    os << "# kpkvb v1 model=" << to_string(g.points.kind) << " n=" << g.points.params.n
       << " alpha=" << g.points.params.alpha << " nu=" << g.points.params.nu
       << " seed=" << g.points.seed << " edges=" << g.edge_count << "\n";
    for (int u = 0; u < g.order(); ++u) {
        for (int v : g.neighbors_of(u)) {
            if (u < v) os << u << ' ' << v << "\n";
        }
    }
}

}  // namespace kpkvb
