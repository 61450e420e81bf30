#include "kpkvb/hamilton.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "kpkvb/geometry.hpp"

namespace kpkvb {

int Cycle::min_vert() const {
    return *std::min_element(verts.begin(), verts.end());
}

long long DemandTable::demand(int layer, long long pos) const {
    const auto& m = layers[static_cast<std::size_t>(layer)];
    auto it = m.find(pos);
    return it == m.end() ? empty_subtree_demand(layer) : it->second;
}

bool DemandTable::top_layer_all_zero() const {
    if (!valid) return false;
    int top = geom.i_max;
    long long ntop = geom.tiles_in_layer(top);
    const auto& m = layers[static_cast<std::size_t>(top)];
    if (top > 0 && static_cast<long long>(m.size()) < ntop) return false;  // empty subtree => demand 3(2^i - 1) > 0
    for (long long j = 0; j < ntop; ++j) {
        if (demand(top, j) != 0) return false;
    }
    return true;
}

std::vector<std::vector<long long>> DemandTable::tail_counts(int t_max) const {
    std::vector<std::vector<long long>> hist;
    if (!valid) return hist;
    hist.assign(static_cast<std::size_t>(geom.i_max) + 1,
                std::vector<long long>(static_cast<std::size_t>(t_max) + 1, 0));
    for (int i = 0; i <= geom.i_max; ++i) {
        long long ni = geom.tiles_in_layer(i);
        const auto& m = layers[static_cast<std::size_t>(i)];
        long long empty_d = empty_subtree_demand(i);
        long long n_empty = ni - static_cast<long long>(m.size());
        for (int t = 0; t <= t_max; ++t) {
            long long c = (empty_d >= t) ? n_empty : 0;
            for (const auto& [pos, d] : m) {
                (void)pos;
                if (d >= t) ++c;
            }
            hist[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = c;
        }
    }
    return hist;
}

DemandTable demands(const TileCounts& counts) {
    DemandTable dt;
    dt.geom = counts.geom;
    dt.valid = true;
    dt.layers.assign(static_cast<std::size_t>(dt.geom.i_max) + 1, {});
    // Layer 0 base case, occupied tiles only (empty ones have demand 0).
    for (const auto& [key, ids] : counts.tile_points) {
        int layer = static_cast<int>(key >> 52);
        long long pos = static_cast<long long>(key & ((1ULL << 52) - 1));
        if (layer != 0) continue;
        long long n0 = static_cast<long long>(ids.size());
        dt.layers[0][pos] = (n0 == 1 || n0 == 2) ? n0 : 0;
    }
    for (int i = 1; i <= dt.geom.i_max; ++i) {
        auto& cur = dt.layers[static_cast<std::size_t>(i)];
        // Parents of any stored child, plus tiles occupied at this layer.
        for (const auto& [pos, d] : dt.layers[static_cast<std::size_t>(i - 1)]) {
            (void)d;
            cur.emplace(pos >> 1, 0);
        }
        for (const auto& [key, ids] : counts.tile_points) {
            (void)ids;
            if (static_cast<int>(key >> 52) == i)
                cur.emplace(static_cast<long long>(key & ((1ULL << 52) - 1)), 0);
        }
        for (auto& [pos, d] : cur) {
            long long dl = dt.demand(i - 1, 2 * pos);
            long long dr = dt.demand(i - 1, 2 * pos + 1);
            long long nij = counts.count(i, pos);
            d = std::max(dl + dr + 3 - nij, 0LL);
        }
    }
    return dt;
}

namespace {

void require_edge(const PointSet& ps, int u, int v, const char* where) {
    if (!is_adjacent(ps.points[static_cast<std::size_t>(u)],
                     ps.points[static_cast<std::size_t>(v)], ps.params.R)) {
        throw std::logic_error(std::string("splice produced a non-edge in ") + where);
    }
}

std::pair<int, int> normalized(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
}

// Lexicographically smallest edge of the cycle, as a normalized pair.
std::pair<int, int> smallest_edge(const Cycle& c) {
    std::pair<int, int> best{-1, -1};
    const std::size_t m = c.verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        auto e = normalized(c.verts[i], c.verts[(i + 1) % m]);
        if (best.first < 0 || e < best) best = e;
    }
    return best;
}

// The cycle minus edge {a,b}, as a path from a to b through every vertex.
std::vector<int> open_at_edge(const Cycle& c, int a, int b) {
    const std::size_t m = c.verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        int u = c.verts[i], v = c.verts[(i + 1) % m];
        if ((u == a && v == b) || (u == b && v == a)) {
            std::vector<int> path;
            path.reserve(m);
            // Walk from the 'a' endpoint away from b.
            std::size_t start = (u == a) ? i : (i + 1) % m;
            bool forward = (u != a);
            for (std::size_t k = 0; k < m; ++k) {
                std::size_t idx = forward ? (start + k) % m : (start + m - k) % m;
                path.push_back(c.verts[idx]);
            }
            return path;
        }
    }
    throw std::logic_error("open_at_edge: not an edge of the cycle");
}

void erase_spare(Cycle& c, std::pair<int, int> e) {
    auto n = normalized(e.first, e.second);
    std::erase_if(c.spare_edges, [&](std::pair<int, int> s) { return normalized(s.first, s.second) == n; });
}

// Insert the sequence `ins` in place of an adjacent occurrence of edge {a,b}.
// Returns the new consecutive pair (preceding endpoint, ins.front()).
std::pair<int, int> splice_between(Cycle& c, int a, int b, const std::vector<int>& ins,
                                   const PointSet& ps, const char* where) {
    const std::size_t m = c.verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        int u = c.verts[i], v = c.verts[(i + 1) % m];
        if ((u == a && v == b) || (u == b && v == a)) {
            require_edge(ps, u, ins.front(), where);
            require_edge(ps, ins.back(), v, where);
            c.verts.insert(c.verts.begin() + static_cast<std::ptrdiff_t>(i) + 1, ins.begin(), ins.end());
            erase_spare(c, {a, b});
            return {u, ins.front()};
        }
    }
    throw std::logic_error("splice_between: not an edge of the cycle");
}

}  // namespace

CycleCover merge_into_tile_cycle(CycleCover below, std::vector<int> tile_vertices,
                                 const PointSet& ps) {
    const std::size_t y = tile_vertices.size();
    if (y < 3) throw std::invalid_argument("merge_into_tile_cycle: fewer than 3 tile vertices");
    std::sort(tile_vertices.begin(), tile_vertices.end());
    std::sort(below.cycles.begin(), below.cycles.end(),
              [](const Cycle& a, const Cycle& b) { return a.min_vert() < b.min_vert(); });
    std::sort(below.singletons.begin(), below.singletons.end());

    const std::size_t x = below.components();
    const std::size_t absorbed = std::min(x, y);
    const std::size_t absorbed_cycles = std::min(absorbed, below.cycles.size());

    Cycle merged;
    merged.verts.reserve(ps.points.size());
    for (std::size_t i = 0; i < y; ++i) {
        int vi = tile_vertices[i];
        int vnext = tile_vertices[(i + 1) % y];
        merged.verts.push_back(vi);
        if (i < absorbed) {
            if (i < absorbed_cycles) {
                const Cycle& c = below.cycles[i];
                auto [a, b] = smallest_edge(c);
                auto path = open_at_edge(c, a, b);
                require_edge(ps, vi, path.front(), "merge_into_tile_cycle");
                require_edge(ps, path.back(), vnext, "merge_into_tile_cycle");
                merged.verts.insert(merged.verts.end(), path.begin(), path.end());
            } else {
                int s = below.singletons[i - absorbed_cycles];
                require_edge(ps, vi, s, "merge_into_tile_cycle");
                require_edge(ps, s, vnext, "merge_into_tile_cycle");
                merged.verts.push_back(s);
            }
        } else {
            // Unused tile edge; both endpoints stay consecutive.
            require_edge(ps, vi, vnext, "merge_into_tile_cycle");
            merged.spare_edges.emplace_back(vi, vnext);
        }
    }

    CycleCover out;
    out.cycles.push_back(std::move(merged));
    for (std::size_t i = absorbed_cycles; i < below.cycles.size(); ++i)
        out.cycles.push_back(std::move(below.cycles[i]));
    std::size_t absorbed_singles = absorbed - absorbed_cycles;
    for (std::size_t i = absorbed_singles; i < below.singletons.size(); ++i)
        out.singletons.push_back(below.singletons[i]);
    return out;
}

CycleCover process_tile(CycleCover below, const std::vector<int>& tile_ids,
                        long long demand_value, int layer, const PointSet& ps) {
    const std::size_t n_tile = tile_ids.size();
    CycleCover out;
    if (n_tile >= 3) {
        out = merge_into_tile_cycle(std::move(below), tile_ids, ps);
    } else if (n_tile >= 1) {
        std::vector<int> pts(tile_ids);
        std::sort(pts.begin(), pts.end());
        if (!below.cycles.empty()) {
            // Splice the 1-2 tile points into the cycle with the smallest
            // vertex id, at its smallest edge.
            std::size_t pick = 0;
            for (std::size_t i = 1; i < below.cycles.size(); ++i)
                if (below.cycles[i].min_vert() < below.cycles[pick].min_vert()) pick = i;
            auto [a, b] = smallest_edge(below.cycles[pick]);
            if (pts.size() == 2) require_edge(ps, pts[0], pts[1], "process_tile");
            splice_between(below.cycles[pick], a, b, pts, ps, "process_tile");
            out = std::move(below);
        } else if (n_tile == 2 && !below.singletons.empty()) {
            std::sort(below.singletons.begin(), below.singletons.end());
            int s = below.singletons.front();
            below.singletons.erase(below.singletons.begin());
            Cycle tri;
            tri.verts = {pts[0], pts[1], s};
            require_edge(ps, pts[0], pts[1], "process_tile");
            require_edge(ps, pts[1], s, "process_tile");
            require_edge(ps, s, pts[0], "process_tile");
            tri.spare_edges.emplace_back(pts[0], pts[1]);
            out = std::move(below);
            out.cycles.push_back(std::move(tri));
        } else {
            out = std::move(below);
            out.singletons.insert(out.singletons.end(), pts.begin(), pts.end());
        }
    } else {
        out = std::move(below);
    }

    if (static_cast<long long>(out.components()) > demand_value + 1)
        throw std::logic_error("process_tile: cover bound D+1 violated");
    if (layer > 0 && demand_value == 0) {
        if (out.cycles.size() != 1 || !out.singletons.empty() || out.cycles[0].spare_edges.empty())
            throw std::logic_error("process_tile: zero demand without a single in-tile-edged cycle");
    }
    return out;
}

namespace {

struct FallbackState {
    Cycle master;
    std::vector<Cycle> cycles;
    std::vector<int> singletons;
};

bool adj(const PointSet& ps, int u, int v) {
    return is_adjacent(ps.points[static_cast<std::size_t>(u)],
                       ps.points[static_cast<std::size_t>(v)], ps.params.R);
}

bool try_absorb_singleton(Cycle& master, int s, const PointSet& ps, long long& budget) {
    const std::size_t m = master.verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        int u = master.verts[i], v = master.verts[(i + 1) % m];
        if ((budget -= 2) < 0) return false;
        if (adj(ps, u, s) && adj(ps, s, v)) {
            master.verts.insert(master.verts.begin() + static_cast<std::ptrdiff_t>(i) + 1, s);
            return true;
        }
    }
    return false;
}

bool try_absorb_cycle(Cycle& master, const Cycle& c, const PointSet& ps, long long& budget) {
    const std::size_t m = master.verts.size();
    const std::size_t k = c.verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        int u = master.verts[i], v = master.verts[(i + 1) % m];
        for (std::size_t j = 0; j < k; ++j) {
            int a = c.verts[j], b = c.verts[(j + 1) % k];
            if ((budget -= 2) < 0) return false;
            if (adj(ps, u, a) && adj(ps, b, v)) {
                auto path = open_at_edge(c, a, b);
                if (path.front() != a) std::reverse(path.begin(), path.end());
                master.verts.insert(master.verts.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                    path.begin(), path.end());
                return true;
            }
            if (adj(ps, u, b) && adj(ps, a, v)) {
                auto path = open_at_edge(c, b, a);
                master.verts.insert(master.verts.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                    path.begin(), path.end());
                return true;
            }
        }
    }
    return false;
}

}  // namespace

HamResult construct(const PointSet& ps) {
    HamResult res;
    const int n = ps.size();
    if (n < 3) {
        res.status = HamStatus::Failure;
        res.message = "too few vertices";
        for (int v = 0; v < n; ++v) res.residual_singletons.push_back(v);
        return res;
    }

    TileCounts tc = tile_counts(ps);  // propagates tiling admissibility errors
    res.demand_table = demands(tc);
    const LayerGeometry& geom = tc.geom;
    res.merges_per_layer.assign(static_cast<std::size_t>(geom.i_max) + 1, 0);

    auto tile_ids_of = [&](int layer, long long pos) -> const std::vector<int>* {
        auto it = tc.tile_points.find(tile_key(layer, pos));
        return it == tc.tile_points.end() ? nullptr : &it->second;
    };
    static const std::vector<int> kNoIds;

    // Bottom-up pass over the sector tree, sparse in the occupied subtrees.
    std::unordered_map<long long, CycleCover> covers;
    {
        std::vector<long long> keys;
        for (const auto& [key, ids] : tc.tile_points) {
            (void)ids;
            if (static_cast<int>(key >> 52) == 0) keys.push_back(static_cast<long long>(key & ((1ULL << 52) - 1)));
        }
        std::sort(keys.begin(), keys.end());
        for (long long pos : keys) {
            const auto& ids = *tile_ids_of(0, pos);
            if (ids.size() >= 3) ++res.merges_per_layer[0];
            covers.emplace(pos, process_tile(CycleCover{}, ids, res.demand_table.demand(0, pos), 0, ps));
        }
    }
    for (int i = 1; i <= geom.i_max; ++i) {
        std::vector<long long> parents;
        for (const auto& [pos, c] : covers) {
            (void)c;
            parents.push_back(pos >> 1);
        }
        for (const auto& [key, ids] : tc.tile_points) {
            (void)ids;
            if (static_cast<int>(key >> 52) == i) parents.push_back(static_cast<long long>(key & ((1ULL << 52) - 1)));
        }
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        std::unordered_map<long long, CycleCover> next;
        for (long long pos : parents) {
            CycleCover below;
            for (long long child : {2 * pos, 2 * pos + 1}) {
                auto it = covers.find(child);
                if (it == covers.end()) continue;
                for (auto& c : it->second.cycles) below.cycles.push_back(std::move(c));
                for (int s : it->second.singletons) below.singletons.push_back(s);
            }
            const std::vector<int>* ids = tile_ids_of(i, pos);
            if (ids && ids->size() >= 3) ++res.merges_per_layer[static_cast<std::size_t>(i)];
            next.emplace(pos, process_tile(std::move(below), ids ? *ids : kNoIds,
                                           res.demand_table.demand(i, pos), i, ps));
        }
        covers = std::move(next);
    }

    std::vector<int> inner = tc.inner_disk_points;
    std::sort(inner.begin(), inner.end());

    if (res.demand_table.top_layer_all_zero()) {
        // Guaranteed final merge: every top cover is one cycle with a spare
        // edge whose endpoints sit inside the R/2 disk, so consecutive splices
        // need no adjacency search.
        long long ntop = geom.tiles_in_layer(geom.i_max);
        Cycle master;
        std::pair<int, int> inner_edge{-1, -1};
        for (long long pos = 0; pos < ntop; ++pos) {
            auto it = covers.find(pos);
            if (it == covers.end() || it->second.cycles.size() != 1 || !it->second.singletons.empty() ||
                it->second.cycles[0].spare_edges.empty())
                throw std::logic_error("construct: zero top demand without mergeable cover");
            Cycle& c = it->second.cycles[0];
            if (master.verts.empty()) {
                master = std::move(c);
                inner_edge = master.spare_edges.front();
                continue;
            }
            auto [a, b] = c.spare_edges.front();
            auto path = open_at_edge(c, a, b);
            auto [u, v] = inner_edge;
            require_edge(ps, u, path.front(), "final merge");
            require_edge(ps, path.back(), v, "final merge");
            // The new boundary pair is consecutive in master and both of its
            // endpoints lie in the inner region, so it stays spliceable.
            inner_edge = splice_between(master, u, v, path, ps, "final merge");
        }
        if (!inner.empty()) {
            auto [u, v] = inner_edge;
            if (inner.size() >= 3) {
                Cycle ic;
                ic.verts = inner;
                auto path = open_at_edge(ic, inner[0], inner[1]);
                splice_between(master, u, v, path, ps, "inner disk merge");
            } else {
                splice_between(master, u, v, inner, ps, "inner disk merge");
            }
        }
        if (static_cast<int>(master.verts.size()) != n)
            throw std::logic_error("construct: final cycle does not cover all vertices");
        res.status = HamStatus::Success;
        res.fallback_used = false;
        res.cycle = std::move(master.verts);
        return res;
    }

    // Best-effort fallback: gather every component and greedily splice into
    // the largest cycle, testing actual adjacency.
    FallbackState fb;
    {
        std::vector<long long> keys;
        for (const auto& [pos, c] : covers) {
            (void)c;
            keys.push_back(pos);
        }
        std::sort(keys.begin(), keys.end());
        for (long long pos : keys) {
            auto& c = covers.at(pos);
            for (auto& cy : c.cycles) fb.cycles.push_back(std::move(cy));
            for (int s : c.singletons) fb.singletons.push_back(s);
        }
        if (inner.size() >= 3) {
            Cycle ic;
            ic.verts = inner;  // inner-disk clique
            fb.cycles.push_back(std::move(ic));
        } else {
            fb.singletons.insert(fb.singletons.end(), inner.begin(), inner.end());
        }
        std::sort(fb.singletons.begin(), fb.singletons.end());
        std::sort(fb.cycles.begin(), fb.cycles.end(),
                  [](const Cycle& a, const Cycle& b) { return a.min_vert() < b.min_vert(); });
    }
    res.fallback_used = true;
    if (fb.cycles.empty()) {
        res.status = HamStatus::Failure;
        res.message = "no cycle component to extend";
        res.residual_singletons = std::move(fb.singletons);
        return res;
    }
    std::size_t pick = 0;
    for (std::size_t i = 1; i < fb.cycles.size(); ++i) {
        if (fb.cycles[i].verts.size() > fb.cycles[pick].verts.size()) pick = i;
    }
    fb.master = std::move(fb.cycles[pick]);
    fb.cycles.erase(fb.cycles.begin() + static_cast<std::ptrdiff_t>(pick));

    // Bounded greedy: a global adjacency-test budget keeps futile rescans of
    // unmergeable components from dominating sparse instances.
    long long budget = 50'000'000;
    bool progress = true;
    while (progress && budget > 0 && (!fb.cycles.empty() || !fb.singletons.empty())) {
        progress = false;
        for (std::size_t i = 0; i < fb.cycles.size();) {
            if (try_absorb_cycle(fb.master, fb.cycles[i], ps, budget)) {
                fb.cycles.erase(fb.cycles.begin() + static_cast<std::ptrdiff_t>(i));
                progress = true;
            } else {
                ++i;
            }
        }
        for (std::size_t i = 0; i < fb.singletons.size();) {
            if (try_absorb_singleton(fb.master, fb.singletons[i], ps, budget)) {
                fb.singletons.erase(fb.singletons.begin() + static_cast<std::ptrdiff_t>(i));
                progress = true;
            } else {
                ++i;
            }
        }
    }

    if (fb.cycles.empty() && fb.singletons.empty() && static_cast<int>(fb.master.verts.size()) == n) {
        res.status = HamStatus::Success;
        res.cycle = std::move(fb.master.verts);
        return res;
    }
    res.status = HamStatus::Failure;
    res.message = "nonzero top-layer demand; greedy splice left residual components";
    res.residual_cycles = std::move(fb.cycles);
    res.residual_cycles.push_back(std::move(fb.master));
    res.residual_singletons = std::move(fb.singletons);
    return res;
}

VerifyReport verify_cycle(const PointSet& ps, const std::vector<int>& cycle) {
    const int n = ps.size();
    if (cycle.size() < 3) return {false, "cycle shorter than 3"};
    if (static_cast<int>(cycle.size()) != n) return {false, "missing vertex"};
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : cycle) {
        if (v < 0 || v >= n) return {false, "vertex id out of range"};
        if (seen[static_cast<std::size_t>(v)]) return {false, "duplicate vertex"};
        seen[static_cast<std::size_t>(v)] = 1;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int u = cycle[i], v = cycle[(i + 1) % cycle.size()];
        if (!is_adjacent(ps.points[static_cast<std::size_t>(u)],
                         ps.points[static_cast<std::size_t>(v)], ps.params.R)) {
            return {false, "non-adjacent pair (" + std::to_string(u) + "," + std::to_string(v) + ")"};
        }
    }
    return {true, ""};
}

}  // namespace kpkvb
