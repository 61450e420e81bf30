#include "kpkvb/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include "kpkvb/geometry.hpp"

namespace kpkvb {

namespace {

double annulus_width(const PointSet& ps) {
    if (!(ps.params.alpha < 0.5))
        throw std::invalid_argument("obstruction_counts: requires alpha < 1/2");
    double s = 1.0 / ps.params.alpha;
    if (s >= ps.params.R) throw std::invalid_argument("obstruction_counts: annulus width >= R");
    return s;
}

Obstruction finish(Obstruction obs) {
    obs.certified_perfect = obs.Ns > obs.Ms;
    obs.certified_near_perfect = obs.Ns > obs.Ms + 1;
    return obs;
}

}  // namespace

Obstruction obstruction_counts(const PointSet& ps, const GeomGraph& g) {
    Obstruction obs;
    obs.s = annulus_width(ps);
    const double cutoff = ps.params.R - obs.s;
    const int n = ps.size();
    for (int v = 0; v < n; ++v) {
        if (ps.points[static_cast<std::size_t>(v)].r < cutoff) {
            ++obs.Ms;
            continue;
        }
        bool annulus_neighbor = false;
        for (int u : g.neighbors_of(v)) {
            if (ps.points[static_cast<std::size_t>(u)].r >= cutoff) {
                annulus_neighbor = true;
                break;
            }
        }
        if (!annulus_neighbor) ++obs.Ns;
    }
    return finish(obs);
}

Obstruction obstruction_counts(const PointSet& ps) {
    Obstruction obs;
    obs.s = annulus_width(ps);
    const double R = ps.params.R;
    const double cutoff = R - obs.s;
    const double two_pi = 2.0 * std::numbers::pi;

    // Annulus points in angle order (ids are already ranked by angle).
    std::vector<int> ann;
    std::vector<double> ann_theta;
    for (int v = 0; v < ps.size(); ++v) {
        if (ps.points[static_cast<std::size_t>(v)].r >= cutoff) {
            ann.push_back(v);
            ann_theta.push_back(ps.points[static_cast<std::size_t>(v)].theta);
        }
    }
    obs.Ms = ps.size() - static_cast<long long>(ann.size());

    // Two annulus points can only be adjacent within the critical angle at
    // the annulus inner radius (maximal over the annulus by monotonicity).
    double win = (2.0 * cutoff <= R) ? std::numbers::pi
                                     : critical_angle(cutoff, cutoff, R) + 1e-9;
    for (std::size_t i = 0; i < ann.size(); ++i) {
        const PolarPoint& p = ps.points[static_cast<std::size_t>(ann[i])];
        bool annulus_neighbor = false;
        auto scan = [&](double lo, double hi) {
            auto first = std::lower_bound(ann_theta.begin(), ann_theta.end(), lo);
            auto last = std::upper_bound(ann_theta.begin(), ann_theta.end(), hi);
            for (auto it = first; it != last && !annulus_neighbor; ++it) {
                std::size_t j = static_cast<std::size_t>(it - ann_theta.begin());
                if (j == i) continue;
                if (is_adjacent(p, ps.points[static_cast<std::size_t>(ann[j])], R))
                    annulus_neighbor = true;
            }
        };
        double lo = p.theta - win, hi = p.theta + win;
        if (win >= std::numbers::pi) {
            scan(0.0, two_pi);
        } else if (lo < 0.0) {
            scan(0.0, hi);
            if (!annulus_neighbor) scan(lo + two_pi, two_pi);
        } else if (hi > two_pi) {
            scan(lo, two_pi);
            if (!annulus_neighbor) scan(0.0, hi - two_pi);
        } else {
            scan(lo, hi);
        }
        if (!annulus_neighbor) ++obs.Ns;
    }
    return finish(obs);
}

bool certify_no_perfect(const Obstruction& obs, long long total_vertices) {
    if (total_vertices < 2) return false;
    return obs.certified_perfect;
}

bool certify_no_near_perfect(const Obstruction& obs, long long total_vertices) {
    if (total_vertices < 2) return false;
    return obs.certified_near_perfect;
}

Matching matching_from_cycle(const std::vector<int>& cycle) {
    if (cycle.size() < 3) throw std::invalid_argument("matching_from_cycle: cycle shorter than 3");
    Matching m;
    std::size_t i = 0;
    for (; i + 1 < cycle.size(); i += 2) m.pairs.emplace_back(cycle[i], cycle[i + 1]);
    if (i < cycle.size()) m.uncovered.push_back(cycle[i]);
    return m;
}

MatchingReport verify_matching(const PointSet& ps, const Matching& m) {
    MatchingReport rep;
    const int n = ps.size();
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    auto touch = [&](int v) -> bool {
        if (v < 0 || v >= n) {
            rep.violation = "vertex id out of range: " + std::to_string(v);
            return false;
        }
        if (covered[static_cast<std::size_t>(v)]) {
            rep.violation = "shared endpoint: " + std::to_string(v);
            return false;
        }
        covered[static_cast<std::size_t>(v)] = 1;
        return true;
    };
    for (auto [u, v] : m.pairs) {
        if (!touch(u) || !touch(v)) return rep;
        if (u == v) {
            rep.violation = "self-pair: " + std::to_string(u);
            return rep;
        }
        if (!is_adjacent(ps.points[static_cast<std::size_t>(u)],
                         ps.points[static_cast<std::size_t>(v)], ps.params.R)) {
            rep.violation =
                "non-edge: (" + std::to_string(u) + ", " + std::to_string(v) + ")";
            return rep;
        }
    }
    std::unordered_set<int> unc(m.uncovered.begin(), m.uncovered.end());
    if (unc.size() != m.uncovered.size()) {
        rep.violation = "duplicate in uncovered list";
        return rep;
    }
    for (int v : m.uncovered) {
        if (v < 0 || v >= n) {
            rep.violation = "uncovered id out of range: " + std::to_string(v);
            return rep;
        }
        if (covered[static_cast<std::size_t>(v)]) {
            rep.violation = "uncovered vertex is paired: " + std::to_string(v);
            return rep;
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!covered[static_cast<std::size_t>(v)] && unc.count(v) == 0) {
            rep.violation = "vertex missing from uncovered list: " + std::to_string(v);
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

}  // namespace kpkvb
