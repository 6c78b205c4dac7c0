#include "siegel/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace siegel {

namespace {

IPoint sub(const IPoint& a, const IPoint& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

IPoint cross(const IPoint& a, const IPoint& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

i64 dot(const IPoint& a, const IPoint& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

bool is_zero(const IPoint& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

struct Tri {
    std::size_t a, b, c;
    IPoint n;    // outward normal: n . x <= off on the hull
    i64 off;
    bool alive = true;
};

// orient the triangle so that `interior4` (4x an interior point) is on the
// n . x <= off side
Tri make_tri(const std::vector<IPoint>& pts, std::size_t a, std::size_t b, std::size_t c,
             const IPoint& interior4) {
    Tri t{a, b, c, cross(sub(pts[b], pts[a]), sub(pts[c], pts[a])), 0, true};
    t.off = dot(t.n, pts[a]);
    if (dot(t.n, interior4) > 4 * t.off) {
        std::swap(t.b, t.c);
        t.n = {-t.n[0], -t.n[1], -t.n[2]};
        t.off = -t.off;
    }
    return t;
}

std::vector<HullTriangle> finalize(const std::vector<Tri>& tris) {
    std::vector<HullTriangle> out;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        out.push_back(HullTriangle{{t.a, t.b, t.c}, {-t.n[0], -t.n[1], -t.n[2]}, -t.off});
    }
    return out;
}

bool certify(const std::vector<IPoint>& pts, const std::vector<Tri>& tris) {
    // watertight: every undirected edge is used exactly twice
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    std::size_t alive = 0;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        ++alive;
        if (is_zero(t.n)) return false;
        edges[std::minmax(t.a, t.b)]++;
        edges[std::minmax(t.b, t.c)]++;
        edges[std::minmax(t.a, t.c)]++;
    }
    if (alive < 4) return false;
    for (const auto& [e, c] : edges)
        if (c != 2) return false;
    // all input points inside all facet halfspaces
    for (const auto& p : pts)
        for (const auto& t : tris) {
            if (!t.alive) continue;
            if (dot(t.n, p) > t.off) return false;
        }
    return true;
}

std::vector<Tri> incremental_hull(const std::vector<IPoint>& pts, bool& degenerate_tri) {
    degenerate_tri = false;
    std::size_t n = pts.size();
    // initial affinely independent quadruple
    std::size_t i0 = 0, i1 = n, i2 = n, i3 = n;
    for (std::size_t i = 1; i < n; ++i)
        if (!(pts[i] == pts[i0])) { i1 = i; break; }
    if (i1 == n) throw std::domain_error("hull: all points equal");
    for (std::size_t i = 1; i < n; ++i)
        if (!is_zero(cross(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0])))) { i2 = i; break; }
    if (i2 == n) throw std::domain_error("hull: points collinear");
    IPoint nrm = cross(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
    for (std::size_t i = 1; i < n; ++i)
        if (dot(nrm, sub(pts[i], pts[i0])) != 0) { i3 = i; break; }
    if (i3 == n) throw std::domain_error("hull: points coplanar");

    IPoint interior4{pts[i0][0] + pts[i1][0] + pts[i2][0] + pts[i3][0],
                     pts[i0][1] + pts[i1][1] + pts[i2][1] + pts[i3][1],
                     pts[i0][2] + pts[i1][2] + pts[i2][2] + pts[i3][2]};
    std::vector<Tri> tris;
    tris.push_back(make_tri(pts, i0, i1, i2, interior4));
    tris.push_back(make_tri(pts, i0, i1, i3, interior4));
    tris.push_back(make_tri(pts, i0, i2, i3, interior4));
    tris.push_back(make_tri(pts, i1, i2, i3, interior4));

    for (std::size_t p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<std::size_t> visible;
        for (std::size_t t = 0; t < tris.size(); ++t)
            if (tris[t].alive && dot(tris[t].n, pts[p]) > tris[t].off) visible.push_back(t);
        if (visible.empty()) continue;
        // horizon: undirected edges used exactly once among the visible set,
        // kept with the orientation they carry there
        std::map<std::pair<std::size_t, std::size_t>,
                 std::pair<int, std::pair<std::size_t, std::size_t>>> count;
        for (std::size_t t : visible) {
            const Tri& tr = tris[t];
            std::array<std::pair<std::size_t, std::size_t>, 3> des{
                {{tr.a, tr.b}, {tr.b, tr.c}, {tr.c, tr.a}}};
            for (auto& e : des) {
                auto key = std::minmax(e.first, e.second);
                auto it = count.find(key);
                if (it == count.end()) count[key] = {1, e};
                else it->second.first++;
            }
        }
        for (std::size_t t : visible) tris[t].alive = false;
        for (const auto& [key, val] : count) {
            if (val.first != 2) {
                auto [u, v] = val.second;
                IPoint nn = cross(sub(pts[v], pts[u]), sub(pts[p], pts[u]));
                if (is_zero(nn)) { degenerate_tri = true; continue; }
                tris.push_back(make_tri(pts, u, v, p, interior4));
            }
        }
    }
    return tris;
}

// exhaustive supporting-plane enumeration; exact but cubic in the point count
std::vector<HullTriangle> exhaustive_hull(const std::vector<IPoint>& pts) {
    std::size_t n = pts.size();
    if (n > 400) throw CeilingExceededError("hull fallback cap exceeded", n);
    std::map<std::pair<IPoint, i64>, std::vector<std::size_t>> facets;  // outward primitive (n, off)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                IPoint nn = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                if (is_zero(nn)) continue;
                i64 g = std::gcd(std::gcd(std::abs(nn[0]), std::abs(nn[1])), std::abs(nn[2]));
                nn = {nn[0] / g, nn[1] / g, nn[2] / g};
                i64 off = dot(nn, pts[i]);
                bool le = true, ge = true;
                for (std::size_t m = 0; m < n && (le || ge); ++m) {
                    i64 d = dot(nn, pts[m]);
                    if (d > off) le = false;
                    if (d < off) ge = false;
                }
                if (!le && !ge) continue;
                if (!le) { nn = {-nn[0], -nn[1], -nn[2]}; off = -off; }
                auto key = std::make_pair(nn, off);
                if (facets.count(key)) continue;
                std::vector<std::size_t> on;
                for (std::size_t m = 0; m < n; ++m)
                    if (dot(nn, pts[m]) == off) on.push_back(m);
                facets[key] = on;
            }
    std::vector<HullTriangle> out;
    for (const auto& [key, on] : facets) {
        const IPoint& nn = key.first;
        int drop = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(nn[std::size_t(i)]) > std::abs(nn[std::size_t(drop)])) drop = i;
        std::vector<std::array<i64, 2>> proj;
        for (std::size_t m : on) {
            const IPoint& p = pts[m];
            if (drop == 0) proj.push_back({p[1], p[2]});
            else if (drop == 1) proj.push_back({p[0], p[2]});
            else proj.push_back({p[0], p[1]});
        }
        auto ring = convex_hull_2d(proj);
        for (std::size_t t = 1; t + 1 < ring.size(); ++t)
            out.push_back(HullTriangle{{on[ring[0]], on[ring[t]], on[ring[t + 1]]},
                                       {-nn[0], -nn[1], -nn[2]},
                                       -key.second});
    }
    return out;
}

}  // namespace

std::vector<std::size_t> convex_hull_2d(const std::vector<std::array<i64, 2>>& pts) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    idx.erase(std::unique(idx.begin(), idx.end(),
                          [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
              idx.end());
    if (idx.size() < 3) return idx;
    auto cr = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
               (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };
    std::vector<std::size_t> h(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && cr(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
        h[k++] = idx[i];
    }
    for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cr(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
        h[k++] = idx[i];
    }
    h.resize(k - 1);
    return h;
}

int affine_rank(const std::vector<IPoint>& pts) {
    if (pts.empty()) return -1;
    std::size_t n = pts.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (pts[i] == pts[0]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            IPoint c = cross(sub(pts[i], pts[0]), sub(pts[j], pts[0]));
            if (is_zero(c)) continue;
            for (std::size_t k = j + 1; k < n; ++k)
                if (dot(c, sub(pts[k], pts[0])) != 0) return 3;
            return 2;
        }
        return 1;
    }
    return 0;
}

std::vector<HullTriangle> convex_hull_3d(const std::vector<IPoint>& pts) {
    bool degen = false;
    auto tris = incremental_hull(pts, degen);
    if (!degen && certify(pts, tris)) return finalize(tris);
    return exhaustive_hull(pts);
}

}  // namespace siegel
