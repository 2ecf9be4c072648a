// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#include "tevem/geometry.hpp"

#include <algorithm>
#include <limits>

namespace tevem {

double polygon_signed_area(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        twice += a.cross(b);
    }
    return 0.5 * twice;
}

Point2 polygon_centroid(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    double cx = 0.0, cy = 0.0, twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        const double w = a.cross(b);
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
        twice += w;
    }
    return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double polygon_diameter(std::span<const Point2> poly) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d2 = std::max(d2, (poly[i] - poly[j]).squared_norm());
    return std::sqrt(d2);
}

namespace {

// Proper or endpoint-touching intersection of open segments ab and cd.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto orient = [](Point2 p, Point2 q, Point2 r) {
        return (q - p).cross(r - p);
    };
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double o3 = orient(c, d, a);
    const double o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 &&
        o3 != 0 && o4 != 0)
        return true;
    return false;
}

} // namespace

bool polygon_is_simple(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex with edge i.
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool polygon_is_strictly_convex(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        const Point2 c = poly[(i + 2) % n];
        if ((b - a).cross(c - b) <= 0.0) return false;
    }
    return true;
}

KernelBall polygon_kernel_ball(std::span<const Point2> poly) {
    // Chebyshev center of the half-plane intersection: maximize r subject to
    // n_e . c + r <= n_e . p_e for every edge (n_e outward). The optimum is
    // attained where three constraints are active, so enumerate triples.
    const std::size_t n = poly.size();
    std::vector<Point2> normal(n);
    std::vector<double> offset(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        normal[i] = (b - a).rot_cw().normalized();
        offset[i] = normal[i].dot(a);
        scale = std::max(scale, (b - a).norm());
    }

    auto feasible = [&](Point2 c, double r) {
        for (std::size_t i = 0; i < n; ++i)
            if (normal[i].dot(c) + r > offset[i] + 1e-12 * scale) return false;
        return true;
    };

    KernelBall best;
    best.radius = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                // Solve [n_i 1; n_j 1; n_k 1] (cx, cy, r)^T = (d_i, d_j, d_k).
                const double a11 = normal[i].x, a12 = normal[i].y;
                const double a21 = normal[j].x, a22 = normal[j].y;
                const double a31 = normal[k].x, a32 = normal[k].y;
                const double det = a11 * (a22 - a32) - a12 * (a21 - a31) +
                                   (a21 * a32 - a31 * a22);
                if (std::abs(det) < 1e-14) continue;
                const double d1 = offset[i], d2 = offset[j], d3 = offset[k];
                const double cx = (d1 * (a22 - a32) - a12 * (d2 - d3) +
                                   (d2 * a32 - d3 * a22)) / det;
                const double cy = (a11 * (d2 - d3) - d1 * (a21 - a31) +
                                   (a21 * d3 - a31 * d2)) / det;
                const double r = (a11 * (a22 * d3 - a32 * d2) -
                                  a12 * (a21 * d3 - a31 * d2) +
                                  d1 * (a21 * a32 - a31 * a22)) / det;
                if (r > best.radius && feasible({cx, cy}, r)) {
                    best.center = {cx, cy};
                    best.radius = r;
                }
            }
        }
    }
    if (!std::isfinite(best.radius)) best.radius = 0.0;
    best.radius = std::max(best.radius, 0.0);
    return best;
}

Rng64::Rng64(std::uint64_t seed) {
    // splitmix64 step so that small seeds still spread over the state space
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    state_ = z ^ (z >> 31);
    if (state_ == 0) state_ = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t Rng64::next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dULL;
}

double Rng64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng64::uniform(double a, double b) { return a + (b - a) * uniform(); }

} // namespace tevem
