// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace tevem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 operator/(double s) const { return {x / s, y / s}; }
    Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }

    double dot(Point2 o) const { return x * o.x + y * o.y; }
    // z-component of the cross product, positive when o is CCW from *this.
    double cross(Point2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    Point2 normalized() const { double n = norm(); return {x / n, y / n}; }
    // Outward normal of an edge running along *this (CCW polygon convention).
    Point2 rot_cw() const { return {y, -x}; }
};

inline Point2 operator*(double s, Point2 p) { return p * s; }

// Shoelace formula; positive for CCW loops.
double polygon_signed_area(std::span<const Point2> poly);

Point2 polygon_centroid(std::span<const Point2> poly);

// Maximum pairwise vertex distance.
double polygon_diameter(std::span<const Point2> poly);

bool polygon_is_simple(std::span<const Point2> poly);

// Strict convexity: every turn is a left turn (no colinear triples), CCW input.
bool polygon_is_strictly_convex(std::span<const Point2> poly);

// Largest ball contained in the intersection of the half-planes left of each
// directed edge (the polygon kernel). Returns {center, radius}; radius <= 0
// means the kernel has empty interior.
struct KernelBall {
    Point2 center;
    double radius = 0.0;
};
KernelBall polygon_kernel_ball(std::span<const Point2> poly);

// xorshift64* with splitmix seeding; deterministic across platforms.
class Rng64 {
public:
    explicit Rng64(std::uint64_t seed);
    std::uint64_t next();
    double uniform();              // [0, 1)
    double uniform(double a, double b);

private:
    std::uint64_t state_;
};

} // namespace tevem
