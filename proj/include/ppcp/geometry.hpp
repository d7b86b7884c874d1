#pragma once

#include <cmath>

namespace ppcp {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend bool operator==(Point a, Point b) = default;

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

struct Interval {
    double lo;
    double hi;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace ppcp
