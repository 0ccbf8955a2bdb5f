#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ellipse_contact {

/// Base class of every error raised by the library.
class ContactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateShape : public ContactError {
public:
    using ContactError::ContactError;
};

class ZeroVector : public ContactError {
public:
    using ContactError::ContactError;
};

class NonFiniteValue : public ContactError {
public:
    using ContactError::ContactError;
};

/// Plain 2D vector; components must be finite.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_)
    {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw NonFiniteValue("Vec2: components must be finite");
    }

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Counter-clockwise quarter turn.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 rotate(Vec2 v, double c, double s) { return {c * v.x - s * v.y, s * v.x + c * v.y}; }

/// Unit-length direction. Construction renormalizes; zero input is rejected.
class UnitVec2 {
public:
    UnitVec2() = default;
    explicit UnitVec2(Vec2 v)
    {
        const double n = v.norm();
        if (!(n > 0.0))
            throw ZeroVector("UnitVec2: zero vector has no direction");
        v_ = Vec2{v.x / n, v.y / n};
    }
    UnitVec2(double x, double y) : UnitVec2(Vec2{x, y}) {}

    static UnitVec2 from_angle(double radians) { return UnitVec2(Vec2{std::cos(radians), std::sin(radians)}); }
    static UnitVec2 from_degrees(double degrees);

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    Vec2 vec() const { return v_; }
    operator Vec2() const { return v_; }

    UnitVec2 operator-() const { return unchecked(-v_); }
    bool operator==(const UnitVec2&) const = default;

    /// Counter-clockwise quarter turn.
    UnitVec2 perp() const { return unchecked(ellipse_contact::perp(v_)); }

    /// Rotation by (cos, sin); norm preserved to rounding, no renormalization.
    UnitVec2 rotated(double c, double s) const { return unchecked(rotate(v_, c, s)); }
    UnitVec2 renormalized() const { return UnitVec2(v_); }

    double angle() const { return std::atan2(v_.y, v_.x); }

private:
    static UnitVec2 unchecked(Vec2 v)
    {
        UnitVec2 u;
        u.v_ = v;
        return u;
    }
    Vec2 v_{1.0, 0.0};
};

inline UnitVec2 UnitVec2::from_degrees(double degrees)
{
    // Exact values at multiples of 90 degrees keep axis-aligned inputs exact.
    const double r = std::fmod(degrees, 360.0);
    const double w = r < 0 ? r + 360.0 : r;
    if (w == 0.0) return UnitVec2(1.0, 0.0);
    if (w == 90.0) return UnitVec2(0.0, 1.0);
    if (w == 180.0) return UnitVec2(-1.0, 0.0);
    if (w == 270.0) return UnitVec2(0.0, -1.0);
    return from_angle(degrees * (M_PI / 180.0));
}

inline double dot(UnitVec2 a, UnitVec2 b) { return dot(a.vec(), b.vec()); }
inline double cross(UnitVec2 a, UnitVec2 b) { return cross(a.vec(), b.vec()); }

/// Semi-axes of an ellipse, a >= b > 0. A circle (a == b) is allowed.
class EllipseShape {
public:
    EllipseShape(double a, double b) : a_(a), b_(b)
    {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw DegenerateShape("EllipseShape: semi-axes must be finite");
        if (!(b > 0.0))
            throw DegenerateShape("EllipseShape: semi-minor axis b must be positive (b > 0)");
        if (a < b)
            throw DegenerateShape("EllipseShape: semi-major axis must not be shorter than semi-minor (a >= b)");
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double aspect() const { return a_ / b_; }
    double eccentricity2() const { return 1.0 - (b_ / a_) * (b_ / a_); }
    double eccentricity() const { return std::sqrt(eccentricity2()); }
    double area() const { return M_PI * a_ * b_; }
    bool is_circle() const { return a_ == b_; }

    EllipseShape scaled(double s) const { return {a_ * s, b_ * s}; }
    bool operator==(const EllipseShape&) const = default;

private:
    double a_;
    double b_;
};

/// Symmetric 2x2 matrix stored as its three independent entries.
struct SymMat2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    Vec2 apply(Vec2 v) const { return {m11 * v.x + m12 * v.y, m12 * v.x + m22 * v.y}; }
    double quad(Vec2 v) const { return m11 * v.x * v.x + 2.0 * m12 * v.x * v.y + m22 * v.y * v.y; }
    double det() const { return m11 * m22 - m12 * m12; }
    double trace() const { return m11 + m22; }
};

/// Quadratic form M with r.M.r = 1 on the boundary: M = (I - e^2 kk) / b^2.
inline SymMat2 ellipse_matrix(const EllipseShape& shape, UnitVec2 k)
{
    const double inv_b2 = 1.0 / (shape.b() * shape.b());
    const double e2 = shape.eccentricity2();
    return {inv_b2 * (1.0 - e2 * k.x() * k.x()), -inv_b2 * e2 * k.x() * k.y(), inv_b2 * (1.0 - e2 * k.y() * k.y())};
}

/// Two ellipses, their major-axis directions and the direction from centre 1 to centre 2.
struct PairConfiguration {
    EllipseShape shape1;
    EllipseShape shape2;
    UnitVec2 k1;
    UnitVec2 k2;
    UnitVec2 dhat;
};

namespace detail {

inline UnitVec2 named_direction(Vec2 v, const char* name)
{
    if (!(v.norm() > 0.0))
        throw ZeroVector(std::string(name) + ": direction vector must be nonzero");
    return UnitVec2(v);
}

inline EllipseShape named_shape(double a, double b, const char* name)
{
    try {
        return EllipseShape(a, b);
    } catch (const DegenerateShape& e) {
        throw DegenerateShape(std::string(name) + ": " + e.what());
    }
}

} // namespace detail

inline PairConfiguration make_pair_configuration(double a1, double b1, double a2, double b2, Vec2 k1, Vec2 k2,
                                                 Vec2 dhat)
{
    return {detail::named_shape(a1, b1, "ellipse 1"), detail::named_shape(a2, b2, "ellipse 2"),
            detail::named_direction(k1, "k1"), detail::named_direction(k2, "k2"),
            detail::named_direction(dhat, "dhat")};
}

} // namespace ellipse_contact
