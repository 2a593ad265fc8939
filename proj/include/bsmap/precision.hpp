#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace bsmap {

// Arbitrary-precision real; precision is set per thread at runtime.
using real = boost::multiprecision::mpfr_float;

// Sets the working precision (in bits) for reals created on this thread.
void set_working_precision(unsigned bits);
unsigned working_precision_bits();

const real& pi_v();
const real& two_pi_v();

inline double to_double(const real& x) { return x.convert_to<double>(); }

// normalize an angle into [0, 2π)
real norm_angle(real a);

// counter-clockwise offset (b - a) mod 2π, in [0, 2π)
real ccw_delta(const real& a, const real& b);

// unsigned circle distance, in [0, π]
real circ_dist(const real& a, const real& b);

struct cplx {
    real re, im;

    cplx() : re(0), im(0) {}
    cplx(real r) : re(std::move(r)), im(0) {}
    cplx(real r, real i) : re(std::move(r)), im(std::move(i)) {}

    cplx conj() const { return {re, -im}; }
    real norm() const { return re * re + im * im; }  // |z|^2
    real abs() const;

    cplx operator-() const { return {-re, -im}; }
    cplx operator+(const cplx& o) const { return {re + o.re, im + o.im}; }
    cplx operator-(const cplx& o) const { return {re - o.re, im - o.im}; }
    cplx operator*(const cplx& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    cplx operator/(const cplx& o) const {
        real d = o.norm();
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
    cplx operator*(const real& s) const { return {re * s, im * s}; }
    cplx operator/(const real& s) const { return {re / s, im / s}; }
};

cplx unit_from_angle(const real& theta);   // e^{iθ}
real angle_of(const cplx& z);              // atan2, normalized to [0, 2π)

}  // namespace bsmap
