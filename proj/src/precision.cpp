#include "bsmap/precision.hpp"

#include <cmath>

namespace bsmap {

namespace {
thread_local unsigned g_bits = 256;

struct PrecisionInit {
    PrecisionInit() { set_working_precision(256); }
};
thread_local PrecisionInit g_init;
}  // namespace

void set_working_precision(unsigned bits) {
    if (bits < 24) bits = 24;
    g_bits = bits;
    // boost's mpfr wrapper counts decimal digits
    auto digits10 = static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 2;
    real::default_precision(digits10);
}

unsigned working_precision_bits() { return g_bits; }

const real& pi_v() {
    thread_local real cached = 0;
    thread_local unsigned cached_bits = 0;
    if (cached_bits != g_bits) {
        cached = 2 * acos(real(0));
        cached_bits = g_bits;
    }
    return cached;
}

const real& two_pi_v() {
    thread_local real cached = 0;
    thread_local unsigned cached_bits = 0;
    if (cached_bits != g_bits) {
        cached = 4 * acos(real(0));
        cached_bits = g_bits;
    }
    return cached;
}

real norm_angle(real a) {
    const real& tp = two_pi_v();
    a = fmod(a, tp);
    if (a < 0) a += tp;
    if (a >= tp) a -= tp;
    return a;
}

real ccw_delta(const real& a, const real& b) { return norm_angle(b - a); }

real circ_dist(const real& a, const real& b) {
    real d = norm_angle(a - b);
    if (d > pi_v()) d = two_pi_v() - d;
    return d;
}

real cplx::abs() const { return sqrt(norm()); }

cplx unit_from_angle(const real& theta) { return {cos(theta), sin(theta)}; }

real angle_of(const cplx& z) { return norm_angle(atan2(z.im, z.re)); }

}  // namespace bsmap
