// Built with vector math flags; keep this file free of anything needing
// IEEE corner cases.
#include "sim_kernel.hpp"

#include <cmath>

namespace debtgame::detail {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr float kTwoPi = 6.28318530717958647f;
constexpr float kInv24 = 1.0f / 16777216.0f;

inline std::uint64_t draw(std::uint64_t key, std::uint64_t counter) {
    std::uint64_t z = key + counter * kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

void run_block(const KernelSetup& s, const std::uint64_t* keys, int count,
               double* gov_out, double* leg_out) {
    alignas(64) double xp[kBlock], xm[kBlock];
    alignas(64) double jp[kBlock], jm[kBlock], ip[kBlock], im[kBlock];
    alignas(64) double z0[kBlock], z1[kBlock];
    alignas(64) float u1[kBlock], u2[kBlock], radius[kBlock];
    alignas(64) std::uint64_t key[kBlock];
    for (int j = 0; j < kBlock; ++j) {
        key[j] = j < count ? keys[j] : 0;
        xp[j] = xm[j] = s.x_start;
        jp[j] = jm[j] = ip[j] = im[j] = 0.0;
    }
    const double lo = s.lower;
    const double hi = s.upper;
    const double half_dt = 0.5 * s.dt;
    const double alpha_dt = s.alpha * s.dt;
    const double m = s.m;
    const double step_r = std::exp(-s.rho * s.dt);
    const double step_l = std::exp(-s.lambda * s.dt);
    double dr0 = 1.0, dl0 = 1.0, dr1 = 1.0, dl1 = 1.0;

    for (std::int64_t k = 0; k < s.steps; ++k) {
        // antithetic pairs use one Box-Muller pair for two consecutive steps;
        // independent paths consume both outputs every step
        const bool fresh = !s.antithetic || (k % 2 == 0);
        if (fresh) {
            const std::uint64_t c = static_cast<std::uint64_t>(s.antithetic ? k / 2 : k);
            // one 64-bit draw feeds a single-precision Box-Muller pair on
            // 24-bit uniforms; u1 lies in (0, 1] so the log stays finite
#pragma omp simd
            for (int j = 0; j < kBlock; ++j) {
                const std::uint64_t bits = draw(key[j], c);
                u1[j] = static_cast<float>(static_cast<std::int64_t>(bits >> 40) + 1) * kInv24;
                u2[j] = static_cast<float>(static_cast<std::int64_t>((bits >> 8) & 0xffffffULL)) * kInv24;
            }
            // separate loops keep sin and cos from fusing into a scalar sincos
#pragma omp simd
            for (int j = 0; j < kBlock; ++j) {
                radius[j] = std::sqrt(-2.0f * std::log(u1[j]));
                u2[j] *= kTwoPi;
            }
#pragma omp simd
            for (int j = 0; j < kBlock; ++j) z0[j] = radius[j] * std::cos(u2[j]);
#pragma omp simd
            for (int j = 0; j < kBlock; ++j) z1[j] = radius[j] * std::sin(u2[j]);
        }
        const double* z = (s.antithetic && k % 2 == 1) ? z1 : z0;
        // discount factors by recurrence, re-anchored every 1024 steps
        if (k % 1024 == 0) {
            const double t = static_cast<double>(k) * s.dt;
            dr0 = std::exp(-s.rho * t);
            dl0 = std::exp(-s.lambda * t);
        } else {
            dr0 = dr1;
            dl0 = dl1;
        }
        dr1 = dr0 * step_r;
        dl1 = dl0 * step_l;
        const double run_g = dr0 * half_dt;
        const double run_l = dl0 * alpha_dt;
        const double up_g = dr1 * s.c2;
        const double down_g = dr1 * s.c1;
        const double down_l = dl1 * s.kappa;

        if (s.antithetic) {
#pragma omp simd
            for (int j = 0; j < kBlock; ++j) {
                const double xpv = xp[j];
                const double xmv = xm[j];
                jp[j] += run_g * xpv * xpv;
                jm[j] += run_g * xmv * xmv;
                ip[j] += run_l * std::fmax(xpv - m, 0.0);
                im[j] += run_l * std::fmax(xmv - m, 0.0);
                const double growth = std::exp(s.drift_dt + s.vol_sqrt_dt * z[j]);
                const double shrink = std::exp(2.0 * s.drift_dt) / growth;
                const double pre_p = xpv * growth;
                const double pre_m = xmv * shrink;
                const double dp = std::fmax(pre_p - hi, 0.0);
                const double dm = std::fmax(pre_m - hi, 0.0);
                const double upp = std::fmax(lo - pre_p, 0.0);
                const double upm = std::fmax(lo - pre_m, 0.0);
                xp[j] = pre_p - dp + upp;
                xm[j] = pre_m - dm + upm;
                jp[j] += down_g * dp - up_g * upp;
                jm[j] += down_g * dm - up_g * upm;
                ip[j] += down_l * dp;
                im[j] += down_l * dm;
            }
        } else {
#pragma omp simd
            for (int j = 0; j < kBlock; ++j) {
                const double xpv = xp[j];
                const double xmv = xm[j];
                jp[j] += run_g * xpv * xpv;
                jm[j] += run_g * xmv * xmv;
                ip[j] += run_l * std::fmax(xpv - m, 0.0);
                im[j] += run_l * std::fmax(xmv - m, 0.0);
                const double pre_p = xpv * std::exp(s.drift_dt + s.vol_sqrt_dt * z0[j]);
                const double pre_m = xmv * std::exp(s.drift_dt + s.vol_sqrt_dt * z1[j]);
                const double dp = std::fmax(pre_p - hi, 0.0);
                const double dm = std::fmax(pre_m - hi, 0.0);
                const double upp = std::fmax(lo - pre_p, 0.0);
                const double upm = std::fmax(lo - pre_m, 0.0);
                xp[j] = pre_p - dp + upp;
                xm[j] = pre_m - dm + upm;
                jp[j] += down_g * dp - up_g * upp;
                jm[j] += down_g * dm - up_g * upm;
                ip[j] += down_l * dp;
                im[j] += down_l * dm;
            }
        }
    }

    for (int j = 0; j < count; ++j) {
        if (s.antithetic) {
            gov_out[j] = 0.5 * (jp[j] + jm[j]);
            leg_out[j] = 0.5 * (ip[j] + im[j]);
        } else {
            gov_out[2 * j] = jp[j];
            gov_out[2 * j + 1] = jm[j];
            leg_out[2 * j] = ip[j];
            leg_out[2 * j + 1] = im[j];
        }
    }
}

}  // namespace debtgame::detail
