#include "salsi/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace salsi {

namespace rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

static std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return splitmix64(splitmix64(seed ^ (stream * 0x632BE59BD9B4E019ULL)) ^ counter);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    // (0,1]: never 0, so log() below is safe
    return double((hash3(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform01(seed, stream, 2 * counter);
    const double u2 = uniform01(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

void DomeSpec::validate() const {
    if (dims.m < 1 || dims.n < 1 || dims.k < 1)
        throw InputError("dome volume dims must all be >= 1");
    for (double r : radii)
        if (!(r > 0)) throw InputError("dome radii must be positive");
    if (!(band_halfwidth > 0)) throw InputError("band half-width must be positive");
    if (reflector_amplitude < 0 || interior_amplitude < 0 || noise_sigma < 0)
        throw InputError("amplitudes and noise sigma must be >= 0");
    if (!(reflector_period > 0)) throw InputError("reflector period must be positive");

    const double extent[3] = {double(dims.m - 1), double(dims.n - 1), double(dims.k - 1)};
    for (int i = 0; i < 3; ++i) {
        if (center[i] - radii[i] < band_halfwidth ||
            center[i] + radii[i] > extent[i] - band_halfwidth)
            throw InputError("dome does not fit inside the volume with a margin of "
                             "one band width on axis " + std::to_string(i));
    }
}

// Closest-point candidates follow the Lagrange stationarity condition
// x_i = e_i^2 y_i / (t + e_i^2): one root of
//   F(t) = sum_{y_i>0} (e_i y_i / (t + e_i^2))^2 = 1
// on (-min e_i^2, inf) where F is strictly decreasing, plus, for every
// component with y_j = 0, a candidate at t = -e_j^2 where the closest point
// lifts off the coordinate plane.
double point_to_ellipsoid_distance(const std::array<double, 3>& p,
                                   const std::array<double, 3>& radii) {
    std::array<double, 3> y{};
    for (int i = 0; i < 3; ++i) {
        if (!(radii[i] > 0)) throw InputError("ellipsoid radii must be positive");
        y[i] = std::fabs(p[i]);
    }
    const auto& e = radii;

    double best = std::numeric_limits<double>::infinity();

    double tmin = std::numeric_limits<double>::infinity();
    bool any_nonzero = false;
    for (int i = 0; i < 3; ++i)
        if (y[i] > 0) {
            any_nonzero = true;
            tmin = std::min(tmin, e[i] * e[i]);
        }

    if (any_nonzero) {
        auto F = [&](double t) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i) {
                if (y[i] == 0) continue;
                const double r = e[i] * y[i] / (t + e[i] * e[i]);
                s += r * r;
            }
            return s;
        };

        const double lo = -tmin;
        double step = tmin;
        double hi = lo + step;
        while (F(hi) >= 1.0) {
            step *= 2.0;
            hi = lo + step;
        }
        double a = lo, b = hi;
        for (int iter = 0; iter < 200 && b - a > 1e-16 * (1.0 + std::fabs(a) + std::fabs(b));
             ++iter) {
            const double mid = 0.5 * (a + b);
            (F(mid) >= 1.0 ? a : b) = mid;
        }
        const double t = 0.5 * (a + b);

        double dist2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (y[i] == 0) continue;
            const double xi = e[i] * e[i] * y[i] / (t + e[i] * e[i]);
            dist2 += (y[i] - xi) * (y[i] - xi);
        }
        best = std::sqrt(dist2);
    }

    for (int j = 0; j < 3; ++j) {
        if (y[j] != 0) continue;
        bool valid = true;
        double q = 1.0, dist2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (i == j || y[i] == 0) continue;
            const double den = e[i] * e[i] - e[j] * e[j];
            if (den <= 0) {  // stationarity at t = -e_j^2 needs e_i > e_j
                valid = false;
                break;
            }
            const double xi = e[i] * e[i] * y[i] / den;
            q -= (xi / e[i]) * (xi / e[i]);
            dist2 += (y[i] - xi) * (y[i] - xi);
        }
        if (!valid || q < 0) continue;
        dist2 += e[j] * e[j] * q;  // lifted component: x_j^2 = e_j^2 q
        best = std::min(best, std::sqrt(dist2));
    }
    return best;
}

namespace {

// Amplitudes snap to 1/1024 steps so that scaling by 0.5, 2, or 10 stays
// exactly representable in float32.
float quantize_amplitude(double v) {
    return float(double(std::llround(v * 1024.0)) / 1024.0);
}

constexpr std::uint64_t kStreamNoise = 1;
constexpr std::uint64_t kStreamTexture = 2;

}  // namespace

SynthCase generate(const DomeSpec& spec) {
    spec.validate();

    SynthCase out{Volume3D(spec.dims), BinaryVolume(spec.dims), BinaryVolume(spec.dims)};
    const Dims3 d = spec.dims;
    const double two_pi = 2.0 * std::numbers::pi;

#pragma omp parallel for collapse(2) schedule(static)
    for (int m = 0; m < d.m; ++m)
        for (int n = 0; n < d.n; ++n)
            for (int k = 0; k < d.k; ++k) {
                const std::int64_t idx = out.volume.index(m, n, k);
                const std::array<double, 3> p{m - spec.center[0], n - spec.center[1],
                                              k - spec.center[2]};

                const double rho2 = (p[0] / spec.radii[0]) * (p[0] / spec.radii[0]) +
                                    (p[1] / spec.radii[1]) * (p[1] / spec.radii[1]) +
                                    (p[2] / spec.radii[2]) * (p[2] / spec.radii[2]);
                const bool inside = rho2 <= 1.0;
                const double dist = point_to_ellipsoid_distance(p, spec.radii);

                out.gt_interior.bits[idx] = inside ? 1 : 0;
                out.gt_boundary.bits[idx] = dist <= spec.band_halfwidth ? 1 : 0;

                double v;
                if (inside) {
                    const double u =
                        2.0 * rng::uniform01(spec.seed, kStreamTexture, std::uint64_t(idx)) - 1.0;
                    v = spec.interior_amplitude * u;
                } else {
                    v = spec.reflector_amplitude *
                        std::sin(two_pi * double(m) / spec.reflector_period);
                }
                v += spec.noise_sigma *
                     rng::gaussian(spec.seed, kStreamNoise, std::uint64_t(idx));

                out.volume.data[std::size_t(idx)] = quantize_amplitude(v);
            }

    return out;
}

}  // namespace salsi
