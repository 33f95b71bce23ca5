// Synthetic seismic-like volumes with a known ellipsoidal dome and exact
// ground-truth masks: layered sinusoidal reflectors outside, low-amplitude
// incoherent texture inside, Gaussian noise everywhere.

#ifndef SALSI_SYNTH_HPP
#define SALSI_SYNTH_HPP

#include <array>
#include <cstdint>

#include "salsi/volume.hpp"

namespace salsi {

struct DomeSpec {
    Dims3 dims{64, 64, 64};
    std::array<double, 3> center{32.0, 32.0, 32.0};  // voxel coords (m,n,k)
    std::array<double, 3> radii{20.0, 16.0, 16.0};   // semi-axes per axis
    double band_halfwidth = 3.0;       // ground-truth band half-width r_gt, voxels
    double reflector_amplitude = 1.0;  // background layering
    double reflector_period = 8.0;     // voxels along the time axis
    double interior_amplitude = 0.2;   // chaotic salt texture
    double noise_sigma = 0.1;
    std::uint64_t seed = 42;

    void validate() const;  // dome + band must fit inside the volume
};

struct SynthCase {
    Volume3D volume;
    BinaryVolume gt_boundary;  // voxels within band_halfwidth of the surface
    BinaryVolume gt_interior;  // voxels inside the ellipsoid
};

SynthCase generate(const DomeSpec& spec);

// Euclidean distance from a center-relative point to the surface of an
// axis-aligned ellipsoid with the given semi-axes.
double point_to_ellipsoid_distance(const std::array<double, 3>& p,
                                   const std::array<double, 3>& radii);

// Counter-based deterministic random streams: every draw is a pure function
// of (seed, stream, counter), so generation parallelizes without changing
// the output.
namespace rng {

std::uint64_t splitmix64(std::uint64_t x);
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

}  // namespace rng

}  // namespace salsi

#endif
