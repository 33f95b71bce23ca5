// Saliency core: windowed 3D FFT spectra, temporal/spatial spectral split,
// center-surround contrast, and the fused saliency volume.
//
// The local spectrum is the normalized DFT
//   F[u,v,w] = (1/L^3) sum f[m,n,k] e^{-2*pi*i*(mu+nv+kw)/L}
// so Parseval reads sum|F|^2 = (1/L^3) sum f^2. Frequencies are interpreted
// as centered (FFT-shifted) indices in [-L/2, L/2) before weighting, which
// keeps conjugate-symmetric coefficients of real windows weighted equally.

#ifndef SALSI_SALIENCY_HPP
#define SALSI_SALIENCY_HPP

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "salsi/config.hpp"
#include "salsi/volume.hpp"

namespace salsi {

struct LocalSpectrum {
    int edge = 0;  // L
    std::vector<std::complex<double>> coeff;  // (u*L + v)*L + w

    std::int64_t index(int u, int v, int w) const {
        return (std::int64_t(u) * edge + v) * edge + w;
    }
};

// One FFTW plan for an L^3 forward transform, reusable across threads.
class LocalFft {
public:
    explicit LocalFft(int edge);
    ~LocalFft();
    LocalFft(const LocalFft&) = delete;
    LocalFft& operator=(const LocalFft&) = delete;

    int edge() const { return edge_; }

    // Normalized spectrum of a real L^3 window (C order, k fastest).
    LocalSpectrum transform(std::span<const double> window) const;

private:
    int edge_;
    void* plan_;  // fftw_plan
};

// Coarse grid of per-window values, one cell per non-overlapping L^3 window.
// Cell (cm,cn,ck) covers voxels [c*L + origin, ...) of the parent volume.
struct CellGrid {
    Dims3 cell_dims;
    int window = 0;  // L
    std::array<int, 3> origin{0, 0, 0};
    std::vector<double> values;  // (cm*Nc + cn)*Kc + ck

    CellGrid() = default;
    CellGrid(Dims3 cd, int L);

    std::int64_t index(int cm, int cn, int ck) const {
        return (std::int64_t(cm) * cell_dims.n + cn) * cell_dims.k + ck;
    }
    double operator()(int cm, int cn, int ck) const { return values[index(cm, cn, ck)]; }
    double& operator()(int cm, int cn, int ck) { return values[index(cm, cn, ck)]; }
};

LocalSpectrum compute_local_spectrum(std::span<const double> window, int edge);
LocalSpectrum compute_local_spectrum(std::span<const double> window, const LocalFft& fft);

// Centered frequency index for raw DFT index a in [0, L).
inline int centered_freq(int a, int edge) { return a < (edge + 1) / 2 ? a : a - edge; }

// Amplitude weights (wt, ws) of the temporal/spatial split at one coefficient.
// Both are 0 at DC; elsewhere wt^2 + ws^2 = 1.
std::pair<double, double> split_weights(int u, int v, int w, int edge,
                                        Axis temporal_axis = Axis::Inline);

std::pair<LocalSpectrum, LocalSpectrum> decompose_spectrum(
    const LocalSpectrum& f, Axis temporal_axis = Axis::Inline);

// Sum of squared coefficient magnitudes.
double spectral_energy(const LocalSpectrum& f);

// Partitions the volume into non-overlapping L^3 windows (edge remainder
// reflection-padded) and fills one temporal and one spatial energy cell per
// window.
std::pair<CellGrid, CellGrid> build_energy_grids(const Volume3D& v, int window,
                                                 Axis temporal_axis = Axis::Inline);

// Mean absolute difference against the up-to-26 in-grid neighbors of each
// cell (3x3x3 neighborhood, center excluded).
CellGrid center_surround(const CellGrid& e);

// Cellwise 0.5*St + 0.5*Ss.
CellGrid fuse_cells(const CellGrid& st, const CellGrid& ss);

// Fuses, nearest-neighbor upsamples (each voxel inherits its window's cell),
// crops to target_dims, and min-max normalizes to [0,1]. Constant maps
// normalize to all-zeros.
SaliencyVolume fuse_and_upsample(const CellGrid& st, const CellGrid& ss,
                                 Dims3 target_dims);

// Full chain: amplitude canonicalization, energy grids, center-surround,
// fuse+upsample. Dividing by max|v| up front makes the result exactly
// invariant to uniform amplitude scaling whenever the scaled samples are
// representable, since the per-voxel quotients are unchanged.
SaliencyVolume compute_saliency(const Volume3D& v, const PipelineConfig& cfg);

// Reflection fold of index i into [0, extent) (mirror without edge repeat).
int reflect_index(int i, int extent);

}  // namespace salsi

#endif
