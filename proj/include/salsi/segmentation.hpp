// Saliency-to-mask stage: quantization, Otsu threshold selection, voxelwise
// binarization, and morphological closing of the binary volume.

#ifndef SALSI_SEGMENTATION_HPP
#define SALSI_SEGMENTATION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "salsi/config.hpp"
#include "salsi/volume.hpp"

namespace salsi {

struct Histogram {
    std::vector<std::int64_t> counts;  // one bin per gray level
    std::int64_t total = 0;

    int levels() const { return int(counts.size()); }
    double probability(int level) const { return double(counts[level]) / double(total); }
    int nonempty_bins() const;
};

struct QuantizedVolume {
    Dims3 dims;
    int levels = 0;  // H
    std::vector<std::uint16_t> level;  // same layout as Volume3D
};

// Flat disk {(di,dj) : di^2 + dj^2 <= r^2}; symmetric, contains the origin.
struct StructuringElement {
    int radius = 0;
    std::vector<std::pair<int, int>> offsets;

    static StructuringElement disk(int radius);
};

// level(x) = min(floor(x*H), H-1) for saliency values in [0,1].
std::pair<QuantizedVolume, Histogram> quantize(const SaliencyVolume& s, int levels);

// Exhaustive minimizer of the weighted intra-class variance over T in
// [1, H-1]; class 1 = [0,T-1], class 2 = [T,H-1], both kept nonempty.
// Ties break toward the smallest T. Throws DegenerateDataError when fewer
// than two bins are occupied.
int otsu_threshold(const Histogram& h);

// B = 1 where level >= T.
BinaryVolume binarize(const QuantizedVolume& q, int threshold);

// Dilation then erosion per 2D (m,n) section at each fixed inline k.
// Sections are treated as patches of an all-background plane: dilation may
// spill up to r beyond the section and erosion's containment test runs over
// that spill before the result is cropped back, so closing stays extensive,
// increasing, and idempotent on the section.
BinaryVolume morph_close(const BinaryVolume& b, const StructuringElement& se);

// 3D variant with a ball {(di,dj,dk) : di^2+dj^2+dk^2 <= r^2}.
BinaryVolume morph_close_ball(const BinaryVolume& b, int radius);

struct SegmentResult {
    BinaryVolume mask;
    int threshold = 0;  // the Otsu level actually applied
};

// quantize -> otsu_threshold -> binarize -> morph_close per config.
SegmentResult segment(const SaliencyVolume& s, const PipelineConfig& cfg);

}  // namespace salsi

#endif
