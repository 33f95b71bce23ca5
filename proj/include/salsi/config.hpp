// Pipeline tunables and the axis/morphology enums used across modules.

#ifndef SALSI_CONFIG_HPP
#define SALSI_CONFIG_HPP

#include <string>

#include "salsi/errors.hpp"

namespace salsi {

// Volume axes: m = time-depth, n = crossline, k = inline.
enum class Axis { Time, Crossline, Inline };

enum class MorphMode { Section2D, Ball3D };

struct PipelineConfig {
    int window = 8;                    // local cube edge L
    Axis temporal_axis = Axis::Inline; // frequency axis weighted as "temporal"
    int levels = 256;                  // quantized gray levels H
    int se_radius = 10;                // closing disk radius, voxels
    int n_thresholds = 100;            // ROC sweep size
    MorphMode morphology = MorphMode::Section2D;
    int threads = 0;                   // worker cap; 0 = runtime default

    void validate() const;
};

Axis parse_axis(const std::string& name);
std::string axis_name(Axis axis);

MorphMode parse_morph_mode(const std::string& name);
std::string morph_mode_name(MorphMode mode);

// Applies the thread cap for subsequent parallel regions.
void set_worker_threads(int threads);

}  // namespace salsi

#endif
