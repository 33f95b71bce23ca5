#include "salsi/config.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace salsi {

void PipelineConfig::validate() const {
    if (window < 2) throw InputError("window size must be >= 2");
    if (levels < 2 || levels > 65536)
        throw InputError("quantization levels must be in [2, 65536]");
    if (se_radius < 0) throw InputError("structuring-element radius must be >= 0");
    if (n_thresholds < 2) throw InputError("ROC sweep needs at least 2 thresholds");
    if (threads < 0) throw InputError("thread cap must be >= 0");
}

Axis parse_axis(const std::string& name) {
    if (name == "time") return Axis::Time;
    if (name == "crossline") return Axis::Crossline;
    if (name == "inline") return Axis::Inline;
    throw InputError("unknown axis '" + name + "' (expected time|crossline|inline)");
}

std::string axis_name(Axis axis) {
    switch (axis) {
        case Axis::Time: return "time";
        case Axis::Crossline: return "crossline";
        case Axis::Inline: return "inline";
    }
    return "?";
}

MorphMode parse_morph_mode(const std::string& name) {
    if (name == "per-section-2d") return MorphMode::Section2D;
    if (name == "ball-3d") return MorphMode::Ball3D;
    throw InputError("unknown morphology mode '" + name +
                     "' (expected per-section-2d|ball-3d)");
}

std::string morph_mode_name(MorphMode mode) {
    return mode == MorphMode::Section2D ? "per-section-2d" : "ball-3d";
}

void set_worker_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

}  // namespace salsi
