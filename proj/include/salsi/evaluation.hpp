// Detection-quality evaluation against ground truth: confusion statistics,
// ROC via a descending threshold sweep over quantized levels, trapezoidal
// AUC, and the csv/json report writers.

#ifndef SALSI_EVALUATION_HPP
#define SALSI_EVALUATION_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "salsi/config.hpp"
#include "salsi/volume.hpp"

namespace salsi {

struct ConfusionStats {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    double sensitivity() const;  // TPR = TP/(TP+FN)
    double specificity() const;  // TNR = TN/(TN+FP)
    double fallout() const { return 1.0 - specificity(); }
};

// Positive class = ground-truth boundary-band voxels.
ConfusionStats confusion(const BinaryVolume& b, const BinaryVolume& gt);

struct RocPoint {
    int threshold = 0;  // quantized level; H marks the all-negative endpoint
    double tpr = 0.0;
    double fpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // descending threshold = ascending rates
    double auc = 0.0;
};

// Binarizes (no morphology) at n_thresholds levels uniformly spaced in
// [1, H-1], descending, with the (0,0) and (1,1) endpoints appended as the
// T = H and T = 0 rows. Throws DegenerateDataError when the ground truth
// has only one class.
RocCurve roc_sweep(const SaliencyVolume& s, const BinaryVolume& gt,
                   int n_thresholds, int levels);

// Trapezoidal area under points sorted by ascending FPR (rejects unsorted).
double auc(std::span<const RocPoint> points);

struct EvalReport {
    RocCurve curve;
    int optimal_threshold = 0;  // maximizes TPR - FPR
    double tpr_at_opt = 0.0;
    double fpr_at_opt = 0.0;
};

// Writes roc.csv (threshold,tpr,fpr) and summary.json into out_dir.
EvalReport evaluate_report(const SaliencyVolume& s, const BinaryVolume& gt,
                           const PipelineConfig& cfg,
                           const std::filesystem::path& out_dir);

}  // namespace salsi

#endif
