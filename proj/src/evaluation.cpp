#include "salsi/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "salsi/segmentation.hpp"

namespace salsi {

namespace fs = std::filesystem;

double ConfusionStats::sensitivity() const {
    const std::int64_t pos = tp + fn;
    return pos > 0 ? double(tp) / double(pos) : std::numeric_limits<double>::quiet_NaN();
}

double ConfusionStats::specificity() const {
    const std::int64_t neg = tn + fp;
    return neg > 0 ? double(tn) / double(neg) : std::numeric_limits<double>::quiet_NaN();
}

ConfusionStats confusion(const BinaryVolume& b, const BinaryVolume& gt) {
    if (b.dims != gt.dims)
        throw ShapeMismatchError("prediction dims " + dims_str(b.dims) +
                                 " != ground-truth dims " + dims_str(gt.dims));
    ConfusionStats c;
    for (std::size_t i = 0; i < b.bits.size(); ++i) {
        const bool pred = b.bits[i] != 0;
        const bool truth = gt.bits[i] != 0;
        if (truth)
            pred ? ++c.tp : ++c.fn;
        else
            pred ? ++c.fp : ++c.tn;
    }
    return c;
}

RocCurve roc_sweep(const SaliencyVolume& s, const BinaryVolume& gt, int n_thresholds,
                   int levels) {
    if (n_thresholds < 2) throw InputError("ROC sweep needs at least 2 thresholds");
    if (s.dims != gt.dims)
        throw ShapeMismatchError("saliency dims " + dims_str(s.dims) +
                                 " != ground-truth dims " + dims_str(gt.dims));

    auto [q, hist] = quantize(s, levels);

    // Per-level counts split by class; suffix sums give each threshold's
    // TP/FP, identical to running confusion() per binarization.
    std::vector<std::int64_t> pos_at(std::size_t(levels), 0), neg_at(std::size_t(levels), 0);
    std::int64_t positives = 0;
    for (std::size_t i = 0; i < q.level.size(); ++i) {
        if (gt.bits[i]) {
            ++pos_at[q.level[i]];
            ++positives;
        } else {
            ++neg_at[q.level[i]];
        }
    }
    const std::int64_t negatives = std::int64_t(q.level.size()) - positives;
    if (positives == 0 || negatives == 0)
        throw DegenerateDataError("ground truth has a single class; TPR/FPR undefined");

    std::vector<std::int64_t> pos_ge(std::size_t(levels) + 1, 0), neg_ge(std::size_t(levels) + 1, 0);
    for (int l = levels - 1; l >= 0; --l) {
        pos_ge[std::size_t(l)] = pos_ge[std::size_t(l) + 1] + pos_at[std::size_t(l)];
        neg_ge[std::size_t(l)] = neg_ge[std::size_t(l) + 1] + neg_at[std::size_t(l)];
    }

    auto rate_point = [&](int t) {
        RocPoint p;
        p.threshold = t;
        p.tpr = double(pos_ge[std::size_t(t)]) / double(positives);
        p.fpr = double(neg_ge[std::size_t(t)]) / double(negatives);
        return p;
    };

    RocCurve curve;
    curve.points.reserve(std::size_t(n_thresholds) + 2);
    curve.points.push_back(rate_point(levels));  // all-negative endpoint (0,0)
    for (int j = n_thresholds - 1; j >= 0; --j) {
        const int t = 1 + int(std::llround(double(j) * (levels - 2) / (n_thresholds - 1)));
        curve.points.push_back(rate_point(t));
    }
    curve.points.push_back(rate_point(0));  // all-positive endpoint (1,1)

    curve.auc = auc(curve.points);
    return curve;
}

double auc(std::span<const RocPoint> points) {
    if (points.size() < 2) throw InputError("AUC needs at least 2 ROC points");
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].fpr < points[i - 1].fpr)
            throw InputError("ROC points not sorted by ascending FPR");
        area += (points[i].fpr - points[i - 1].fpr) * 0.5 *
                (points[i].tpr + points[i - 1].tpr);
    }
    return area;
}

namespace {

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

EvalReport evaluate_report(const SaliencyVolume& s, const BinaryVolume& gt,
                           const PipelineConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    EvalReport rep;
    rep.curve = roc_sweep(s, gt, cfg.n_thresholds, cfg.levels);

    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : rep.curve.points) {
        const double youden = p.tpr - p.fpr;
        if (youden > best) {
            best = youden;
            rep.optimal_threshold = p.threshold;
            rep.tpr_at_opt = p.tpr;
            rep.fpr_at_opt = p.fpr;
        }
    }

    fs::create_directories(out_dir);

    {
        std::ofstream csv(out_dir / "roc.csv", std::ios::binary);  // LF endings
        if (!csv) throw InputError("cannot write " + (out_dir / "roc.csv").string());
        csv << "threshold,tpr,fpr\n";
        for (const auto& p : rep.curve.points)
            csv << p.threshold << "," << fmt_double(p.tpr) << "," << fmt_double(p.fpr)
                << "\n";
    }

    nlohmann::json j;
    j["auc"] = rep.curve.auc;
    j["optimal_threshold"] = rep.optimal_threshold;
    j["tpr_at_opt"] = rep.tpr_at_opt;
    j["fpr_at_opt"] = rep.fpr_at_opt;
    std::ofstream js(out_dir / "summary.json", std::ios::binary);
    if (!js) throw InputError("cannot write " + (out_dir / "summary.json").string());
    js << j.dump(2) << "\n";

    return rep;
}

}  // namespace salsi
