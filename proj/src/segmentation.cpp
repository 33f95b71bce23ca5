#include "salsi/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace salsi {

int Histogram::nonempty_bins() const {
    int n = 0;
    for (auto c : counts) n += c > 0;
    return n;
}

std::pair<QuantizedVolume, Histogram> quantize(const SaliencyVolume& s, int levels) {
    if (levels < 2 || levels > 65536)
        throw InputError("quantization levels must be in [2, 65536]");

    QuantizedVolume q;
    q.dims = s.dims;
    q.levels = levels;
    q.level.resize(s.data.size());

    Histogram h;
    h.counts.assign(std::size_t(levels), 0);
    h.total = std::int64_t(s.data.size());

    for (std::size_t i = 0; i < s.data.size(); ++i) {
        const float x = s.data[i];
        if (!(x >= 0.0f && x <= 1.0f))
            throw InputError("saliency value " + std::to_string(x) + " at index " +
                             std::to_string(i) + " outside [0,1]; cannot quantize");
        const int lvl = std::min(int(std::floor(double(x) * levels)), levels - 1);
        q.level[i] = std::uint16_t(lvl);
        ++h.counts[std::size_t(lvl)];
    }
    return {std::move(q), std::move(h)};
}

int otsu_threshold(const Histogram& h) {
    const int levels = h.levels();
    if (levels < 2) throw InputError("histogram needs at least 2 bins");
    if (h.nonempty_bins() < 2)
        throw DegenerateDataError(
            "histogram occupies a single gray level; volume cannot be thresholded");

    std::int64_t sum_i = 0, sum_ii = 0;
    for (int i = 0; i < levels; ++i) {
        sum_i += std::int64_t(i) * h.counts[std::size_t(i)];
        sum_ii += std::int64_t(i) * i * h.counts[std::size_t(i)];
    }

    // Weighted intra-class variance, scaled by the (constant) total count:
    // sum over both classes of [sum c*i^2 - (sum c*i)^2 / class count].
    double best = std::numeric_limits<double>::infinity();
    int best_t = -1;
    std::int64_t c1 = 0, m1 = 0, ss1 = 0;
    for (int t = 1; t <= levels - 1; ++t) {
        c1 += h.counts[std::size_t(t - 1)];
        m1 += std::int64_t(t - 1) * h.counts[std::size_t(t - 1)];
        ss1 += std::int64_t(t - 1) * (t - 1) * h.counts[std::size_t(t - 1)];

        const std::int64_t c2 = h.total - c1;
        if (c1 == 0) continue;
        if (c2 == 0) break;  // larger t keeps class 2 empty

        const std::int64_t m2 = sum_i - m1;
        const std::int64_t ss2 = sum_ii - ss1;
        const double j = (double(ss1) - double(m1) * double(m1) / double(c1)) +
                         (double(ss2) - double(m2) * double(m2) / double(c2));
        if (j < best) {
            best = j;
            best_t = t;
        }
    }
    return best_t;
}

BinaryVolume binarize(const QuantizedVolume& q, int threshold) {
    if (threshold < 1 || threshold > q.levels - 1)
        throw InputError("threshold " + std::to_string(threshold) +
                         " outside [1," + std::to_string(q.levels - 1) + "]");
    BinaryVolume b(q.dims);
    for (std::size_t i = 0; i < q.level.size(); ++i)
        b.bits[i] = q.level[i] >= threshold ? 1 : 0;
    return b;
}

StructuringElement StructuringElement::disk(int radius) {
    if (radius < 0) throw InputError("disk radius must be >= 0");
    StructuringElement se;
    se.radius = radius;
    for (int di = -radius; di <= radius; ++di)
        for (int dj = -radius; dj <= radius; ++dj)
            if (di * di + dj * dj <= radius * radius) se.offsets.emplace_back(di, dj);
    return se;
}

namespace {

// Closing of one 2D section embedded in an all-background plane: the
// dilation spills into an r-wide apron and erosion tests containment over
// the spill, then the result is cropped back to the section.
void close_section(const std::uint8_t* in, std::uint8_t* out, int rows, int cols,
                   const StructuringElement& se) {
    const int r = se.radius;
    const int pcols = cols + 2 * r;
    std::vector<std::uint8_t> dil(std::size_t(rows + 2 * r) * pcols, 0);

    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            if (!in[std::size_t(i) * cols + j]) continue;
            for (auto [di, dj] : se.offsets)
                dil[std::size_t(i + r + di) * pcols + (j + r + dj)] = 1;
        }

    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            std::uint8_t keep = 1;
            for (auto [di, dj] : se.offsets) {
                if (!dil[std::size_t(i + r + di) * pcols + (j + r + dj)]) {
                    keep = 0;
                    break;
                }
            }
            out[std::size_t(i) * cols + j] = keep;
        }
}

}  // namespace

BinaryVolume morph_close(const BinaryVolume& b, const StructuringElement& se) {
    const Dims3 d = b.dims;
    BinaryVolume out(d);

#pragma omp parallel
    {
        std::vector<std::uint8_t> section(std::size_t(d.m) * d.n);
        std::vector<std::uint8_t> closed(std::size_t(d.m) * d.n);
#pragma omp for schedule(static)
        for (int k = 0; k < d.k; ++k) {
            for (int m = 0; m < d.m; ++m)
                for (int n = 0; n < d.n; ++n)
                    section[std::size_t(m) * d.n + n] = b.bits[b.index(m, n, k)];

            close_section(section.data(), closed.data(), d.m, d.n, se);

            for (int m = 0; m < d.m; ++m)
                for (int n = 0; n < d.n; ++n)
                    out.bits[out.index(m, n, k)] = closed[std::size_t(m) * d.n + n];
        }
    }
    return out;
}

BinaryVolume morph_close_ball(const BinaryVolume& b, int radius) {
    if (radius < 0) throw InputError("ball radius must be >= 0");
    const int r = radius;
    std::vector<std::array<int, 3>> ball;
    for (int di = -r; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj)
            for (int dk = -r; dk <= r; ++dk)
                if (di * di + dj * dj + dk * dk <= r * r) ball.push_back({di, dj, dk});

    const Dims3 d = b.dims;
    const int pm = d.m + 2 * r, pn = d.n + 2 * r, pk = d.k + 2 * r;
    auto pidx = [&](int m, int n, int k) {
        return (std::size_t(m) * pn + n) * pk + k;
    };

    std::vector<std::uint8_t> dil(std::size_t(pm) * pn * pk, 0);
    for (int m = 0; m < d.m; ++m)
        for (int n = 0; n < d.n; ++n)
            for (int k = 0; k < d.k; ++k) {
                if (!b.bits[b.index(m, n, k)]) continue;
                for (const auto& o : ball)
                    dil[pidx(m + r + o[0], n + r + o[1], k + r + o[2])] = 1;
            }

    BinaryVolume out(d);
#pragma omp parallel for collapse(2) schedule(static)
    for (int m = 0; m < d.m; ++m)
        for (int n = 0; n < d.n; ++n)
            for (int k = 0; k < d.k; ++k) {
                std::uint8_t keep = 1;
                for (const auto& o : ball) {
                    if (!dil[pidx(m + r + o[0], n + r + o[1], k + r + o[2])]) {
                        keep = 0;
                        break;
                    }
                }
                out.bits[out.index(m, n, k)] = keep;
            }
    return out;
}

SegmentResult segment(const SaliencyVolume& s, const PipelineConfig& cfg) {
    cfg.validate();
    auto [q, hist] = quantize(s, cfg.levels);
    const int t = otsu_threshold(hist);
    BinaryVolume raw = binarize(q, t);
    BinaryVolume closed = cfg.morphology == MorphMode::Section2D
                              ? morph_close(raw, StructuringElement::disk(cfg.se_radius))
                              : morph_close_ball(raw, cfg.se_radius);
    return {std::move(closed), t};
}

}  // namespace salsi
