#include "salsi/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace salsi {

namespace {

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

LocalFft::LocalFft(int edge) : edge_(edge) {
    if (edge < 2) throw InputError("local window edge must be >= 2");
    const std::size_t n = std::size_t(edge) * edge * edge;
    std::vector<std::complex<double>> in(n), out(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_3d(edge, edge, edge,
                             reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw Error("FFTW plan creation failed");
}

LocalFft::~LocalFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

LocalSpectrum LocalFft::transform(std::span<const double> window) const {
    const std::size_t n = std::size_t(edge_) * edge_ * edge_;
    if (window.size() != n)
        throw InputError("window has " + std::to_string(window.size()) +
                         " samples, expected " + std::to_string(n));

    std::vector<std::complex<double>> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = window[i];

    LocalSpectrum s;
    s.edge = edge_;
    s.coeff.resize(n);
    fftw_execute_dft(static_cast<fftw_plan>(plan_),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(s.coeff.data()));

    const double scale = 1.0 / double(n);  // 1/L^3 forward factor
    for (auto& c : s.coeff) c *= scale;
    return s;
}

LocalSpectrum compute_local_spectrum(std::span<const double> window, int edge) {
    return LocalFft(edge).transform(window);
}

LocalSpectrum compute_local_spectrum(std::span<const double> window, const LocalFft& fft) {
    return fft.transform(window);
}

std::pair<double, double> split_weights(int u, int v, int w, int edge, Axis temporal_axis) {
    const std::int64_t cu = centered_freq(u, edge);
    const std::int64_t cv = centered_freq(v, edge);
    const std::int64_t cw = centered_freq(w, edge);

    // (u,v,w) pair with the (m,n,k) axes; pick the "temporal" component.
    std::int64_t t2 = 0, s2 = 0;
    switch (temporal_axis) {
        case Axis::Time:      t2 = cu * cu; s2 = cv * cv + cw * cw; break;
        case Axis::Crossline: t2 = cv * cv; s2 = cu * cu + cw * cw; break;
        case Axis::Inline:    t2 = cw * cw; s2 = cu * cu + cv * cv; break;
    }
    const std::int64_t r2 = t2 + s2;
    if (r2 == 0) return {0.0, 0.0};  // DC carries no contrast
    const double r = std::sqrt(double(r2));
    return {std::sqrt(double(t2)) / r, std::sqrt(double(s2)) / r};
}

std::pair<LocalSpectrum, LocalSpectrum> decompose_spectrum(const LocalSpectrum& f,
                                                           Axis temporal_axis) {
    const int L = f.edge;
    LocalSpectrum ft, fs;
    ft.edge = fs.edge = L;
    ft.coeff.resize(f.coeff.size());
    fs.coeff.resize(f.coeff.size());

    std::size_t i = 0;
    for (int u = 0; u < L; ++u)
        for (int v = 0; v < L; ++v)
            for (int w = 0; w < L; ++w, ++i) {
                auto [wt, ws] = split_weights(u, v, w, L, temporal_axis);
                ft.coeff[i] = f.coeff[i] * wt;
                fs.coeff[i] = f.coeff[i] * ws;
            }
    return {std::move(ft), std::move(fs)};
}

double spectral_energy(const LocalSpectrum& f) {
    double e = 0.0;
    for (const auto& c : f.coeff) e += std::norm(c);
    return e;
}

CellGrid::CellGrid(Dims3 cd, int L) : cell_dims(cd), window(L) {
    values.assign(std::size_t(cd.count()), 0.0);
}

int reflect_index(int i, int extent) {
    if (extent == 1) return 0;
    const int period = 2 * (extent - 1);
    int j = i % period;
    if (j < 0) j += period;
    return j < extent ? j : period - j;
}

std::pair<CellGrid, CellGrid> build_energy_grids(const Volume3D& v, int window,
                                                 Axis temporal_axis) {
    const int L = window;
    if (L < 2) throw InputError("window size must be >= 2");
    const Dims3 d = v.dims;
    if (L > d.m && L > d.n && L > d.k)
        throw InputError("window size " + std::to_string(L) +
                         " exceeds every dimension of volume " + dims_str(d));

    const Dims3 cd{ceil_div(d.m, L), ceil_div(d.n, L), ceil_div(d.k, L)};
    CellGrid et(cd, L), es(cd, L);
    const LocalFft fft(L);

#pragma omp parallel
    {
        std::vector<double> win(std::size_t(L) * L * L);
#pragma omp for collapse(3) schedule(static)
        for (int cm = 0; cm < cd.m; ++cm)
            for (int cn = 0; cn < cd.n; ++cn)
                for (int ck = 0; ck < cd.k; ++ck) {
                    std::size_t p = 0;
                    for (int i = 0; i < L; ++i) {
                        const int mi = reflect_index(cm * L + i, d.m);
                        for (int j = 0; j < L; ++j) {
                            const int ni = reflect_index(cn * L + j, d.n);
                            for (int r = 0; r < L; ++r, ++p) {
                                const int ki = reflect_index(ck * L + r, d.k);
                                win[p] = v(mi, ni, ki);
                            }
                        }
                    }
                    const LocalSpectrum spec = fft.transform(win);
                    auto [ft, fs] = decompose_spectrum(spec, temporal_axis);
                    et(cm, cn, ck) = spectral_energy(ft);
                    es(cm, cn, ck) = spectral_energy(fs);
                }
    }
    return {std::move(et), std::move(es)};
}

CellGrid center_surround(const CellGrid& e) {
    const Dims3 cd = e.cell_dims;
    CellGrid out(cd, e.window);
    out.origin = e.origin;

#pragma omp parallel for collapse(3) schedule(static)
    for (int cm = 0; cm < cd.m; ++cm)
        for (int cn = 0; cn < cd.n; ++cn)
            for (int ck = 0; ck < cd.k; ++ck) {
                const double center = e(cm, cn, ck);
                double sum = 0.0;
                int q = 0;
                for (int di = -1; di <= 1; ++di)
                    for (int dj = -1; dj <= 1; ++dj)
                        for (int dk = -1; dk <= 1; ++dk) {
                            if (di == 0 && dj == 0 && dk == 0) continue;
                            const int i = cm + di, j = cn + dj, k = ck + dk;
                            if (i < 0 || i >= cd.m || j < 0 || j >= cd.n ||
                                k < 0 || k >= cd.k)
                                continue;
                            sum += std::fabs(center - e(i, j, k));
                            ++q;
                        }
                out(cm, cn, ck) = q > 0 ? sum / q : 0.0;
            }
    return out;
}

CellGrid fuse_cells(const CellGrid& st, const CellGrid& ss) {
    if (st.cell_dims != ss.cell_dims || st.window != ss.window)
        throw ShapeMismatchError("saliency cell grids disagree: " +
                                 dims_str(st.cell_dims) + " window " +
                                 std::to_string(st.window) + " vs " +
                                 dims_str(ss.cell_dims) + " window " +
                                 std::to_string(ss.window));
    CellGrid fused(st.cell_dims, st.window);
    fused.origin = st.origin;
    for (std::size_t i = 0; i < fused.values.size(); ++i)
        fused.values[i] = 0.5 * st.values[i] + 0.5 * ss.values[i];
    return fused;
}

SaliencyVolume fuse_and_upsample(const CellGrid& st, const CellGrid& ss,
                                 Dims3 target_dims) {
    const CellGrid fused = fuse_cells(st, ss);
    const int L = fused.window;
    const Dims3 cd = fused.cell_dims;
    const Dims3 want{ceil_div(target_dims.m, L), ceil_div(target_dims.n, L),
                     ceil_div(target_dims.k, L)};
    if (want != cd)
        throw ShapeMismatchError("cell grid " + dims_str(cd) +
                                 " cannot cover target volume " + dims_str(target_dims) +
                                 " at window " + std::to_string(L));

    Volume3D out(target_dims);
    std::vector<double> up(std::size_t(target_dims.count()));

    auto cell_of = [&](int x, int origin, int extent) {
        return std::clamp((x - origin) / L, 0, extent - 1);
    };

#pragma omp parallel for collapse(2) schedule(static)
    for (int mi = 0; mi < target_dims.m; ++mi)
        for (int ni = 0; ni < target_dims.n; ++ni) {
            const int cm = cell_of(mi, fused.origin[0], cd.m);
            const int cn = cell_of(ni, fused.origin[1], cd.n);
            for (int ki = 0; ki < target_dims.k; ++ki) {
                const int ck = cell_of(ki, fused.origin[2], cd.k);
                up[out.index(mi, ni, ki)] = fused(cm, cn, ck);
            }
        }

    double lo = up[0], hi = up[0];
    for (double x : up) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi > lo) {
        const double range = hi - lo;
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < std::int64_t(up.size()); ++i)
            out.data[std::size_t(i)] = float((up[std::size_t(i)] - lo) / range);
    }
    // hi == lo leaves the all-zero fill in place
    return out;
}

SaliencyVolume compute_saliency(const Volume3D& v, const PipelineConfig& cfg) {
    cfg.validate();

    float maxabs = 0.0f;
    for (float x : v.data) maxabs = std::max(maxabs, std::fabs(x));

    const Volume3D* src = &v;
    Volume3D canonical;
    if (maxabs > 0.0f && maxabs != 1.0f) {
        canonical = Volume3D(v.dims);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < std::int64_t(v.data.size()); ++i)
            canonical.data[std::size_t(i)] = v.data[std::size_t(i)] / maxabs;
        src = &canonical;
    }

    auto [et, es] = build_energy_grids(*src, cfg.window, cfg.temporal_axis);
    const CellGrid st = center_surround(et);
    const CellGrid ss = center_surround(es);
    return fuse_and_upsample(st, ss, v.dims);
}

}  // namespace salsi
