// salsi: batch CLI for saliency-based salt-dome detection on seismic volumes.
//
// Subcommands: compute, threshold, evaluate, synth, export-slice.
// Exit codes: 0 success, 2 input error, 3 degenerate data, 4 shape mismatch,
// 1 anything else.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "salsi/evaluation.hpp"
#include "salsi/saliency.hpp"
#include "salsi/segmentation.hpp"
#include "salsi/synth.hpp"
#include "salsi/volume.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace salsi;

struct ConfigFlags {
    std::string config_file;
    std::optional<int> window, levels, se_radius, n_thresholds, threads;
    std::optional<std::string> temporal_axis, morphology;
};

void add_config_options(CLI::App& cmd, ConfigFlags& f) {
    cmd.add_option("--config", f.config_file, "JSON config file; explicit flags win");
    cmd.add_option("--window-size", f.window, "local FFT cube edge L (default 8)");
    cmd.add_option("--temporal-axis", f.temporal_axis,
                   "axis weighted as temporal: time|crossline|inline (default inline)");
    cmd.add_option("--levels", f.levels, "quantized gray levels H (default 256)");
    cmd.add_option("--se-radius", f.se_radius, "closing disk radius (default 10)");
    cmd.add_option("--n-thresholds", f.n_thresholds, "ROC sweep size (default 100)");
    cmd.add_option("--morphology", f.morphology,
                   "closing mode: per-section-2d|ball-3d (default per-section-2d)");
    cmd.add_option("--threads", f.threads, "worker thread cap (default: all cores)");
}

PipelineConfig resolve_config(const ConfigFlags& f) {
    PipelineConfig cfg;

    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw InputError("cannot open config " + f.config_file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InputError("malformed config " + f.config_file + ": " + e.what());
        }
        if (j.contains("window_size")) cfg.window = j["window_size"].get<int>();
        if (j.contains("temporal_axis"))
            cfg.temporal_axis = parse_axis(j["temporal_axis"].get<std::string>());
        if (j.contains("levels")) cfg.levels = j["levels"].get<int>();
        if (j.contains("se_radius")) cfg.se_radius = j["se_radius"].get<int>();
        if (j.contains("n_thresholds")) cfg.n_thresholds = j["n_thresholds"].get<int>();
        if (j.contains("morphology_mode"))
            cfg.morphology = parse_morph_mode(j["morphology_mode"].get<std::string>());
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    }

    if (f.window) cfg.window = *f.window;
    if (f.temporal_axis) cfg.temporal_axis = parse_axis(*f.temporal_axis);
    if (f.levels) cfg.levels = *f.levels;
    if (f.se_radius) cfg.se_radius = *f.se_radius;
    if (f.n_thresholds) cfg.n_thresholds = *f.n_thresholds;
    if (f.morphology) cfg.morphology = parse_morph_mode(*f.morphology);
    if (f.threads) cfg.threads = *f.threads;

    cfg.validate();
    return cfg;
}

void echo_config(const PipelineConfig& cfg) {
    std::cout << "window_size=" << cfg.window << "\n"
              << "temporal_axis=" << axis_name(cfg.temporal_axis) << "\n"
              << "levels=" << cfg.levels << "\n"
              << "se_radius=" << cfg.se_radius << "\n"
              << "n_thresholds=" << cfg.n_thresholds << "\n"
              << "morphology=" << morph_mode_name(cfg.morphology) << "\n"
              << "threads=" << cfg.threads << "\n";
}

Volume3D load_by_header(const std::string& header, const std::string& payload) {
    const fs::path hp = header;
    const fs::path pp = payload.empty() ? payload_path_for(hp) : fs::path(payload);
    return load_volume(hp, pp);
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int run_cli(int argc, char** argv) {
    CLI::App app{"saliency-based salt-dome detection for seismic volumes"};
    app.require_subcommand(1);

    // ---- compute ----
    auto* compute = app.add_subcommand("compute", "compute the saliency volume");
    struct {
        std::string input, payload, output;
        ConfigFlags flags;
    } c;
    compute->add_option("--input", c.input, "input volume header (.json)")->required();
    compute->add_option("--payload", c.payload, "input payload (.raw); default: header stem");
    compute->add_option("--output", c.output, "output saliency header (.json)")->required();
    add_config_options(*compute, c.flags);
    compute->callback([&] {
        const PipelineConfig cfg = resolve_config(c.flags);
        set_worker_threads(cfg.threads);
        const auto t0 = Clock::now();
        const Volume3D v = load_by_header(c.input, c.payload);
        const SaliencyVolume s = compute_saliency(v, cfg);
        std::ostringstream prov;
        prov << "salsi compute window=" << cfg.window
             << " temporal_axis=" << axis_name(cfg.temporal_axis);
        save_volume(s, c.output, payload_path_for(c.output), prov.str());
        std::cout << "input=" << c.input << "\n"
                  << "dims=" << dims_str(v.dims) << "\n";
        echo_config(cfg);
        std::cout << "elapsed_ms=" << ms_since(t0) << "\n"
                  << "output=" << c.output << "\n";
    });

    // ---- threshold ----
    auto* threshold = app.add_subcommand("threshold",
                                         "Otsu-binarize and close a saliency volume");
    struct {
        std::string input, payload, output;
        ConfigFlags flags;
    } t;
    threshold->add_option("--input", t.input, "saliency header (.json)")->required();
    threshold->add_option("--payload", t.payload, "saliency payload (.raw)");
    threshold->add_option("--output", t.output, "output mask header (.json)")->required();
    add_config_options(*threshold, t.flags);
    threshold->callback([&] {
        const PipelineConfig cfg = resolve_config(t.flags);
        set_worker_threads(cfg.threads);
        const auto t0 = Clock::now();
        const Volume3D s = load_by_header(t.input, t.payload);
        const SegmentResult res = segment(s, cfg);
        std::ostringstream prov;
        prov << "salsi threshold T=" << res.threshold
             << " se_radius=" << cfg.se_radius
             << " morphology=" << morph_mode_name(cfg.morphology);
        save_volume(from_binary(res.mask), t.output, payload_path_for(t.output),
                    prov.str());
        std::cout << "input=" << t.input << "\n"
                  << "threshold=" << res.threshold << "\n"
                  << "mask_voxels=" << res.mask.count_true() << "\n"
                  << "elapsed_ms=" << ms_since(t0) << "\n"
                  << "output=" << t.output << "\n";
    });

    // ---- evaluate ----
    auto* evaluate = app.add_subcommand("evaluate",
                                        "ROC/AUC of a saliency volume vs. ground truth");
    struct {
        std::string saliency, saliency_payload, gt, gt_payload, out_dir;
        ConfigFlags flags;
    } e;
    evaluate->add_option("--saliency", e.saliency, "saliency header (.json)")->required();
    evaluate->add_option("--saliency-payload", e.saliency_payload, "saliency payload");
    evaluate->add_option("--ground-truth", e.gt, "ground-truth mask header (.json)")
        ->required();
    evaluate->add_option("--ground-truth-payload", e.gt_payload, "mask payload");
    evaluate->add_option("--out-dir", e.out_dir, "output directory for roc.csv/summary.json")
        ->required();
    add_config_options(*evaluate, e.flags);
    evaluate->callback([&] {
        const PipelineConfig cfg = resolve_config(e.flags);
        set_worker_threads(cfg.threads);
        const auto t0 = Clock::now();
        const Volume3D s = load_by_header(e.saliency, e.saliency_payload);
        const BinaryVolume gt = to_binary(load_by_header(e.gt, e.gt_payload));
        const EvalReport rep = evaluate_report(s, gt, cfg, e.out_dir);
        std::cout << "saliency=" << e.saliency << "\n"
                  << "ground_truth=" << e.gt << "\n"
                  << "points=" << rep.curve.points.size() << "\n"
                  << "auc=" << rep.curve.auc << "\n"
                  << "optimal_threshold=" << rep.optimal_threshold << "\n"
                  << "tpr_at_opt=" << rep.tpr_at_opt << "\n"
                  << "fpr_at_opt=" << rep.fpr_at_opt << "\n"
                  << "elapsed_ms=" << ms_since(t0) << "\n"
                  << "out_dir=" << e.out_dir << "\n";
    });

    // ---- synth ----
    auto* synth = app.add_subcommand("synth",
                                     "generate a synthetic dome volume + ground truth");
    struct {
        std::string spec_file, out_prefix;
    } sy;
    synth->add_option("--spec", sy.spec_file, "dome spec JSON; defaults when omitted");
    synth->add_option("--out-prefix", sy.out_prefix, "writes <prefix>.{json,raw} and <prefix>_gt.{json,raw}")
        ->required();
    synth->callback([&] {
        DomeSpec spec;
        if (!sy.spec_file.empty()) {
            std::ifstream in(sy.spec_file);
            if (!in) throw InputError("cannot open spec " + sy.spec_file);
            json j;
            try {
                in >> j;
            } catch (const json::exception& ex) {
                throw InputError("malformed spec " + sy.spec_file + ": " + ex.what());
            }
            if (j.contains("dims")) {
                auto a = j["dims"];
                spec.dims = {a.at(0).get<int>(), a.at(1).get<int>(), a.at(2).get<int>()};
            }
            if (j.contains("center")) {
                auto a = j["center"];
                spec.center = {a.at(0).get<double>(), a.at(1).get<double>(),
                               a.at(2).get<double>()};
            }
            if (j.contains("radii")) {
                auto a = j["radii"];
                spec.radii = {a.at(0).get<double>(), a.at(1).get<double>(),
                              a.at(2).get<double>()};
            }
            if (j.contains("band_halfwidth"))
                spec.band_halfwidth = j["band_halfwidth"].get<double>();
            if (j.contains("reflector_amplitude"))
                spec.reflector_amplitude = j["reflector_amplitude"].get<double>();
            if (j.contains("reflector_period"))
                spec.reflector_period = j["reflector_period"].get<double>();
            if (j.contains("interior_amplitude"))
                spec.interior_amplitude = j["interior_amplitude"].get<double>();
            if (j.contains("noise_sigma")) spec.noise_sigma = j["noise_sigma"].get<double>();
            if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
        }
        const auto t0 = Clock::now();
        const SynthCase cs = generate(spec);
        std::ostringstream prov;
        prov << "salsi synth seed=" << spec.seed;
        save_volume(cs.volume, sy.out_prefix + ".json", sy.out_prefix + ".raw", prov.str());
        save_volume(from_binary(cs.gt_boundary), sy.out_prefix + "_gt.json",
                    sy.out_prefix + "_gt.raw", prov.str() + " boundary band");
        std::cout << "dims=" << dims_str(spec.dims) << "\n"
                  << "seed=" << spec.seed << "\n"
                  << "boundary_voxels=" << cs.gt_boundary.count_true() << "\n"
                  << "interior_voxels=" << cs.gt_interior.count_true() << "\n"
                  << "elapsed_ms=" << ms_since(t0) << "\n"
                  << "output_prefix=" << sy.out_prefix << "\n";
    });

    // ---- export-slice ----
    auto* slice = app.add_subcommand("export-slice", "export one section as PGM");
    struct {
        std::string input, payload, axis = "inline", out;
        int index = 0;
    } x;
    slice->add_option("--input", x.input, "volume header (.json)")->required();
    slice->add_option("--payload", x.payload, "volume payload (.raw)");
    slice->add_option("--axis", x.axis, "time|crossline|inline (default inline)");
    slice->add_option("--index", x.index, "slice index on the chosen axis")->required();
    slice->add_option("--out", x.out, "output PGM path")->required();
    slice->callback([&] {
        const Volume3D v = load_by_header(x.input, x.payload);
        export_slice(v, parse_axis(x.axis), x.index, x.out);
        std::cout << "output=" << x.out << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "salsi: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateDataError& e) {
        std::cerr << "salsi: " << e.what() << "\n";
        return 3;
    } catch (const ShapeMismatchError& e) {
        std::cerr << "salsi: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "salsi: " << e.what() << "\n";
        return 1;
    }
}
