#include "ghost/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ghost/analysis.hpp"
#include "ghost/io.hpp"

namespace ghost {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_manifest(const fs::path& dir, const char* command, const RunConfig& cfg) {
    json j;
    j["command"] = command;
    j["config"] = json::parse(config_to_json(cfg));
    j["master_seed"] = cfg.master_seed;
    j["format_versions"] = {{"gig", 1}, {"gic", 1}, {"manifest", 1}};
    j["toolkit_version"] = kToolkitVersion;
    std::ofstream os(dir / "manifest.json");
    if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
    os << j.dump(2) << "\n";
}

RunConfig config_from_manifest(const fs::path& dir) {
    std::ifstream is(dir / "manifest.json");
    if (!is) throw std::runtime_error("no manifest.json in " + dir.string());
    json j;
    is >> j;
    if (!j.contains("config")) throw std::runtime_error("manifest without config echo");
    return parse_config(j["config"].dump(), preset_config("paper"));
}

std::string frame_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06zu.gig", index);
    return buf;
}

struct LoadedSet {
    RunConfig cfg;            // as recorded when the set was simulated
    MeasurementSet set;
};

LoadedSet load_measurement_set(const fs::path& dir) {
    LoadedSet out{config_from_manifest(dir), {}};
    out.set.layout = out.cfg.layout;

    std::ifstream bt(dir / "buckets.csv");
    if (!bt) throw std::runtime_error("no buckets.csv in " + dir.string());
    std::string line;
    std::getline(bt, line);  // header
    while (std::getline(bt, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string idx, seed, bucket;
        std::getline(ss, idx, ',');
        std::getline(ss, seed, ',');
        std::getline(ss, bucket, ',');
        RealizationRecord rec;
        rec.seed = std::stoull(seed);
        rec.bucket = std::stod(bucket);
        rec.reference_frame = io::read_real_grid(dir / "frames" / frame_name(out.set.records.size()));
        out.set.records.push_back(std::move(rec));
    }
    if (out.set.records.empty()) throw std::runtime_error("empty measurement set in " + dir.string());

    if (fs::exists(dir / "truth.gig"))
        out.set.object_truth = TransmissionMask(io::read_real_grid(dir / "truth.gig"));
    return out;
}

RealGrid clamp_nonneg(const RealGrid& g) {
    RealGrid out = g;
    for (auto& v : out.values()) v = std::max(0.0, v);
    return out;
}

// truth |t|^2 resampled onto the geometry of `target` (centered crop +
// block mean; binary masks have t^2 = t)
TransmissionMask truth_on(const RealGrid& target, const TransmissionMask& truth) {
    const double ratio = target.pitch() / truth.pitch();
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded)
        throw std::runtime_error("estimate pitch is not a multiple of the truth pitch");
    const auto k = static_cast<std::size_t>(rounded);
    RealGrid squared = truth.grid;
    for (auto& v : squared.values()) v *= v;
    RealGrid native = squared.crop_center(target.rows() * k, target.cols() * k);
    return TransmissionMask(block_mean(native, k));
}

json metrics_json(const analysis::ProfileMetrics& pm, const analysis::ImageErrorRecord& err,
                  SolverStatus status) {
    json j;
    j["peak_positions"] = pm.peak_positions;
    j["peak_values"] = pm.peak_values;
    j["midpoint_ratio"] = pm.midpoint_ratio;
    j["fwhm"] = pm.fwhm;
    j["resolved"] = pm.resolved;
    j["mse"] = err.mse;
    j["normalized_mse"] = err.normalized_mse;
    j["peak_snr"] = err.peak_snr;
    j["snr_bg"] = err.snr_bg;
    j["solver_status"] = to_string(status);
    return j;
}

void write_estimate_outputs(const fs::path& dir, const std::string& tag, const RealGrid& raw,
                            const RunConfig& set_cfg) {
    RealGrid exported = clamp_nonneg(raw);
    const double mx = grid_max(exported);
    if (mx > 0.0)
        for (auto& v : exported.values()) v = std::min(v / mx, 1.0);
    io::write_real_grid(dir / ("estimate_" + tag + ".gig"), exported);
    io::write_pgm16(dir / ("estimate_" + tag + ".pgm"), exported);

    std::vector<double> prof = analysis::band_profile(exported, set_cfg.slit.height);
    std::vector<double> xs(prof.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = exported.x(i);
    io::write_profile_csv(dir / ("profile_" + tag + ".csv"), xs, prof);
}

struct ReconOutcome {
    double gi_ratio = 1.0;
    double cs_mse = 0.0;
};

// Shared by cmd_reconstruct and cmd_sweep. Buckets may override the record
// buckets (sweep evaluates several collection sizes against shared frames).
ReconOutcome reconstruct_into(const fs::path& dir, const RunConfig& run_cfg,
                              const RunConfig& set_cfg, const MeasurementSet& set,
                              ReconMethod method, bool write_files) {
    ReconOutcome outcome;
    if (!set.object_truth) throw std::runtime_error("measurement set carries no object truth");

    if (method == ReconMethod::Gi || method == ReconMethod::Both) {
        ReconResult gi = gi_reconstruct(set);
        if (gi.status == SolverStatus::Degenerate)
            std::cerr << "warning: degenerate GI input (constant buckets)\n";
        RealGrid clamped = clamp_nonneg(gi.estimate);
        analysis::ProfileMetrics pm = analysis::double_slit_metrics(clamped, set_cfg.slit);
        outcome.gi_ratio = pm.midpoint_ratio;

        const std::size_t roi_side = std::min<std::size_t>(run_cfg.roi_pixels, clamped.rows());
        RealGrid roi_est = clamped.crop_center(roi_side, roi_side);
        analysis::ImageErrorRecord err =
            analysis::image_error(roi_est, truth_on(roi_est, *set.object_truth));
        if (write_files) {
            write_estimate_outputs(dir, "gi", gi.estimate, set_cfg);
            std::ofstream os(dir / "metrics_gi.json");
            os << metrics_json(pm, err, gi.status).dump(2) << "\n";
        }
    }

    if (method == ReconMethod::Cs || method == ReconMethod::Both) {
        MeasurementSet subset;
        subset.layout = set.layout;
        subset.object_truth = set.object_truth;
        const std::size_t use = run_cfg.cs_realizations == 0
                                    ? set.records.size()
                                    : std::min(run_cfg.cs_realizations, set.records.size());
        subset.records.assign(set.records.begin(),
                              set.records.begin() + static_cast<std::ptrdiff_t>(use));

        const auto& frame0 = subset.records.front().reference_frame;
        RoiSpec roi = centered_roi(frame0.rows(), frame0.cols(),
                                   std::min<std::size_t>(run_cfg.roi_pixels, frame0.rows()));
        SensingSystem sys = assemble_sensing_system(subset, roi);
        sys = normalize_system(sys, run_cfg.cs_normalize);
        ReconResult cs = cs_reconstruct(sys, run_cfg.solver);

        analysis::ImageErrorRecord err =
            analysis::image_error(cs.estimate, truth_on(cs.estimate, *set.object_truth));
        outcome.cs_mse = err.mse;
        analysis::ProfileMetrics pm = analysis::double_slit_metrics(clamp_nonneg(cs.estimate),
                                                                     set_cfg.slit);
        if (write_files) {
            write_estimate_outputs(dir, "cs", cs.estimate, set_cfg);
            std::ofstream os(dir / "metrics_cs.json");
            os << metrics_json(pm, err, cs.status).dump(2) << "\n";
        }
    }
    return outcome;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg) {
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const fs::path dir = cfg.out_dir;
        fs::create_directories(dir / "frames");

        TransmissionMask object =
            cfg.build_object(cfg.layout.object_pitch(), cfg.layout.frame_window());
        MeasurementSet set =
            run_campaign(cfg.layout, object, cfg.realizations, cfg.master_seed, cfg.threads);

        write_manifest(dir, "simulate", cfg);
        std::vector<std::uint64_t> seeds;
        std::vector<double> buckets;
        for (std::size_t r = 0; r < set.records.size(); ++r) {
            io::write_real_grid(dir / "frames" / frame_name(r), set.records[r].reference_frame);
            seeds.push_back(set.records[r].seed);
            buckets.push_back(set.records[r].bucket);
        }
        io::write_bucket_table(dir / "buckets.csv", seeds, buckets);
        io::write_real_grid(dir / "truth.gig", object.grid);
        std::cout << "simulate: wrote " << set.records.size() << " frames to " << dir.string()
                  << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "simulate failed: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_reconstruct(const RunConfig& cfg) {
    LoadedSet loaded;
    try {
        if (cfg.input_dir.empty()) throw ConfigError("reconstruct: input_dir (or --in) is required");
        loaded = load_measurement_set(cfg.input_dir);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const fs::path dir = cfg.out_dir;
        fs::create_directories(dir);
        write_manifest(dir, "reconstruct", cfg);
        reconstruct_into(dir, cfg, loaded.cfg, loaded.set, cfg.method, true);
        std::cout << "reconstruct: outputs in " << dir.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "reconstruct failed (stage: reconstruction): " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_sweep(const RunConfig& cfg) {
    const std::string& param = cfg.sweep_parameter;
    try {
        cfg.validate();
        if (param != "L1" && param != "reference_pixel_pitch" && param != "m")
            throw ConfigError("sweep: parameter must be L1, reference_pixel_pitch or m");
        if (cfg.sweep_values.empty()) throw ConfigError("sweep: sweep_values is empty");
        if (param == "L1" && cfg.layout.variant != PathVariant::Open)
            throw ConfigError("sweep: L1 applies to the open path variant only");
        if (param == "reference_pixel_pitch" && cfg.layout.reference_pixel_factor() != 1)
            throw ConfigError("sweep: reference_pixel_pitch sweep requires a native-pitch layout");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const fs::path dir = cfg.out_dir;
        fs::create_directories(dir);
        write_manifest(dir, "sweep", cfg);

        TransmissionMask object =
            cfg.build_object(cfg.layout.object_pitch(), cfg.layout.frame_window());

        std::ofstream table(dir / "sweep.csv");
        table << "parameter,value,gi_midpoint_ratio,cs_mse,wall_seconds\n";

        auto emit = [&](double value, const ReconOutcome& oc, double secs) {
            table << param << "," << io::format_double(value) << ","
                  << io::format_double(oc.gi_ratio) << "," << io::format_double(oc.cs_mse) << ","
                  << io::format_double(secs) << "\n";
        };

        if (param == "L1") {
            CampaignSweep sweep = run_campaign_multi(cfg.layout, object, cfg.realizations,
                                                     cfg.master_seed, cfg.sweep_values, cfg.threads);
            for (std::size_t a = 0; a < cfg.sweep_values.size(); ++a) {
                const auto t0 = std::chrono::steady_clock::now();
                MeasurementSet set;
                set.layout = cfg.layout;
                set.layout.L1 = cfg.sweep_values[a];
                set.object_truth = object;
                set.records.resize(sweep.frames.size());
                for (std::size_t r = 0; r < sweep.frames.size(); ++r)
                    set.records[r] = RealizationRecord{sweep.frames[r], sweep.buckets[a][r],
                                                       sweep.seeds[r]};
                ReconOutcome oc = reconstruct_into(dir, cfg, cfg, set, cfg.method, false);
                const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
                emit(cfg.sweep_values[a], oc, dt.count());
            }
        } else if (param == "m") {
            std::size_t m_max = 0;
            for (double v : cfg.sweep_values) m_max = std::max(m_max, static_cast<std::size_t>(v));
            MeasurementSet full = run_campaign(cfg.layout, object, m_max, cfg.master_seed, cfg.threads);
            for (double v : cfg.sweep_values) {
                const auto t0 = std::chrono::steady_clock::now();
                const auto m = static_cast<std::size_t>(v);
                if (m < 1 || m > full.records.size()) throw std::runtime_error("sweep: bad m value");
                MeasurementSet set;
                set.layout = full.layout;
                set.object_truth = full.object_truth;
                set.records.assign(full.records.begin(),
                                   full.records.begin() + static_cast<std::ptrdiff_t>(m));
                RunConfig sub = cfg;
                sub.cs_realizations = m;
                ReconOutcome oc = reconstruct_into(dir, sub, cfg, set, cfg.method, false);
                const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
                emit(v, oc, dt.count());
            }
        } else {  // reference_pixel_pitch
            MeasurementSet native =
                run_campaign(cfg.layout, object, cfg.realizations, cfg.master_seed, cfg.threads);
            const double native_pitch = cfg.layout.object_pitch();
            for (double pitch : cfg.sweep_values) {
                const auto t0 = std::chrono::steady_clock::now();
                const double ratio = pitch / native_pitch;
                const auto k = static_cast<std::size_t>(std::round(ratio));
                if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-6 * ratio)
                    throw std::runtime_error("sweep: pitch is not a multiple of the native pitch");

                MeasurementSet set;
                set.layout = cfg.layout;
                set.layout.reference_pixel_pitch = native_pitch * static_cast<double>(k);
                set.object_truth = native.object_truth;
                const std::size_t w = native.records.front().reference_frame.rows();
                const std::size_t wk = (w / k) * k;
                for (const auto& rec : native.records) {
                    RealizationRecord r2;
                    r2.seed = rec.seed;
                    r2.bucket = rec.bucket;
                    r2.reference_frame =
                        pixelate(rec.reference_frame.crop_center(wk, wk), set.layout.reference_pixel_pitch);
                    set.records.push_back(std::move(r2));
                }
                RunConfig sub = cfg;
                // keep the ROI window size fixed in meters as the pixels coarsen
                std::size_t roi = (cfg.roi_pixels + k - 1) / k;
                const std::size_t frame_dim = wk / k;
                if (roi % 2 != frame_dim % 2) ++roi;  // symmetric centering
                sub.roi_pixels = std::min(roi, frame_dim);
                ReconOutcome oc = reconstruct_into(dir, sub, cfg, set, cfg.method, false);
                const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
                emit(pitch, oc, dt.count());
            }
        }
        std::cout << "sweep: table in " << (dir / "sweep.csv").string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "sweep failed (stage: " << param << " sweep): " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_metrics(const RunConfig& cfg) {
    LoadedSet loaded;
    RealGrid estimate;
    try {
        if (cfg.input_dir.empty() || cfg.estimate_path.empty())
            throw ConfigError("metrics: input_dir and estimate_path are required");
        loaded.cfg = config_from_manifest(cfg.input_dir);
        estimate = io::read_real_grid(cfg.estimate_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const fs::path truth_path = fs::path(cfg.input_dir) / "truth.gig";
        TransmissionMask truth(io::read_real_grid(truth_path));
        RealGrid clamped = clamp_nonneg(estimate);
        analysis::ProfileMetrics pm = analysis::double_slit_metrics(clamped, loaded.cfg.slit);
        analysis::ImageErrorRecord err = analysis::image_error(clamped, truth_on(clamped, truth));

        const fs::path dir = cfg.out_dir;
        fs::create_directories(dir);
        write_manifest(dir, "metrics", cfg);
        std::ofstream os(dir / "metrics.json");
        os << metrics_json(pm, err, SolverStatus::Converged).dump(2) << "\n";
        std::cout << "metrics: midpoint_ratio=" << pm.midpoint_ratio << " mse=" << err.mse << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "metrics failed (stage: metrics): " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace ghost
