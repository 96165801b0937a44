#include "ghost/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ghost {

namespace {

using nlohmann::json;

OpticalLayout paper_layout() {
    OpticalLayout lay;
    lay.wavelength = 650e-9;
    lay.source = SourceSpec{2e-3, ApertureShape::Disk, 1.0, 2048, 20e-6};
    lay.source_method = PropagationMethod::SingleTransformScaled;
    lay.z = 0.2;
    lay.z1 = 0.5;
    lay.z2 = 0.5;
    lay.f = 0.25;
    lay.L = 6e-3;
    lay.L1 = 30e-3;
    lay.variant = PathVariant::Lensed;
    lay.working_window = 256;
    lay.reference_pixel_pitch = lay.object_pitch();
    return lay;
}

OpticalLayout fast_layout() {
    // quarter-scale distances on a 512^2 source grid; the object-plane pitch
    // matches the paper preset so scene definitions carry over. The source
    // shrinks with z to stay inside the scaled-method chirp radius wl*z/p.
    OpticalLayout lay = paper_layout();
    lay.source.grid_size = 512;
    lay.source.diameter = 1e-3;
    lay.z = 0.05;
    lay.z1 = 0.125;
    lay.z2 = 0.125;
    lay.f = 0.0625;
    lay.reference_pixel_pitch = lay.object_pitch();
    return lay;
}

ApertureShape parse_shape(const std::string& s, const char* key) {
    if (s == "disk") return ApertureShape::Disk;
    if (s == "square") return ApertureShape::Square;
    throw ConfigError(std::string("config key '") + key + "' must be \"disk\" or \"square\"");
}

PropagationMethod parse_method_key(const std::string& s, const char* key) {
    if (s == "scaled") return PropagationMethod::SingleTransformScaled;
    if (s == "transfer") return PropagationMethod::TransferFunction;
    throw ConfigError(std::string("config key '") + key + "' must be \"scaled\" or \"transfer\"");
}

double num(const json& v, const char* key) {
    if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
    return v.get<double>();
}

std::size_t unsigned_num(const json& v, const char* key) {
    const double d = num(v, key);
    if (d < 0 || d != std::floor(d))
        throw ConfigError(std::string("config key '") + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(d);
}

std::string str(const json& v, const char* key) {
    if (!v.is_string()) throw ConfigError(std::string("config key '") + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    cfg.preset = name;
    cfg.slit = SlitGeometry{30e-6, 60e-6, 120e-6};
    cfg.object_type = "double_slit";
    cfg.method = ReconMethod::Both;
    cfg.roi_pixels = 64;
    cfg.solver = SolverParams{};
    cfg.cs_normalize = NormalizeMode::RowMean;
    cfg.cs_realizations = 0;
    cfg.out_dir = "out";
    if (name == "paper") {
        cfg.layout = paper_layout();
        cfg.realizations = 2000;
        cfg.master_seed = 20260809ull;
    } else if (name == "fast") {
        cfg.layout = fast_layout();
        cfg.realizations = 64;
        cfg.master_seed = 1;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected \"paper\" or \"fast\")");
    }
    return cfg;
}

RunConfig parse_config(const std::string& json_text, const RunConfig& base) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig cfg = base;
    if (doc.contains("preset")) cfg = preset_config(str(doc["preset"], "preset"));

    std::optional<std::size_t> pixel_factor;
    bool pitch_given = false;

    for (const auto& [key, value] : doc.items()) {
        if (key == "preset") {
            continue;
        } else if (key == "wavelength") {
            cfg.layout.wavelength = num(value, "wavelength");
        } else if (key == "source_diameter") {
            cfg.layout.source.diameter = num(value, "source_diameter");
        } else if (key == "source_shape") {
            cfg.layout.source.shape = parse_shape(str(value, "source_shape"), "source_shape");
        } else if (key == "source_grid") {
            cfg.layout.source.grid_size = unsigned_num(value, "source_grid");
        } else if (key == "source_pitch") {
            cfg.layout.source.pitch = num(value, "source_pitch");
        } else if (key == "source_mean_intensity") {
            cfg.layout.source.mean_intensity = num(value, "source_mean_intensity");
        } else if (key == "source_method") {
            cfg.layout.source_method = parse_method_key(str(value, "source_method"), "source_method");
        } else if (key == "z") {
            cfg.layout.z = num(value, "z");
        } else if (key == "z1") {
            cfg.layout.z1 = num(value, "z1");
        } else if (key == "z2") {
            cfg.layout.z2 = num(value, "z2");
        } else if (key == "f") {
            cfg.layout.f = num(value, "f");
        } else if (key == "lens_aperture") {
            cfg.layout.L = num(value, "lens_aperture");
        } else if (key == "collection_side") {
            cfg.layout.L1 = num(value, "collection_side");
        } else if (key == "path_variant") {
            const std::string v = str(value, "path_variant");
            if (v == "lensed")
                cfg.layout.variant = PathVariant::Lensed;
            else if (v == "open")
                cfg.layout.variant = PathVariant::Open;
            else
                throw ConfigError("config key 'path_variant' must be \"lensed\" or \"open\"");
        } else if (key == "reference_pixel_pitch") {
            cfg.layout.reference_pixel_pitch = num(value, "reference_pixel_pitch");
            pitch_given = true;
        } else if (key == "reference_pixel_factor") {
            pixel_factor = unsigned_num(value, "reference_pixel_factor");
        } else if (key == "working_window") {
            cfg.layout.working_window = unsigned_num(value, "working_window");
        } else if (key == "object") {
            cfg.object_type = str(value, "object");
            if (cfg.object_type != "double_slit" && cfg.object_type != "none")
                throw ConfigError("config key 'object' must be \"double_slit\" or \"none\"");
        } else if (key == "slit_width") {
            cfg.slit.width = num(value, "slit_width");
        } else if (key == "slit_separation") {
            cfg.slit.separation = num(value, "slit_separation");
        } else if (key == "slit_height") {
            cfg.slit.height = num(value, "slit_height");
        } else if (key == "realizations") {
            cfg.realizations = unsigned_num(value, "realizations");
        } else if (key == "master_seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                throw ConfigError("config key 'master_seed' must be an integer");
            cfg.master_seed = value.get<std::uint64_t>();
        } else if (key == "threads") {
            cfg.threads = static_cast<unsigned>(unsigned_num(value, "threads"));
        } else if (key == "method") {
            const std::string v = str(value, "method");
            if (v == "gi")
                cfg.method = ReconMethod::Gi;
            else if (v == "cs")
                cfg.method = ReconMethod::Cs;
            else if (v == "both")
                cfg.method = ReconMethod::Both;
            else
                throw ConfigError("config key 'method' must be \"gi\", \"cs\" or \"both\"");
        } else if (key == "roi_pixels") {
            cfg.roi_pixels = unsigned_num(value, "roi_pixels");
        } else if (key == "cs_epsilon") {
            cfg.solver.epsilon = num(value, "cs_epsilon");
        } else if (key == "cs_epsilon_rel") {
            cfg.solver.epsilon_rel = num(value, "cs_epsilon_rel");
        } else if (key == "cs_nonneg") {
            if (!value.is_boolean()) throw ConfigError("config key 'cs_nonneg' must be a boolean");
            cfg.solver.nonneg = value.get<bool>();
        } else if (key == "cs_max_iters") {
            cfg.solver.max_iters = static_cast<int>(unsigned_num(value, "cs_max_iters"));
        } else if (key == "cs_tol") {
            cfg.solver.tol = num(value, "cs_tol");
        } else if (key == "cs_lambda_min_rel") {
            cfg.solver.lambda_min_rel = num(value, "cs_lambda_min_rel");
        } else if (key == "cs_continuation_ratio") {
            cfg.solver.continuation_ratio = num(value, "cs_continuation_ratio");
        } else if (key == "cs_normalize") {
            const std::string v = str(value, "cs_normalize");
            if (v == "none")
                cfg.cs_normalize = NormalizeMode::None;
            else if (v == "row_mean")
                cfg.cs_normalize = NormalizeMode::RowMean;
            else if (v == "column_unit")
                cfg.cs_normalize = NormalizeMode::ColumnUnit;
            else
                throw ConfigError(
                    "config key 'cs_normalize' must be \"none\", \"row_mean\" or \"column_unit\"");
        } else if (key == "cs_realizations") {
            cfg.cs_realizations = unsigned_num(value, "cs_realizations");
        } else if (key == "out_dir") {
            cfg.out_dir = str(value, "out_dir");
        } else if (key == "input_dir") {
            cfg.input_dir = str(value, "input_dir");
        } else if (key == "sweep_parameter") {
            cfg.sweep_parameter = str(value, "sweep_parameter");
        } else if (key == "sweep_values") {
            if (!value.is_array()) throw ConfigError("config key 'sweep_values' must be an array");
            cfg.sweep_values.clear();
            for (const auto& v : value) cfg.sweep_values.push_back(num(v, "sweep_values"));
        } else if (key == "estimate_path") {
            cfg.estimate_path = str(value, "estimate_path");
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (pixel_factor) {
        if (pitch_given)
            throw ConfigError(
                "config keys 'reference_pixel_pitch' and 'reference_pixel_factor' are exclusive");
        if (*pixel_factor == 0)
            throw ConfigError("config key 'reference_pixel_factor' must be >= 1");
        cfg.layout.reference_pixel_pitch =
            cfg.layout.object_pitch() * static_cast<double>(*pixel_factor);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), base);
}

void RunConfig::validate() const {
    layout.validate();
    if (realizations < 1) throw ConfigError("config: realizations must be >= 1");
    if (roi_pixels == 0) throw ConfigError("config: roi_pixels must be >= 1");
    const std::size_t frame_dim = layout.frame_window() / layout.reference_pixel_factor();
    if (roi_pixels > frame_dim)
        throw ConfigError("config: roi_pixels exceeds the reference frame (" +
                          std::to_string(frame_dim) + " pixels)");
    if (object_type == "double_slit") {
        const double extent = static_cast<double>(layout.frame_window()) * layout.object_pitch();
        if (!(slit.width > 0.0) || !(slit.separation > slit.width) || !(slit.height > 0.0))
            throw ConfigError("config: double slit requires 0 < slit_width < slit_separation and slit_height > 0");
        if (slit.separation + slit.width > extent || slit.height > extent)
            throw ConfigError("config: double slit does not fit in the working window");
    }
    solver.validate();
}

TransmissionMask RunConfig::build_object(double pitch, std::size_t dims) const {
    if (object_type == "none")
        return TransmissionMask(RealGrid(dims, dims, pitch, 1.0));
    return make_double_slit(slit, pitch, dims);
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["preset"] = cfg.preset;
    j["wavelength"] = cfg.layout.wavelength;
    j["source_diameter"] = cfg.layout.source.diameter;
    j["source_shape"] = cfg.layout.source.shape == ApertureShape::Disk ? "disk" : "square";
    j["source_grid"] = cfg.layout.source.grid_size;
    j["source_pitch"] = cfg.layout.source.pitch;
    j["source_mean_intensity"] = cfg.layout.source.mean_intensity;
    j["source_method"] =
        cfg.layout.source_method == PropagationMethod::SingleTransformScaled ? "scaled" : "transfer";
    j["z"] = cfg.layout.z;
    j["z1"] = cfg.layout.z1;
    j["z2"] = cfg.layout.z2;
    j["f"] = cfg.layout.f;
    j["lens_aperture"] = cfg.layout.L;
    j["collection_side"] = cfg.layout.L1;
    j["path_variant"] = cfg.layout.variant == PathVariant::Lensed ? "lensed" : "open";
    j["reference_pixel_pitch"] = cfg.layout.reference_pixel_pitch;
    j["working_window"] = cfg.layout.working_window;
    j["object"] = cfg.object_type;
    j["slit_width"] = cfg.slit.width;
    j["slit_separation"] = cfg.slit.separation;
    j["slit_height"] = cfg.slit.height;
    j["realizations"] = cfg.realizations;
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["method"] = cfg.method == ReconMethod::Gi ? "gi" : cfg.method == ReconMethod::Cs ? "cs" : "both";
    j["roi_pixels"] = cfg.roi_pixels;
    j["cs_epsilon"] = cfg.solver.epsilon;
    j["cs_epsilon_rel"] = cfg.solver.epsilon_rel;
    j["cs_nonneg"] = cfg.solver.nonneg;
    j["cs_max_iters"] = cfg.solver.max_iters;
    j["cs_tol"] = cfg.solver.tol;
    j["cs_lambda_min_rel"] = cfg.solver.lambda_min_rel;
    j["cs_continuation_ratio"] = cfg.solver.continuation_ratio;
    j["cs_normalize"] = cfg.cs_normalize == NormalizeMode::None        ? "none"
                        : cfg.cs_normalize == NormalizeMode::RowMean   ? "row_mean"
                                                                       : "column_unit";
    j["cs_realizations"] = cfg.cs_realizations;
    j["out_dir"] = cfg.out_dir;
    j["input_dir"] = cfg.input_dir;
    j["sweep_parameter"] = cfg.sweep_parameter;
    j["sweep_values"] = cfg.sweep_values;
    j["estimate_path"] = cfg.estimate_path;
    return j.dump(2);
}

}  // namespace ghost
