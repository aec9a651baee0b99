#pragma once

// Command-line front end. Subcommands:
//
//   despeckle  guided nonlocal filter
//   gbf        pixel-wise generalized bilateral baseline
//   simulate   synthetic clean / speckled / guide rasters
//   stats      distance statistics and thresholds (JSON on stdout)
//   metrics    ENL and RIS (JSON on stdout)
//   sweep      threshold or S0 grid, CSV of ENL / RIS / runtime
//   replay     re-run a manifest and verify its outputs
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gnlm/gnlm.hpp"
#include "gnlm/scene_json.hpp"

namespace gnlm::cli {

using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
inline std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot hash '" + path.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline json digests(const std::vector<fs::path>& paths) {
    json j = json::object();
    for (const auto& p : paths)
        if (fs::exists(p))
            j[p.string()] = file_digest(p);
    return j;
}

/// Files written for a raster: payload plus sidecar.
inline std::vector<fs::path> raster_files(const fs::path& p) { return {p, sidecar_path(p)}; }

inline double parse_threshold(const std::string& s) {
    if (s == "inf" || s == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw UsageError("");
        return v;
    } catch (const std::exception&) {
        throw UsageError("threshold must be a number or 'inf', got '" + s + "'");
    }
}

inline std::optional<std::size_t> parse_s0(const std::string& s) {
    if (s == "unlimited" || s == "S")
        return std::nullopt;
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size() || v <= 0)
            throw UsageError("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw UsageError("--s0 must be a positive integer or 'unlimited', got '" + s + "'");
    }
}

inline RegionRect parse_region(const std::string& s) {
    RegionRect r;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream is(s);
    if (!(is >> r.x >> c1 >> r.y >> c2 >> r.width >> c3 >> r.height) || c1 != ',' || c2 != ',' || c3 != ',')
        throw UsageError("region must be x,y,width,height, got '" + s + "'");
    return r;
}

inline json threshold_json(double t) {
    return std::isinf(t) ? json("inf") : json(t);
}

inline json config_json(const FilterConfig& c, double resolved_threshold) {
    json j;
    j["patch_side"] = c.patch_side;
    j["search_side"] = c.search_side;
    j["lambda"] = c.lambda;
    j["gamma"] = c.gamma;
    j["threshold"] = c.threshold.is_k_sigma()
                         ? json{{"k_sigma", std::isinf(c.threshold.value()) ? json("inf") : json(c.threshold.value())}}
                         : json{{"absolute", threshold_json(c.threshold.value())}};
    j["resolved_threshold"] = threshold_json(resolved_threshold);
    j["s0"] = c.s0 ? json(*c.s0) : json("unlimited");
    j["anchor_step"] = c.anchor_step;
    j["intensity_floor"] = c.intensity_floor ? json(*c.intensity_floor) : json("auto");
    return j;
}

struct Manifest {
    json body = json::object();

    Manifest(std::string subcommand, const std::vector<std::string>& argv) {
        body["tool"] = "gnlm";
        body["version"] = kVersion;
        body["subcommand"] = std::move(subcommand);
        body["argv"] = argv;
        body["seeds"] = json::array();
    }

    void write(const fs::path& path, double seconds) {
        body["wall_clock_s"] = seconds;
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw DataError("cannot write manifest '" + path.string() + "'");
        out << body.dump(2) << "\n";
    }
};

inline fs::path with_suffix(const fs::path& p, const std::string& suffix) { return fs::path(p.string() + suffix); }

class Timer {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

//---------------------------------------------------------------------------//
// Filter options shared by despeckle and sweep
//---------------------------------------------------------------------------//

struct FilterOptions {
    std::string preset = "sharp";
    std::optional<double> lambda;
    double lambda_scale = 1.0;
    std::optional<double> gamma;
    std::optional<double> k_sigma;
    std::optional<std::string> threshold;
    std::optional<std::string> s0;
    std::optional<std::size_t> patch, search, step;
    std::optional<double> floor;
    unsigned threads = 0;

    void add_to(CLI::App& app) {
        app.add_option("--preset", preset, "sharp or smooth")->check(CLI::IsMember({"sharp", "smooth"}));
        app.add_option("--lambda", lambda, "weight decay lambda");
        app.add_option("--lambda-scale", lambda_scale, "multiplier applied to lambda (dataset dynamics)");
        app.add_option("--gamma", gamma, "SAR/optical balance in [0,1]");
        auto* k = app.add_option("--k-sigma", k_sigma, "threshold T = 1 + k sigma_P");
        auto* t = app.add_option("--threshold", threshold, "absolute threshold T, or 'inf'");
        k->excludes(t);
        app.add_option("--s0", s0, "maximum predictors, or 'unlimited'");
        app.add_option("--patch", patch, "patch side");
        app.add_option("--search", search, "search window side (odd)");
        app.add_option("--step", step, "anchor step");
        app.add_option("--floor", floor, "intensity floor (default 1e-8 x mean)");
        app.add_option("--threads", threads, "worker threads (0 = all cores)");
    }

    FilterConfig resolve() const {
        FilterConfig c = preset == "smooth" ? FilterConfig::smooth() : FilterConfig::sharp();
        if (lambda)
            c.lambda = *lambda;
        c.lambda *= lambda_scale;
        if (gamma)
            c.gamma = *gamma;
        if (k_sigma)
            c.threshold = ThresholdSpec::k_sigma(*k_sigma);
        if (threshold)
            c.threshold = ThresholdSpec::absolute(parse_threshold(*threshold));
        if (s0)
            c.s0 = parse_s0(*s0);
        if (patch)
            c.patch_side = *patch;
        if (search)
            c.search_side = *search;
        if (step)
            c.anchor_step = *step;
        c.intensity_floor = floor;
        c.threads = threads;
        c.validate();
        return c;
    }
};

//---------------------------------------------------------------------------//
// Subcommands
//---------------------------------------------------------------------------//

struct Context {
    std::vector<std::string> argv;
    std::ostream& out;
    std::ostream& err;
};

struct DespeckleArgs {
    std::string sar, guide, out;
    std::optional<double> looks;
    bool diagnostics = false;
    FilterOptions filter;
};

inline int run_despeckle(const DespeckleArgs& a, Context& ctx) {
    Timer timer;
    const SarImage sar = read_sar(a.sar, a.looks);
    const OpticalGuide guide = read_guide(a.guide);
    const FilterConfig config = a.filter.resolve();
    const FilterOutput result = filter(sar, guide, config);

    const fs::path out = a.out;
    write_raster(out, result.filtered);
    std::vector<fs::path> outputs = raster_files(out);
    if (a.diagnostics) {
        Raster<double> counts(result.predictor_count.width(), result.predictor_count.height());
        Raster<double> mask(counts.width(), counts.height());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            counts[i] = result.predictor_count[i];
            mask[i] = result.unfiltered_mask[i];
        }
        write_raster(with_suffix(out, ".count"), counts);
        write_raster(with_suffix(out, ".unfiltered"), mask);
        write_raster(with_suffix(out, ".ratio"), ratio_image(sar.intensity, result.filtered).values);
        export_count_map_png(with_suffix(out, ".count.png"), result.predictor_count, config.search_area());
        export_png(with_suffix(out, ".png"), result.filtered);
        for (const char* s : {".count", ".unfiltered", ".ratio"})
            for (const auto& p : raster_files(with_suffix(out, s)))
                outputs.push_back(p);
        outputs.push_back(with_suffix(out, ".count.png"));
        outputs.push_back(with_suffix(out, ".png"));
    }

    Manifest m("despeckle", ctx.argv);
    m.body["config"] = config_json(config, result.threshold);
    m.body["config"]["looks"] = sar.looks;
    m.body["config"]["mu_d"] = result.mu_d;
    m.body["threads"] = resolve_thread_count(config.threads);
    m.body["inputs"] = digests({a.sar, sidecar_path(a.sar), a.guide, sidecar_path(a.guide)});
    m.body["outputs"] = digests(outputs);
    m.write(with_suffix(out, ".manifest.json"), timer.seconds());
    ctx.err << "despeckle: T = " << result.threshold << ", anchors = " << result.anchors.size() << ", "
            << timer.seconds() << " s\n";
    return kOk;
}

struct GbfArgs {
    std::string sar, guide, out;
    std::optional<double> looks;
    GbfConfig config;
};

inline int run_gbf(const GbfArgs& a, Context& ctx) {
    Timer timer;
    const SarImage sar = read_sar(a.sar, a.looks);
    const OpticalGuide guide = read_guide(a.guide);
    const Raster<double> result = filter_gbf(sar, guide, a.config);
    write_raster(a.out, result);
    Manifest m("gbf", ctx.argv);
    m.body["config"] = {{"window_side", a.config.window_side},
                        {"alpha", a.config.alpha},
                        {"lambda_o", a.config.lambda_o},
                        {"lambda_s", a.config.lambda_s}};
    m.body["inputs"] = digests({a.sar, sidecar_path(a.sar), a.guide, sidecar_path(a.guide)});
    m.body["outputs"] = digests(raster_files(a.out));
    m.write(with_suffix(a.out, ".manifest.json"), timer.seconds());
    return kOk;
}

struct SimulateArgs {
    std::string scene_file;
    std::string preset = "mosaic";
    std::size_t width = 256, height = 256;
    double looks = 1.0;
    std::uint64_t seed = 1;
    std::string out_prefix;
    double reflector_multiplier = 100.0;
    std::size_t reflector_side = 1;
};

inline SceneSpec preset_scene(const SimulateArgs& a) {
    if (a.preset == "mosaic")
        return two_region_mosaic(a.width, a.height, a.width / 2);
    if (a.preset == "reflector") {
        SceneSpec s;
        s.width = a.width;
        s.height = a.height;
        s.background_guide = {0.4, 0.6};
        s.reflectors.push_back({{a.width / 2, a.height / 2}, a.reflector_multiplier, a.reflector_side});
        return s;
    }
    if (a.preset == "fields") {
        SceneSpec s = two_region_mosaic(a.width, a.height, a.width / 2);
        s.regions.push_back({RectShape{a.width / 8, a.height / 8, a.width / 4, a.height / 4}, 2.0, {0.45, 0.45}});
        s.regions.push_back({RoadShape{{{0.0, 0.7 * a.height}, {1.0 * a.width, 0.8 * a.height}}, 3.0}, 0.3, {0.9, 0.9}});
        s.reflectors.push_back({{3 * a.width / 4, a.height / 4}, a.reflector_multiplier, a.reflector_side});
        return s;
    }
    throw UsageError("unknown scene preset '" + a.preset + "'");
}

inline int run_simulate(const SimulateArgs& a, Context& ctx) {
    Timer timer;
    SceneSpec spec;
    if (!a.scene_file.empty()) {
        std::ifstream in(a.scene_file);
        if (!in)
            throw DataError("cannot open scene '" + a.scene_file + "'");
        try {
            spec = json::parse(in).get<SceneSpec>();
        } catch (const json::exception& e) {
            throw DataError(std::string("invalid scene JSON: ") + e.what());
        }
    } else {
        spec = preset_scene(a);
    }
    const Scene scene = generate_scene(spec, a.seed);
    const SarImage noisy = apply_speckle(scene.clean, a.looks, a.seed);
    SarImage clean = scene.clean;
    clean.looks = a.looks;

    const fs::path prefix = a.out_prefix;
    const auto clean_path = with_suffix(prefix, ".clean.f32");
    const auto noisy_path = with_suffix(prefix, ".noisy.f32");
    const auto guide_path = with_suffix(prefix, ".guide.f32");
    write_sar(clean_path, clean);
    write_sar(noisy_path, noisy);
    write_guide(guide_path, scene.guide);

    Manifest m("simulate", ctx.argv);
    m.body["scene"] = spec;
    m.body["looks"] = a.looks;
    m.body["seeds"] = {{{"base", a.seed},
                        {"scene_stream", stream_seed(a.seed, Stream::scene)},
                        {"speckle_rows_per_block", kSpeckleRowsPerBlock}}};
    std::vector<fs::path> outputs;
    for (const auto& p : {clean_path, noisy_path, guide_path})
        for (const auto& f : raster_files(p))
            outputs.push_back(f);
    m.body["outputs"] = digests(outputs);
    m.write(with_suffix(prefix, ".manifest.json"), timer.seconds());
    return kOk;
}

struct StatsArgs {
    double looks = 1.0;
    std::size_t patch = 8;
    double k = 2.0;
    std::vector<double> d0 = {0.1, 0.2, 0.5};
};

inline json stats_json(const StatsArgs& a) {
    if (a.patch == 0)
        throw UsageError("--patch must be positive");
    const SpeckleModel model(a.looks);
    const DistanceStats s = distance_moments(model);
    const std::size_t n = a.patch * a.patch;
    json j;
    j["looks"] = a.looks;
    j["patch_side"] = a.patch;
    j["patch_size"] = n;
    j["k"] = a.k;
    j["mu_d"] = s.mean;
    j["variance_d"] = s.variance;
    j["sigma_d"] = s.stddev();
    j["sigma_p"] = patch_sigma(model, n);
    j["threshold"] = threshold_json(threshold(model, n, a.k));
    j["gaussian_rejection_fraction"] = gaussian_rejection_fraction(a.k);
    j["tail_probability"] = json::array();
    for (double d : a.d0)
        j["tail_probability"].push_back({{"d0", d}, {"p", tail_probability(model, d)}});
    return j;
}

struct MetricsArgs {
    std::string sar, filtered, count;
    std::optional<double> looks;
    std::vector<std::string> regions;
    std::size_t levels = 64;
    bool literal = false;
};

inline json metrics_json(const MetricsArgs& a) {
    const SarImage sar = read_sar(a.sar, a.looks.value_or(1.0));
    std::optional<Raster<double>> filtered;
    if (!a.filtered.empty()) {
        filtered = read_raster(a.filtered).band(0);
        if (!filtered->same_shape(sar.intensity))
            throw DataError("filtered raster size differs from the original");
    }
    json j;
    j["enl"] = json::array();
    for (const auto& spec : a.regions) {
        const RegionRect r = parse_region(spec);
        json e = {{"region", {r.x, r.y, r.width, r.height}}, {"original", enl(sar.intensity, r)}};
        if (filtered)
            e["filtered"] = enl(*filtered, r);
        j["enl"].push_back(e);
    }
    if (filtered) {
        const auto ratio = ratio_image(sar.intensity, *filtered);
        const auto form = a.literal ? HomogeneityForm::literal : HomogeneityForm::standard;
        const auto r = ris(ratio, a.levels, form);
        j["ris"] = {{"value", r.ris},
                    {"homogeneity", r.homogeneity},
                    {"baseline", r.baseline},
                    {"levels", r.levels},
                    {"form", a.literal ? "literal" : "standard"}};
        j["ratio_mean"] = mean_of(ratio.values);
    }
    if (!a.count.empty()) {
        const auto counts = read_raster(a.count).band(0);
        const auto [lo, hi] = std::minmax_element(counts.values().begin(), counts.values().end());
        j["predictor_count"] = {{"min", *lo}, {"mean", mean_of(counts)}, {"max", *hi}};
    }
    return j;
}

struct SweepArgs {
    std::string sar, guide, out;
    std::optional<double> looks;
    std::string param = "threshold";
    std::vector<std::string> regions;
    std::size_t levels = 64;
    FilterOptions filter;
};

inline int run_sweep(const SweepArgs& a, Context& ctx) {
    Timer total;
    const SarImage sar = read_sar(a.sar, a.looks);
    const OpticalGuide guide = read_guide(a.guide);
    const FilterConfig base = a.filter.resolve();
    std::vector<RegionRect> regions;
    for (const auto& r : a.regions)
        regions.push_back(parse_region(r));

    struct Point {
        std::string label;
        FilterConfig config;
    };
    std::vector<Point> grid;
    if (a.param == "threshold") {
        const double inf = std::numeric_limits<double>::infinity();
        const std::pair<const char*, double> ks[] = {{"inf", inf}, {"1+4sigma", 4.0}, {"1+2sigma", 2.0},
                                                      {"1+sigma", 1.0}, {"1", 0.0}};
        for (const auto& [label, k] : ks) {
            FilterConfig c = base;
            c.threshold = std::isinf(k) ? ThresholdSpec::disabled() : ThresholdSpec::k_sigma(k);
            grid.push_back({label, c});
        }
    } else if (a.param == "s0") {
        for (const auto& [label, s0] : {std::pair<std::string, std::optional<std::size_t>>{"S", std::nullopt},
                                        {"256", 256}, {"64", 64}}) {
            FilterConfig c = base;
            c.s0 = s0;
            grid.push_back({label, c});
        }
    } else {
        throw UsageError("--param must be 'threshold' or 's0'");
    }

    std::ostringstream csv;
    csv << "label,threshold,s0,lambda,gamma";
    for (std::size_t i = 0; i < regions.size(); ++i)
        csv << ",enl_" << i;
    csv << ",ris,runtime_s\n";
    csv << std::setprecision(10);
    for (const auto& point : grid) {
        Timer t;
        const FilterOutput r = filter(sar, guide, point.config);
        const double runtime = t.seconds();
        csv << point.label << ',' << (std::isinf(r.threshold) ? std::string("inf") : std::to_string(r.threshold))
            << ',' << point.config.predictor_cap() << ',' << point.config.lambda << ',' << point.config.gamma;
        for (const auto& region : regions)
            csv << ',' << enl(r.filtered, region);
        csv << ',' << ris(ratio_image(sar.intensity, r.filtered), a.levels).ris << ',' << runtime << '\n';
    }
    if (a.out.empty()) {
        ctx.out << csv.str();
        return kOk;
    }
    {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f)
            throw DataError("cannot write '" + a.out + "'");
        f << csv.str();
    }
    Manifest m("sweep", ctx.argv);
    m.body["config"] = config_json(base, base.threshold.resolve(SpeckleModel(sar.looks), base.patch_side * base.patch_side));
    m.body["param"] = a.param;
    m.body["inputs"] = digests({a.sar, sidecar_path(a.sar), a.guide, sidecar_path(a.guide)});
    m.write(with_suffix(a.out, ".manifest.json"), total.seconds());
    return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline int run_replay(const std::string& manifest_path, bool verify, Context& ctx) {
    json m;
    {
        std::ifstream in(manifest_path);
        if (!in)
            throw DataError("cannot open manifest '" + manifest_path + "'");
        try {
            m = json::parse(in);
        } catch (const json::exception& e) {
            throw DataError(std::string("invalid manifest: ") + e.what());
        }
    }
    const auto argv = m.at("argv").get<std::vector<std::string>>();
    if (!argv.empty() && argv.front() == "replay")
        throw UsageError("refusing to replay a replay");
    const json expected = m.value("outputs", json::object());
    const int code = run(argv, ctx.out, ctx.err);
    if (code != kOk || !verify)
        return code;
    std::size_t mismatches = 0;
    for (const auto& [path, digest] : expected.items()) {
        const bool same = fs::exists(path) && file_digest(path) == digest.get<std::string>();
        if (!same) {
            ctx.err << "replay: output differs: " << path << "\n";
            ++mismatches;
        }
    }
    // The manifest itself is rewritten by the replayed command; keep the
    // original on disk so a replay is idempotent.
    std::ofstream(manifest_path, std::ios::trunc) << m.dump(2) << "\n";
    if (mismatches > 0)
        return kData;
    ctx.out << "replay: " << expected.size() << " outputs verified\n";
    return kOk;
}

/// Parses and dispatches one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optical-guided nonlocal SAR despeckling"};
    app.require_subcommand(1);
    Context ctx{args, out, err};

    DespeckleArgs despeckle;
    auto* c_desp = app.add_subcommand("despeckle", "guided patch-wise nonlocal means");
    c_desp->add_option("--sar", despeckle.sar, "SAR intensity raster")->required();
    c_desp->add_option("--guide", despeckle.guide, "optical guide raster")->required();
    c_desp->add_option("--out", despeckle.out, "output raster path")->required();
    c_desp->add_option("--looks", despeckle.looks, "override number of looks");
    c_desp->add_flag("--emit-diagnostics", despeckle.diagnostics,
                     "write predictor-count map, unfiltered mask, ratio image and PNGs");
    despeckle.filter.add_to(*c_desp);

    GbfArgs gbf;
    auto* c_gbf = app.add_subcommand("gbf", "pixel-wise generalized bilateral filter baseline");
    c_gbf->add_option("--sar", gbf.sar)->required();
    c_gbf->add_option("--guide", gbf.guide)->required();
    c_gbf->add_option("--out", gbf.out)->required();
    c_gbf->add_option("--looks", gbf.looks);
    c_gbf->add_option("--window", gbf.config.window_side, "window side (odd)");
    c_gbf->add_option("--alpha", gbf.config.alpha, "spatial decay");
    c_gbf->add_option("--lambda-o", gbf.config.lambda_o, "optical decay");
    c_gbf->add_option("--lambda-s", gbf.config.lambda_s, "SAR decay");
    c_gbf->add_option("--threads", gbf.config.threads);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "synthetic scene, speckle and guide");
    c_sim->add_option("--scene", sim.scene_file, "scene JSON (overrides --preset)");
    c_sim->add_option("--preset", sim.preset, "mosaic, reflector or fields")
        ->check(CLI::IsMember({"mosaic", "reflector", "fields"}));
    c_sim->add_option("--width", sim.width);
    c_sim->add_option("--height", sim.height);
    c_sim->add_option("--looks", sim.looks);
    c_sim->add_option("--seed", sim.seed);
    c_sim->add_option("--reflector-multiplier", sim.reflector_multiplier);
    c_sim->add_option("--reflector-side", sim.reflector_side);
    c_sim->add_option("--out-prefix", sim.out_prefix)->required();

    StatsArgs stats;
    auto* c_stats = app.add_subcommand("stats", "pixel/patch distance statistics as JSON");
    c_stats->add_option("--looks", stats.looks);
    c_stats->add_option("--patch", stats.patch, "patch side (N = side^2)");
    c_stats->add_option("--k", stats.k, "threshold multiplier");
    c_stats->add_option("--d0", stats.d0, "tail probability abscissae")->expected(1, -1);

    MetricsArgs metrics;
    auto* c_met = app.add_subcommand("metrics", "ENL and RIS as JSON");
    c_met->add_option("--sar", metrics.sar, "original SAR raster")->required();
    c_met->add_option("--filtered", metrics.filtered, "filtered raster");
    c_met->add_option("--count", metrics.count, "predictor-count raster");
    c_met->add_option("--looks", metrics.looks);
    c_met->add_option("--region", metrics.regions, "x,y,width,height (repeatable)");
    c_met->add_option("--levels", metrics.levels, "RIS quantization levels");
    c_met->add_flag("--literal-homogeneity", metrics.literal, "use 1/((i-j)^2-1) in RIS");

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand("sweep", "threshold or S0 grid as CSV");
    c_sweep->add_option("--sar", sweep.sar)->required();
    c_sweep->add_option("--guide", sweep.guide)->required();
    c_sweep->add_option("--out", sweep.out, "CSV path (default stdout)");
    c_sweep->add_option("--looks", sweep.looks);
    c_sweep->add_option("--param", sweep.param, "threshold or s0")->check(CLI::IsMember({"threshold", "s0"}));
    c_sweep->add_option("--region", sweep.regions, "ENL region x,y,width,height (repeatable)");
    c_sweep->add_option("--levels", sweep.levels);
    sweep.filter.add_to(*c_sweep);

    std::string manifest;
    bool no_verify = false;
    auto* c_replay = app.add_subcommand("replay", "re-run a manifest and verify outputs");
    c_replay->add_option("--manifest", manifest)->required();
    c_replay->add_flag("--no-verify", no_verify);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*c_desp)
            return run_despeckle(despeckle, ctx);
        if (*c_gbf)
            return run_gbf(gbf, ctx);
        if (*c_sim)
            return run_simulate(sim, ctx);
        if (*c_stats) {
            out << stats_json(stats).dump(2) << "\n";
            return kOk;
        }
        if (*c_met) {
            out << metrics_json(metrics).dump(2) << "\n";
            return kOk;
        }
        if (*c_sweep)
            return run_sweep(sweep, ctx);
        if (*c_replay)
            return run_replay(manifest, !no_verify, ctx);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}

}  // namespace gnlm::cli
