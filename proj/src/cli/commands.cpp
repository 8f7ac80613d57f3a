#include "csm/cli/commands.hpp"

#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>

#include "csm/canonical.hpp"
#include "csm/cli/artifacts.hpp"
#include "csm/cli/manifest.hpp"
#include "csm/cli/oracle_factory.hpp"
#include "csm/error.hpp"
#include "csm/evaluation.hpp"
#include "csm/parallel.hpp"
#include "csm/png_io.hpp"
#include "csm/sanity.hpp"

namespace csm::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CanonicalFrame {
    int width = 0;
    int height = 0;
};

CanonicalFrame load_canonical_frame(const RunConfig& config) {
    if (config.canonical_image.empty())
        throw InputError("canonical_image is required (set it in the config file)");
    const FaceImage face = read_png(config.canonical_image);
    if (!config.canonical_dcorr.empty()) {
        // Consistency guard: the canonical mesh must live inside the asset.
        const auto mesh = load_correspondence(config.canonical_dcorr);
        check_bounds(mesh, face.width(), face.height(), face.width(), face.height());
    }
    return {face.width(), face.height()};
}

void write_echo(const RunConfig& config, const std::string& command, json args) {
    json doc{{"tool", "csm"},
             {"version", kVersion},
             {"command", command},
             {"args", std::move(args)},
             {"config", config.echo()}};
    write_json_artifact(doc, config.out / "config_echo.json");
}

std::string image_stem(const std::filesystem::path& p) {
    auto stem = p.stem().string();
    return stem.empty() ? "image" : stem;
}

OcclusionSpec occlusion_spec(const RunConfig& config) {
    return {config.sz, static_cast<std::uint8_t>(config.fill), config.batch};
}

/// CIS maps for every manifest entry, parallel across images. Failed entries
/// come back empty with a warning on stderr.
std::vector<std::optional<SaliencyMap>> cis_per_entry(const RunConfig& config,
                                                      const std::vector<ManifestEntry>& entries,
                                                      const ConfidenceOracle& oracle,
                                                      const CanonicalFrame& canon) {
    const OcclusionSpec spec = occlusion_spec(config);
    std::vector<std::optional<SaliencyMap>> maps(entries.size());
    std::mutex log_mutex;
    parallel_for(entries.size(), config.workers, [&](std::size_t i) {
        const auto& entry = entries[i];
        try {
            const FaceImage image = read_png(entry.image);
            const auto corr = load_correspondence(entry.dcorr, config.stride);
            maps[i] = compute_cis(image, corr, canon.width, canon.height, oracle, entry.class_id,
                                  spec, /*workers=*/1);
        } catch (const Error& e) {
            std::lock_guard lock(log_mutex);
            std::cerr << "warning: skipping " << entry.image.string() << ": " << e.what()
                      << "\n";
        }
    });
    return maps;
}

SaliencyMap mean_image_maps(const std::vector<SaliencyMap>& maps) {
    const auto& first = maps.front();
    std::vector<double> sums(first.pixel_count(), 0.0);
    for (const auto& m : maps) {
        if (m.width() != first.width() || m.height() != first.height())
            throw ValidationError(
                "no-alignment aggregation needs identically sized images, got " +
                std::to_string(m.width()) + "x" + std::to_string(m.height()) + " vs " +
                std::to_string(first.width()) + "x" + std::to_string(first.height()));
        const auto values = m.values();
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += values[i];
    }
    std::vector<float> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i)
        out[i] = static_cast<float>(sums[i] / static_cast<double>(maps.size()));
    return SaliencyMap(first.width(), first.height(), Frame::image, std::move(out), first.meta());
}

}  // namespace

void cmd_cis(const RunConfig& config, const std::filesystem::path& image_path,
             const std::filesystem::path& dcorr, int class_id) {
    config.validate();
    const auto oracle = make_oracle(config);
    const CanonicalFrame canon = load_canonical_frame(config);

    const FaceImage image = read_png(image_path);
    const auto corr = load_correspondence(dcorr, config.stride);
    SaliencyMap map = compute_cis(image, corr, canon.width, canon.height, *oracle, class_id,
                                  occlusion_spec(config), config.workers);
    MapMeta meta = map.meta();
    meta.stride = config.stride;
    map.set_meta(meta);

    const std::string stem = image_stem(image_path);
    write_saliency_artifact(map, config.out / (stem + ".cis.csm"));
    write_png_artifact(render_heatmap(map), config.out / (stem + ".cis.png"));
    write_echo(config, "cis",
               {{"image", image_path.string()},
                {"dcorr", dcorr.string()},
                {"class", class_id}});
}

void cmd_cms(const RunConfig& config) {
    config.validate();
    const auto oracle = make_oracle(config);
    const CanonicalFrame canon = load_canonical_frame(config);
    const auto entries = load_manifest(config.manifest);

    const auto maps = cis_per_entry(config, entries, *oracle, canon);

    std::vector<SaliencyMap> good;
    for (const auto& m : maps)
        if (m) good.push_back(*m);
    if (good.empty())
        throw Error("all " + std::to_string(entries.size()) + " manifest entries failed");
    if (good.size() < entries.size())
        std::cerr << "warning: " << (entries.size() - good.size()) << " of " << entries.size()
                  << " entries skipped\n";

    std::size_t cursor = 0;
    const CmsResult result = cms_streaming([&]() -> std::optional<SaliencyMap> {
        if (cursor >= good.size()) return std::nullopt;
        return good[cursor++];
    });

    write_saliency_artifact(result.cms, config.out / "cms.csm");
    write_png_artifact(render_heatmap(result.cms), config.out / "cms.png");

    json trace{{"images", good.size()}, {"k", json::array()}, {"l1_per_pixel", json::array()}};
    for (const auto& point : result.trace) {
        trace["k"].push_back(point.k);
        trace["l1_per_pixel"].push_back(point.l1_per_pixel);
    }
    write_json_artifact(trace, config.out / "convergence.json");
    write_echo(config, "cms", {{"manifest", config.manifest.string()}});
}

void cmd_reproject(const RunConfig& config, const std::filesystem::path& map_path,
                   const std::filesystem::path& dcorr, const std::filesystem::path& image_path) {
    config.validate();
    const SaliencyMap canonical_map = read_saliency(map_path);
    const FaceImage image = read_png(image_path);
    const auto corr = load_correspondence(dcorr, config.stride);

    const SaliencyMap projected =
        reproject(canonical_map, corr, image.width(), image.height(), config.sz);

    const std::string stem = image_stem(image_path);
    write_saliency_artifact(projected, config.out / (stem + ".reproj.csm"));
    write_png_artifact(render_heatmap(projected), config.out / (stem + ".reproj.png"));
    write_png_artifact(overlay_heatmap(projected, image), config.out / (stem + ".overlay.png"));
    write_echo(config, "reproject",
               {{"map", map_path.string()},
                {"dcorr", dcorr.string()},
                {"image", image_path.string()}});
}

void cmd_evaluate(const RunConfig& config,
                  const std::vector<std::pair<std::string, std::filesystem::path>>& methods) {
    config.validate();
    if (methods.empty()) throw InputError("evaluate: at least one --method name=dir required");
    const auto oracle = make_oracle(config);
    const auto entries = load_manifest(config.manifest);

    std::vector<EvaluationRecord> records(entries.size());
    parallel_for(entries.size(), config.workers, [&](std::size_t i) {
        const auto& entry = entries[i];
        const FaceImage image = read_png(entry.image);
        const std::string stem = image_stem(entry.image);
        EvaluationRecord rec;
        rec.image_id = stem;
        rec.original = oracle->score_one(image, entry.class_id);

        const double s = config.s_fraction * static_cast<double>(image.pixel_count());
        for (const auto& [name, dir] : methods) {
            std::filesystem::path heat_path = dir / (stem + ".csm");
            if (!std::filesystem::exists(heat_path)) heat_path = dir / (stem + ".png");
            if (!std::filesystem::exists(heat_path))
                throw InputError("method '" + name + "' has no heatmap for image '" + stem +
                                 "' in " + dir.string());
            const SaliencyMap heat = load_heatmap(heat_path);
            const FaceImage negative = negative_explanation(image, standardize(heat, s));
            rec.explanation[name] = oracle->score_one(negative, entry.class_id);
        }
        records[i] = std::move(rec);
    });

    json args{{"manifest", config.manifest.string()}, {"methods", json::object()}};
    for (const auto& [name, dir] : methods) args["methods"][name] = dir.string();
    json echo{{"tool", "csm"},
              {"version", kVersion},
              {"command", "evaluate"},
              {"args", args},
              {"config", config.echo()}};

    const json report = evaluation_report(records, echo, oracle->info().id);
    write_json_artifact(report, config.out / "report.json");
    write_echo(config, "evaluate", args);
}

void cmd_sanity(const RunConfig& config, int K) {
    config.validate();
    const auto oracle = make_oracle(config);
    const CanonicalFrame canon = load_canonical_frame(config);
    const auto entries = load_manifest(config.manifest);

    std::vector<SanityInput> inputs;
    inputs.reserve(entries.size());
    for (const auto& entry : entries)
        inputs.push_back({read_png(entry.image), load_correspondence(entry.dcorr, config.stride),
                          entry.class_id});

    const SanityReport report =
        sanity_check(*oracle, inputs, canon.width, canon.height, occlusion_spec(config), K,
                     config.seed, config.workers, config.manifest.string());
    write_json_artifact(sanity_report_json(report), config.out / "sanity.json");
    write_echo(config, "sanity", {{"K", K}, {"manifest", config.manifest.string()}});
}

void cmd_ablate_alignment(const RunConfig& config, const std::string& mode) {
    config.validate();
    if (mode == "canonical") {
        // Canonical alignment is exactly the CMS pipeline.
        cmd_cms(config);
        write_echo(config, "ablate-alignment", {{"mode", mode}});
        return;
    }
    if (mode != "none" && mode != "keypoint")
        throw InputError("alignment mode must be none, keypoint or canonical");

    const auto oracle = make_oracle(config);
    const auto entries = load_manifest(config.manifest);
    const OcclusionSpec spec = occlusion_spec(config);

    // Sliding-window baseline: occlusions on a regular grid with step = stride,
    // accumulated in image coordinates. mode=keypoint expects pre-aligned
    // inputs and treats pixel positions as corresponding.
    std::vector<std::optional<SaliencyMap>> maps(entries.size());
    std::mutex log_mutex;
    parallel_for(entries.size(), config.workers, [&](std::size_t i) {
        const auto& entry = entries[i];
        try {
            const FaceImage image = read_png(entry.image);
            std::vector<Point2> grid;
            for (int y = 0; y < image.height(); y += config.stride)
                for (int x = 0; x < image.width(); x += config.stride)
                    grid.push_back({static_cast<float>(x), static_cast<float>(y)});
            const DenseCorrespondence identity(grid, grid);
            const auto drops =
                vertex_drops(image, identity, *oracle, entry.class_id, spec, /*workers=*/1);
            CanonicalAccumulator acc(image.width(), image.height(), spec.sz);
            for (const auto& d : drops) {
                const auto& p = identity.input_point(d.index);
                acc.splat(d.drop, round_pixel(p.x), round_pixel(p.y));
            }
            MapMeta meta;
            meta.occlusion_sz = spec.sz;
            meta.stride = config.stride;
            meta.oracle_id = oracle->info().id;
            maps[i] = acc.finalize(Frame::image, meta);
        } catch (const Error& e) {
            std::lock_guard lock(log_mutex);
            std::cerr << "warning: skipping " << entry.image.string() << ": " << e.what()
                      << "\n";
        }
    });

    std::vector<SaliencyMap> good;
    for (const auto& m : maps)
        if (m) good.push_back(*m);
    if (good.empty())
        throw Error("all " + std::to_string(entries.size()) + " manifest entries failed");

    const SaliencyMap model_map = mean_image_maps(good);
    write_saliency_artifact(model_map, config.out / ("msm_" + mode + ".csm"));
    write_png_artifact(render_heatmap(model_map), config.out / ("msm_" + mode + ".png"));
    write_echo(config, "ablate-alignment", {{"mode", mode}});
}

}  // namespace csm::cli
