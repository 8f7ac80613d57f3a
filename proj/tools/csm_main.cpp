#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "csm/cli/commands.hpp"
#include "csm/error.hpp"

namespace {

using csm::cli::RunConfig;

struct CommonArgs {
    std::string config_path;
    std::string oracle;
    std::string oracle_url;
    int sz = -1;
    int stride = -1;
    int fill = -1;
    long long seed = -1;
    std::string out;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--oracle", args.oracle, "local oracle spec, e.g. mean:w=64,h=64,ch=1");
    cmd->add_option("--oracle-url", args.oracle_url, "HTTP oracle base URL");
    cmd->add_option("--sz", args.sz, "occlusion patch size");
    cmd->add_option("--stride", args.stride, "vertex / grid stride");
    cmd->add_option("--fill", args.fill, "occlusion fill intensity");
    cmd->add_option("--seed", args.seed, "run seed");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--workers", args.workers, "worker threads");
}

RunConfig resolve(const CommonArgs& args) {
    RunConfig config;
    if (!args.config_path.empty()) config = csm::cli::load_config(args.config_path);
    if (!args.oracle.empty()) config.oracle = args.oracle;
    if (!args.oracle_url.empty()) config.oracle_url = args.oracle_url;
    if (args.sz >= 0) config.sz = args.sz;
    if (args.stride >= 0) config.stride = args.stride;
    if (args.fill >= 0) config.fill = args.fill;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    if (!args.out.empty()) config.out = args.out;
    if (args.workers >= 0) config.workers = args.workers;
    if (config.oracle.empty() && config.oracle_url.empty()) {
        if (const char* env = std::getenv("CSM_ORACLE_URL")) config.oracle_url = env;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Canonical saliency maps for black-box face models"};
    app.require_subcommand(1);

    CommonArgs common;

    // cis
    auto* cis = app.add_subcommand("cis", "canonical image saliency map for one image");
    std::string cis_image, cis_dcorr;
    int cis_class = 0;
    add_common(cis, common);
    cis->add_option("--image", cis_image, "input image (PNG)")->required();
    cis->add_option("--dcorr", cis_dcorr, "dense correspondence file")->required();
    cis->add_option("--class", cis_class, "target class id")->required();

    // cms
    auto* cms = app.add_subcommand("cms", "canonical model saliency map over a manifest");
    std::string cms_manifest;
    add_common(cms, common);
    cms->add_option("--manifest", cms_manifest, "TSV manifest: image, dcorr, class");

    // reproject
    auto* reproject = app.add_subcommand("reproject", "project a canonical map onto an image");
    std::string rep_map, rep_dcorr, rep_image;
    add_common(reproject, common);
    reproject->add_option("--map", rep_map, "canonical .csm file")->required();
    reproject->add_option("--dcorr", rep_dcorr, "dense correspondence file")->required();
    reproject->add_option("--image", rep_image, "target image (PNG)")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "negative-explanation metrics per method");
    std::string eval_manifest;
    std::vector<std::string> eval_methods;
    add_common(evaluate, common);
    evaluate->add_option("--manifest", eval_manifest, "TSV manifest: image, dcorr, class");
    evaluate->add_option("--method", eval_methods, "method heatmaps as name=dir (repeatable)")
        ->required();

    // sanity
    auto* sanity = app.add_subcommand("sanity", "layer-randomization sanity check");
    std::string sanity_manifest;
    int sanity_k = 0;
    add_common(sanity, common);
    sanity->add_option("--manifest", sanity_manifest, "TSV manifest: image, dcorr, class");
    sanity->add_option("-K,--layers", sanity_k, "randomize top 1..K layers")->required();

    // ablate-alignment
    auto* ablate = app.add_subcommand("ablate-alignment", "alignment ablation baselines");
    std::string abl_manifest, abl_mode;
    add_common(ablate, common);
    ablate->add_option("--manifest", abl_manifest, "TSV manifest: image, dcorr, class");
    ablate->add_option("--mode", abl_mode, "none | keypoint | canonical")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config = resolve(common);
        if (cis->parsed()) {
            csm::cli::cmd_cis(config, cis_image, cis_dcorr, cis_class);
        } else if (cms->parsed()) {
            if (!cms_manifest.empty()) config.manifest = cms_manifest;
            csm::cli::cmd_cms(config);
        } else if (reproject->parsed()) {
            csm::cli::cmd_reproject(config, rep_map, rep_dcorr, rep_image);
        } else if (evaluate->parsed()) {
            if (!eval_manifest.empty()) config.manifest = eval_manifest;
            std::vector<std::pair<std::string, std::filesystem::path>> methods;
            for (const auto& m : eval_methods) {
                const auto eq = m.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw csm::InputError("--method expects name=dir, got '" + m + "'");
                methods.emplace_back(m.substr(0, eq), m.substr(eq + 1));
            }
            csm::cli::cmd_evaluate(config, methods);
        } else if (sanity->parsed()) {
            if (!sanity_manifest.empty()) config.manifest = sanity_manifest;
            csm::cli::cmd_sanity(config, sanity_k);
        } else if (ablate->parsed()) {
            if (!abl_manifest.empty()) config.manifest = abl_manifest;
            csm::cli::cmd_ablate_alignment(config, abl_mode);
        }
    } catch (const csm::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const csm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const csm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
