#include "csm/cli/oracle_factory.hpp"

#include <map>
#include <sstream>

#include "csm/error.hpp"
#include "csm/http_oracle.hpp"
#include "csm/local_oracles.hpp"
#include "csm/mlp_oracle.hpp"

namespace csm::cli {

namespace {

struct SpecParams {
    std::string kind;
    std::map<std::string, std::string> params;
};

SpecParams parse_spec(const std::string& spec) {
    SpecParams out;
    const auto colon = spec.find(':');
    out.kind = spec.substr(0, colon);
    if (colon == std::string::npos) return out;

    std::istringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError("oracle spec: expected key=value, got '" + item + "'");
        out.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

double get_num(const SpecParams& sp, const std::string& key, double fallback,
               bool required = false) {
    const auto it = sp.params.find(key);
    if (it == sp.params.end()) {
        if (required) throw InputError("oracle spec '" + sp.kind + "': missing " + key + "=");
        return fallback;
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw InputError("oracle spec: bad number for " + key + "='" + it->second + "'");
    }
}

std::vector<int> get_int_list(const SpecParams& sp, const std::string& key,
                              std::vector<int> fallback) {
    const auto it = sp.params.find(key);
    if (it == sp.params.end()) return fallback;
    std::vector<int> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, '-')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw InputError("oracle spec: bad layer width '" + tok + "' in " + key);
        }
    }
    if (out.empty()) throw InputError("oracle spec: empty list for " + key);
    return out;
}

}  // namespace

std::unique_ptr<ConfidenceOracle> make_oracle(const RunConfig& config) {
    config.validate();
    if (!config.oracle_url.empty()) {
        HttpOracleOptions options;
        options.timeout_s = config.timeout_s;
        return std::make_unique<HttpOracle>(config.oracle_url, options);
    }

    const SpecParams sp = parse_spec(config.oracle);
    const int w = static_cast<int>(get_num(sp, "w", 0, true));
    const int h = static_cast<int>(get_num(sp, "h", 0, true));
    const int ch = static_cast<int>(get_num(sp, "ch", 1));

    if (sp.kind == "constant")
        return std::make_unique<ConstantOracle>(get_num(sp, "c", 0.5), w, h, ch);
    if (sp.kind == "mean") return std::make_unique<MeanIntensityOracle>(w, h, ch);
    if (sp.kind == "disk")
        return std::make_unique<DiskOracle>(get_num(sp, "cx", 0, true),
                                            get_num(sp, "cy", 0, true),
                                            get_num(sp, "r", 0, true), w, h, ch);
    if (sp.kind == "flatten") return std::make_unique<FlattenEmbeddingOracle>(w, h, ch);
    if (sp.kind == "mlp") {
        MlpSpec mlp;
        mlp.input_width = w;
        mlp.input_height = h;
        mlp.input_channels = ch;
        mlp.hidden = get_int_list(sp, "hidden", {24, 16});
        mlp.classes = static_cast<int>(get_num(sp, "classes", 4));
        mlp.seed = static_cast<std::uint64_t>(get_num(sp, "seed", 1));
        return std::make_unique<MlpOracle>(mlp);
    }
    throw InputError("unknown oracle kind '" + sp.kind +
                     "' (known: constant, mean, disk, flatten, mlp)");
}

}  // namespace csm::cli
