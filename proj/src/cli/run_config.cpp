#include "csm/cli/run_config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "csm/error.hpp"

namespace csm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "': expected integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "': expected number, got '" + value + "'");
    }
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "oracle")
        oracle = value;
    else if (key == "oracle_url")
        oracle_url = value;
    else if (key == "canonical_image")
        canonical_image = value;
    else if (key == "canonical_dcorr")
        canonical_dcorr = value;
    else if (key == "sz")
        sz = static_cast<int>(parse_int(key, value));
    else if (key == "fill")
        fill = static_cast<int>(parse_int(key, value));
    else if (key == "batch")
        batch = static_cast<int>(parse_int(key, value));
    else if (key == "stride")
        stride = static_cast<int>(parse_int(key, value));
    else if (key == "manifest")
        manifest = value;
    else if (key == "out")
        out = value;
    else if (key == "seed")
        seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "workers")
        workers = static_cast<int>(parse_int(key, value));
    else if (key == "timeout")
        timeout_s = parse_double(key, value);
    else if (key == "s_fraction")
        s_fraction = parse_double(key, value);
    else
        throw InputError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
    if (sz < 1) throw InputError("sz must be >= 1");
    if (stride < 1) throw InputError("stride must be >= 1");
    if (fill < 0 || fill > 255) throw InputError("fill must be in [0, 255]");
    if (batch < 1) throw InputError("batch must be >= 1");
    if (workers < 1) throw InputError("workers must be >= 1");
    if (!(timeout_s > 0)) throw InputError("timeout must be positive");
    if (!(s_fraction > 0)) throw InputError("s_fraction must be positive");
    const bool has_local = !oracle.empty();
    const bool has_remote = !oracle_url.empty();
    if (has_local == has_remote)
        throw InputError("exactly one oracle source required: set 'oracle' or 'oracle_url'");
}

nlohmann::json RunConfig::echo() const {
    return nlohmann::json{{"oracle", oracle},
                          {"oracle_url", oracle_url},
                          {"canonical_image", canonical_image.string()},
                          {"canonical_dcorr", canonical_dcorr.string()},
                          {"sz", sz},
                          {"fill", fill},
                          {"batch", batch},
                          {"stride", stride},
                          {"manifest", manifest.string()},
                          {"out", out.string()},
                          {"seed", seed},
                          {"workers", workers},
                          {"timeout", timeout_s},
                          {"s_fraction", s_fraction}};
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config file not found: " + path.string());
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' in " + path.string(), line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty config key in " + path.string(), line_no);
        try {
            config.set(key, value);
        } catch (const InputError& e) {
            throw ParseError(std::string(e.what()) + " in " + path.string(), line_no);
        }
    }
    return config;
}

}  // namespace csm::cli
