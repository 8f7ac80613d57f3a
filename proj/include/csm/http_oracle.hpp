#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "csm/oracle.hpp"

namespace httplib {
class Client;
}

namespace csm {

struct HttpOracleOptions {
    double timeout_s = 30.0;
    int retries = 2;    // extra attempts after the first, on transport failures only
    int pool_size = 4;  // concurrent keep-alive connections
};

/// Remote adapter for the HTTP oracle protocol. All bodies are JSON; images
/// travel as base64-encoded PNG.
///
///   POST /v1/score {"images":[b64...], "class": int} -> {"scores":[...]}
///   POST /v1/embed {"images":[b64...]}               -> {"features":[[...]...]}
///   GET  /v1/info -> {"id", "input":{"w","h","c"}, "classes", "capabilities":[...]}
///
/// 4xx responses raise InputError; 5xx and connection failures raise
/// TransportError carrying status and attempt count. Safe for concurrent
/// scoring: requests draw clients from a small connection pool.
class HttpOracle : public ConfidenceOracle {
public:
    explicit HttpOracle(std::string base_url, HttpOracleOptions options = {});
    ~HttpOracle() override;

    OracleInfo info() const override { return info_; }
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;
    std::vector<Embedding> embed_batch(std::span<const FaceImage> images) const override;

private:
    class Pool;
    std::string post_json(const std::string& path, const std::string& body) const;
    std::string get(const std::string& path) const;

    std::string base_url_;
    HttpOracleOptions options_;
    OracleInfo info_;
    std::unique_ptr<Pool> pool_;
};

}  // namespace csm
