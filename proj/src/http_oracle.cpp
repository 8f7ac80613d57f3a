#include "csm/http_oracle.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <nlohmann/json.hpp>

#include "csm/base64.hpp"
#include "csm/error.hpp"
#include "csm/png_io.hpp"

namespace csm {

using nlohmann::json;

/// Fixed-size pool of keep-alive clients; acquire blocks when all are in use.
class HttpOracle::Pool {
public:
    struct Lease {
        explicit Lease(Pool* p) : pool(p), client(p->acquire()) {}
        ~Lease() {
            if (client) pool->release(std::move(client));
        }
        httplib::Client* operator->() { return client.get(); }

        Pool* pool;
        std::unique_ptr<httplib::Client> client;
    };

    Pool(const std::string& base_url, double timeout_s, int size) {
        for (int i = 0; i < std::max(1, size); ++i) {
            auto client = std::make_unique<httplib::Client>(base_url);
            if (!client->is_valid())
                throw InputError("invalid oracle URL: " + base_url);
            const time_t sec = static_cast<time_t>(timeout_s);
            const long usec = static_cast<long>((timeout_s - static_cast<double>(sec)) * 1e6);
            client->set_connection_timeout(sec, usec);
            client->set_read_timeout(sec, usec);
            client->set_write_timeout(sec, usec);
            idle_.push_back(std::move(client));
        }
    }

    std::unique_ptr<httplib::Client> acquire() {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [&] { return !idle_.empty(); });
        auto client = std::move(idle_.back());
        idle_.pop_back();
        return client;
    }

    void release(std::unique_ptr<httplib::Client> client) {
        {
            std::lock_guard lock(mutex_);
            idle_.push_back(std::move(client));
        }
        ready_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable ready_;
    std::vector<std::unique_ptr<httplib::Client>> idle_;
};

HttpOracle::HttpOracle(std::string base_url, HttpOracleOptions options)
    : base_url_(std::move(base_url)), options_(options) {
    pool_ = std::make_unique<Pool>(base_url_, options_.timeout_s, options_.pool_size);

    json j;
    try {
        j = json::parse(get("/v1/info"));
    } catch (const json::exception& e) {
        throw TransportError("oracle /v1/info returned malformed JSON: " + std::string(e.what()),
                             200, 1);
    }
    try {
        info_.id = j.at("id").get<std::string>();
        info_.input_width = j.at("input").at("w").get<int>();
        info_.input_height = j.at("input").at("h").get<int>();
        info_.input_channels = j.at("input").at("c").get<int>();
        info_.num_classes = j.value("classes", 0);
        const auto caps = j.value("capabilities", std::vector<std::string>{});
        auto has = [&](const char* c) {
            return std::find(caps.begin(), caps.end(), c) != caps.end();
        };
        info_.scores = caps.empty() || has("scores");
        info_.embeddings = has("embeddings");
        info_.probabilistic = has("probabilistic");
        info_.randomizable = false;  // no randomization endpoint in the protocol
    } catch (const json::exception& e) {
        throw TransportError("oracle /v1/info missing required field: " + std::string(e.what()),
                             200, 1);
    }
}

HttpOracle::~HttpOracle() = default;

std::string HttpOracle::get(const std::string& path) const {
    int attempts = 0;
    for (;;) {
        ++attempts;
        Pool::Lease lease(pool_.get());
        auto res = lease->Get(path);
        if (res) {
            if (res->status >= 200 && res->status < 300) return res->body;
            if (res->status >= 400 && res->status < 500)
                throw InputError("oracle rejected GET " + path + ": HTTP " +
                                 std::to_string(res->status) + " " + res->body);
            if (attempts > options_.retries)
                throw TransportError("oracle GET " + path + " failed", res->status, attempts);
        } else if (attempts > options_.retries) {
            throw TransportError("oracle unreachable at " + base_url_ + path + " (" +
                                     httplib::to_string(res.error()) + ")",
                                 0, attempts);
        }
    }
}

std::string HttpOracle::post_json(const std::string& path, const std::string& body) const {
    int attempts = 0;
    for (;;) {
        ++attempts;
        Pool::Lease lease(pool_.get());
        auto res = lease->Post(path, body, "application/json");
        if (res) {
            if (res->status >= 200 && res->status < 300) return res->body;
            if (res->status >= 400 && res->status < 500)
                throw InputError("oracle rejected POST " + path + ": HTTP " +
                                 std::to_string(res->status) + " " + res->body);
            if (attempts > options_.retries)
                throw TransportError("oracle POST " + path + " failed", res->status, attempts);
        } else if (attempts > options_.retries) {
            throw TransportError("oracle unreachable at " + base_url_ + path + " (" +
                                     httplib::to_string(res.error()) + ")",
                                 0, attempts);
        }
    }
}

std::vector<double> HttpOracle::score_batch(std::span<const FaceImage> images,
                                            int class_id) const {
    check_inputs(images, class_id);
    if (images.empty()) return {};

    json req;
    req["class"] = class_id;
    auto& arr = req["images"] = json::array();
    for (const auto& img : images) arr.push_back(base64_encode(encode_png(img)));

    const std::string body = post_json("/v1/score", req.dump());
    std::vector<double> scores;
    try {
        scores = json::parse(body).at("scores").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw TransportError("malformed /v1/score response: " + std::string(e.what()), 200, 1);
    }
    if (scores.size() != images.size())
        throw TransportError("oracle returned " + std::to_string(scores.size()) +
                                 " scores for " + std::to_string(images.size()) + " images",
                             200, 1);
    check_scores(scores);
    return scores;
}

std::vector<Embedding> HttpOracle::embed_batch(std::span<const FaceImage> images) const {
    if (!info_.embeddings) return ConfidenceOracle::embed_batch(images);
    check_inputs(images, 0);
    if (images.empty()) return {};

    json req;
    auto& arr = req["images"] = json::array();
    for (const auto& img : images) arr.push_back(base64_encode(encode_png(img)));

    const std::string body = post_json("/v1/embed", req.dump());
    std::vector<Embedding> features;
    try {
        features = json::parse(body).at("features").get<std::vector<Embedding>>();
    } catch (const json::exception& e) {
        throw TransportError("malformed /v1/embed response: " + std::string(e.what()), 200, 1);
    }
    if (features.size() != images.size())
        throw TransportError("oracle returned " + std::to_string(features.size()) +
                                 " features for " + std::to_string(images.size()) + " images",
                             200, 1);
    for (const auto& f : features) {
        if (f.empty()) throw TransportError("oracle returned an empty feature vector", 200, 1);
        for (float v : f)
            if (!std::isfinite(v))
                throw TransportError("oracle returned a non-finite feature value", 200, 1);
    }
    return features;
}

}  // namespace csm
