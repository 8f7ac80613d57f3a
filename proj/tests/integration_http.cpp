#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <nlohmann/json.hpp>
#include <thread>

#include "csm/base64.hpp"
#include "csm/error.hpp"
#include "csm/http_oracle.hpp"
#include "csm/local_oracles.hpp"
#include "csm/occlusion.hpp"
#include "csm/png_io.hpp"
#include "support/fixtures.hpp"

using namespace csm;
using nlohmann::json;

namespace {

/// In-process reference server implementing the oracle wire protocol on top
/// of a local test oracle. Mirrors what a model-hosting adapter would expose.
class TestServer {
public:
    explicit TestServer(int embed_dim = 0) : embed_dim_(embed_dim) {
        server_.Get("/v1/info", [this](const httplib::Request&, httplib::Response& res) {
            json caps = json::array({"scores", "probabilistic"});
            if (embed_dim_ > 0) caps.push_back("embeddings");
            const json info{{"id", "test-server"},
                            {"input", {{"w", 16}, {"h", 16}, {"c", 1}}},
                            {"classes", 4},
                            {"capabilities", caps}};
            res.set_content(info.dump(), "application/json");
        });

        server_.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
            ++score_calls_;
            if (fail_next_with_500_.exchange(false)) {
                res.status = 500;
                res.set_content("transient", "text/plain");
                return;
            }
            json body;
            try {
                body = json::parse(req.body);
            } catch (const json::exception&) {
                res.status = 400;
                return;
            }
            if (!body.contains("class") || !body.contains("images")) {
                res.status = 400;
                res.set_content("missing field", "text/plain");
                return;
            }
            const int class_id = body["class"];
            if (class_id < 0 || class_id >= 4) {
                res.status = 400;
                res.set_content("bad class", "text/plain");
                return;
            }
            json scores = json::array();
            const MeanIntensityOracle oracle(16, 16);
            for (const auto& b64 : body["images"]) {
                const FaceImage img = decode_png(base64_decode(b64.get<std::string>()));
                scores.push_back(oracle.score_one(img, 0));
            }
            res.set_content(json{{"scores", scores}}.dump(), "application/json");
        });

        server_.Post("/v1/embed", [this](const httplib::Request& req, httplib::Response& res) {
            const json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.contains("images")) {
                res.status = 400;
                return;
            }
            json features = json::array();
            for (const auto& b64 : body["images"]) {
                const FaceImage img = decode_png(base64_decode(b64.get<std::string>()));
                // deterministic fixed-dimension feature: tiled mean profile
                json f = json::array();
                for (int d = 0; d < embed_dim_; ++d) {
                    const int x = d % img.width();
                    const int y = (d / img.width()) % img.height();
                    f.push_back(img.at(x, y) / 255.0f + 0.001f);
                }
                features.push_back(std::move(f));
            }
            res.set_content(json{{"features", features}}.dump(), "application/json");
        });

        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~TestServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int score_calls() const { return score_calls_; }
    void fail_next_with_500() { fail_next_with_500_ = true; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    int embed_dim_;
    std::atomic<int> score_calls_{0};
    std::atomic<bool> fail_next_with_500_{false};
};

}  // namespace

TEST_CASE("info endpoint populates oracle metadata") {
    TestServer server(256);
    const HttpOracle oracle(server.url());
    const OracleInfo info = oracle.info();
    CHECK(info.id == "test-server");
    CHECK(info.input_width == 16);
    CHECK(info.input_height == 16);
    CHECK(info.input_channels == 1);
    CHECK(info.num_classes == 4);
    CHECK(info.embeddings);
    CHECK(info.probabilistic);
    CHECK_FALSE(info.randomizable);
}

TEST_CASE("remote scores equal the local oracle through the wire") {
    TestServer server;
    const HttpOracle remote(server.url());
    const MeanIntensityOracle local(16, 16);

    std::vector<FaceImage> images;
    for (int i = 0; i < 5; ++i) images.push_back(fixtures::noise_image(16, 16, 1, 40 + i));
    const auto remote_scores = remote.score_batch(images, 2);
    const auto local_scores = local.score_batch(images, 0);
    REQUIRE(remote_scores.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(remote_scores[i] == doctest::Approx(local_scores[i]).epsilon(1e-12));

    // batch equals elementwise singles over the wire too
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(remote.score_one(images[i], 2) == remote_scores[i]);
}

TEST_CASE("remote embeddings have the contracted shape") {
    TestServer server(256);
    const HttpOracle remote(server.url());
    std::vector<FaceImage> images;
    for (int i = 0; i < 5; ++i) images.push_back(fixtures::noise_image(16, 16, 1, 60 + i));
    const auto features = remote.embed_batch(images);
    REQUIRE(features.size() == 5);
    for (const auto& f : features) CHECK(f.size() == 256);

    // missing capability is refused client-side
    TestServer no_embed(0);
    const HttpOracle plain(no_embed.url());
    CHECK_THROWS_AS(plain.embed_batch(images), UnsupportedError);
}

TEST_CASE("4xx maps to InputError, 5xx retries then TransportError") {
    TestServer server;
    HttpOracleOptions options;
    options.retries = 1;
    const HttpOracle remote(server.url(), options);
    const std::vector<FaceImage> images = {fixtures::noise_image(16, 16, 1, 1)};

    CHECK_THROWS_AS(remote.score_batch(images, 99), InputError);  // class out of range: 400

    // single transient 500 is retried away
    server.fail_next_with_500();
    CHECK_NOTHROW(remote.score_batch(images, 1));

    // unreachable endpoint: TransportError with attempt metadata
    try {
        const HttpOracle dead("http://127.0.0.1:1");
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(e.attempts() == 3);  // first try + 2 default retries
        CHECK(e.status() == 0);    // connection-level failure, no HTTP status
    }
}

TEST_CASE("client-side size validation avoids bad requests") {
    TestServer server;
    const HttpOracle remote(server.url());
    const std::vector<FaceImage> wrong = {FaceImage::filled(8, 8, 1, 0)};
    const int before = server.score_calls();
    CHECK_THROWS_AS(remote.score_batch(wrong, 0), InputError);
    CHECK(server.score_calls() == before);
}

TEST_CASE("vertex sweep works end to end against the remote oracle") {
    TestServer server;
    const HttpOracle remote(server.url());
    const MeanIntensityOracle local(16, 16);
    const FaceImage img = fixtures::noise_image(16, 16, 1, 5);
    const auto corr = fixtures::identity_grid(16, 16, 4);
    const OcclusionSpec spec{3, 0, 4};

    const auto remote_drops = vertex_drops(img, corr, remote, 1, spec, /*workers=*/3);
    const auto local_drops = vertex_drops(img, corr, local, 0, spec);
    REQUIRE(remote_drops.size() == local_drops.size());
    for (std::size_t i = 0; i < remote_drops.size(); ++i)
        CHECK(remote_drops[i].drop == doctest::Approx(local_drops[i].drop).epsilon(1e-12));
}
