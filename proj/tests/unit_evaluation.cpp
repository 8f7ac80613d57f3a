#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

#include "csm/error.hpp"
#include "csm/evaluation.hpp"
#include "csm/png_io.hpp"
#include "support/fixtures.hpp"

using namespace csm;
using fixtures::TempDir;

TEST_CASE("standardize: hand-computed fixture") {
    // h = [0,1,2,3], s = 1: H' = [0, 1/3, 2/3, 1], sum 2 -> H = [0, 1/6, 1/3, 1/2]
    const SaliencyMap h(4, 1, Frame::image, {0.0f, 1.0f, 2.0f, 3.0f});
    const auto H = standardize(h, 1.0);
    CHECK(H.values[0] == doctest::Approx(0.0));
    CHECK(H.values[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(H.values[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(H.values[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("standardize: constant input maps to zero, sum hits s") {
    const SaliencyMap flat(5, 5, Frame::image, std::vector<float>(25, 3.25f));
    const auto H = standardize(flat, 10.0);
    for (double v : H.values) CHECK(v == 0.0);

    Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 3 + int(rng.next_u64() % 40);
        const int hgt = 3 + int(rng.next_u64() % 40);
        const auto m = fixtures::random_map(w, hgt, Frame::image, 100 + trial, -5.0, 9.0);
        const double s = 0.15 * w * hgt;
        const auto std_map = standardize(m, s);
        const double sum = std::accumulate(std_map.values.begin(), std_map.values.end(), 0.0);
        CHECK(std::abs(sum - s) < 1e-6);
        for (double v : std_map.values) CHECK(v >= 0.0);
    }

    CHECK_THROWS_AS(standardize(flat, 0.0), InputError);
    CHECK_THROWS_AS(standardize(flat, -1.0), InputError);
}

TEST_CASE("standardize is invariant to affine input transforms") {
    Rng rng(2);
    const auto base = fixtures::random_map(12, 9, Frame::image, 7);
    const auto ref = standardize(base, 20.0);
    for (int trial = 0; trial < 25; ++trial) {
        const float alpha = static_cast<float>(0.1 + rng.uniform() * 5.0);
        const float beta = static_cast<float>(rng.uniform() * 10.0 - 5.0);
        std::vector<float> scaled(base.values().begin(), base.values().end());
        for (auto& v : scaled) v = alpha * v + beta;
        const auto got = standardize(SaliencyMap(12, 9, Frame::image, scaled), 20.0);
        for (std::size_t i = 0; i < ref.values.size(); ++i)
            CHECK(got.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-5));
    }
}

TEST_CASE("standardize fixed point: already-normalized map with matching sum") {
    const SaliencyMap h(2, 2, Frame::image, {0.0f, 1.0f, 0.5f, 0.5f});
    const auto H = standardize(h, 2.0);  // sum of H' is exactly 2
    CHECK(H.values[0] == doctest::Approx(0.0));
    CHECK(H.values[1] == doctest::Approx(1.0));
    CHECK(H.values[2] == doctest::Approx(0.5));
    CHECK(H.values[3] == doctest::Approx(0.5));
}

TEST_CASE("negative explanation endpoints and rounding") {
    const FaceImage img = fixtures::noise_image(6, 4, 3, 5);

    StandardizedHeatmap zero;
    zero.width = 6;
    zero.height = 4;
    zero.values.assign(24, 0.0);
    CHECK(negative_explanation(img, zero) == img);

    StandardizedHeatmap one = zero;
    one.values.assign(24, 1.0);
    const FaceImage dark = negative_explanation(img, one);
    for (std::uint8_t p : dark.pixels()) CHECK(p == 0);

    // values above 1 are clipped before use
    StandardizedHeatmap big = zero;
    big.values.assign(24, 7.5);
    CHECK(negative_explanation(img, big) == dark);

    // H = 0.5 on white: 127.5 rounds half-up to 128
    const FaceImage white = FaceImage::filled(6, 4, 1, 255);
    StandardizedHeatmap half;
    half.width = 6;
    half.height = 4;
    half.values.assign(24, 0.5);
    const FaceImage mid = negative_explanation(white, half);
    for (std::uint8_t p : mid.pixels()) CHECK(p == 128);

    StandardizedHeatmap wrong;
    wrong.width = 5;
    wrong.height = 4;
    wrong.values.assign(20, 0.0);
    CHECK_THROWS_AS(negative_explanation(img, wrong), ValidationError);
}

TEST_CASE("negative explanation is monotone in the heatmap") {
    const FaceImage img = fixtures::noise_image(8, 8, 1, 3);
    Rng rng(4);
    StandardizedHeatmap h;
    h.width = 8;
    h.height = 8;
    h.values.resize(64);
    for (auto& v : h.values) v = rng.uniform();
    const FaceImage e1 = negative_explanation(img, h);
    // raise one pixel: no output pixel may brighten
    auto raised = h;
    raised.values[37] = std::min(1.0, raised.values[37] + 0.3);
    const FaceImage e2 = negative_explanation(img, raised);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) CHECK(e2.at(x, y) <= e1.at(x, y));
}

TEST_CASE("average drop fixtures") {
    CHECK(average_drop(std::vector<ConfidencePair>{{"a", 0.8, 0.4}}) == doctest::Approx(50.0));
    CHECK(average_drop(std::vector<ConfidencePair>{{"a", 0.5, 0.9}, {"b", 0.3, 0.31}}) == 0.0);
    CHECK(average_drop(std::vector<ConfidencePair>{{"a", 1.0, 0.5}, {"b", 1.0, 1.0}}) ==
          doctest::Approx(25.0));
    CHECK_THROWS_WITH_AS(average_drop(std::vector<ConfidencePair>{{"img7", 0.0, 0.5}}),
                         doctest::Contains("img7"), InputError);
    CHECK_THROWS_AS(average_drop({}), InputError);
}

TEST_CASE("pct increase fixtures") {
    CHECK(pct_increase(std::vector<ConfidencePair>{{"a", 0.8, 0.4}, {"b", 0.5, 0.2}}) == 0.0);
    CHECK(pct_increase(std::vector<ConfidencePair>{{"a", 0.1, 0.4}, {"b", 0.2, 0.5}}) == 100.0);
    CHECK(pct_increase(std::vector<ConfidencePair>{{"a", 0.8, 0.4}, {"b", 0.5, 0.6}}) ==
          doctest::Approx(50.0));
    // strict inequality: equal confidence is not an increase
    CHECK(pct_increase(std::vector<ConfidencePair>{{"a", 0.5, 0.5}}) == 0.0);
}

TEST_CASE("win percentage fixtures") {
    SUBCASE("one method sweeps") {
        std::vector<EvaluationRecord> recs = {{"a", 0.9, {{"A", 0.1}, {"B", 0.5}}},
                                              {"b", 0.8, {{"A", 0.2}, {"B", 0.3}}}};
        const auto wins = win_pct(recs);
        CHECK(wins.at("A") == 100.0);
        CHECK(wins.at("B") == 0.0);
    }
    SUBCASE("split decision") {
        std::vector<EvaluationRecord> recs = {{"a", 0.9, {{"A", 0.1}, {"B", 0.5}}},
                                              {"b", 0.8, {{"A", 0.4}, {"B", 0.3}}}};
        const auto wins = win_pct(recs);
        CHECK(wins.at("A") == 50.0);
        CHECK(wins.at("B") == 50.0);
    }
    SUBCASE("exact ties split fractionally and sum to 100") {
        std::vector<EvaluationRecord> recs = {{"a", 0.9, {{"A", 0.2}, {"B", 0.2}, {"C", 0.9}}},
                                              {"b", 0.8, {{"A", 0.1}, {"B", 0.6}, {"C", 0.7}}}};
        const auto wins = win_pct(recs);
        CHECK(wins.at("A") == doctest::Approx(75.0).epsilon(1e-12));
        CHECK(wins.at("B") == doctest::Approx(25.0).epsilon(1e-12));
        CHECK(wins.at("C") == 0.0);
        double total = 0.0;
        for (const auto& [_, v] : wins) total += v;
        CHECK(total == doctest::Approx(100.0).epsilon(1e-11));
    }
    SUBCASE("missing method entry is an input error") {
        std::vector<EvaluationRecord> recs = {{"a", 0.9, {{"A", 0.1}, {"B", 0.5}}},
                                              {"b", 0.8, {{"A", 0.2}}}};
        CHECK_THROWS_AS(win_pct(recs), InputError);
    }
    SUBCASE("single method always wins") {
        std::vector<EvaluationRecord> recs = {{"a", 0.9, {{"only", 0.4}}}};
        CHECK(win_pct(recs).at("only") == 100.0);
    }
}

TEST_CASE("win percentages sum to 100 on random records") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<EvaluationRecord> recs;
        const int n = 1 + int(rng.next_u64() % 40);
        for (int i = 0; i < n; ++i) {
            EvaluationRecord r;
            r.image_id = std::to_string(i);
            r.original = 0.5 + rng.uniform();
            // quantized confidences force frequent exact ties
            for (const char* m : {"A", "B", "C", "D"})
                r.explanation[m] = std::floor(rng.uniform() * 4.0) / 4.0;
            recs.push_back(std::move(r));
        }
        const auto wins = win_pct(recs);
        double total = 0.0;
        for (const auto& [_, v] : wins) total += v;
        CHECK(std::abs(total - 100.0) < 1e-9);
    }
}

TEST_CASE("heatmap import accepts .csm and grayscale images") {
    TempDir dir("import");
    const auto m = fixtures::random_map(9, 7, Frame::image, 3);
    write_saliency(m, dir / "h.csm");
    CHECK(load_heatmap(dir / "h.csm") == m);

    FaceImage gray(2, 1, 1, {0, 255});
    write_png(gray, dir / "h.png");
    const auto loaded = load_heatmap(dir / "h.png");
    CHECK(loaded.at(0, 0) == 0.0f);
    CHECK(loaded.at(1, 0) == 1.0f);
}

TEST_CASE("evaluation report carries metrics per method") {
    std::vector<EvaluationRecord> recs = {{"a", 0.8, {{"ours", 0.4}, {"other", 0.6}}},
                                          {"b", 1.0, {{"ours", 0.5}, {"other", 1.2}}}};
    const auto report = evaluation_report(recs, nlohmann::json{{"sz", 15}}, "test-oracle");
    CHECK(report["oracle"] == "test-oracle");
    CHECK(report["images"] == 2);
    CHECK(report["methods"]["ours"]["avg_drop"] == doctest::Approx(50.0));
    CHECK(report["methods"]["ours"]["win_pct"] == doctest::Approx(100.0));
    CHECK(report["methods"]["other"]["pct_increase"] == doctest::Approx(50.0));
    CHECK(report["config"]["sz"] == 15);
}
