#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csm/confidence_tasks.hpp"
#include "csm/error.hpp"
#include "csm/local_oracles.hpp"
#include "support/fixtures.hpp"

using namespace csm;
using fixtures::TempDir;

TEST_CASE("cosine fixtures") {
    const Embedding u{1, 2, 3};
    CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-12));

    const Embedding ex{1, 0};
    const Embedding ey{0, 1};
    CHECK(cosine(ex, ey) == 0.0);

    const Embedding diag{1, 1};
    CHECK(cosine(ex, diag) == doctest::Approx(0.70710678).epsilon(1e-8));

    CHECK_THROWS_AS(cosine(Embedding{0, 0}, ex), DomainError);
    CHECK_THROWS_AS(cosine(Embedding{1, 2, 3}, ex), InputError);
}

TEST_CASE("cosine symmetry and scale invariance") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        Embedding u(8), v(8);
        for (auto& x : u) x = static_cast<float>(rng.uniform() * 4 - 2);
        for (auto& x : v) x = static_cast<float>(rng.uniform() * 4 - 2);
        const double alpha = 0.01 + rng.uniform() * 10;
        Embedding scaled = u;
        for (auto& x : scaled) x = static_cast<float>(x * alpha);

        const double c = cosine(u, v);
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
        CHECK(cosine(v, u) == c);
        CHECK(cosine(scaled, v) == doctest::Approx(c).epsilon(1e-6));
    }
}

TEST_CASE("gallery invariants and file round-trip") {
    CHECK_THROWS_AS(Gallery({}), ValidationError);
    CHECK_THROWS_AS(Gallery({{0, {0.0f, 0.0f}}}), ValidationError);  // zero norm
    CHECK_THROWS_AS(Gallery({{0, {1.0f}}, {1, {1.0f, 2.0f}}}), ValidationError);

    const Gallery g({{0, {1.0f, 0.0f}}, {1, {0.5f, 0.25f}}, {0, {0.0f, 2.0f}}});
    CHECK(g.has_class(0));
    CHECK(g.has_class(1));
    CHECK_FALSE(g.has_class(2));

    TempDir dir("gal");
    save_gallery(g, dir / "g.gal");
    const Gallery back = load_gallery(dir / "g.gal");
    REQUIRE(back.size() == 3);
    CHECK(back.entry(1).class_id == 1);
    CHECK(back.entry(1).feature == Embedding{0.5f, 0.25f});

    fixtures::write_text(dir / "bad.gal", "2 1\n0 1.0\n");
    CHECK_THROWS_AS(load_gallery(dir / "bad.gal"), ParseError);
    fixtures::write_text(dir / "short.gal", "2 3\n0 1.0 2.0\n");
    CHECK_THROWS_AS(load_gallery(dir / "short.gal"), ValidationError);
}

TEST_CASE("zero-shot confidence takes the class-wise max cosine") {
    const FlattenEmbeddingOracle oracle(2, 2);
    const FaceImage query(2, 2, 1, {10, 0, 0, 0});

    // Entry aligned with the query embedding -> cosine 1.
    const Gallery aligned({{3, {1.0f, 0.0f, 0.0f, 0.0f}}});
    CHECK(zero_shot_confidence(query, 3, aligned, oracle) == doctest::Approx(1.0));

    // Orthogonal entry -> 0.
    const Gallery ortho({{3, {0.0f, 1.0f, 0.0f, 0.0f}}});
    CHECK(zero_shot_confidence(query, 3, ortho, oracle) == doctest::Approx(0.0));

    // Two class-c entries with cosines ~0.3 / ~0.8: the max wins.
    Embedding e1{0.3f, std::sqrt(1.0f - 0.09f), 0.0f, 0.0f};
    Embedding e2{0.8f, std::sqrt(1.0f - 0.64f), 0.0f, 0.0f};
    const Gallery two({{3, e1}, {3, e2}, {9, {1.0f, 0.0f, 0.0f, 0.0f}}});
    CHECK(zero_shot_confidence(query, 3, two, oracle) == doctest::Approx(0.8).epsilon(1e-6));

    CHECK_THROWS_AS(zero_shot_confidence(query, 7, two, oracle), InputError);

    // never outside [-1, 1]
    const double v = zero_shot_confidence(query, 9, two, oracle);
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
}

TEST_CASE("verification confidence follows c * (tau - cos)") {
    const FlattenEmbeddingOracle oracle(2, 2);
    const FaceImage a(2, 2, 1, {10, 20, 30, 40});

    // identical images: cos = 1
    SUBCASE("threshold point gives zero for either label") {
        VerificationPair pair{a, a, +1, 1.0};
        CHECK(verification_confidence(pair, oracle) == doctest::Approx(0.0));
        pair.label = -1;
        CHECK(verification_confidence(pair, oracle) == doctest::Approx(0.0));
    }

    SUBCASE("direct evaluation and antisymmetry") {
        // cos(q1, q2) = 0.9 by construction: unit vectors at angle acos(0.9)
        const float s = std::sqrt(1.0f - 0.81f);
        const FunctionOracle embed_oracle(
            "pairs", 2, 2, 1, [](const FaceImage&, int) { return 0.0; },
            [s](const FaceImage& img) -> Embedding {
                if (img.at(0, 0) == 1) return {1.0f, 0.0f};
                return {0.9f, s};
            });
        const FaceImage q1(2, 2, 1, {1, 0, 0, 0});
        const FaceImage q2(2, 2, 1, {2, 0, 0, 0});

        VerificationPair genuine{q1, q2, +1, 0.5};
        CHECK(verification_confidence(genuine, embed_oracle) ==
              doctest::Approx(-0.4).epsilon(1e-6));

        VerificationPair impostor{q1, q2, -1, 0.5};
        CHECK(verification_confidence(impostor, embed_oracle) ==
              doctest::Approx(0.4).epsilon(1e-6));

        // label antisymmetry is exact
        CHECK(verification_confidence(genuine, embed_oracle) ==
              -verification_confidence(impostor, embed_oracle));

        // flipped convention swaps the sign mapping
        CHECK(verification_confidence(genuine, embed_oracle, SignConvention::flipped) ==
              doctest::Approx(0.4).epsilon(1e-6));
    }

    SUBCASE("bad labels are rejected") {
        VerificationPair bad{a, a, 0, 0.5};
        CHECK_THROWS_AS(verification_confidence(bad, oracle), InputError);
    }
}

TEST_CASE("paired_cis occludes both images and is zero for identical pairs") {
    const int W = 16, H = 16;
    const FlattenEmbeddingOracle oracle(W, H);
    const FaceImage img = fixtures::gradient_image(W, H);
    const auto corr = fixtures::identity_grid(W, H, 3);

    const VerificationPair pair{img, img, +1, 0.5};
    const SaliencyMap map = paired_cis(pair, corr, corr, W, H, oracle, {3, 0, 16});
    CHECK(map.frame() == Frame::canonical);
    // both sides occluded identically -> cosine stays 1 -> all drops zero
    for (float v : map.values()) CHECK(v == 0.0f);
}

TEST_CASE("paired_cis with q1 = q2 equals CIS of the pair-confidence wrapper") {
    const int W = 16, H = 16;
    const FlattenEmbeddingOracle oracle(W, H);
    const FaceImage img = fixtures::noise_image(W, H, 1, 77);
    const auto corr = fixtures::identity_grid(W, H, 4);
    const OcclusionSpec spec{3, 0, 16};
    const double tau = 0.5;

    const VerificationPair pair{img, img, +1, tau};
    const SaliencyMap paired = paired_cis(pair, corr, corr, W, H, oracle, spec);

    // Wrapper phi(J) = verification_confidence((J, J)) — degenerate but exact.
    const FunctionOracle wrapper("wrap", W, H, 1, [&](const FaceImage& j, int) {
        VerificationPair p{j, j, +1, tau};
        return verification_confidence(p, oracle);
    });
    const SaliencyMap single = compute_cis(img, corr, W, H, wrapper, 0, spec);
    CHECK(paired == single);
}

TEST_CASE("paired_cis mass concentrates at a planted q1 feature") {
    const int W = 24, H = 24;
    // Embedding reads only a disk around (8, 8) of q1-like images.
    const FunctionOracle oracle(
        "disk-embed", W, H, 1, [](const FaceImage&, int) { return 0.0; },
        [](const FaceImage& img) -> Embedding {
            Embedding e;
            for (int y = 6; y <= 10; ++y)
                for (int x = 6; x <= 10; ++x)
                    e.push_back(static_cast<float>(img.at(x, y)) + 1.0f);
            return e;
        });
    const FaceImage q1 = fixtures::noise_image(W, H, 1, 5);
    const FaceImage q2 = fixtures::noise_image(W, H, 1, 6);
    const auto corr = fixtures::identity_grid(W, H, 2, 1);
    const OcclusionSpec spec{3, 0, 32};
    const VerificationPair pair{q1, q2, +1, 0.5};
    const SaliencyMap map = paired_cis(pair, corr, corr, W, H, oracle, spec);

    double inside = 0.0, total = 0.0;
    const int fsz = canonical_patch_size(spec.sz, H, H);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            const double m = std::abs(map.at(x, y));
            total += m;
            if (std::max(std::abs(x - 8), std::abs(y - 8)) <= 2 + 2 * fsz) inside += m;
        }
    REQUIRE(total > 0.0);
    CHECK(inside / total >= 0.9);
}

TEST_CASE("paired_cis validates correspondence compatibility") {
    const int W = 8, H = 8;
    const FlattenEmbeddingOracle oracle(W, H);
    const FaceImage img = FaceImage::filled(W, H, 1, 100);
    const auto corr8 = fixtures::identity_grid(W, H, 2);
    const auto corr4 = fixtures::identity_grid(W, H, 4);
    const VerificationPair pair{img, img, +1, 0.5};
    CHECK_THROWS_AS(paired_cis(pair, corr8, corr4, W, H, oracle, {3, 0, 8}), ValidationError);
}
