#include <cmath>
#include <random>

#include "doctest.h"
#include "oncoclass/model.hpp"
#include "oncoclass/preprocess.hpp"
#include "support.hpp"

using namespace oncoclass;

TEST_CASE("prediction from scores") {
    auto p = Prediction::from_scores(1.0, 3.0);
    CHECK(p.label == 1);
    CHECK(p.probs[0] == 0.25);
    p = Prediction::from_scores(2.0, 2.0);
    CHECK(p.label == 0);  // tie goes to the first label
    p = Prediction::from_scores(0.0, 0.0);
    CHECK(p.probs == std::array<double, 2>{0.5, 0.5});
    p = Prediction::from_log_scores(-1000.0, -1001.0);
    CHECK(p.label == 0);
    CHECK(p.probs[0] + p.probs[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.probs[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
    p = Prediction::from_log_scores(-INFINITY, 0.0);
    CHECK(p.label == 1);
    CHECK(p.probs[1] == 1.0);
}

TEST_CASE("seed streams are reproducible and distinct") {
    SeedSpec a{42, 7}, b{42, 7}, c{42, 8}, d{43, 7};
    auto ea = a.engine(), eb = b.engine(), ec = c.engine(), ed = d.engine();
    const auto va = ea();
    CHECK(va == eb());
    CHECK(va != ec());
    CHECK(va != ed());
    CHECK(a.child(1).engine()() == b.child(1).engine()());
    CHECK(a.child(1).engine()() != a.child(2).engine()());
    CHECK(stream_id("bayes-net") == stream_id("bayes-net"));
    CHECK(stream_id("bayes-net") != stream_id("naive-bayes"));
    // FNV-1a 64 of the empty string is the offset basis: a fixed, platform-independent value.
    CHECK(stream_id("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("params lookups") {
    Params p;
    p.set("k", 3);
    p.set("frac", 0.5);
    p.set("neg", -1);
    CHECK(p.get("k", 1) == 3);
    CHECK(p.get("missing", 9) == 9);
    CHECK(p.get_count("k", 1) == 3);
    CHECK_THROWS_AS(p.get_count("frac", 1), ConfigError);
    CHECK_THROWS_AS(p.get_count("neg", 1), ConfigError);
    CHECK(p.get_flag("k", false));
    CHECK_FALSE(p.get_flag("missing", false));
}

TEST_CASE("discretizer on 1..8 with four bins") {
    const auto t = testutil::training_set({{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}}, {0, 0, 0, 0, 1, 1, 1, 1});
    const auto d = fit_discretizer(t, 4);
    CHECK(d.cuts(0) == std::vector<double>{2.75, 4.5, 6.25});
    CHECK(d.bins(0) == 4);
    const std::vector<std::size_t> expected{0, 0, 1, 1, 2, 2, 3, 3};
    for (std::size_t i = 0; i < 8; ++i) CHECK(d.bin(0, i + 1.0) == expected[i]);
    CHECK(d.bin(0, -1e9) == 0);
    CHECK(d.bin(0, 1e9) == 3);
    CHECK_THROWS_AS(fit_discretizer(t, 1), std::invalid_argument);
}

TEST_CASE("discretizer degenerate and symmetric features") {
    const auto t = testutil::training_set({{5, -2}, {5, -1}, {5, 1}, {5, 2}}, {0, 0, 1, 1});
    const auto d = fit_discretizer(t, 4);
    CHECK(d.bins(0) == 1);
    CHECK(d.bin(0, 5) == 0);
    CHECK(d.bin(0, 100) == 0);
    const auto d2 = fit_discretizer(t, 2);
    CHECK(d2.cuts(1) == std::vector<double>{0.0});
}

TEST_CASE("discretizer cut points strictly increase and occupancy is balanced") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0, 1);
    std::uniform_int_distribution<int> coarse(0, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng() % 60;
        std::vector<std::vector<double>> rows(n);
        for (auto& r : rows) r = {g(rng), static_cast<double>(coarse(rng))};
        const auto t = testutil::training_set(rows, std::vector<std::size_t>(n, 0));
        for (std::size_t k : {2u, 3u, 4u, 7u}) {
            const auto d = fit_discretizer(t, k);
            for (std::size_t f = 0; f < 2; ++f) {
                const auto& c = d.cuts(f);
                for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
                CHECK(d.bins(f) <= k);
                // Every bin holds at least one training value.
                std::vector<std::size_t> occ(d.bins(f), 0);
                for (std::size_t i = 0; i < n; ++i) ++occ[d.bin(f, t.x(i, f))];
                for (auto o : occ) CHECK(o > 0);
                if (f == 0) {
                    // Continuous feature: no ties, occupancy within one sample of n/k plus
                    // interpolation slack of one more.
                    for (auto o : occ) CHECK(o <= n / k + 2);
                }
            }
        }
    }
}

TEST_CASE("probabilistic rmse") {
    std::vector<Prediction> perfect{{0, {1, 0}}, {1, {0, 1}}};
    const std::vector<std::size_t> truth{0, 1};
    CHECK(rmse_probabilistic(perfect, truth) == 0.0);
    std::vector<Prediction> flat{{0, {0.5, 0.5}}, {0, {0.5, 0.5}}};
    CHECK(rmse_probabilistic(flat, truth) == 0.5);
    std::vector<Prediction> wrong{{1, {0, 1}}, {0, {1, 0}}};
    CHECK(rmse_probabilistic(wrong, truth) == 1.0);
    CHECK_THROWS_AS(rmse_probabilistic(flat, std::vector<std::size_t>{0}), std::invalid_argument);
    CHECK_THROWS_AS(rmse_probabilistic({}, {}), std::invalid_argument);
}
