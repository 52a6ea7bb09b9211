#include <doctest.h>

#include <cmath>

#include "qram/glm_analytics.hpp"
#include "qram/rng.hpp"

using namespace qram::glm;

namespace {

LossModel lossless() {
    LossModel loss;
    loss.propagation_loss_straight_db_per_m = 0.0;
    loss.propagation_loss_bend_db_per_m = 0.0;
    loss.detection_efficiency = 1.0;
    loss.path_efficiency = 1.0;
    loss.r_cav = 1.0;
    loss.r_m = 1.0;
    loss.bends_per_layer = 0;
    return loss;
}

TreeConfig tiny_tree(int depth, double reset = 5e-6) { return TreeConfig::layered(depth, 5e-4, 1e-5, 2.3862, 2.4513, reset); }

}  // namespace

TEST_CASE("layer probability covers the documented anchors") {
    const auto cfg = tiny_tree(3);
    CHECK(layer_probability(1, cfg, lossless()) == doctest::Approx(1.0));
    CHECK(layer_probability(3, cfg, lossless()) == doctest::Approx(1.0));

    LossModel partial = lossless();
    partial.r_cav = 0.9;
    // p_3 = eta_r^2 * eta_s = 0.81 * 0.95
    CHECK(layer_probability(3, cfg, partial) == doctest::Approx(0.7695).epsilon(1e-12));

    LossModel lossy = lossless();
    lossy.propagation_loss_straight_db_per_m = 2.7;
    const double expected = std::exp(-2.7 * std::log(10.0) / 10.0 * (2 * 5e-4 + 2 * 1e-5));
    CHECK(layer_probability(1, cfg, lossy) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(layer_probability(4, cfg, lossless()), std::invalid_argument);
}

TEST_CASE("success probability multiplies the layers and matches the closed form") {
    const auto cfg = tiny_tree(4);
    CHECK(success_probability(tiny_tree(1), lossless()) == doctest::Approx(1.0));

    LossModel loss = lossless();
    loss.r_cav = 0.85;
    loss.r_m = 0.92;
    loss.detection_efficiency = 0.74;
    double product = 1.0;
    for (int i = 1; i <= 4; ++i) product *= layer_probability(i, cfg, loss);
    CHECK(success_probability(cfg, loss) == doctest::Approx(product).epsilon(1e-14));
    const double closed = std::pow(loss.eta_r(), 4 * 3 / 2) * std::pow(loss.eta_s(), 4);
    CHECK(success_probability(cfg, loss) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("travel time is linear in the segment lengths") {
    TreeConfig cfg;
    cfg.depth = 1;
    cfg.pic_segment_lengths = {0.0};
    cfg.dmd_segment_lengths = {0.0};
    cfg.group_velocity_pic = 2.998e8 / 2.3862;
    cfg.group_velocity_dmd = 2.998e8 / 2.4513;
    cfg.reset_time = 0.0;
    CHECK(travel_time(1, cfg) == doctest::Approx(0.0));

    cfg.pic_segment_lengths = {1e-3};
    cfg.group_velocity_pic = 299792458.0 / 2.3862;
    CHECK(travel_time(1, cfg) == doctest::Approx(7.96e-12).epsilon(2e-3));

    TreeConfig doubled = cfg;
    doubled.pic_segment_lengths = {2e-3};
    CHECK(travel_time(1, doubled) == doctest::Approx(2.0 * travel_time(1, cfg)).epsilon(1e-12));
}

TEST_CASE("expected query time reduces to the travel sum without loss") {
    const auto cfg = tiny_tree(4);
    double sum = 0.0;
    for (int i = 1; i <= 4; ++i) sum += travel_time(i, cfg);
    CHECK(expected_query_time(cfg, lossless()) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("n = 2 closed form matches the two-layer special case") {
    qram::Rng rng(3);
    for (int it = 0; it < 1000; ++it) {
        const auto cfg = tiny_tree(2, rng.uniform() * 1e-5);
        LossModel loss = lossless();
        loss.r_cav = 0.3 + 0.7 * rng.uniform();
        loss.r_m = 0.3 + 0.7 * rng.uniform();
        loss.detection_efficiency = 0.3 + 0.7 * rng.uniform();
        const double p1 = layer_probability(1, cfg, loss);
        const double p2 = layer_probability(2, cfg, loss);
        const double t1 = travel_time(1, cfg), t2 = travel_time(2, cfg);
        const double special = (t1 + cfg.reset_time) / (p1 * p2) + t2 / p2 - cfg.reset_time;
        REQUIRE(expected_query_time(cfg, loss) == doctest::Approx(special).epsilon(1e-9));
    }
}

TEST_CASE("query rate inverts the expected time and diverges at zero probability") {
    const auto cfg = tiny_tree(2);
    LossModel loss = lossless();
    loss.r_cav = 0.9;
    CHECK(query_rate(cfg, loss) == doctest::Approx(1.0 / expected_query_time(cfg, loss)).epsilon(1e-14));

    LossModel dead = lossless();
    dead.detection_efficiency = 0.0;
    CHECK_THROWS_AS(query_rate(cfg, dead), std::domain_error);
}

TEST_CASE("rate grows monotonically with the cavity reflectance") {
    const auto cfg = tiny_tree(5);
    double prev = 0.0;
    for (double r = 0.5; r <= 1.0; r += 0.05) {
        LossModel loss = lossless();
        loss.r_cav = r;
        const double rate = query_rate(cfg, loss);
        CHECK(rate > prev);
        prev = rate;
    }
}

TEST_CASE("loss detection dominates and converges when resets dwarf travel") {
    const auto cfg = tiny_tree(3);
    CHECK(query_rate(cfg, lossless()) == doctest::Approx(query_rate_no_loss_detection(cfg, lossless())));

    qram::Rng rng(9);
    for (int it = 0; it < 200; ++it) {
        LossModel loss = lossless();
        loss.r_cav = 0.4 + 0.6 * rng.uniform();
        loss.r_m = 0.4 + 0.6 * rng.uniform();
        REQUIRE(query_rate(cfg, loss) >= query_rate_no_loss_detection(cfg, loss) * (1.0 - 1e-12));
    }

    // t_i << tau_reset: the two rates coincide within 5%
    LossModel loss = lossless();
    loss.r_cav = 0.8;
    double max_t = 0.0;
    for (int i = 1; i <= 3; ++i) max_t = std::max(max_t, travel_time(i, cfg));
    TreeConfig slow = cfg;
    slow.reset_time = 1000.0 * max_t;
    CHECK(query_rate(slow, loss) / query_rate_no_loss_detection(slow, loss) < 1.05);
}

TEST_CASE("retry-process oracle agrees with the closed form") {
    for (int n : {1, 2, 3}) {
        const auto cfg = tiny_tree(n);
        LossModel loss = lossless();
        loss.r_cav = 0.9;
        loss.r_m = 0.95;
        loss.detection_efficiency = 0.8;
        const double closed = expected_query_time(cfg, loss);
        const auto stats = simulate_retry_process(cfg, loss, 200000, 77);
        REQUIRE(std::abs(stats.mean - closed) < 3.0 * stats.std_error);
    }
}

TEST_CASE("rate curves stay positive and fall with depth") {
    const double kappa = 2 * 3.141592653589793 * 20.34e9;
    const double gamma = 2 * 3.141592653589793 * 94e6;
    const double omega_c = 2 * 3.141592653589793 * 406.774e12;
    const auto tree = TreeConfig::layered(1, 5e-4, 1e-5, 2.3862, 2.4513, 5e-6);
    LossModel loss = lossless();
    loss.propagation_loss_straight_db_per_m = 2.7;
    loss.propagation_loss_bend_db_per_m = 9.3;
    loss.detection_efficiency = 0.7413;
    loss.bends_per_layer = 2;
    const std::array depths{2, 4, 6, 8};
    const std::array couplings{0.95, 0.995};
    const auto sweep = rate_curve(depths, couplings, 100.0, kappa, gamma, omega_c, tree, loss);
    REQUIRE(sweep.rows.size() == depths.size() * couplings.size());
    double prev = 1e300;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const auto& row = sweep.rows[i];
        CHECK(row[4] > 0.0);
        CHECK(row[5] > 0.0);
        CHECK(row[4] >= row[5] * (1.0 - 1e-12));  // LD dominance per row
        if (i % depths.size() == 0) prev = 1e300;
        CHECK(row[4] < prev);
        prev = row[4];
    }
}

TEST_CASE("config validation rejects malformed trees") {
    TreeConfig bad;
    bad.depth = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(TreeConfig::layered(2, -1.0, 0.0, 2.4, 2.4, 0.0), std::invalid_argument);
}
