#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subedge/harness.hpp"
#include "subedge/serialize.hpp"
#include "subedge/stats.hpp"

using namespace subedge;

namespace {

Graph circulant4(std::size_t n) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 0; v < n; ++v) {
        edges.emplace_back(v, static_cast<VertexId>((v + 1) % n));
        edges.emplace_back(v, static_cast<VertexId>((v + 2) % n));
    }
    return Graph::from_edges(n, edges);
}

SamplerState make_state(const Graph& g, double eps, double x, std::uint64_t seed) {
    SamplerConfig c;
    c.epsilon = eps;
    c.delta = 0.1;
    c.x = x;
    QueryOracle oracle(g, substream_seed(seed, "oracle"));
    Rng rng(substream_seed(seed, "estimator"));
    PreprocessResult pre = preprocess(oracle, c, rng);
    REQUIRE(pre.state.has_value());
    return std::move(*pre.state);
}

} // namespace

TEST_CASE("check_good_set") {
    SUBCASE("the full vertex set is good for any eps") {
        const Graph g = gen::lollipop(8, 20);
        std::vector<VertexId> everyone;
        for (VertexId v = 0; v < g.num_vertices(); ++v) everyone.push_back(v);
        const GoodSetReport rep = check_good_set(g, everyone, 0.01, 3.0, g.avg_degree());
        CHECK(rep.heavy_concentration_ok);
        CHECK(rep.mass_ratio_ok);
        CHECK(rep.good());
        CHECK(rep.heavy_vertices > 0);
    }
    SUBCASE("two leaves of a star need eps >= 1/10") {
        const Graph g = gen::star(11);
        const std::vector<VertexId> s{1, 2};
        // d_S(center)=2 against expectation 2*10/11; relative deviation 1/10.
        CHECK(check_good_set(g, s, 0.11, 5.0, g.avg_degree()).heavy_concentration_ok);
        CHECK_FALSE(check_good_set(g, s, 0.09, 5.0, g.avg_degree()).heavy_concentration_ok);
    }
    SUBCASE("no heavy vertices makes the concentration condition vacuous") {
        const Graph g = gen::star(11);
        const std::vector<VertexId> s{1, 2};
        const GoodSetReport rep = check_good_set(g, s, 0.01, 50.0, g.avg_degree());
        CHECK(rep.heavy_vertices == 0);
        CHECK(rep.heavy_concentration_ok);
    }
    SUBCASE("mass ratio condition uses the true average degree") {
        const Graph g = gen::star(11); // d_avg = 20/11
        // ten center copies: mass 10*10/10 = 10 per element, ratio 5.5 > ... in range?
        std::vector<VertexId> heavy_sample(10, 0);
        const GoodSetReport rep = check_good_set(g, heavy_sample, 0.25, 5.0, g.avg_degree());
        CHECK(rep.mass_per_element == 10.0);
        // 10 <= 12 * (20/11) = 21.8 and 10 >= 0.25 * 1.818
        CHECK(rep.mass_ratio_ok);
        // all-leaf sample: mass 1 per element >= 0.4545 ok; but 60 copies of
        // a leaf... keep a failing case: single leaf repeated, ratio 1/1.818 ok;
        // mass ratio fails only far out, e.g. an edgeless-vertex multiset.
        const Graph h = Graph::from_edges(40, {{0, 1}});
        std::vector<VertexId> idle(10, 5); // degree-0 vertices only
        CHECK_FALSE(check_good_set(h, idle, 0.25, 0.5, h.avg_degree()).mass_ratio_ok);
    }
    SUBCASE("estimate band is reported separately") {
        const Graph g = gen::star(11);
        const std::vector<VertexId> s{1, 2};
        CHECK(check_good_set(g, s, 0.25, 5.0, g.avg_degree()).estimate_ok);
        CHECK(check_good_set(g, s, 0.25, 5.0, 0.9 * g.avg_degree()).estimate_ok);
        CHECK_FALSE(check_good_set(g, s, 0.25, 5.0, 1.01 * g.avg_degree()).estimate_ok);
        CHECK_FALSE(check_good_set(g, s, 0.25, 5.0, 0.5 * g.avg_degree()).estimate_ok);
    }
}

TEST_CASE("harness-side reads bypass the oracle") {
    const Graph g = gen::star(11);
    const SamplerState st = make_state(g, 0.25, 1.0, 5);
    QueryOracle oracle(g, 50);
    const QueryCounters before = oracle.counters();
    (void)check_good_set(g, st.sample, st.epsilon, st.degree_threshold, st.avg_degree_est);
    (void)exact_distribution(g, st);
    CHECK((oracle.counters() - before).total() == 0);
}

TEST_CASE("empirical distribution") {
    SUBCASE("zero samples is an error") {
        const Graph g = circulant4(20);
        const SamplerState st = make_state(g, 0.4, 1.0, 6);
        QueryOracle oracle(g, 7);
        Rng rng(8);
        CHECK_THROWS_AS(empirical_distribution(g, oracle, st, rng, 0), std::invalid_argument);
    }
    SUBCASE("all-light regular graph matches uniform within 4 sigma") {
        const Graph g = circulant4(100);
        const SamplerState st = make_state(g, 0.4, 1.0, 9);
        QueryOracle oracle(g, 10);
        Rng rng(11);
        constexpr std::uint64_t q = 1'000'000;
        const EmpiricalResult emp = empirical_distribution(g, oracle, st, rng, q);
        CHECK(emp.distribution.kind == DistributionKind::empirical);
        CHECK(emp.distribution.sample_count == q);
        CHECK(emp.distribution.sum() == doctest::Approx(1.0).epsilon(1e-12));
        const double p = 1.0 / static_cast<double>(g.num_oriented_edges());
        for (double freq : emp.distribution.mass) {
            const auto count = static_cast<std::uint64_t>(std::llround(freq * static_cast<double>(q)));
            CHECK(std::fabs(stats::binomial_z(count, q, p)) <= 4.5);
        }
        // counter conservation: the sampling queries equal the oracle delta
        CHECK(emp.queries.total() == oracle.counters().total());
        CHECK(emp.mean_iterations <= 192.0 * st.x_effective / st.epsilon);
    }
}

TEST_CASE("verify_run produces a coherent row") {
    const Graph g = gen::star(101);
    SamplerConfig c;
    c.epsilon = 0.25;
    c.delta = 0.1;
    c.x = 1.0;
    const VerifyRow row = verify_run(g, "star:101", c, 77, 2000);
    CHECK(row.preprocess_ok);
    CHECK(row.good_set);
    CHECK(row.estimate_ok);
    CHECK(row.gamma_bar >= 0.25);
    CHECK(row.gamma_bar <= 12.0);
    CHECK(row.pointwise_dev <= 0.5);
    CHECK(row.tvd_value <= row.pointwise_dev + 1e-12);
    CHECK(row.samples == 2000);
    CHECK(row.sample_queries > 0);
    CHECK(row.mean_iterations > 1.0);
    CHECK(row.pass);
    // CSV row has as many fields as the header
    const std::string header = VerifyRow::csv_header();
    const std::string csv = verify_row_to_csv(row);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(csv.begin(), csv.end(), ','));
}

TEST_CASE("chi-square helper matches reference quantiles") {
    CHECK(stats::chi_square_sf(0.0, 10) == doctest::Approx(1.0));
    CHECK(stats::chi_square_sf(9.260, 23) == doctest::Approx(1.0 - 0.005).epsilon(1e-3));
    CHECK(stats::chi_square_sf(38.932, 21) == doctest::Approx(1.0 - 0.99).epsilon(1e-2));
    CHECK(stats::chi_square_sf(96.578, 80) == doctest::Approx(1.0 - 0.9).epsilon(1e-2));

    // uniform observed counts: statistic 0, p 1
    const auto r = stats::chi_square_gof({10, 10, 10, 10}, {10.0, 10.0, 10.0, 10.0});
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("scaling experiment shows sqrt growth inside the trade-off range") {
    // q small enough that x = (n/sqrt m)/sqrt q stays above 1: both the
    // preprocessing and the sampling bills then grow like sqrt(q).
    const Graph g = gen::erdos_renyi(2000, 0.01, 13);
    const std::vector<std::uint64_t> grid{4, 16, 64};
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const ScalingReport rep = scaling_experiment(g, 0.25, 0.1, grid, seeds);

    REQUIRE(rep.median_total.size() == 3);
    REQUIRE(rep.step_factors.size() == 2);
    for (double f : rep.step_factors) {
        CHECK(f >= 1.5);
        CHECK(f <= 2.8);
    }
    CHECK(rep.sqrt_fit_correlation > 0.9);
    for (const ScalingCell& cell : rep.cells) {
        CHECK(cell.x >= 1.0);
        CHECK(cell.total_queries == cell.preprocess_queries + cell.sample_queries);
    }
}

TEST_CASE("clamped trade-off is reported") {
    const Graph g = gen::erdos_renyi(2000, 0.01, 13);
    // q beyond (n/sqrt m)^2 = ~100 forces x to clamp at 1
    const ScalingReport rep = scaling_experiment(g, 0.25, 0.1, {400}, {1, 2, 3});
    for (const ScalingCell& cell : rep.cells) CHECK(cell.x == 1.0);
}

TEST_CASE("per-sample cost tracks the trade-off parameter") {
    // x = n/sqrt(m) gives up the preprocessing advantage: each sample then
    // costs on the order of n/sqrt(m) queries, roughly x times the x=1 cost.
    const Graph g = gen::erdos_renyi(2000, 0.01, 13);
    const double ratio_x = static_cast<double>(g.num_vertices()) /
                           std::sqrt(static_cast<double>(g.num_oriented_edges()));

    auto mean_sample_queries = [&](double x) {
        SamplerConfig c;
        c.epsilon = 0.25;
        c.delta = 0.1;
        c.x = x;
        QueryOracle oracle(g, substream_seed(71, "oracle"));
        Rng est_rng(substream_seed(71, "estimator"));
        PreprocessResult pre = preprocess(oracle, c, est_rng);
        REQUIRE(pre.state.has_value());
        Rng rng(substream_seed(71, "sampling"));
        const QueryCounters before = oracle.counters();
        constexpr std::uint64_t draws = 2000;
        for (std::uint64_t i = 0; i < draws; ++i) sample_edge(oracle, *pre.state, rng);
        return static_cast<double>((oracle.counters() - before).total()) / static_cast<double>(draws);
    };

    const double at_big_x = mean_sample_queries(ratio_x);
    const double at_unit_x = mean_sample_queries(1.0);
    CHECK(at_big_x / at_unit_x >= 0.5 * ratio_x);
    CHECK(at_big_x / at_unit_x <= 2.0 * ratio_x);
}
