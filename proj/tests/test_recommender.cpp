#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "haggle/pricing.hpp"
#include "haggle/recommend.hpp"
#include "haggle/rng.hpp"

using namespace haggle;

namespace {

PreferenceDistribution identityDist(std::vector<double> mu, std::vector<double> sd) {
    int n = static_cast<int>(mu.size());
    Eigen::VectorXd m(n);
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m[i] = mu[static_cast<std::size_t>(i)];
        sigma(i, i) = sd[static_cast<std::size_t>(i)] * sd[static_cast<std::size_t>(i)];
    }
    return PreferenceDistribution(std::move(m), std::move(sigma), std::move(corr));
}

}  // namespace

TEST_CASE("predicted remaining rounds extrapolates the concession pace") {
    CHECK(predictRemainingRounds({100.0, 50.0, 40.0}) == doctest::Approx(6.0));
    // Stalled bids predict no deal in finite time.
    CHECK(std::isinf(predictRemainingRounds({100.0, 50.0, 50.0})));
    // A bid at or above the shop's valuation predicts an immediate deal.
    CHECK(predictRemainingRounds({100.0, 120.0, 90.0}) == 0.0);
    CHECK(predictRemainingRounds({100.0, 100.0, 90.0}) == 0.0);
}

TEST_CASE("recommendation trigger edge cases") {
    Pcg32 rng(1, 1);
    for (int i = 0; i < 2000; ++i) CHECK(!shouldRecommend(0.0, 0.25, rng));
    for (int i = 0; i < 2000; ++i) CHECK(shouldRecommend(std::numeric_limits<double>::infinity(), 0.25, rng));
}

TEST_CASE("recommendation trigger frequency tracks 1 - exp(-rate * dt)") {
    Pcg32 rng(77, 3);
    long hits = 0;
    const long trials = 100000;
    for (long i = 0; i < trials; ++i)
        if (shouldRecommend(4.0, 0.25, rng)) ++hits;
    double freq = static_cast<double>(hits) / trials;
    CHECK(std::abs(freq - (1.0 - std::exp(-1.0))) < 0.01);
}

TEST_CASE("response classification bands") {
    // Closeness ratio r = bestGap / currentGap against 1 + threshold.
    // best gap 10, current gap 9 -> r = 1.11 > 1.1
    CHECK(classifyResponse(91.0, 100.0, 90.0, 100.0, 0.1) == Response::VeryPromising);
    // equal gaps -> r = 1, lower edge of the middle band
    CHECK(classifyResponse(90.0, 100.0, 90.0, 100.0, 0.1) == Response::Promising);
    // wider gap than the best -> not promising at all
    CHECK(classifyResponse(85.0, 100.0, 90.0, 100.0, 0.1) == Response::NotPromising);
    // bid at or past the ask: deal-grade regardless of history
    CHECK(classifyResponse(100.0, 100.0, 90.0, 100.0, 0.1) == Response::VeryPromising);
    CHECK(classifyResponse(105.0, 100.0, 90.0, 100.0, 0.1) == Response::VeryPromising);
    // infinite threshold disables the top band entirely (but not the crossing rule)
    double inf = std::numeric_limits<double>::infinity();
    CHECK(classifyResponse(91.0, 100.0, 90.0, 100.0, inf) == Response::Promising);
    CHECK(classifyResponse(85.0, 100.0, 90.0, 100.0, inf) == Response::NotPromising);
}

TEST_CASE("score is linear in the shop valuation") {
    PreferenceDistribution dist = identityDist({100.0, 50.0, 50.0, 80.0}, {10.0, 5.0, 5.0, 8.0});
    Bundle interest(0b0001, 4), cand(0b0011, 4);
    double shift = 13.0;
    Recommender recA(dist, [](const Bundle&) { return 40.0; }, interest, {});
    Recommender recB(dist, [shift](const Bundle&) { return 40.0 + shift; }, interest, {});
    double a = recA.scoreBundle(cand, interest, 95.0);
    double b = recB.scoreBundle(cand, interest, 95.0);
    CHECK(a - b == doctest::Approx(shift).epsilon(1e-12));
}

TEST_CASE("self-conditioning raises the score above the unconditional baseline") {
    PreferenceDistribution dist = identityDist({100.0, 60.0}, {10.0, 6.0});
    Bundle b(0b11, 2);
    Recommender rec(dist, [](const Bundle&) { return 100.0; }, b, {});
    double conditioned = rec.scoreBundle(b, b, 165.0);
    double unconditional = dist.bundleMean(b) - 100.0;
    CHECK(conditioned > unconditional);

    // Monte Carlo oracle for the same quantity (rejection sampling).
    Pcg32 rng(9, 9);
    double sum = 0.0;
    long kept = 0;
    for (long i = 0; i < 1000000; ++i) {
        double x0 = 100.0 + 10.0 * rng.normal();
        double x1 = 60.0 + 6.0 * rng.normal();
        if (x0 + x1 >= 165.0) {
            sum += x0 + x1;
            ++kept;
        }
    }
    double mc = sum / static_cast<double>(kept) - 100.0;
    CHECK(conditioned == doctest::Approx(mc).epsilon(0.005));
}

TEST_CASE("vacuous conditioning falls back to the unconditional expectation") {
    PreferenceDistribution dist = identityDist({100.0, 60.0}, {10.0, 6.0});
    Bundle b(0b11, 2);
    Recommender rec(dist, [](const Bundle&) { return 100.0; }, b, {});
    // Cutoff far beyond reach: alpha > 8.
    double score = rec.scoreBundle(b, b, 1000.0);
    CHECK(score == doctest::Approx(dist.bundleMean(b) - 100.0));
}

TEST_CASE("recommendation set is score-ordered with canonical tie-break") {
    PreferenceDistribution dist = identityDist({100.0, 50.0, 50.0, 80.0}, {10.0, 5.0, 5.0, 8.0});
    ShopPricing pricing(dist, 0.7, 0.3);
    Bundle interest(0b0001, 4);
    Recommender rec(dist, pricing.asFunction(), interest, {});
    std::vector<Bundle> set = rec.buildRecommendationSet(interest, 95.0);
    REQUIRE(set.size() == 3);  // singleton: n - 1 neighbors
    // Goods 1 and 2 are interchangeable (same mean, sd, price): equal scores,
    // so the lower mask wins; good 3's higher price more than eats its mean.
    CHECK(set[0].mask() == 0b0011);
    CHECK(set[1].mask() == 0b0101);
    CHECK(set[2].mask() == 0b1001);

    double s0 = rec.scoreBundle(set[0], interest, 95.0);
    double s1 = rec.scoreBundle(set[1], interest, 95.0);
    double s2 = rec.scoreBundle(set[2], interest, 95.0);
    CHECK(s0 == doctest::Approx(s1).epsilon(1e-12));
    CHECK(s1 > s2);
}

TEST_CASE("ordering flips when the price difference outweighs the expectation difference") {
    PreferenceDistribution dist = identityDist({100.0, 90.0, 85.0}, {10.0, 9.0, 8.5});
    Bundle interest(0b001, 3);
    Bundle withGood1(0b011, 3), withGood2(0b101, 3);

    // Additive pricing: the higher-mean good 1 wins.
    ShopPricing flat(dist, 0.7, 0.0);
    Recommender recFlat(dist, flat.asFunction(), interest, {});
    CHECK(recFlat.scoreBundle(withGood1, interest, 95.0) >
          recFlat.scoreBundle(withGood2, interest, 95.0));

    // Strong relative markup: good 1's bundle becomes expensive enough to lose.
    ShopPricing steep(dist, 0.7, 0.6);
    Recommender recSteep(dist, steep.asFunction(), interest, {});
    CHECK(recSteep.scoreBundle(withGood1, interest, 95.0) <
          recSteep.scoreBundle(withGood2, interest, 95.0));
}

TEST_CASE("counter classification drives interest updates and queue refills") {
    PreferenceDistribution dist = identityDist({100.0, 50.0, 50.0, 80.0}, {10.0, 5.0, 5.0, 8.0});
    ShopPricing pricing(dist, 0.7, 0.3);
    Bundle initial(0b0001, 4);

    auto freshRec = [&]() {
        Recommender rec(dist, pricing.asFunction(), initial, {});
        // Two exchanges on the initial bundle; best recorded gap = 120 - 90 = 30.
        rec.recordCustomerOffer(initial, 85.0, std::nullopt);
        rec.recordCustomerOffer(initial, 90.0, 120.0);
        return rec;
    };

    SUBCASE("a clearly better counter adopts the bundle as the new interest") {
        Recommender rec = freshRec();
        Pcg32 rng(1, 2);
        auto b1 = rec.popNext(rng);
        REQUIRE(b1.has_value());
        rec.attachAsk(*b1, 130.0);
        CounterOutcome out = rec.classifyCounter(110.0);  // gap 20 < 30
        CHECK(out.response == Response::VeryPromising);
        CHECK(out.interestUpdated);
        CHECK(!out.recommendNext);
        CHECK(rec.interestBundle() == *b1);
        // The refilled queue leads with the new interest's neighborhood.
        auto queued = rec.queuedBundles();
        REQUIRE(!queued.empty());
        auto ng = neighborhood(*b1);
        CHECK(std::find(ng.begin(), ng.end(), queued.front()) != ng.end());
        // No duplicates, nothing already proposed.
        std::set<std::uint32_t> seen;
        for (const Bundle& q : queued) {
            CHECK(!rec.wasProposed(q));
            CHECK(!seen.count(q.mask()));
            seen.insert(q.mask());
        }
    }

    SUBCASE("a level counter keeps negotiating without touching the state") {
        Recommender rec = freshRec();
        Pcg32 rng(1, 2);
        auto b1 = rec.popNext(rng);
        auto queuedBefore = rec.queuedBundles();
        rec.attachAsk(*b1, 130.0);
        CounterOutcome out = rec.classifyCounter(100.0);  // gap 30 == best 30
        CHECK(out.response == Response::Promising);
        CHECK(!out.interestUpdated);
        CHECK(!out.recommendNext);
        CHECK(rec.interestBundle() == initial);
        CHECK(rec.queuedBundles().size() == queuedBefore.size());
    }

    SUBCASE("an unpromising counter requests the immediate next recommendation") {
        Recommender rec = freshRec();
        Pcg32 rng(1, 2);
        auto b1 = rec.popNext(rng);
        auto queuedBefore = rec.queuedBundles();
        rec.attachAsk(*b1, 130.0);
        CounterOutcome out = rec.classifyCounter(95.0);  // gap 35 > best 30
        CHECK(out.response == Response::NotPromising);
        CHECK(out.recommendNext);
        CHECK(rec.interestBundle() == initial);
        auto b2 = rec.popNext(rng);
        REQUIRE(b2.has_value());
        CHECK(*b2 == queuedBefore.front());
        CHECK(rec.wasProposed(*b2));
    }
}

TEST_CASE("a bundle is never recommended twice and exhaustion returns nothing") {
    PreferenceDistribution dist = identityDist({100.0, 50.0, 50.0, 80.0}, {10.0, 5.0, 5.0, 8.0});
    ShopPricing pricing(dist, 0.7, 0.3);
    Bundle initial(0b0011, 4);
    for (ChoicePolicy policy : {ChoicePolicy::Scored, ChoicePolicy::UniformRandom}) {
        RecommenderConfig cfg;
        cfg.policy = policy;
        Recommender rec(dist, pricing.asFunction(), initial, cfg);
        rec.recordCustomerOffer(initial, 80.0, std::nullopt);
        rec.recordCustomerOffer(initial, 90.0, 140.0);
        Pcg32 rng(5, 6);
        std::set<std::uint32_t> popped;
        while (auto b = rec.popNext(rng)) {
            CHECK(!popped.count(b->mask()));
            popped.insert(b->mask());
        }
        CHECK(popped.size() == 4);  // |Ng| of a 2-of-4 bundle
        CHECK(!rec.popNext(rng).has_value());
    }
}

TEST_CASE("benchmark picks uniformly among unproposed neighbors") {
    std::vector<double> mu, sd;
    for (int i = 0; i < 10; ++i) {
        mu.push_back(100.0 + 10.0 * i);
        sd.push_back(8.0);
    }
    PreferenceDistribution dist = identityDist(mu, sd);
    ShopPricing pricing(dist, 0.7, 0.3);
    Bundle initial(0b0000011111, 10);

    std::map<std::uint32_t, long> counts;
    Pcg32 rng(123, 7);
    const long trials = 10000;
    for (long i = 0; i < trials; ++i) {
        RecommenderConfig cfg;
        cfg.policy = ChoicePolicy::UniformRandom;
        Recommender rec(dist, pricing.asFunction(), initial, cfg);
        rec.recordCustomerOffer(initial, 300.0, std::nullopt);
        auto b = rec.popNext(rng);
        REQUIRE(b.has_value());
        ++counts[b->mask()];
    }
    REQUIRE(counts.size() == 10);
    for (const auto& [mask, count] : counts)
        CHECK(std::abs(static_cast<double>(count) / trials - 0.1) < 0.02);
}

TEST_CASE("benchmark with one remaining neighbor returns it deterministically") {
    PreferenceDistribution dist = identityDist({100.0, 50.0, 50.0, 80.0}, {10.0, 5.0, 5.0, 8.0});
    ShopPricing pricing(dist, 0.7, 0.3);
    Bundle initial(0b0011, 4);
    RecommenderConfig cfg;
    cfg.policy = ChoicePolicy::UniformRandom;
    Recommender rec(dist, pricing.asFunction(), initial, cfg);
    Pcg32 rng(9, 1);
    std::set<std::uint32_t> first3;
    for (int i = 0; i < 3; ++i) first3.insert(rec.popNext(rng)->mask());
    auto last = rec.popNext(rng);
    REQUIRE(last.has_value());
    for (const Bundle& nb : neighborhood(initial))
        if (!first3.count(nb.mask())) CHECK(nb == *last);
}

TEST_CASE("first pop under the scored policy is the neighborhood argmax") {
    PreferenceDistribution dist = generateDistribution(321, 10);
    ShopPricing pricing(dist, 0.7, 0.3);
    Bundle initial(0b1010110000, 10);
    Recommender rec(dist, pricing.asFunction(), initial, {});
    rec.recordCustomerOffer(initial, dist.bundleMean(initial) * 0.8, std::nullopt);
    rec.recordCustomerOffer(initial, dist.bundleMean(initial) * 0.85, dist.bundleMean(initial) * 1.2);

    double conditioningPrice = dist.bundleMean(initial) * 0.85;
    Pcg32 rng(2, 2);
    auto first = rec.popNext(rng);
    REQUIRE(first.has_value());

    // Brute-force rescoring of the whole neighborhood.
    Recommender fresh(dist, pricing.asFunction(), initial, {});
    double bestScore = -1e300;
    std::uint32_t bestMask = 0;
    for (const Bundle& nb : neighborhood(initial)) {
        double s = fresh.scoreBundle(nb, initial, conditioningPrice);
        if (s > bestScore + 1e-12 || (std::abs(s - bestScore) <= 1e-12 && nb.mask() < bestMask)) {
            bestScore = s;
            bestMask = nb.mask();
        }
    }
    CHECK(first->mask() == bestMask);
}
