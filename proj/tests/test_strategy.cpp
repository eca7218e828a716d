#include <doctest.h>

#include <cmath>

#include "haggle/rng.hpp"
#include "haggle/strategy.hpp"
#include "haggle/validate.hpp"

using namespace haggle;

TEST_CASE("time-dependent opening offers sit at the parameterized gap") {
    StrategyParams customer{StrategyKind::TimeDependentFraction, Role::Customer, 0.5, 0.2};
    auto cb = makeBidder(customer);
    cb->begin(100.0);
    // Largest opening gap: the customer starts at half her valuation.
    CHECK(cb->planBid(100.0, 0) == doctest::Approx(50.0));

    StrategyParams shop{StrategyKind::TimeDependentFraction, Role::Shop, 0.5, 0.1};
    auto sb = makeBidder(shop);
    sb->begin(100.0);
    // ... and the shop at one and a half times his.
    CHECK(sb->planBid(100.0, 0) == doctest::Approx(150.0));
}

TEST_CASE("time-dependent bids close in on the valuation") {
    StrategyParams p{StrategyKind::TimeDependentFraction, Role::Customer, 0.4, 0.25};
    auto bidder = makeBidder(p);
    bidder->begin(80.0);
    double prev = -1e18;
    for (int t = 0; t <= 60; ++t) {
        double bid = bidder->planBid(80.0, t);
        CHECK(bid >= prev);          // monotone in t for a fixed bundle
        CHECK(bid <= 80.0 + 1e-12);  // never beyond the valuation
        CHECK(bid == doctest::Approx(80.0 * (1.0 - 0.4 * std::exp(-0.25 * t))));
        prev = bid;
    }
    CHECK(bidder->planBid(80.0, 400) == doctest::Approx(80.0).epsilon(1e-9));
}

TEST_CASE("time-dependent shop asks fall toward the valuation") {
    StrategyParams p{StrategyKind::TimeDependentFraction, Role::Shop, 0.3, 0.1};
    auto bidder = makeBidder(p);
    bidder->begin(200.0);
    double prev = 1e18;
    for (int t = 0; t <= 60; ++t) {
        double ask = bidder->planBid(200.0, t);
        CHECK(ask <= prev);
        CHECK(ask >= 200.0 - 1e-12);
        prev = ask;
    }
}

TEST_CASE("the gap fraction is time-dependent but not bundle-dependent") {
    StrategyParams p{StrategyKind::TimeDependentFraction, Role::Customer, 0.5, 0.1};
    auto bidder = makeBidder(p);
    bidder->begin(100.0);
    // Switching to a differently valued bundle at the same round applies the
    // same fraction to the new valuation.
    double fracA = bidder->planBid(100.0, 7) / 100.0;
    double fracB = bidder->planBid(350.0, 7) / 350.0;
    CHECK(fracA == doctest::Approx(fracB).epsilon(1e-12));
}

TEST_CASE("tit-for-tat concedes a fraction of the perceived improvement") {
    // Customer values the bundle at 100 and opens with a 0.1 gap -> level 10.
    StrategyParams p{StrategyKind::TitForTatMonotone, Role::Customer, 0.1, 0.5};
    auto bidder = makeBidder(p);
    bidder->begin(100.0);
    CHECK(bidder->planBid(100.0, 0) == doctest::Approx(90.0));

    bidder->observeOpponent(10.0);  // baseline
    CHECK(bidder->planBid(100.0, 1) == doctest::Approx(90.0));  // first offer sets the bar only

    bidder->observeOpponent(20.0);  // improved by 10 -> concede delta * 10 = 5
    CHECK(bidder->planBid(100.0, 2) == doctest::Approx(95.0));

    bidder->observeOpponent(20.0);  // identical offer: no concession
    CHECK(bidder->planBid(100.0, 3) == doctest::Approx(95.0));

    bidder->observeOpponent(5.0);  // worse offer: no negative concession
    CHECK(bidder->planBid(100.0, 4) == doctest::Approx(95.0));

    bidder->observeOpponent(24.0);  // 4 above the best seen (20) -> concede 2
    CHECK(bidder->planBid(100.0, 5) == doctest::Approx(97.0));
}

TEST_CASE("tit-for-tat never concedes past the own valuation") {
    StrategyParams p{StrategyKind::TitForTatMonotone, Role::Customer, 0.05, 1.0};
    auto bidder = makeBidder(p);
    bidder->begin(100.0);  // level 5
    bidder->observeOpponent(0.0);
    bidder->observeOpponent(1000.0);  // enormous improvement
    CHECK(bidder->planBid(100.0, 2) == doctest::Approx(100.0));  // level clamps at 0
}

TEST_CASE("tit-for-tat demanded net value is monotone under random opponent streams") {
    Pcg32 rng(314, 15);
    for (int trial = 0; trial < 300; ++trial) {
        double gapInit = rng.uniform(0.0, 0.5);
        double delta = rng.uniform(0.1, 1.0);
        Role role = trial % 2 == 0 ? Role::Customer : Role::Shop;
        StrategyParams p{StrategyKind::TitForTatMonotone, role, gapInit, delta};
        auto bidder = makeBidder(p);
        double value = rng.uniform(50.0, 800.0);
        bidder->begin(value);

        double prevLevel = gapInit * value;
        double best = -1e18;
        bool seen = false;
        for (int t = 0; t < 40; ++t) {
            double opp = rng.uniform(-200.0, 300.0);
            bidder->observeOpponent(opp);
            double v = rng.uniform(20.0, 900.0);  // bundle switches between rounds
            double bid = bidder->planBid(v, t);
            double level = role == Role::Customer ? v - bid : bid - v;
            CHECK(level >= -1e-9);             // never beyond the valuation
            CHECK(level <= prevLevel + 1e-9);  // concessions are never taken back
            double improvement = seen ? std::max(0.0, opp - best) : 0.0;
            CHECK(prevLevel - level <= delta * improvement + 1e-9);
            best = seen ? std::max(best, opp) : opp;
            seen = true;
            prevLevel = level;
        }
    }
}

TEST_CASE("drawParams respects ranges and pins the shop decay") {
    Pcg32 rng(8, 8);
    StrategyRanges ranges;
    for (int i = 0; i < 200; ++i) {
        StrategyParams c = drawParams(StrategyKind::TimeDependentFraction, Role::Customer, ranges, rng);
        CHECK(c.gapInit >= 0.0);
        CHECK(c.gapInit <= 0.5);
        CHECK(c.delta >= 0.1);
        CHECK(c.delta <= 0.4);
        StrategyParams s = drawParams(StrategyKind::TimeDependentFraction, Role::Shop, ranges, rng);
        CHECK(s.delta == 0.1);
    }
}

TEST_CASE("strategy invariants hold across full sessions") {
    CheckResult r = checkStrategyInvariants(300, 555);
    INFO(r.detail);
    CHECK(r.passed);
}
