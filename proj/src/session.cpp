#include "haggle/session.hpp"

#include <algorithm>

namespace haggle {

Bundle openingBundle(const ValuationTable& customer) {
    double mean = customer.meanGoodValue();
    std::uint32_t mask = 0;
    for (int i = 0; i < customer.goods(); ++i)
        if (customer.good(i) < mean) mask |= 1u << i;
    if (mask != 0) return Bundle(mask, customer.goods());
    int lowest = 0;
    for (int i = 1; i < customer.goods(); ++i)
        if (customer.good(i) < customer.good(lowest)) lowest = i;
    return Bundle::singleton(lowest, customer.goods());
}

NegotiationOutcome runSession(const SessionConfig& cfg, const PreferenceDistribution& dist,
                              const ValuationTable& customerValues, const ShopValuation& shopValue,
                              Bidder& customer, Bidder& shop, SessionStreams& streams) {
    NegotiationOutcome out;
    Bundle current = openingBundle(customerValues);
    customer.begin(customerValues.value(current));
    shop.begin(shopValue(current));

    std::optional<Recommender> rec;
    if (cfg.recommenderEnabled) rec.emplace(dist, shopValue, current, cfg.recommender);

    std::optional<double> standingAsk;  // shop's last ask, always on `current`

    auto finish = [&](EndReason reason, int rounds, std::optional<Bundle> bundle,
                      std::optional<double> price) {
        out.rounds = rounds;
        out.endReason = reason;
        out.dealReached = reason == EndReason::Deal;
        out.finalBundle = bundle;
        out.finalPrice = price;
        if (rec) out.interestUpdates = rec->interestUpdates();
    };

    for (int t = 0; t < cfg.maxRounds; ++t) {
        double customerValue = customerValues.value(current);
        double plannedBid = customer.planBid(customerValue, t);

        // Customer accepts the standing ask when it is no worse than what she
        // was about to offer herself.
        if (standingAsk && *standingAsk <= plannedBid) {
            out.transcript.push_back(
                {t, Actor::Customer, EventKind::Accept, current, *standingAsk, {}, {}});
            finish(EndReason::Deal, t + 1, current, *standingAsk);
            return out;
        }

        double bid = plannedBid;
        out.transcript.push_back({t, Actor::Customer, EventKind::Offer, current, bid, {}, {}});
        shop.observeOpponent(bid - shopValue(current));

        // Shop accepts a bid at or above his next planned ask.
        double plannedAsk = shop.planBid(shopValue(current), t);
        if (bid >= plannedAsk) {
            out.transcript.push_back({t, Actor::Shop, EventKind::Accept, current, bid, {}, {}});
            finish(EndReason::Deal, t + 1, current, bid);
            return out;
        }

        // Exogenous breakdown, drawn once per loop iteration.
        if (streams.breakdown.uniform01() < cfg.breakdownProbability) {
            out.transcript.push_back({t, Actor::None, EventKind::Breakdown, current, {}, {}, {}});
            finish(EndReason::Breakdown, t + 1, std::nullopt, std::nullopt);
            return out;
        }

        // Decide what bundle the shop's response concerns.
        Bundle next = current;
        bool isRecommendation = false;
        bool isRevisit = false;
        if (rec) {
            bool wantPop = false;
            if (rec->hasOutstanding() && rec->outstandingBundle() == current) {
                CounterOutcome counter = rec->classifyCounter(bid);
                out.transcript.push_back({t, Actor::Shop, EventKind::Classification, current, {}, {},
                                          static_cast<int>(counter.response)});
                wantPop = counter.recommendNext;
            } else {
                rec->recordCustomerOffer(current, bid, standingAsk);
                if (auto snap = rec->progress(current)) {
                    double deltaT = predictRemainingRounds(*snap);
                    if (shouldRecommend(deltaT, cfg.recommender.rate, streams.trigger)) wantPop = true;
                }
            }
            if (wantPop) {
                if (auto candidate = rec->popNext(streams.choice)) {
                    // A re-proposable bundle (the customer's own opener) can
                    // come back while already on the table; that is a plain
                    // continuation, not a recommendation.
                    if (*candidate != current) {
                        next = *candidate;
                        isRecommendation = true;
                    }
                } else if (auto best = rec->bestRecordedBundle(); best && *best != current) {
                    // Candidates exhausted: bargain on the best exchange so far.
                    next = *best;
                    isRevisit = true;
                }
            }
        }

        double ask = shop.planBid(shopValue(next), t);
        EventKind kind = isRecommendation ? EventKind::Recommend
                                          : (isRevisit ? EventKind::Revisit : EventKind::Offer);
        out.transcript.push_back(
            {t, Actor::Shop, kind, next, ask, isRecommendation && rec ? rec->lastScore() : std::nullopt, {}});
        if (isRecommendation) {
            rec->attachAsk(next, ask);
            ++out.recommendationsMade;
        }
        customer.observeOpponent(customerValues.value(next) - ask);
        current = next;
        standingAsk = ask;
    }

    out.transcript.push_back({cfg.maxRounds, Actor::None, EventKind::RoundCap, current, {}, {}, {}});
    finish(EndReason::RoundCap, cfg.maxRounds, std::nullopt, std::nullopt);
    return out;
}

}  // namespace haggle
