#include "haggle/recommend.hpp"

#include <algorithm>
#include <cmath>

namespace haggle {

double predictRemainingRounds(const ProgressSnapshot& snap) {
    if (snap.currentBid >= snap.shopValue) return 0.0;
    if (snap.currentBid <= snap.previousBid) return std::numeric_limits<double>::infinity();
    return (snap.shopValue - snap.previousBid) / (snap.currentBid - snap.previousBid);
}

bool shouldRecommend(double deltaT, double rate, Pcg32& rng) {
    double u = rng.uniform01();
    if (std::isinf(deltaT)) return true;
    return u < 1.0 - std::exp(-rate * deltaT);
}

Response classifyResponse(double customerBid, double shopAsk, double bestCustomerBid,
                          double bestShopAsk, double threshold) {
    double gap = shopAsk - customerBid;
    if (gap <= 0.0) return Response::VeryPromising;  // offers already cross
    double bestGap = bestShopAsk - bestCustomerBid;
    double r = bestGap / gap;
    if (r > 1.0 + threshold) return Response::VeryPromising;
    if (r >= 1.0) return Response::Promising;
    return Response::NotPromising;
}

Recommender::Recommender(const PreferenceDistribution& dist, ShopValuation shopValue,
                         Bundle initialBundle, RecommenderConfig config)
    : dist_(&dist),
      shopValue_(std::move(shopValue)),
      config_(config),
      estimator_(dist),
      interest_(initialBundle) {}

double Recommender::scoreBundle(const Bundle& candidate, const Bundle& interest, double price) {
    double expected;
    try {
        expected = estimator_.expectation(candidate, interest, price);
    } catch (const VacuousConditionError&) {
        expected = estimator_.unconditional(candidate);
    }
    return expected - shopValue_(candidate);
}

std::vector<Recommender::QueueEntry> Recommender::scoredSet(const Bundle& interest, double price) {
    std::vector<QueueEntry> scored;
    for (const Bundle& b : neighborhood(interest)) {
        if (proposed_.count(b.mask())) continue;
        scored.push_back(QueueEntry{b, scoreBundle(b, interest, price)});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const QueueEntry& a, const QueueEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.bundle.mask() < b.bundle.mask();
    });
    return scored;
}

std::vector<Bundle> Recommender::buildRecommendationSet(const Bundle& interest, double price) {
    std::vector<Bundle> out;
    for (const QueueEntry& e : scoredSet(interest, price)) out.push_back(e.bundle);
    return out;
}

std::vector<Bundle> Recommender::queuedBundles() const {
    std::vector<Bundle> out;
    for (const QueueEntry& e : queue_) out.push_back(e.bundle);
    return out;
}

void Recommender::recordCustomerOffer(const Bundle& b, double bid, std::optional<double> outstandingAsk) {
    auto [it, inserted] = lastBids_.try_emplace(b.mask(), bid, bid);
    if (!inserted) it->second = {it->second.second, bid};
    ++bidCounts_[b.mask()];
    if (outstandingAsk) {
        GapRecord rec{b, bid, *outstandingAsk};
        if (!bestGap_ || rec.gap() < bestGap_->gap()) bestGap_ = rec;
    }
}

int Recommender::bidCount(const Bundle& b) const {
    auto it = bidCounts_.find(b.mask());
    return it == bidCounts_.end() ? 0 : it->second;
}

std::optional<ProgressSnapshot> Recommender::progress(const Bundle& b) const {
    if (bidCount(b) < 2) return std::nullopt;
    const auto& [prev, latest] = lastBids_.at(b.mask());
    return ProgressSnapshot{shopValue_(b), latest, prev};
}

CounterOutcome Recommender::classifyCounter(double counterBid) {
    Bundle candidate = outstanding_->bundle;
    double ask = outstanding_->ask;
    // Classify against the best exchange seen before this counter, then fold
    // the counter into the bookkeeping.
    Response response = bestGap_
                            ? classifyResponse(counterBid, ask, bestGap_->bid, bestGap_->ask, config_.threshold)
                            : Response::Promising;
    recordCustomerOffer(candidate, counterBid, ask);
    outstanding_.reset();

    CounterOutcome out{response, false, false};
    if (response == Response::VeryPromising) {
        interest_ = candidate;
        ++interestUpdates_;
        refillQueue(candidate, counterBid);
        out.interestUpdated = true;
    } else if (response == Response::NotPromising) {
        out.recommendNext = true;
    }
    return out;
}

void Recommender::refillQueue(const Bundle& interest, double price) {
    std::vector<QueueEntry> head = scoredSet(interest, price);
    std::unordered_set<std::uint32_t> inHead;
    for (const QueueEntry& e : head) inHead.insert(e.bundle.mask());
    // New neighborhood goes first; survivors of the old queue keep their
    // order behind it, with duplicates dropped.
    std::deque<QueueEntry> next(head.begin(), head.end());
    for (const QueueEntry& e : queue_)
        if (!inHead.count(e.bundle.mask()) && !proposed_.count(e.bundle.mask())) next.push_back(e);
    queue_ = std::move(next);
    queueBuilt_ = true;
}

std::optional<Bundle> Recommender::popNext(Pcg32& choiceRng) {
    lastScore_.reset();
    if (config_.policy == ChoicePolicy::Scored) {
        if (!queueBuilt_) {
            auto it = lastBids_.find(interest_.mask());
            double price = it != lastBids_.end() ? it->second.second
                                                 : -std::numeric_limits<double>::infinity();
            refillQueue(interest_, price);
        }
        if (queue_.empty()) return std::nullopt;
        QueueEntry e = queue_.front();
        queue_.pop_front();
        proposed_.insert(e.bundle.mask());
        lastScore_ = e.score;
        return e.bundle;
    }
    std::vector<Bundle> candidates;
    for (const Bundle& b : neighborhood(interest_))
        if (!proposed_.count(b.mask())) candidates.push_back(b);
    if (candidates.empty()) return std::nullopt;
    Bundle b = candidates[choiceRng.nextBelow(static_cast<std::uint32_t>(candidates.size()))];
    proposed_.insert(b.mask());
    return b;
}

void Recommender::attachAsk(const Bundle& b, double ask) { outstanding_ = Outstanding{b, ask}; }

std::optional<Bundle> Recommender::bestRecordedBundle() const {
    if (!bestGap_) return std::nullopt;
    return bestGap_->bundle;
}

}  // namespace haggle
