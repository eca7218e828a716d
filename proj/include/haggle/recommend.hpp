#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "haggle/bundle.hpp"
#include "haggle/preference.hpp"
#include "haggle/rng.hpp"
#include "haggle/valuation.hpp"

namespace haggle {

/// How the customer's counter-offer to a recommended bundle compares with the
/// best exchange seen so far.
enum class Response : int {
    NotPromising = 0,   ///< gap widened; drop the bundle and recommend the next one
    Promising = 1,      ///< gap held or narrowed modestly; keep negotiating it
    VeryPromising = 2,  ///< gap narrowed clearly; adopt it as the new interest bundle
};

/// Two consecutive customer offers on the same bundle plus the shop's value
/// for it: enough to extrapolate the remaining rounds to a deal.
struct ProgressSnapshot {
    double shopValue;      ///< v_s of the bundle under negotiation
    double currentBid;     ///< customer's latest offer p
    double previousBid;    ///< customer's offer before that, p'
};

/// Predicted rounds remaining until the customer's bids reach the shop's
/// valuation, extrapolated from her latest concession:
/// (v_s - p') / (p - p'). A bid already at or above v_s predicts 0; a stalled
/// (or regressing) bid sequence predicts +infinity.
double predictRemainingRounds(const ProgressSnapshot& snap);

/// Coin flip with P(recommend) = 1 - exp(-rate * deltaT). Always true for
/// deltaT = +inf, never true for deltaT = 0. Consumes exactly one draw.
bool shouldRecommend(double deltaT, double rate, Pcg32& rng);

/// Compares the bid-ask gap of the current exchange, g = shopAsk - customerBid,
/// with the best (smallest) gap recorded earlier, g' = bestShopAsk - bestCustomerBid,
/// through the closeness ratio r = g' / g:
///   r >  1 + threshold  ->  VeryPromising
///   1 <= r <= 1 + threshold ->  Promising
///   r <  1              ->  NotPromising
/// A non-positive current gap means the offers already cross: VeryPromising.
Response classifyResponse(double customerBid, double shopAsk, double bestCustomerBid,
                          double bestShopAsk, double threshold);

/// Recommendation choice policy: order candidates by estimated expected gains
/// from trade, or pick uniformly at random (the benchmark). Everything else —
/// trigger, response classification, interest updates — is shared.
enum class ChoicePolicy { Scored, UniformRandom };

struct RecommenderConfig {
    double threshold = 0.0;
    double rate = 0.25;  ///< coefficient in the recommendation probability
    ChoicePolicy policy = ChoicePolicy::Scored;
};

/// What the engine should do after a counter-offer to an outstanding
/// recommendation has been classified.
struct CounterOutcome {
    Response response;
    bool interestUpdated;
    bool recommendNext;  ///< pop the next candidate immediately
};

/// Session-local state of the shop's recommendation mechanism: the running
/// estimate of the customer's interest bundle, the scored candidate queue,
/// the set of bundles already proposed, and the per-bundle best-exchange
/// bookkeeping the response classification compares against.
class Recommender {
public:
    Recommender(const PreferenceDistribution& dist, ShopValuation shopValue, Bundle initialBundle,
                RecommenderConfig config);

    const Bundle& interestBundle() const { return interest_; }
    std::vector<Bundle> queuedBundles() const;
    bool wasProposed(const Bundle& b) const { return proposed_.count(b.mask()) != 0; }
    std::size_t proposedCount() const { return proposed_.size(); }
    int interestUpdates() const { return interestUpdates_; }

    /// Estimated gains from trade of recommending `candidate` while the
    /// customer has shown willingness to pay `price` for `interest`:
    /// E[v_c(candidate) | v_c(interest) >= price] - v_s(candidate). A vacuous
    /// condition falls back to the unconditional expectation.
    double scoreBundle(const Bundle& candidate, const Bundle& interest, double price);

    /// Neighborhood of `interest` minus already-proposed bundles, sorted by
    /// descending score; ties broken by canonical bundle order.
    std::vector<Bundle> buildRecommendationSet(const Bundle& interest, double price);

    /// Record a customer offer (and the shop ask outstanding when it was
    /// made) into the best-exchange bookkeeping and per-bundle bid history.
    void recordCustomerOffer(const Bundle& b, double bid, std::optional<double> outstandingAsk);

    /// Number of customer bids recorded on a bundle, and the latest two.
    int bidCount(const Bundle& b) const;
    std::optional<ProgressSnapshot> progress(const Bundle& b) const;

    /// True when a recommendation has been made and its counter-offer has not
    /// yet been classified.
    bool hasOutstanding() const { return outstanding_.has_value(); }
    const Bundle& outstandingBundle() const { return outstanding_->bundle; }

    /// Classify the customer's counter to the outstanding recommendation,
    /// apply the interest update / next-recommendation rule, and record the
    /// counter into the bookkeeping. The outstanding marker is cleared.
    CounterOutcome classifyCounter(double counterBid);

    /// Pop the next candidate under the configured policy. Scored: head of
    /// the queue (built on first use from the current interest bundle and the
    /// customer's latest bid on it). UniformRandom: a uniform pick from the
    /// interest bundle's unproposed neighbors. Returns nothing when exhausted.
    std::optional<Bundle> popNext(Pcg32& choiceRng);

    /// Attach the shop's ask to a just-recommended bundle; the pair stays
    /// outstanding until the customer's counter is classified.
    void attachAsk(const Bundle& b, double ask);

    /// Bundle with the smallest recorded bid-ask gap, if any exchange has
    /// been recorded; the fallback bargaining target once candidates run out.
    std::optional<Bundle> bestRecordedBundle() const;

    /// Score of the most recent scored recommendation (for transcripts).
    std::optional<double> lastScore() const { return lastScore_; }

private:
    struct GapRecord {
        Bundle bundle;
        double bid;
        double ask;
        double gap() const { return ask - bid; }
    };
    struct Outstanding {
        Bundle bundle;
        double ask;
    };

    void refillQueue(const Bundle& interest, double price);

    struct QueueEntry {
        Bundle bundle;
        double score;
    };
    std::vector<QueueEntry> scoredSet(const Bundle& interest, double price);

    const PreferenceDistribution* dist_;
    ShopValuation shopValue_;
    RecommenderConfig config_;
    ConditionalEstimator estimator_;
    Bundle interest_;
    std::deque<QueueEntry> queue_;
    bool queueBuilt_ = false;
    std::unordered_set<std::uint32_t> proposed_;
    std::unordered_map<std::uint32_t, std::pair<double, double>> lastBids_;  // mask -> (prev, latest)
    std::unordered_map<std::uint32_t, int> bidCounts_;
    std::optional<GapRecord> bestGap_;
    std::optional<Outstanding> outstanding_;
    std::optional<double> lastScore_;
    int interestUpdates_ = 0;
};

}  // namespace haggle
