#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haggle/bundle.hpp"
#include "haggle/preference.hpp"
#include "haggle/recommend.hpp"
#include "haggle/rng.hpp"
#include "haggle/strategy.hpp"
#include "haggle/valuation.hpp"

namespace haggle {

struct SessionConfig {
    double breakdownProbability = 0.01;  ///< exogenous stop chance per loop iteration
    int maxRounds = 500;                 ///< plumbing cap against pathological stalls
    bool recommenderEnabled = true;
    RecommenderConfig recommender;
};

enum class Actor { Customer, Shop, None };

enum class EventKind {
    Offer,           ///< a plain price offer on the current bundle
    Recommend,       ///< a shop offer that switches to a recommended bundle
    Classification,  ///< the shop's judgement of a counter to a recommendation
    Revisit,         ///< shop falls back to the best recorded bundle, candidates exhausted
    Accept,          ///< deal struck at the stated price
    Breakdown,       ///< exogenous termination
    RoundCap,        ///< maxRounds exhausted
};

struct Event {
    int round;
    Actor actor;
    EventKind kind;
    Bundle bundle;
    std::optional<double> price;
    std::optional<double> score;        ///< scored recommendations only
    std::optional<int> responseClass;   ///< classification events only
};

enum class EndReason { Deal, Breakdown, RoundCap };

struct NegotiationOutcome {
    bool dealReached = false;
    std::optional<Bundle> finalBundle;
    std::optional<double> finalPrice;
    int rounds = 0;
    EndReason endReason = EndReason::RoundCap;
    std::vector<Event> transcript;
    int recommendationsMade = 0;
    int interestUpdates = 0;
};

/// RNG streams one session consumes. Paired system/benchmark runs share the
/// breakdown and trigger streams; only the recommendation-choice stream is
/// consulted differently (the scored policy never draws from it).
struct SessionStreams {
    Pcg32 breakdown;
    Pcg32 trigger;
    Pcg32 choice;
};

/// The customer's opening bundle: all goods she values strictly below her
/// average per-good valuation. If no good qualifies (all values equal), the
/// lowest-valued good (first such index) is used as a singleton.
Bundle openingBundle(const ValuationTable& customer);

/// Runs one complete negotiation. Each loop iteration t: the customer either
/// accepts the shop's standing ask (when it is at or below her next planned
/// bid) or bids; the shop either accepts her bid (when it is at or above his
/// next planned ask) or — conditional on the continuation probability —
/// responds, possibly recommending an alternative bundle which then becomes
/// the current bundle. Deterministic given the inputs and streams.
NegotiationOutcome runSession(const SessionConfig& cfg, const PreferenceDistribution& dist,
                              const ValuationTable& customerValues, const ShopValuation& shopValue,
                              Bidder& customer, Bidder& shop, SessionStreams& streams);

}  // namespace haggle
