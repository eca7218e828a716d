#pragma once

#include <memory>

#include "haggle/rng.hpp"

namespace haggle {

enum class Role { Customer, Shop };

/// The two bidding strategies: a time-dependent fraction that closes the gap
/// to the own valuation at a fixed exponential rate, and a monotone
/// tit-for-tat that concedes a fraction of the opponent's perceived
/// concessions and never takes a concession back.
enum class StrategyKind { TimeDependentFraction, TitForTatMonotone };

struct StrategyParams {
    StrategyKind kind = StrategyKind::TimeDependentFraction;
    Role role = Role::Customer;
    double gapInit = 0.25;  ///< opening gap as a fraction of the valuation, in [0, 0.5]
    double delta = 0.1;     ///< decay rate (time-dependent) or concession fraction (tit-for-tat)
};

/// Ranges the experiment harness draws per-session parameters from. The shop's
/// decay rate stays fixed at 0.1 so only the customer side fluctuates.
struct StrategyRanges {
    double gapInitLo = 0.0;
    double gapInitHi = 0.5;
    double deltaLo = 0.1;
    double deltaHi = 0.4;
    double shopDelta = 0.1;
};

StrategyParams drawParams(StrategyKind kind, Role role, const StrategyRanges& ranges, Pcg32& rng);

/// One negotiating side's price policy. planBid is pure: it may be called
/// repeatedly (acceptance checks reuse it) without advancing state. State
/// moves only through begin() and observeOpponent().
class Bidder {
public:
    virtual ~Bidder() = default;

    /// Called once with the agent's valuation of the opening bundle.
    virtual void begin(double openingValue) = 0;

    /// Price offered on a bundle the agent values at `value`, at round t.
    /// Customers bid at or below value, shops ask at or above it.
    virtual double planBid(double value, int round) const = 0;

    /// Record the opponent's latest offer, expressed as this agent's own net
    /// monetary value of accepting it.
    virtual void observeOpponent(double ownNetValue) = 0;

    virtual StrategyParams params() const = 0;
};

std::unique_ptr<Bidder> makeBidder(const StrategyParams& params);

}  // namespace haggle
