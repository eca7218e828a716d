#include "haggle/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haggle {

StrategyParams drawParams(StrategyKind kind, Role role, const StrategyRanges& ranges, Pcg32& rng) {
    StrategyParams p;
    p.kind = kind;
    p.role = role;
    p.gapInit = rng.uniform(ranges.gapInitLo, ranges.gapInitHi);
    p.delta = role == Role::Shop ? ranges.shopDelta : rng.uniform(ranges.deltaLo, ranges.deltaHi);
    return p;
}

namespace {

void checkParams(const StrategyParams& p) {
    if (p.gapInit < 0.0 || p.gapInit > 0.5) throw std::invalid_argument("strategy: gapInit must lie in [0, 0.5]");
    if (p.delta <= 0.0) throw std::invalid_argument("strategy: delta must be positive");
}

/// gap(t) = gapInit * exp(-delta * t), applied to whatever bundle is current.
/// The fraction depends on the global round only, never on the bundle.
class TdfBidder final : public Bidder {
public:
    explicit TdfBidder(const StrategyParams& p) : params_(p) { checkParams(p); }

    void begin(double) override {}

    double planBid(double value, int round) const override {
        double gap = params_.gapInit * std::exp(-params_.delta * round);
        return params_.role == Role::Customer ? value * (1.0 - gap) : value * (1.0 + gap);
    }

    void observeOpponent(double) override {}

    StrategyParams params() const override { return params_; }

private:
    StrategyParams params_;
};

/// Monotone tit-for-tat. The agent maintains a demanded net-value level,
/// opened at gapInit times the opening bundle's valuation. Whenever the
/// opponent's offer improves on the best previously seen (in own net value),
/// a fraction delta of the improvement is conceded off the level; the level
/// never rises and never drops below zero, so bids stay within the own
/// valuation. Working on the level makes the guard well-defined across
/// bundle switches.
class TftmfBidder final : public Bidder {
public:
    explicit TftmfBidder(const StrategyParams& p) : params_(p) { checkParams(p); }

    void begin(double openingValue) override {
        level_ = params_.gapInit * openingValue;
        started_ = true;
    }

    double planBid(double value, int round) const override {
        (void)round;
        if (!started_) throw std::logic_error("TftmfBidder: begin() not called");
        return params_.role == Role::Customer ? value - level_ : value + level_;
    }

    void observeOpponent(double ownNetValue) override {
        if (seenOpponent_) {
            double improvement = ownNetValue - bestSeen_;
            if (improvement > 0.0) level_ = std::max(0.0, level_ - params_.delta * improvement);
        }
        bestSeen_ = seenOpponent_ ? std::max(bestSeen_, ownNetValue) : ownNetValue;
        seenOpponent_ = true;
    }

    StrategyParams params() const override { return params_; }

private:
    StrategyParams params_;
    double level_ = 0.0;
    double bestSeen_ = 0.0;
    bool started_ = false;
    bool seenOpponent_ = false;
};

}  // namespace

std::unique_ptr<Bidder> makeBidder(const StrategyParams& params) {
    if (params.kind == StrategyKind::TimeDependentFraction) return std::make_unique<TdfBidder>(params);
    return std::make_unique<TftmfBidder>(params);
}

}  // namespace haggle
