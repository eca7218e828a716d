#include "haggle/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace haggle {

namespace {

constexpr std::uint64_t kDistKey = 0x64697374;    // distribution generation
constexpr std::uint64_t kCustKey = 0x63757374;    // customer valuations
constexpr std::uint64_t kParamKey = 0x70726d73;   // strategy parameters
constexpr std::uint64_t kBreakKey = 0x62726b64;   // breakdown draws
constexpr std::uint64_t kTrigKey = 0x74726967;    // recommendation trigger
constexpr std::uint64_t kChoiceKey = 0x63686f63;  // benchmark choice

double kNaN() { return std::numeric_limits<double>::quiet_NaN(); }

struct Accumulator {
    long deals = 0;
    double roundsSum = 0.0;
    double percSum = 0.0;
    long percCount = 0;
    double relPSum = 0.0;
    long relPCount = 0;

    void add(const SessionMetrics& m) {
        if (m.deal) {
            ++deals;
            roundsSum += m.rounds;
        }
        if (m.perc) {
            percSum += *m.perc;
            ++percCount;
        }
        if (m.relP) {
            relPSum += *m.relP;
            ++relPCount;
        }
    }

    double meanRounds() const { return deals > 0 ? roundsSum / static_cast<double>(deals) : kNaN(); }
    double meanPerc() const { return percCount > 0 ? percSum / static_cast<double>(percCount) : kNaN(); }
    double meanRelP() const { return relPCount > 0 ? relPSum / static_cast<double>(relPCount) : kNaN(); }
};

StrategyKind customerKind(Preset p) {
    return p == Preset::Tdf ? StrategyKind::TimeDependentFraction : StrategyKind::TitForTatMonotone;
}

}  // namespace

std::string presetName(Preset p) {
    switch (p) {
        case Preset::Tdf: return "tdf";
        case Preset::TftmfRandom: return "tftmf-random";
        case Preset::TftmfOne: return "tftmf-1";
    }
    return "tdf";
}

std::optional<Preset> presetFromName(const std::string& name) {
    if (name == "tdf") return Preset::Tdf;
    if (name == "tftmf-random") return Preset::TftmfRandom;
    if (name == "tftmf-1") return Preset::TftmfOne;
    return std::nullopt;
}

std::string variantName(Variant v) { return v == Variant::System ? "system" : "benchmark"; }

InstanceGft analyzeInstance(const ValuationTable& customer, const ShopValuation& shop) {
    GftExtrema extrema = gftExtrema(customer, shop);
    Bundle initial = openingBundle(customer);
    return InstanceGft{std::move(extrema), initial, gainsFromTrade(initial, customer, shop)};
}

SessionMetrics computeMetrics(const NegotiationOutcome& outcome, const ValuationTable& customer,
                              const ShopValuation& shop, const InstanceGft& gft) {
    SessionMetrics m;
    m.deal = outcome.dealReached;
    m.rounds = outcome.rounds;
    if (!outcome.dealReached || !outcome.finalBundle) return m;
    double finalGft = gainsFromTrade(*outcome.finalBundle, customer, shop);
    double span = gft.extrema.maxGft - gft.extrema.minGft;
    if (span > 0.0) m.perc = (finalGft - gft.extrema.minGft) / span;
    double improvable = gft.extrema.maxGft - gft.initialGft;
    if (improvable > 0.0) m.relP = (finalGft - gft.initialGft) / improvable;
    return m;
}

SessionMetrics computeMetrics(const NegotiationOutcome& outcome, const ValuationTable& customer,
                              const ShopValuation& shop) {
    return computeMetrics(outcome, customer, shop, analyzeInstance(customer, shop));
}

SweepResult runSweep(const ExperimentConfig& cfg, const SessionSink& sink) {
    SweepResult result;
    std::size_t cells = cfg.thresholds.size();
    std::vector<Accumulator> system(cells), benchmark(cells);

    for (int d = 0; d < cfg.distributions; ++d) {
        Pcg32 distRng = makeStream(cfg.masterSeed, {kDistKey, static_cast<std::uint64_t>(d)});
        std::uint64_t distSeed =
            (static_cast<std::uint64_t>(distRng.nextU32()) << 32) | distRng.nextU32();
        PreferenceDistribution dist = generateDistribution(distSeed, cfg.goods, cfg.distribution);
        ShopPricing pricing(dist, cfg.pricing.beta, cfg.pricing.gamma);
        ShopValuation shopValue = pricing.asFunction();

        for (int c = 0; c < cfg.customersPerDistribution; ++c) {
            std::uint64_t dc[] = {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(c)};
            Pcg32 custRng = makeStream(cfg.masterSeed, {kCustKey, dc[0], dc[1]});
            CustomerSample sample = sampleCustomer(dist, custRng);
            const ValuationTable& values = sample.values;
            InstanceGft gft = analyzeInstance(values, shopValue);

            Pcg32 paramRng = makeStream(cfg.masterSeed, {kParamKey, dc[0], dc[1]});
            StrategyParams customerParams =
                drawParams(customerKind(cfg.preset), Role::Customer, cfg.strategy, paramRng);
            if (cfg.preset == Preset::TftmfOne) customerParams.delta = 1.0;
            StrategyParams shopParams =
                drawParams(StrategyKind::TimeDependentFraction, Role::Shop, cfg.strategy, paramRng);

            for (std::size_t ti = 0; ti < cells; ++ti) {
                for (Variant variant : {Variant::System, Variant::Benchmark}) {
                    SessionConfig scfg;
                    scfg.breakdownProbability = cfg.breakdownProbability;
                    scfg.maxRounds = cfg.maxRounds;
                    scfg.recommenderEnabled = true;
                    scfg.recommender.threshold = cfg.thresholds[ti];
                    scfg.recommender.rate = cfg.recommendationRate;
                    scfg.recommender.policy = variant == Variant::System
                                                  ? ChoicePolicy::Scored
                                                  : ChoicePolicy::UniformRandom;

                    std::uint64_t tiKey = static_cast<std::uint64_t>(ti);
                    SessionStreams streams{
                        makeStream(cfg.masterSeed, {kBreakKey, dc[0], dc[1], tiKey}),
                        makeStream(cfg.masterSeed, {kTrigKey, dc[0], dc[1], tiKey}),
                        makeStream(cfg.masterSeed,
                                   {kChoiceKey, dc[0], dc[1], tiKey,
                                    static_cast<std::uint64_t>(variant == Variant::Benchmark)}),
                    };

                    auto customerBidder = makeBidder(customerParams);
                    auto shopBidder = makeBidder(shopParams);
                    NegotiationOutcome outcome =
                        runSession(scfg, dist, values, shopValue, *customerBidder, *shopBidder, streams);
                    ++result.sessionsRun;
                    if (outcome.endReason == EndReason::Breakdown) ++result.breakdownSessions;
                    if (outcome.endReason == EndReason::RoundCap) ++result.roundCapSessions;

                    SessionMetrics metrics = computeMetrics(outcome, values, shopValue, gft);
                    (variant == Variant::System ? system[ti] : benchmark[ti]).add(metrics);
                    if (sink) sink(d, c, cfg.thresholds[ti], variant, outcome);
                }
            }
        }
    }

    auto diff = [](double a, double b) { return a - b; };
    for (std::size_t ti = 0; ti < cells; ++ti) {
        const Accumulator& sys = system[ti];
        const Accumulator& ben = benchmark[ti];
        MetricsRow base;
        base.threshold = cfg.thresholds[ti];
        base.diffDeals = static_cast<double>(sys.deals - ben.deals);
        base.diffRounds = diff(sys.meanRounds(), ben.meanRounds());
        base.diffPerc = diff(sys.meanPerc(), ben.meanPerc());
        base.diffRelP = diff(sys.meanRelP(), ben.meanRelP());

        MetricsRow sysRow = base;
        sysRow.variant = Variant::System;
        sysRow.deals = sys.deals;
        sysRow.meanRounds = sys.meanRounds();
        sysRow.perc = sys.meanPerc();
        sysRow.relP = sys.meanRelP();
        result.rows.push_back(sysRow);

        MetricsRow benRow = base;
        benRow.variant = Variant::Benchmark;
        benRow.deals = ben.deals;
        benRow.meanRounds = ben.meanRounds();
        benRow.perc = ben.meanPerc();
        benRow.relP = ben.meanRelP();
        result.rows.push_back(benRow);
    }
    return result;
}

void writeSummaryCsv(const std::vector<MetricsRow>& rows, std::ostream& os) {
    os << "threshold,variant,deals,mean_rounds,perc,relP,diff_deals,diff_rounds,diff_perc,diff_relP\n";
    auto fmt = [](double v) {
        if (std::isnan(v)) return std::string("nan");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    for (const MetricsRow& r : rows) {
        os << fmt(r.threshold) << ',' << variantName(r.variant) << ',' << r.deals << ','
           << fmt(r.meanRounds) << ',' << fmt(r.perc) << ',' << fmt(r.relP) << ','
           << fmt(r.diffDeals) << ',' << fmt(r.diffRounds) << ',' << fmt(r.diffPerc) << ','
           << fmt(r.diffRelP) << '\n';
    }
}

}  // namespace haggle
