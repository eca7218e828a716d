#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "haggle/oracle.hpp"
#include "haggle/preference.hpp"
#include "haggle/pricing.hpp"
#include "haggle/session.hpp"
#include "haggle/strategy.hpp"

namespace haggle {

/// Customer-side strategy selection. The shop always plays the
/// time-dependent-fraction strategy with decay 0.1.
enum class Preset { Tdf, TftmfRandom, TftmfOne };

std::string presetName(Preset p);
std::optional<Preset> presetFromName(const std::string& name);

struct PricingParams {
    double beta = 0.93;
    double gamma = 0.3;
};

struct ExperimentConfig {
    int goods = 10;
    int distributions = 100;
    int customersPerDistribution = 100;
    std::vector<double> thresholds = {0.0,  0.05, 0.1,  0.15, 0.2, 0.25,
                                      0.3,  0.35, 0.4,  0.45, 0.5};
    Preset preset = Preset::Tdf;
    std::uint64_t masterSeed = 1;
    double breakdownProbability = 0.01;
    int maxRounds = 500;
    double recommendationRate = 0.25;
    PricingParams pricing;
    StrategyRanges strategy;
    DistributionSpec distribution;
};

enum class Variant { System, Benchmark };
std::string variantName(Variant v);

/// Instance-level gains-from-trade anchors shared by every session of one
/// (distribution, customer) cell.
struct InstanceGft {
    GftExtrema extrema;
    Bundle initialBundle;
    double initialGft;
};

InstanceGft analyzeInstance(const ValuationTable& customer, const ShopValuation& shop);

/// Per-session metric fragment. perc positions the final bundle's gains from
/// trade inside [minGFT, maxGFT]; relP measures the realized share of the
/// improvement that was attainable from the initial bundle. Either is missing
/// when no deal was reached or its denominator vanishes.
struct SessionMetrics {
    bool deal = false;
    int rounds = 0;
    std::optional<double> perc;
    std::optional<double> relP;
};

SessionMetrics computeMetrics(const NegotiationOutcome& outcome, const ValuationTable& customer,
                              const ShopValuation& shop, const InstanceGft& gft);

/// Convenience overload computing the instance anchors on the fly.
SessionMetrics computeMetrics(const NegotiationOutcome& outcome, const ValuationTable& customer,
                              const ShopValuation& shop);

/// One aggregated row of the sweep output: averages across all customers and
/// distributions for one (threshold, variant) pair. Values that never had a
/// defined sample are NaN. diff columns are system minus benchmark for the
/// same threshold, repeated on both rows.
struct MetricsRow {
    double threshold = 0.0;
    Variant variant = Variant::System;
    long deals = 0;
    double meanRounds = 0.0;
    double perc = 0.0;
    double relP = 0.0;
    double diffDeals = 0.0;
    double diffRounds = 0.0;
    double diffPerc = 0.0;
    double diffRelP = 0.0;
};

struct SweepResult {
    std::vector<MetricsRow> rows;  // threshold-major, system row before benchmark row
    long sessionsRun = 0;
    long breakdownSessions = 0;
    long roundCapSessions = 0;  ///< pathological stalls; tracked, never fatal
};

/// Observer invoked after every finished session; used for transcript export.
using SessionSink = std::function<void(int distribution, int customer, double threshold,
                                       Variant variant, const NegotiationOutcome& outcome)>;

/// Full factorial sweep: distributions x customers x thresholds, each cell run
/// once with the scored recommender and once with the random benchmark on
/// identical customer valuations, strategy parameters, breakdown draws, and
/// trigger draws; only the recommendation choice differs. Deterministic in
/// the master seed.
SweepResult runSweep(const ExperimentConfig& cfg, const SessionSink& sink = nullptr);

/// Fixed CSV schema:
/// threshold,variant,deals,mean_rounds,perc,relP,diff_deals,diff_rounds,diff_perc,diff_relP
void writeSummaryCsv(const std::vector<MetricsRow>& rows, std::ostream& os);

}  // namespace haggle
