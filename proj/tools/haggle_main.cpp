#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "haggle/experiment.hpp"
#include "haggle/io.hpp"
#include "haggle/validate.hpp"

namespace fs = std::filesystem;
using namespace haggle;

namespace {

struct CommonArgs {
    std::string configPath;
    std::uint64_t seed = 0;
    bool seedSet = false;
    int distributions = 0;
    int customers = 0;
    std::string thresholds;
    std::string preset;
    std::string outDir;
};

void addCommonOptions(CLI::App* app, CommonArgs& args) {
    app->add_option("--config", args.configPath, "JSON config file");
    app->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) { args.seedSet = true; });
    app->add_option("--distributions", args.distributions, "number of preference distributions");
    app->add_option("--customers", args.customers, "customers per distribution");
    app->add_option("--thresholds", args.thresholds, "comma-separated threshold list");
    app->add_option("--preset", args.preset, "customer strategy preset: tdf|tftmf-random|tftmf-1");
    app->add_option("--out", args.outDir, "output directory");
}

ExperimentConfig resolveConfig(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.configPath.empty()) cfg = loadConfigFile(args.configPath);
    if (args.seedSet) cfg.masterSeed = args.seed;
    if (args.distributions > 0) cfg.distributions = args.distributions;
    if (args.customers > 0) cfg.customersPerDistribution = args.customers;
    if (!args.thresholds.empty()) {
        cfg.thresholds.clear();
        std::stringstream ss(args.thresholds);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.thresholds.push_back(std::stod(tok));
    }
    if (!args.preset.empty()) {
        auto p = presetFromName(args.preset);
        if (!p) throw CLI::ValidationError("--preset", "unknown preset: " + args.preset);
        cfg.preset = *p;
    }
    return cfg;
}

int cmdRun(const CommonArgs& args, double threshold, bool benchmark, bool noRecommender) {
    ExperimentConfig cfg = resolveConfig(args);
    PreferenceDistribution dist = generateDistribution(cfg.masterSeed, cfg.goods, cfg.distribution);
    ShopPricing pricing(dist, cfg.pricing.beta, cfg.pricing.gamma);
    ShopValuation shopValue = pricing.asFunction();

    Pcg32 custRng = makeStream(cfg.masterSeed, {0x63757374u, 0, 0});
    CustomerSample sample = sampleCustomer(dist, custRng);

    Pcg32 paramRng = makeStream(cfg.masterSeed, {0x70726d73u, 0, 0});
    StrategyKind kind = cfg.preset == Preset::Tdf ? StrategyKind::TimeDependentFraction
                                                  : StrategyKind::TitForTatMonotone;
    StrategyParams cp = drawParams(kind, Role::Customer, cfg.strategy, paramRng);
    if (cfg.preset == Preset::TftmfOne) cp.delta = 1.0;
    StrategyParams sp = drawParams(StrategyKind::TimeDependentFraction, Role::Shop, cfg.strategy, paramRng);
    auto customer = makeBidder(cp);
    auto shop = makeBidder(sp);

    SessionConfig scfg;
    scfg.breakdownProbability = cfg.breakdownProbability;
    scfg.maxRounds = cfg.maxRounds;
    scfg.recommenderEnabled = !noRecommender;
    scfg.recommender.threshold = threshold;
    scfg.recommender.rate = cfg.recommendationRate;
    scfg.recommender.policy = benchmark ? ChoicePolicy::UniformRandom : ChoicePolicy::Scored;

    SessionStreams streams{makeStream(cfg.masterSeed, {0x62726b64u, 0, 0, 0}),
                           makeStream(cfg.masterSeed, {0x74726967u, 0, 0, 0}),
                           makeStream(cfg.masterSeed, {0x63686f63u, 0, 0, 0, benchmark ? 1u : 0u})};
    NegotiationOutcome outcome =
        runSession(scfg, dist, sample.values, shopValue, *customer, *shop, streams);

    writeTranscript(outcome, std::cout);
    SessionMetrics m = computeMetrics(outcome, sample.values, shopValue);
    std::cout << "# deal=" << (outcome.dealReached ? "yes" : "no") << " rounds=" << outcome.rounds;
    if (outcome.finalPrice) std::cout << " price=" << *outcome.finalPrice;
    if (m.perc) std::cout << " perc=" << *m.perc;
    if (m.relP) std::cout << " relP=" << *m.relP;
    std::cout << " recommendations=" << outcome.recommendationsMade
              << " interest_updates=" << outcome.interestUpdates << "\n";

    if (!args.outDir.empty()) {
        fs::create_directories(args.outDir);
        std::ofstream out(fs::path(args.outDir) / "session.jsonl");
        writeTranscript(outcome, out);
        std::ofstream dj(fs::path(args.outDir) / "distribution.json");
        dj << distributionToJson(dist).dump(2) << "\n";
    }
    return 0;
}

int cmdSweep(const CommonArgs& args, bool transcripts) {
    ExperimentConfig cfg = resolveConfig(args);
    std::string outDir = args.outDir.empty() ? "out" : args.outDir;
    fs::create_directories(outDir);

    SessionSink sink;
    if (transcripts) {
        fs::create_directories(fs::path(outDir) / "transcripts");
        sink = [&outDir](int d, int c, double threshold, Variant variant,
                         const NegotiationOutcome& outcome) {
            char name[128];
            std::snprintf(name, sizeof(name), "d%03d_c%03d_t%.2f_%s.jsonl", d, c, threshold,
                          variantName(variant).c_str());
            std::ofstream out(fs::path(outDir) / "transcripts" / name);
            writeTranscript(outcome, out);
        };
    }

    SweepResult result = runSweep(cfg, sink);
    std::ofstream csv(fs::path(outDir) / "summary.csv");
    writeSummaryCsv(result.rows, csv);
    writeSummaryCsv(result.rows, std::cout);
    std::cerr << "# " << result.sessionsRun << " sessions (" << result.breakdownSessions
              << " broke down, " << result.roundCapSessions << " hit the round cap) -> " << outDir
              << "/summary.csv\n";
    return 0;
}

int cmdValidate(const CommonArgs& args) {
    std::uint64_t seed = args.seedSet ? args.seed : 1;
    int failures = 0;
    for (const CheckResult& r : runQuickValidation(seed)) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        if (!r.passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bundle-price negotiation simulator"};
    app.require_subcommand(1);

    CommonArgs runArgs, sweepArgs, valArgs;
    double runThreshold = 0.0;
    bool runBenchmark = false;
    bool runNoRecommender = false;
    bool sweepTranscripts = false;

    CLI::App* run = app.add_subcommand("run", "run a single negotiation session and print its transcript");
    addCommonOptions(run, runArgs);
    run->add_option("--threshold", runThreshold, "interest-update threshold");
    run->add_flag("--benchmark", runBenchmark, "use the random-choice benchmark recommender");
    run->add_flag("--no-recommender", runNoRecommender, "plain bargaining without recommendations");

    CLI::App* sweep = app.add_subcommand("sweep", "run the full experiment sweep and write summary.csv");
    addCommonOptions(sweep, sweepArgs);
    sweep->add_flag("--transcripts", sweepTranscripts, "also write per-session JSON-lines transcripts");

    CLI::App* validate = app.add_subcommand("validate", "run the property/oracle checks");
    addCommonOptions(validate, valArgs);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmdRun(runArgs, runThreshold, runBenchmark, runNoRecommender);
        if (sweep->parsed()) return cmdSweep(sweepArgs, sweepTranscripts);
        if (validate->parsed()) return cmdValidate(valArgs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
