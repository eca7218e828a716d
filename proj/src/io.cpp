#include "haggle/io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace haggle {

using nlohmann::json;

json distributionToJson(const PreferenceDistribution& dist) {
    int n = dist.goods();
    json mu = json::array();
    for (int i = 0; i < n; ++i) mu.push_back(dist.mu()[i]);
    auto matrix = [n](const Eigen::MatrixXd& m) {
        json rows = json::array();
        for (int i = 0; i < n; ++i) {
            json row = json::array();
            for (int j = 0; j < n; ++j) row.push_back(m(i, j));
            rows.push_back(row);
        }
        return rows;
    };
    return json{{"n", n},
                {"mu", mu},
                {"sigma", matrix(dist.sigma())},
                {"corr", matrix(dist.corr())},
                {"seed", dist.seed()}};
}

PreferenceDistribution distributionFromJson(const json& j) {
    int n = j.at("n").get<int>();
    Eigen::VectorXd mu(n);
    for (int i = 0; i < n; ++i) mu[i] = j.at("mu").at(i).get<double>();
    auto matrix = [n](const json& rows) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c) m(i, c) = rows.at(i).at(c).get<double>();
        return m;
    };
    return PreferenceDistribution(std::move(mu), matrix(j.at("sigma")), matrix(j.at("corr")),
                                  j.value("seed", std::uint64_t{0}));
}

std::string actorName(Actor a) {
    switch (a) {
        case Actor::Customer: return "customer";
        case Actor::Shop: return "shop";
        case Actor::None: return "none";
    }
    return "none";
}

std::string eventKindName(EventKind k) {
    switch (k) {
        case EventKind::Offer: return "offer";
        case EventKind::Recommend: return "recommend";
        case EventKind::Classification: return "classification";
        case EventKind::Revisit: return "revisit";
        case EventKind::Accept: return "accept";
        case EventKind::Breakdown: return "breakdown";
        case EventKind::RoundCap: return "round-cap";
    }
    return "offer";
}

json eventToJson(const Event& e) {
    json j{{"round", e.round},
           {"actor", actorName(e.actor)},
           {"bundle", e.bundle.bits()},
           {"price", e.price ? json(*e.price) : json(nullptr)},
           {"event", eventKindName(e.kind)}};
    if (e.score) j["score"] = *e.score;
    if (e.responseClass) j["class"] = *e.responseClass;
    return j;
}

void writeTranscript(const NegotiationOutcome& outcome, std::ostream& os) {
    for (const Event& e : outcome.transcript) os << eventToJson(e).dump() << '\n';
}

ExperimentConfig configFromJson(const json& j) {
    ExperimentConfig cfg;
    cfg.goods = j.value("goods", cfg.goods);
    cfg.distributions = j.value("distributions", cfg.distributions);
    cfg.customersPerDistribution = j.value("customers", cfg.customersPerDistribution);
    if (j.contains("thresholds")) cfg.thresholds = j.at("thresholds").get<std::vector<double>>();
    if (j.contains("preset")) {
        auto p = presetFromName(j.at("preset").get<std::string>());
        if (!p) throw std::invalid_argument("config: unknown preset " + j.at("preset").get<std::string>());
        cfg.preset = *p;
    }
    cfg.masterSeed = j.value("seed", cfg.masterSeed);
    cfg.breakdownProbability = j.value("breakdown_probability", cfg.breakdownProbability);
    cfg.maxRounds = j.value("max_rounds", cfg.maxRounds);
    cfg.recommendationRate = j.value("recommendation_rate", cfg.recommendationRate);
    if (j.contains("pricing")) {
        const json& p = j.at("pricing");
        cfg.pricing.beta = p.value("beta", cfg.pricing.beta);
        cfg.pricing.gamma = p.value("gamma", cfg.pricing.gamma);
    }
    if (j.contains("strategy")) {
        const json& s = j.at("strategy");
        cfg.strategy.gapInitLo = s.value("gap_init_lo", cfg.strategy.gapInitLo);
        cfg.strategy.gapInitHi = s.value("gap_init_hi", cfg.strategy.gapInitHi);
        cfg.strategy.deltaLo = s.value("delta_lo", cfg.strategy.deltaLo);
        cfg.strategy.deltaHi = s.value("delta_hi", cfg.strategy.deltaHi);
        cfg.strategy.shopDelta = s.value("shop_delta", cfg.strategy.shopDelta);
    }
    if (j.contains("correlation")) {
        const json& c = j.at("correlation");
        std::string kind = c.value("kind", std::string("ar1"));
        if (kind == "identity") cfg.distribution.correlation.kind = CorrelationSpec::Kind::Identity;
        else if (kind == "ar1") cfg.distribution.correlation.kind = CorrelationSpec::Kind::Ar1;
        else if (kind == "equi") cfg.distribution.correlation.kind = CorrelationSpec::Kind::Equicorrelated;
        else throw std::invalid_argument("config: unknown correlation kind " + kind);
        cfg.distribution.correlation.rho = c.value("rho", cfg.distribution.correlation.rho);
    }
    if (j.contains("distribution")) {
        const json& d = j.at("distribution");
        cfg.distribution.meanLo = d.value("mean_lo", cfg.distribution.meanLo);
        cfg.distribution.meanHi = d.value("mean_hi", cfg.distribution.meanHi);
        cfg.distribution.sdFracLo = d.value("sd_frac_lo", cfg.distribution.sdFracLo);
        cfg.distribution.minMeanToSd = d.value("min_mean_to_sd", cfg.distribution.minMeanToSd);
    }
    return cfg;
}

ExperimentConfig loadConfigFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return configFromJson(j);
}

}  // namespace haggle
