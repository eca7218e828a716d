#include "haggle/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "haggle/oracle.hpp"
#include "haggle/pricing.hpp"
#include "haggle/recommend.hpp"

namespace haggle {

namespace {

std::string format(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

struct Instance {
    PreferenceDistribution dist;
    ValuationTable customer;
    ShopPricing pricing;
};

Instance makeInstance(int goods, std::uint64_t seed) {
    PreferenceDistribution dist = generateDistribution(seed, goods);
    Pcg32 rng = makeStream(seed, {0xabcdu});
    CustomerSample sample = sampleCustomer(dist, rng);
    ShopPricing pricing(dist);
    return Instance{std::move(dist), std::move(sample.values), std::move(pricing)};
}

}  // namespace

CheckResult checkParetoCertificate(int goods, int instances, int gridPoints, std::uint64_t seed) {
    long violations = 0;
    long dealsChecked = 0;
    long offGridWitnesses = 0;
    for (int k = 0; k < instances; ++k) {
        Instance inst = makeInstance(goods, seed + static_cast<std::uint64_t>(k));
        ShopValuation shop = inst.pricing.asFunction();
        GftExtrema ext = gftExtrema(inst.customer, shop);
        std::unordered_set<std::uint32_t> bestMasks;
        for (const Bundle& b : ext.best) bestMasks.insert(b.mask());

        std::vector<Bundle> bundles = allBundles(goods);
        double lo = inst.pricing.value(bundles[0]);
        double hi = inst.customer.value(bundles[0]);
        for (const Bundle& b : bundles) {
            lo = std::min(lo, inst.pricing.value(b));
            hi = std::max(hi, inst.customer.value(b));
        }
        std::vector<double> grid(static_cast<std::size_t>(gridPoints));
        for (int g = 0; g < gridPoints; ++g)
            grid[static_cast<std::size_t>(g)] = lo + (hi - lo) * g / (gridPoints - 1);

        // Deals are drawn from each bundle's individually rational price range
        // [v_s(b), v_c(b)]: prices either side would refuse outright are not
        // negotiation outcomes, and the grid span covers exactly this union.
        auto rational = [&](const Bundle& b, double p) {
            return p >= shop(b) - 1e-9 && p <= inst.customer.value(b) + 1e-9;
        };

        std::vector<Deal> bestDeals;
        for (const Bundle& b : ext.best)
            for (double p : grid)
                if (rational(b, p)) bestDeals.push_back(Deal{b, p});

        for (const Bundle& b : bundles) {
            bool isBest = bestMasks.count(b.mask()) != 0;
            for (double p : grid) {
                if (!rational(b, p)) continue;
                Deal deal{b, p};
                ++dealsChecked;
                if (isBest) {
                    // Undominated by any grid deal whatsoever.
                    for (const Bundle& other : bundles) {
                        for (double q : grid) {
                            if (paretoDominates(Deal{other, q}, deal, inst.customer, shop)) {
                                ++violations;
                                goto nextDeal;
                            }
                        }
                    }
                } else {
                    // Dominated by some rational grid deal on a maximizer.
                    bool dominated = false;
                    for (const Deal& cand : bestDeals) {
                        if (paretoDominates(cand, deal, inst.customer, shop)) {
                            dominated = true;
                            break;
                        }
                    }
                    if (!dominated) {
                        // The dominating price interval has width
                        // maxGFT - GFT(b); when that falls below the grid step
                        // no grid point can land in it. Fall back to the
                        // interval midpoint, which splits the surplus
                        // difference and leaves both sides strictly better.
                        double gft = gainsFromTrade(b, inst.customer, shop);
                        for (const Bundle& best : ext.best) {
                            double mid = p + shop(best) - shop(b) + 0.5 * (ext.maxGft - gft);
                            if (paretoDominates(Deal{best, mid}, deal, inst.customer, shop)) {
                                dominated = true;
                                ++offGridWitnesses;
                                break;
                            }
                        }
                        if (!dominated) ++violations;
                    }
                }
            nextDeal:;
            }
        }
    }
    CheckResult r;
    r.name = "pareto-certificate";
    r.passed = violations == 0;
    r.detail = format("%ld violations across %ld rational grid deals (%d instances, n=%d, %d grid points, "
                      "%ld sub-grid-width witnesses)",
                      violations, dealsChecked, instances, goods, gridPoints, offGridWitnesses);
    return r;
}

CheckResult checkConditionalExpectation(int goods, int triples, long samples, double relTol,
                                        std::uint64_t seed) {
    double worst = 0.0;
    int failures = 0;
    for (int k = 0; k < triples; ++k) {
        std::uint64_t instSeed = seed + 1000u * static_cast<std::uint64_t>(k);
        PreferenceDistribution dist = generateDistribution(instSeed, goods);
        Pcg32 pick = makeStream(instSeed, {0x70u});
        std::uint32_t full = (1u << goods) - 1u;
        Bundle target(1u + pick.nextBelow(full), goods);
        Bundle given(1u + pick.nextBelow(full), goods);
        double m = dist.bundleMean(given);
        double s = dist.bundleSd(given);
        // First triple conditions exactly at the mean; the rest spread around it.
        double price = k == 0 ? m : m + s * pick.uniform(-1.5, 1.5);

        double closed = conditionalExpectation(dist, target, given, price);

        Pcg32 mc = makeStream(instSeed, {0x6d63u});
        Eigen::VectorXd z(goods);
        double sum = 0.0;
        long kept = 0;
        for (long i = 0; i < samples; ++i) {
            for (int g = 0; g < goods; ++g) z[g] = mc.normal();
            Eigen::VectorXd x = dist.mu() + dist.cholesky() * z;
            double vGiven = 0.0;
            for (std::uint32_t mm = given.mask(); mm != 0; mm &= mm - 1)
                vGiven += x[std::countr_zero(mm)];
            if (vGiven < price) continue;
            double vTarget = 0.0;
            for (std::uint32_t mm = target.mask(); mm != 0; mm &= mm - 1)
                vTarget += x[std::countr_zero(mm)];
            sum += vTarget;
            ++kept;
        }
        double empirical = sum / static_cast<double>(kept);
        double rel = std::abs(closed - empirical) / std::abs(empirical);
        worst = std::max(worst, rel);
        if (rel > relTol) ++failures;
    }
    CheckResult r;
    r.name = "conditional-expectation-oracle";
    r.passed = failures == 0;
    r.detail = format("%d/%d triples within %.2f%% (worst %.4f%%, %ld samples each)", triples - failures,
                      triples, relTol * 100.0, worst * 100.0, samples);
    return r;
}

CheckResult checkBundleMoments(int goods, long samples, double meanRelTol, double covRelTol,
                               std::uint64_t seed) {
    PreferenceDistribution dist = generateDistribution(seed, goods);
    BundleMoments exact = bundleMoments(dist);
    int rows = static_cast<int>(exact.mean.size());

    Pcg32 rng = makeStream(seed, {0x6d6du});
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(rows);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(rows, rows);
    Eigen::VectorXd z(goods), v(rows);
    for (long i = 0; i < samples; ++i) {
        for (int g = 0; g < goods; ++g) z[g] = rng.normal();
        Eigen::VectorXd x = dist.mu() + dist.cholesky() * z;
        for (std::uint32_t m = 1; m <= static_cast<std::uint32_t>(rows); ++m) {
            double val = 0.0;
            for (std::uint32_t mm = m; mm != 0; mm &= mm - 1) val += x[std::countr_zero(mm)];
            v[m - 1] = val;
        }
        mean += v;
        second += v * v.transpose();
    }
    mean /= static_cast<double>(samples);
    Eigen::MatrixXd cov = second / static_cast<double>(samples) - mean * mean.transpose();

    double worstMean = 0.0;
    for (int i = 0; i < rows; ++i)
        worstMean = std::max(worstMean, std::abs(mean[i] - exact.mean[i]) / std::abs(exact.mean[i]));
    double covErr = (cov - exact.cov).norm() / exact.cov.norm();

    CheckResult r;
    r.name = "bundle-moments";
    r.passed = worstMean <= meanRelTol && covErr <= covRelTol;
    r.detail = format("worst mean error %.4f%% (tol %.1f%%), cov Frobenius error %.4f%% (tol %.1f%%)",
                      worstMean * 100.0, meanRelTol * 100.0, covErr * 100.0, covRelTol * 100.0);
    return r;
}

CheckResult checkTriggerCalibration(const std::vector<double>& deltaTs, long trials, double tol,
                                    std::uint64_t seed) {
    double worst = 0.0;
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < deltaTs.size(); ++i) {
        Pcg32 rng = makeStream(seed, {0x7472u, i});
        long hits = 0;
        for (long k = 0; k < trials; ++k)
            if (shouldRecommend(deltaTs[i], 0.25, rng)) ++hits;
        double freq = static_cast<double>(hits) / static_cast<double>(trials);
        double expect = 1.0 - std::exp(-0.25 * deltaTs[i]);
        double err = std::abs(freq - expect);
        worst = std::max(worst, err);
        if (err > tol) ok = false;
        detail += format("dt=%g: |%.4f-%.4f|=%.4f ", deltaTs[i], freq, expect, err);
    }
    CheckResult r;
    r.name = "trigger-calibration";
    r.passed = ok;
    r.detail = detail + format("(tol %.3f, %ld trials each)", tol, trials);
    return r;
}

CheckResult checkStrategyInvariants(int sessions, std::uint64_t seed) {
    long violations = 0;
    long offersChecked = 0;
    const Preset presets[] = {Preset::Tdf, Preset::TftmfRandom, Preset::TftmfOne};
    for (int k = 0; k < sessions; ++k) {
        Preset preset = presets[k % 3];
        std::uint64_t cellSeed = seed + static_cast<std::uint64_t>(k);
        Instance inst = makeInstance(10, cellSeed);
        ShopValuation shop = inst.pricing.asFunction();

        Pcg32 paramRng = makeStream(cellSeed, {0x7072u});
        StrategyRanges ranges;
        StrategyKind kind =
            preset == Preset::Tdf ? StrategyKind::TimeDependentFraction : StrategyKind::TitForTatMonotone;
        StrategyParams cp = drawParams(kind, Role::Customer, ranges, paramRng);
        if (preset == Preset::TftmfOne) cp.delta = 1.0;
        StrategyParams sp = drawParams(StrategyKind::TimeDependentFraction, Role::Shop, ranges, paramRng);
        auto customer = makeBidder(cp);
        auto shopBidder = makeBidder(sp);

        SessionConfig scfg;
        scfg.recommender.threshold = 0.0;
        SessionStreams streams{makeStream(cellSeed, {0x62u}), makeStream(cellSeed, {0x74u}),
                               makeStream(cellSeed, {0x63u})};
        NegotiationOutcome outcome =
            runSession(scfg, inst.dist, inst.customer, shop, *customer, *shopBidder, streams);

        std::unordered_map<std::uint32_t, double> lastCustomerBid;
        std::unordered_map<std::uint32_t, double> lastShopAsk;
        double lastCustomerNet = std::numeric_limits<double>::infinity();
        const double eps = 1e-9;
        for (const Event& e : outcome.transcript) {
            if (e.kind != EventKind::Offer && e.kind != EventKind::Recommend &&
                e.kind != EventKind::Revisit)
                continue;
            ++offersChecked;
            double price = *e.price;
            if (e.actor == Actor::Customer) {
                // Never bid above the own valuation.
                if (price > inst.customer.value(e.bundle) + eps) ++violations;
                if (cp.kind == StrategyKind::TimeDependentFraction) {
                    auto it = lastCustomerBid.find(e.bundle.mask());
                    if (it != lastCustomerBid.end() && price < it->second - eps) ++violations;
                    lastCustomerBid[e.bundle.mask()] = price;
                } else {
                    // Monotone concession: demanded net value never rises.
                    double net = inst.customer.value(e.bundle) - price;
                    if (net > lastCustomerNet + eps) ++violations;
                    lastCustomerNet = net;
                }
            } else {
                if (price < shop(e.bundle) - eps) ++violations;
                auto it = lastShopAsk.find(e.bundle.mask());
                if (it != lastShopAsk.end() && price > it->second + eps) ++violations;
                lastShopAsk[e.bundle.mask()] = price;
            }
        }
    }
    CheckResult r;
    r.name = "strategy-invariants";
    r.passed = violations == 0;
    r.detail = format("%ld violations across %ld offers (%d sessions)", violations, offersChecked, sessions);
    return r;
}

std::vector<CheckResult> runQuickValidation(std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(checkParetoCertificate(5, 10, 200, seed));
    out.push_back(checkConditionalExpectation(4, 5, 1000000, 0.015, seed));
    out.push_back(checkBundleMoments(3, 200000, 0.02, 0.08, seed));
    out.push_back(checkTriggerCalibration({1.0, 4.0, 10.0}, 20000, 0.02, seed));
    out.push_back(checkStrategyInvariants(1000, seed));
    return out;
}

}  // namespace haggle
