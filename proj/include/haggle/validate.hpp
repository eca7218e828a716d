#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haggle/experiment.hpp"

namespace haggle {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Enumerates a price grid over [min v_s, max v_c] on random instances and
/// certifies that deals on maximum-gains-from-trade bundles are undominated
/// while every deal on any other bundle is dominated by some grid deal on a
/// maximizer.
CheckResult checkParetoCertificate(int goods, int instances, int gridPoints, std::uint64_t seed);

/// Rejection-sampling Monte Carlo oracle against the closed-form conditional
/// expectation, on random (target, given, price) triples.
CheckResult checkConditionalExpectation(int goods, int triples, long samples, double relTol,
                                        std::uint64_t seed);

/// Exact bundle-level moments against empirical moments of sampled customers.
CheckResult checkBundleMoments(int goods, long samples, double meanRelTol, double covRelTol,
                               std::uint64_t seed);

/// Empirical recommendation-trigger frequency against 1 - exp(-rate * dt).
CheckResult checkTriggerCalibration(const std::vector<double>& deltaTs, long trials, double tol,
                                    std::uint64_t seed);

/// Scans transcripts of randomized sessions for strategy invariants:
/// per-bundle bid monotonicity under the time-dependent strategy, offers never
/// beyond the own valuation, and the tit-for-tat monotone concession guard.
CheckResult checkStrategyInvariants(int sessions, std::uint64_t seed);

/// Runs a compact version of every check (desk-scale samples); used by the
/// `validate` CLI subcommand.
std::vector<CheckResult> runQuickValidation(std::uint64_t seed);

}  // namespace haggle
