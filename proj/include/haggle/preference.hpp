#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "haggle/bundle.hpp"
#include "haggle/rng.hpp"
#include "haggle/valuation.hpp"

namespace haggle {

/// Conditioning event so improbable (tail mass < 1e-15) that the customer
/// model carries no usable information. Callers fall back to unconditional
/// expectations.
class VacuousConditionError : public std::domain_error {
public:
    explicit VacuousConditionError(double alpha)
        : std::domain_error("conditioning event is vacuous (standardized cutoff > 8)"), alpha_(alpha) {}
    double alpha() const { return alpha_; }

private:
    double alpha_;
};

/// How the fixed cross-good correlation matrix is built.
struct CorrelationSpec {
    enum class Kind { Identity, Ar1, Equicorrelated };
    Kind kind = Kind::Ar1;
    /// Ar1: corr(i, j) = rho^|i-j|. Equicorrelated: corr(i, j) = rho off the
    /// diagonal (a common taste factor shared by all goods).
    double rho = 0.5;

    Eigen::MatrixXd build(int n) const;
};

/// Parameters for sampling a fresh preference distribution.
struct DistributionSpec {
    double meanLo = 40.0;
    double meanHi = 250.0;
    /// Lower bound on sd as a fraction of the mean.
    double sdFracLo = 0.05;
    /// Upper bound on mu/sd keeping P(value < 0) at or below 0.0003 per good.
    double minMeanToSd = 3.432;
    CorrelationSpec correlation;
};

/// The population model of customer valuations: an n-variate normal over
/// per-good values with mean vector mu and covariance sigma = D * corr * D,
/// D = diag(sd). Immutable after construction.
class PreferenceDistribution {
public:
    PreferenceDistribution(Eigen::VectorXd mu, Eigen::MatrixXd sigma, Eigen::MatrixXd corr,
                           std::uint64_t seed = 0);

    int goods() const { return static_cast<int>(mu_.size()); }
    const Eigen::VectorXd& mu() const { return mu_; }
    const Eigen::MatrixXd& sigma() const { return sigma_; }
    const Eigen::MatrixXd& corr() const { return corr_; }
    const Eigen::MatrixXd& cholesky() const { return chol_; }
    std::uint64_t seed() const { return seed_; }

    /// Expected valuation of a bundle: sum of per-good means.
    double bundleMean(const Bundle& b) const;
    /// Covariance between two bundle valuations.
    double bundleCov(const Bundle& a, const Bundle& b) const;
    /// Variance (and sd) of one bundle valuation.
    double bundleVar(const Bundle& b) const { return bundleCov(b, b); }
    double bundleSd(const Bundle& b) const;

private:
    Eigen::VectorXd mu_;
    Eigen::MatrixXd sigma_;
    Eigen::MatrixXd corr_;
    Eigen::MatrixXd chol_;  // lower-triangular factor of sigma
    std::uint64_t seed_;
};

/// Draws a distribution: n distinct means uniform on [meanLo, meanHi], per-good
/// sd uniform on [sdFracLo * mu_i, mu_i / minMeanToSd], covariance assembled
/// from the fixed correlation matrix.
PreferenceDistribution generateDistribution(std::uint64_t seed, int goods,
                                            const DistributionSpec& spec = {});

struct CustomerSample {
    ValuationTable values;
    int rejections;  ///< draws discarded for containing a negative component
};

/// One customer draw from the distribution. Draws containing any negative
/// per-good value are rejected and redrawn; gives up after 1000 consecutive
/// rejections, which signals a misconfigured distribution.
CustomerSample sampleCustomer(const PreferenceDistribution& dist, Pcg32& rng);

/// The binary transform whose row k is the bit pattern of the k-th canonical
/// bundle; maps good-level moments to bundle-level moments. Small n only.
Eigen::MatrixXd bundleTransform(int goods);

/// Fully materialized bundle-level moments (mean vector and covariance over
/// all 2^n - 1 bundle valuations, canonical order). Small n only; for n = 10
/// use the lazy per-pair accessors on PreferenceDistribution instead.
struct BundleMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};
BundleMoments bundleMoments(const PreferenceDistribution& dist);

/// Closed-form E[v_c(target) | v_c(given) >= price]. With S = v_c(given)
/// ~ N(m, s^2) and a = (price - m) / s, each good contributes
///   E[z_i | S >= price] = mu_i + (Cov(z_i, S) / s) * mills(a),
/// and the target expectation is the sum over its goods. Throws
/// VacuousConditionError when a > 8.
double conditionalExpectation(const PreferenceDistribution& dist, const Bundle& target,
                              const Bundle& given, double price);

/// Memoizing view over conditionalExpectation. Prices are bucketed to 0.1
/// money units and per-good conditional means are cached per
/// (good, given-bundle, price bucket), so a full session performs at most
/// n * 2^n distinct estimations per price level. Not thread-safe: intended to
/// be session-local.
class ConditionalEstimator {
public:
    explicit ConditionalEstimator(const PreferenceDistribution& dist) : dist_(&dist) {}

    /// Bucketed, cached variant of conditionalExpectation. Same error contract.
    double expectation(const Bundle& target, const Bundle& given, double price);

    /// Unconditional expected valuation of a bundle.
    double unconditional(const Bundle& b) const { return dist_->bundleMean(b); }

    std::size_t cacheSize() const { return cache_.size(); }

private:
    const PreferenceDistribution* dist_;
    std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace haggle
