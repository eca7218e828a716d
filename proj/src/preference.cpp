#include "haggle/preference.hpp"

#include <algorithm>
#include <cmath>

#include "haggle/normal.hpp"

namespace haggle {

Eigen::MatrixXd CorrelationSpec::build(int n) const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
    if (kind == Kind::Ar1) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c(i, j) = std::pow(rho, std::abs(i - j));
    } else if (kind == Kind::Equicorrelated) {
        if (rho <= -1.0 / (n - 1) || rho >= 1.0)
            throw std::invalid_argument("CorrelationSpec: equicorrelation out of the positive-definite range");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) c(i, j) = rho;
    }
    return c;
}

PreferenceDistribution::PreferenceDistribution(Eigen::VectorXd mu, Eigen::MatrixXd sigma,
                                               Eigen::MatrixXd corr, std::uint64_t seed)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), corr_(std::move(corr)), seed_(seed) {
    if (mu_.size() < 1) throw std::invalid_argument("PreferenceDistribution: no goods");
    if (sigma_.rows() != mu_.size() || sigma_.cols() != mu_.size())
        throw std::invalid_argument("PreferenceDistribution: covariance shape mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("PreferenceDistribution: covariance not positive definite");
    chol_ = llt.matrixL();
}

double PreferenceDistribution::bundleMean(const Bundle& b) const {
    double v = 0.0;
    for (std::uint32_t m = b.mask(); m != 0; m &= m - 1) v += mu_[std::countr_zero(m)];
    return v;
}

double PreferenceDistribution::bundleCov(const Bundle& a, const Bundle& b) const {
    double v = 0.0;
    for (std::uint32_t ma = a.mask(); ma != 0; ma &= ma - 1) {
        int i = std::countr_zero(ma);
        for (std::uint32_t mb = b.mask(); mb != 0; mb &= mb - 1) v += sigma_(i, std::countr_zero(mb));
    }
    return v;
}

double PreferenceDistribution::bundleSd(const Bundle& b) const { return std::sqrt(bundleVar(b)); }

PreferenceDistribution generateDistribution(std::uint64_t seed, int goods, const DistributionSpec& spec) {
    if (goods < 1) throw std::invalid_argument("generateDistribution: need at least one good");
    Pcg32 rng = makeStream(seed, {0x9d15u});

    Eigen::VectorXd mu(goods);
    for (int i = 0; i < goods; ++i) {
        double m;
        bool fresh;
        do {
            m = rng.uniform(spec.meanLo, spec.meanHi);
            fresh = true;
            for (int j = 0; j < i; ++j)
                if (mu[j] == m) fresh = false;
        } while (!fresh);
        mu[i] = m;
    }

    Eigen::VectorXd sd(goods);
    for (int i = 0; i < goods; ++i) sd[i] = rng.uniform(spec.sdFracLo * mu[i], mu[i] / spec.minMeanToSd);

    Eigen::MatrixXd corr = spec.correlation.build(goods);
    Eigen::MatrixXd sigma = sd.asDiagonal() * corr * sd.asDiagonal();
    return PreferenceDistribution(std::move(mu), std::move(sigma), std::move(corr), seed);
}

CustomerSample sampleCustomer(const PreferenceDistribution& dist, Pcg32& rng) {
    int n = dist.goods();
    Eigen::VectorXd z(n);
    int rejections = 0;
    for (;;) {
        for (int i = 0; i < n; ++i) z[i] = rng.normal();
        Eigen::VectorXd x = dist.mu() + dist.cholesky() * z;
        if ((x.array() >= 0.0).all()) {
            std::vector<double> values(x.data(), x.data() + n);
            return CustomerSample{ValuationTable(std::move(values)), rejections};
        }
        if (++rejections >= 1000)
            throw std::runtime_error("sampleCustomer: 1000 consecutive negative draws; distribution misconfigured");
    }
}

Eigen::MatrixXd bundleTransform(int goods) {
    if (goods > 20) throw std::invalid_argument("bundleTransform: good count too large to materialize");
    std::uint32_t rows = (1u << goods) - 1u;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, goods);
    for (std::uint32_t m = 1; m <= rows; ++m)
        for (int i = 0; i < goods; ++i)
            if ((m >> i) & 1u) t(m - 1, i) = 1.0;
    return t;
}

BundleMoments bundleMoments(const PreferenceDistribution& dist) {
    Eigen::MatrixXd t = bundleTransform(dist.goods());
    return BundleMoments{t * dist.mu(), t * dist.sigma() * t.transpose()};
}

namespace {

/// Per-good slice of the closed form: E[z_good | v_c(given) >= price].
double conditionalGoodMean(const PreferenceDistribution& dist, int good, const Bundle& given,
                           double price) {
    double m = dist.bundleMean(given);
    double s = dist.bundleSd(given);
    double alpha = (price - m) / s;
    if (alpha > 8.0) throw VacuousConditionError(alpha);
    double cov = 0.0;
    for (std::uint32_t mb = given.mask(); mb != 0; mb &= mb - 1)
        cov += dist.sigma()(good, std::countr_zero(mb));
    return dist.mu()[good] + (cov / s) * inverseMills(alpha);
}

}  // namespace

double conditionalExpectation(const PreferenceDistribution& dist, const Bundle& target,
                              const Bundle& given, double price) {
    double total = 0.0;
    for (std::uint32_t m = target.mask(); m != 0; m &= m - 1)
        total += conditionalGoodMean(dist, std::countr_zero(m), given, price);
    return total;
}

double ConditionalEstimator::expectation(const Bundle& target, const Bundle& given, double price) {
    if (!std::isfinite(price)) return conditionalExpectation(*dist_, target, given, price);
    // Quantize to 0.1 money units; cached values are computed at the bucket
    // price so lookups are order-independent.
    std::int64_t bucket = std::llround(price * 10.0);
    double bucketPrice = static_cast<double>(bucket) * 0.1;
    double total = 0.0;
    for (std::uint32_t m = target.mask(); m != 0; m &= m - 1) {
        int good = std::countr_zero(m);
        std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(good)) << 56) ^
                            (static_cast<std::uint64_t>(given.mask()) << 32) ^
                            static_cast<std::uint64_t>(static_cast<std::uint32_t>(bucket));
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            total += it->second;
            continue;
        }
        double v = conditionalGoodMean(*dist_, good, given, bucketPrice);
        cache_.emplace(key, v);
        total += v;
    }
    return total;
}

}  // namespace haggle
