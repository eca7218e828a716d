#include "haggle/pricing.hpp"

#include <numeric>
#include <stdexcept>

namespace haggle {

ShopPricing::ShopPricing(const PreferenceDistribution& dist, double beta, double gamma)
    : beta_(beta), gamma_(gamma) {
    if (beta <= 0.0 || beta >= 1.0) throw std::invalid_argument("ShopPricing: beta must lie in (0, 1)");
    if (gamma < 0.0) throw std::invalid_argument("ShopPricing: gamma must be nonnegative");
    int n = dist.goods();
    mu_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mu_[static_cast<std::size_t>(i)] = dist.mu()[i];
    // Every good appears in the same share of size-k bundles, so the size-k
    // average of sum-of-means is k times the grand mean.
    double grandMean = std::accumulate(mu_.begin(), mu_.end(), 0.0) / static_cast<double>(n);
    sizeMean_.resize(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) sizeMean_[static_cast<std::size_t>(k)] = grandMean * k;
}

double ShopPricing::value(const Bundle& b) const {
    double expected = 0.0;
    for (std::uint32_t m = b.mask(); m != 0; m &= m - 1)
        expected += mu_[static_cast<std::size_t>(std::countr_zero(m))];
    double avg = sizeMean_[static_cast<std::size_t>(b.size())];
    return expected * (beta_ + gamma_ * (expected - avg) / avg);
}

}  // namespace haggle
