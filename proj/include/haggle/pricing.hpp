#pragma once

#include <vector>

#include "haggle/bundle.hpp"
#include "haggle/preference.hpp"
#include "haggle/valuation.hpp"

namespace haggle {

/// Shop-side bundle valuation derived from the population model. The base
/// level is a fraction beta of the expected customer valuation; on top of
/// that, bundles whose expected valuation sits above the average for their
/// size carry a proportionally higher markup (and below-average ones a
/// discount):
///
///   v_s(b) = E[v_c(b)] * (beta + gamma * (E[v_c(b)] - avg_{|b|}) / avg_{|b|})
///
/// where avg_k is the mean expected valuation over all size-k bundles. The
/// quadratic deviation term makes v_s non-additive whenever gamma > 0.
class ShopPricing {
public:
    ShopPricing(const PreferenceDistribution& dist, double beta = 0.93, double gamma = 0.3);

    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    /// Mean expected customer valuation over all bundles of the given size.
    double sizeMean(int size) const { return sizeMean_[static_cast<std::size_t>(size)]; }

    double value(const Bundle& b) const;
    ShopValuation asFunction() const {
        return [*this](const Bundle& b) { return value(b); };
    }

private:
    double beta_;
    double gamma_;
    std::vector<double> mu_;
    std::vector<double> sizeMean_;  // index k = average E[v_c] across size-k bundles
};

}  // namespace haggle
