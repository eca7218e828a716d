#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "haggle/bundle.hpp"

namespace haggle {

/// One agent's per-good monetary values. Bundle valuations are additively
/// separable: the value of a bundle is the sum over its goods.
class ValuationTable {
public:
    explicit ValuationTable(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("ValuationTable: no goods");
    }

    int goods() const { return static_cast<int>(values_.size()); }
    double good(int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& goodValues() const { return values_; }

    double value(const Bundle& b) const {
        double v = 0.0;
        for (std::uint32_t m = b.mask(); m != 0; m &= m - 1) v += values_[static_cast<std::size_t>(std::countr_zero(m))];
        return v;
    }

    double meanGoodValue() const {
        return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
    }

private:
    std::vector<double> values_;
};

/// Shop-side bundle valuation. The shop's values need not be additively
/// separable, so the general shape is a function of the bundle.
using ShopValuation = std::function<double(const Bundle&)>;

/// Customer valuation minus shop valuation: the joint surplus available from
/// trading bundle b at any price.
inline double gainsFromTrade(const Bundle& b, const ValuationTable& customer, const ShopValuation& shop) {
    return customer.value(b) - shop(b);
}

}  // namespace haggle
