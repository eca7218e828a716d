#pragma once

#include <vector>

#include "haggle/bundle.hpp"
#include "haggle/valuation.hpp"

namespace haggle {

/// A candidate agreement: a bundle at a price.
struct Deal {
    Bundle bundle;
    double price;
};

/// Net monetary values of a deal: what each side walks away with.
inline double customerNetValue(const Deal& d, const ValuationTable& customer) {
    return customer.value(d.bundle) - d.price;
}
inline double shopNetValue(const Deal& d, const ShopValuation& shop) {
    return d.price - shop(d.bundle);
}

struct GftExtrema {
    double maxGft;
    double minGft;
    std::vector<Bundle> best;  ///< all maximizers, canonical order
};

/// Exhaustive scan of all 2^n - 1 bundles for the extreme gains from trade.
/// Rejects n beyond the enumeration bound. Ties within `tol` of the running
/// maximum are all reported as maximizers.
GftExtrema gftExtrema(const ValuationTable& customer, const ShopValuation& shop, double tol = 1e-9);

/// True iff `a` weakly improves both agents' net monetary values over `b`,
/// strictly for at least one agent.
bool paretoDominates(const Deal& a, const Deal& b, const ValuationTable& customer, const ShopValuation& shop);

}  // namespace haggle
