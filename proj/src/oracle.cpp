#include "haggle/oracle.hpp"

#include <stdexcept>

namespace haggle {

GftExtrema gftExtrema(const ValuationTable& customer, const ShopValuation& shop, double tol) {
    int n = customer.goods();
    if (n > kMaxGoods) throw std::invalid_argument("gftExtrema: good count exceeds enumeration bound");

    GftExtrema out{0.0, 0.0, {}};
    bool first = true;
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        double gft = gainsFromTrade(Bundle(m, n), customer, shop);
        if (first) {
            out.maxGft = out.minGft = gft;
            first = false;
        } else {
            if (gft > out.maxGft) out.maxGft = gft;
            if (gft < out.minGft) out.minGft = gft;
        }
    }
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        Bundle b(m, n);
        if (gainsFromTrade(b, customer, shop) >= out.maxGft - tol) out.best.push_back(b);
    }
    return out;
}

bool paretoDominates(const Deal& a, const Deal& b, const ValuationTable& customer, const ShopValuation& shop) {
    double ca = customerNetValue(a, customer);
    double cb = customerNetValue(b, customer);
    double sa = shopNetValue(a, shop);
    double sb = shopNetValue(b, shop);
    return ca >= cb && sa >= sb && (ca > cb || sa > sb);
}

}  // namespace haggle
