#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace haggle {

/// Largest good count the exhaustive routines (extrema scan, full moment
/// materialization) will accept: 2^24 - 1 bundles is still tractable.
inline constexpr int kMaxGoods = 24;

/// A nonempty subset of the shop's n goods, stored as a bit mask
/// (bit i set = good i present). The empty set is not a valid bundle.
/// Bundles are canonically ordered by their integer mask value; that order
/// is used for deterministic iteration and tie-breaking everywhere.
class Bundle {
public:
    Bundle(std::uint32_t mask, int goods) : mask_(mask), goods_(goods) {
        if (goods < 1 || goods > kMaxGoods) throw std::invalid_argument("Bundle: good count out of range");
        if (mask == 0) throw std::invalid_argument("Bundle: empty bundle");
        if (mask >> goods) throw std::invalid_argument("Bundle: mask exceeds good count");
    }

    static Bundle full(int goods) { return Bundle((1u << goods) - 1u, goods); }

    static Bundle singleton(int good, int goods) { return Bundle(1u << good, goods); }

    std::uint32_t mask() const { return mask_; }
    int goods() const { return goods_; }
    int size() const { return std::popcount(mask_); }
    bool contains(int good) const { return (mask_ >> good) & 1u; }

    /// Goods present, ascending.
    std::vector<int> items() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
        return out;
    }

    /// Bit string, character i = presence of good i ("0110..." for n goods).
    std::string bits() const {
        std::string s(static_cast<std::size_t>(goods_), '0');
        for (int i = 0; i < goods_; ++i)
            if (contains(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    friend bool operator==(const Bundle& a, const Bundle& b) {
        return a.mask_ == b.mask_ && a.goods_ == b.goods_;
    }
    friend bool operator!=(const Bundle& a, const Bundle& b) { return !(a == b); }
    /// Canonical order.
    friend bool operator<(const Bundle& a, const Bundle& b) { return a.mask_ < b.mask_; }

private:
    std::uint32_t mask_;
    int goods_;
};

/// All bundles at Hamming distance 1 from b: one good removed or one added.
/// The empty set is excluded, so a singleton has n - 1 neighbors and every
/// other bundle has exactly n. Result is in canonical (ascending mask) order.
inline std::vector<Bundle> neighborhood(const Bundle& b) {
    std::vector<Bundle> out;
    out.reserve(static_cast<std::size_t>(b.goods()));
    for (int i = 0; i < b.goods(); ++i) {
        std::uint32_t flipped = b.mask() ^ (1u << i);
        if (flipped != 0) out.push_back(Bundle(flipped, b.goods()));
    }
    return out;
}

/// All 2^n - 1 bundles in canonical order. Intended for small n only.
inline std::vector<Bundle> allBundles(int goods) {
    if (goods > kMaxGoods) throw std::invalid_argument("allBundles: good count exceeds enumeration bound");
    std::vector<Bundle> out;
    out.reserve((1u << goods) - 1u);
    for (std::uint32_t m = 1; m < (1u << goods); ++m) out.push_back(Bundle(m, goods));
    return out;
}

}  // namespace haggle
