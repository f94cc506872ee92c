#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bellbound {

// Mixed-radix odometer utilities. Tuples are enumerated with the LAST
// position fastest, matching row-major flattening throughout the project.

inline std::size_t radix_product(std::span<const int> radix) {
    std::size_t p = 1;
    for (int r : radix) p *= static_cast<std::size_t>(r);
    return p;
}

// Advances idx in odometer order; returns false after the last tuple.
inline bool next_tuple(std::span<int> idx, std::span<const int> radix) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < radix[k]) return true;
        idx[k] = 0;
    }
    return false;
}

inline std::size_t flatten(std::span<const int> idx, std::span<const int> radix) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < idx.size(); ++k)
        flat = flat * static_cast<std::size_t>(radix[k]) +
               static_cast<std::size_t>(idx[k]);
    return flat;
}

inline void unflatten(std::size_t flat, std::span<const int> radix,
                      std::span<int> idx) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        idx[k] = static_cast<int>(flat % static_cast<std::size_t>(radix[k]));
        flat /= static_cast<std::size_t>(radix[k]);
    }
}

} // namespace bellbound
