#pragma once

#include <vector>

#include "licheng.hpp"
#include "strip_transform.hpp"

namespace packing3d {

inline Rational volume_bin_bound(const std::vector<Item>& items) { return 8 * total_volume(items) + 18; }

// Li-Cheng strip, cut at integer heights, one extra bin per cutting plane.
inline Packing volume_bin_pack(const std::vector<Item>& items) {
    for (const auto& it : items)
        if (it.w > 1 || it.d > 1 || it.h > 1) throw PreconditionError("item '" + it.id + "' exceeds a unit bin");
    StripResult strip = licheng_strip(items, LiChengMode::general);
    ItemTable table(items);
    return cut_strip_to_bins(strip.packing, table, CutMode::naive()).bins;
}

}  // namespace packing3d
