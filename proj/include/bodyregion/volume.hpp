#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "bodyregion/errors.hpp"

namespace bodyregion {

enum class voxel_kind { label, intensity };

// Dense voxel grid with spacing/orientation metadata. Index order is
// column-major (axis 0 fastest), matching the on-disk layout. The direction
// matrix maps voxel axes to world RAS coordinates: column j is the world
// direction of voxel axis j. After canonicalization axis 2 increases from
// inferior to superior.
struct volume {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing_mm{1.0, 1.0, 1.0};
    std::array<std::array<double, 3>, 3> direction{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; // [row][col]
    std::array<double, 3> origin_mm{0.0, 0.0, 0.0};
    voxel_kind kind = voxel_kind::label;
    int16_t source_datatype = 0; // NIfTI datatype code of the file this came from

    std::vector<int32_t> labels;  // kind == label
    std::vector<double> values;   // kind == intensity

    size_t voxel_count() const {
        return static_cast<size_t>(dims[0]) * dims[1] * dims[2];
    }

    size_t index(int x, int y, int z) const {
        return static_cast<size_t>(x) +
               static_cast<size_t>(dims[0]) * (static_cast<size_t>(y) +
               static_cast<size_t>(dims[1]) * static_cast<size_t>(z));
    }

    int32_t label_at(int x, int y, int z) const { return labels[index(x, y, z)]; }
    double value_at(int x, int y, int z) const { return values[index(x, y, z)]; }

    void validate() const {
        for (double s : spacing_mm)
            if (!(s > 0)) throw error("non-positive voxel spacing");
        for (int d : dims)
            if (d <= 0) throw error("non-positive dimension");
        const size_t n = voxel_count();
        if (kind == voxel_kind::label) {
            if (labels.size() != n) throw dimension_mismatch("label buffer size != dims product");
            for (int32_t v : labels)
                if (v < 0) throw not_a_label_map("negative label value");
        } else {
            if (values.size() != n) throw dimension_mismatch("value buffer size != dims product");
        }
    }
};

} // namespace bodyregion
