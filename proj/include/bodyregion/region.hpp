#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace bodyregion {

// The five named body regions in cranio-caudal order, plus the rejection
// category "other" for scans matching none of them.
enum class region : int {
    head = 0,
    neck = 1,
    chest = 2,
    abdomen = 3,
    pelvis = 4,
    other = 5,
};

inline constexpr int region_count = 6;
inline constexpr int named_region_count = 5;

// Cranio-caudal (head-to-feet) ordering of the named regions. All compound
// labels are serialized in this order.
inline constexpr std::array<region, 5> region_order() {
    return {region::head, region::neck, region::chest, region::abdomen, region::pelvis};
}

inline constexpr std::array<region, 6> all_regions() {
    return {region::head, region::neck, region::chest,
            region::abdomen, region::pelvis, region::other};
}

inline std::string_view region_name(region r) {
    switch (r) {
        case region::head: return "head";
        case region::neck: return "neck";
        case region::chest: return "chest";
        case region::abdomen: return "abdomen";
        case region::pelvis: return "pelvis";
        case region::other: return "other";
    }
    return "?";
}

inline std::optional<region> region_from_name(std::string_view name) {
    for (region r : all_regions())
        if (region_name(r) == name) return r;
    return std::nullopt;
}

inline constexpr int region_index(region r) { return static_cast<int>(r); }

enum class modality { ct, mr };

inline std::string_view modality_name(modality m) {
    return m == modality::ct ? "ct" : "mr";
}

inline std::optional<modality> modality_from_name(std::string_view name) {
    if (name == "ct" || name == "CT") return modality::ct;
    if (name == "mr" || name == "MR" || name == "mri" || name == "MRI") return modality::mr;
    return std::nullopt;
}

} // namespace bodyregion
