#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "adanav/core/error.hpp"

namespace adanav {

inline constexpr int kViewsPerPanorama = 36;
inline constexpr double kDegreesPerView = 10.0;

struct Seed {
    std::uint64_t value = 0;
};

// One panoramic view: 3 channels, planar layout, data[(c*H + y)*W + x],
// values in [0, 1].
struct ViewImage {
    static constexpr int kChannels = 3;

    int height = 0;
    int width = 0;
    std::vector<float> data;

    ViewImage() = default;
    ViewImage(int h, int w, float fill = 0.0f)
        : height(h), width(w), data(static_cast<std::size_t>(kChannels) * h * w, fill) {}

    std::size_t size() const { return data.size(); }

    float& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    std::span<const float> flat() const { return {data.data(), data.size()}; }

    bool valid_shape() const {
        return height > 0 && width > 0 &&
               data.size() == static_cast<std::size_t>(kChannels) * height * width;
    }
};

// Encoder output vector; the all-zeros vector is the MASKED sentinel.
struct Embedding {
    std::vector<float> values;

    Embedding() = default;
    explicit Embedding(std::vector<float> v) : values(std::move(v)) {}
    static Embedding zeros(std::size_t n) { return Embedding(std::vector<float>(n, 0.0f)); }

    std::size_t size() const { return values.size(); }

    bool is_masked() const {
        return std::all_of(values.begin(), values.end(), [](float v) { return v == 0.0f; });
    }

    bool operator==(const Embedding& other) const { return values == other.values; }
};

// Per-step observation: 36 views plus the navigable index subset (1-based).
struct Panorama {
    std::vector<ViewImage> views;   // exactly 36, index i stored at views[i-1]
    std::vector<int> navigable;     // sorted, unique, subset of 1..36

    const ViewImage& view(int index_1based) const { return views[index_1based - 1]; }
};

inline void validate_view_indices(const std::vector<int>& indices) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 1 || indices[i] > kViewsPerPanorama)
            throw RangeError("view index out of 1..36");
        if (i > 0 && indices[i] <= indices[i - 1])
            throw RangeError("view indices must be sorted and unique");
    }
}

}  // namespace adanav
