#pragma once

#include <algorithm>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

// Per-channel spatial median with edge replication padding. Output keeps the
// input shape; kernel must be odd and no larger than the shorter image side.
inline ViewImage median_filter(const ViewImage& img, int kernel) {
    if (!img.valid_shape()) throw ShapeError("median_filter: invalid image shape");
    if (kernel < 1 || kernel % 2 == 0 || kernel > std::min(img.height, img.width))
        throw InvalidKernel("median_filter: kernel must be odd, >=1, <= min(h,w)");
    if (kernel == 1) return img;

    const int r = kernel / 2;
    ViewImage out(img.height, img.width);
    std::vector<float> window;
    window.reserve(static_cast<std::size_t>(kernel) * kernel);

    for (int c = 0; c < ViewImage::kChannels; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                window.clear();
                for (int dy = -r; dy <= r; ++dy) {
                    int yy = std::clamp(y + dy, 0, img.height - 1);
                    for (int dx = -r; dx <= r; ++dx) {
                        int xx = std::clamp(x + dx, 0, img.width - 1);
                        window.push_back(img.at(c, yy, xx));
                    }
                }
                auto mid = window.begin() + window.size() / 2;
                std::nth_element(window.begin(), mid, window.end());
                out.at(c, y, x) = *mid;
            }
        }
    }
    return out;
}

}  // namespace adanav
