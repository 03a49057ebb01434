#pragma once

#include <algorithm>
#include <string>
#include <string_view>

#include "adanav/core/error.hpp"
#include "adanav/core/random.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

enum class CorruptionKind { Speckle, LowLight, Defocus, MotionBlur };

inline CorruptionKind corruption_from_string(std::string_view s) {
    if (s == "speckle") return CorruptionKind::Speckle;
    if (s == "low_light") return CorruptionKind::LowLight;
    if (s == "defocus") return CorruptionKind::Defocus;
    if (s == "motion_blur") return CorruptionKind::MotionBlur;
    throw ConfigError("unknown corruption kind: " + std::string(s));
}

inline const char* corruption_name(CorruptionKind k) {
    switch (k) {
        case CorruptionKind::Speckle: return "speckle";
        case CorruptionKind::LowLight: return "low_light";
        case CorruptionKind::Defocus: return "defocus";
        case CorruptionKind::MotionBlur: return "motion_blur";
    }
    return "?";
}

namespace detail {

// Mean filter with edge replication over a (2rx+1) x (2ry+1) window.
inline ViewImage box_blur(const ViewImage& img, int rx, int ry) {
    ViewImage out(img.height, img.width);
    const double inv = 1.0 / ((2 * rx + 1) * (2 * ry + 1));
    for (int c = 0; c < ViewImage::kChannels; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int dy = -ry; dy <= ry; ++dy) {
                    int yy = std::clamp(y + dy, 0, img.height - 1);
                    for (int dx = -rx; dx <= rx; ++dx) {
                        int xx = std::clamp(x + dx, 0, img.width - 1);
                        acc += img.at(c, yy, xx);
                    }
                }
                out.at(c, y, x) = static_cast<float>(acc * inv);
            }
        }
    }
    return out;
}

}  // namespace detail

// Speckle noise scale per severity, following the standard corruption
// benchmark constants.
inline constexpr double kSpeckleScale[5] = {0.15, 0.20, 0.35, 0.45, 0.60};

// severity s in 1..5:
//   speckle      x * (1 + scale(s) * eta), eta ~ N(0,1) per pixel
//   low_light    x * (1 - 0.15 * s)
//   defocus      box blur of radius s
//   motion_blur  horizontal mean kernel of length 2s+1
// Outputs are clamped to [0, 1]; noise is deterministic per seed.
inline ViewImage corrupt(const ViewImage& img, CorruptionKind kind, int severity, Seed seed) {
    if (!img.valid_shape()) throw ShapeError("corrupt: invalid image shape");
    if (severity < 1 || severity > 5)
        throw ConfigError("corrupt: severity must be in 1..5");

    switch (kind) {
        case CorruptionKind::Speckle: {
            SeededStream stream(seed);
            ViewImage out = img;
            const double s = kSpeckleScale[severity - 1];
            for (float& v : out.data) {
                v = static_cast<float>(v * (1.0 + s * stream.normal()));
                v = std::clamp(v, 0.0f, 1.0f);
            }
            return out;
        }
        case CorruptionKind::LowLight: {
            ViewImage out = img;
            const float factor = 1.0f - 0.15f * severity;
            for (float& v : out.data) v = std::clamp(v * factor, 0.0f, 1.0f);
            return out;
        }
        case CorruptionKind::Defocus: {
            ViewImage out = detail::box_blur(img, severity, severity);
            for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
            return out;
        }
        case CorruptionKind::MotionBlur: {
            ViewImage out = detail::box_blur(img, severity, 0);
            for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
            return out;
        }
    }
    throw ConfigError("corrupt: unknown corruption kind");
}

}  // namespace adanav
