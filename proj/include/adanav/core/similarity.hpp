#pragma once

#include <cmath>
#include <span>

#include "adanav/core/error.hpp"
#include "adanav/core/types.hpp"

namespace adanav {

// cos(a, b) = a.b / (|a||b|), clamped to [-1, 1] against rounding overshoot.
// Zero-norm input is an error, never a silent 0.
inline double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw ShapeError("cosine_similarity: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw DegenerateVector("cosine_similarity: zero-norm input");
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return c;
}

inline double cosine_similarity(const Embedding& a, const Embedding& b) {
    return cosine_similarity(std::span<const float>(a.values),
                             std::span<const float>(b.values));
}

inline double cosine_similarity(const ViewImage& a, const ViewImage& b) {
    return cosine_similarity(a.flat(), b.flat());
}

}  // namespace adanav
