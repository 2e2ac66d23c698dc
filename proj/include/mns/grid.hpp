#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mns {

// Uniform periodic grid on [0,L)^d, M cells per axis, axis 0 fastest.
struct GridSpec {
    int d = 2;
    int M = 0;
    double L = 1.0;

    double h() const { return L / M; }
    std::int64_t cells() const {
        std::int64_t c = 1;
        for (int i = 0; i < d; ++i) c *= M;
        return c;
    }
    std::int64_t stride(int axis) const {
        std::int64_t s = 1;
        for (int i = 0; i < axis; ++i) s *= M;
        return s;
    }
    // cell volume element used by all grid quadratures
    double dV() const { return std::pow(h(), d); }

    std::int64_t index(const int* iv) const {
        std::int64_t idx = 0;
        for (int a = d - 1; a >= 0; --a) idx = idx * M + iv[a];
        return idx;
    }
    void coords(std::int64_t idx, int* iv) const {
        for (int a = 0; a < d; ++a) {
            iv[a] = static_cast<int>(idx % M);
            idx /= M;
        }
    }
    bool operator==(const GridSpec&) const = default;
};

// wrap a coordinate into [0,L)
inline double wrap_coord(double x, double L) {
    double w = std::fmod(x, L);
    if (w < 0.0) w += L;
    if (w >= L) w = 0.0;  // fmod can round up to L
    return w;
}

// minimum-image displacement in [-L/2, L/2]
inline double min_image(double dx, double L) {
    return dx - L * std::nearbyint(dx / L);
}

inline int wrap_cell(int i, int M) {
    i %= M;
    return i < 0 ? i + M : i;
}

// signed integer frequency for DFT bin k on an M-point axis: in [-M/2, M/2)
inline int freq_of_bin(int k, int M) { return k < (M + 1) / 2 ? k : k - M; }

}  // namespace mns
