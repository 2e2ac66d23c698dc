#include "mns/fft.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mns {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

Fft::Fft(int n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    rev_.resize(n);
    int lg = 0;
    while ((1 << lg) < n) ++lg;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < lg; ++b)
            if (i & (1 << b)) r |= 1 << (lg - 1 - b);
        rev_[i] = r;
    }
    tw_.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * k / n;
        tw_[k] = {std::cos(ang), std::sin(ang)};
    }
}

void Fft::run(cplx* a, bool inv) const {
    const int n = n_;
    for (int i = 0; i < n; ++i)
        if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len >> 1;
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < half; ++k) {
                cplx w = tw_[k * step];
                if (inv) w = std::conj(w);
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
    if (inv) {
        const double s = 1.0 / n;
        for (int i = 0; i < n; ++i) a[i] *= s;
    }
}

void fft_nd(cplx* data, const GridSpec& g, bool inverse) {
    const Fft plan(g.M);
    const std::int64_t cells = g.cells();
    std::vector<cplx> line(g.M);
    for (int axis = 0; axis < g.d; ++axis) {
        const std::int64_t s = g.stride(axis);
        const std::int64_t nlines = cells / g.M;
        for (std::int64_t l = 0; l < nlines; ++l) {
            // base index of line l: insert a zero digit at position `axis`
            const std::int64_t lo = l % s;
            const std::int64_t hi = l / s;
            const std::int64_t base = hi * s * g.M + lo;
            for (int c = 0; c < g.M; ++c) line[c] = data[base + c * s];
            if (inverse)
                plan.inverse(line.data());
            else
                plan.forward(line.data());
            for (int c = 0; c < g.M; ++c) data[base + c * s] = line[c];
        }
    }
}

void fft_convolve(const std::vector<double>& a, const std::vector<double>& b,
                  const GridSpec& g, std::vector<double>& out) {
    const std::int64_t n = g.cells();
    assert(static_cast<std::int64_t>(a.size()) == n && b.size() == a.size());
    std::vector<cplx> fa(n), fb(n);
    for (std::int64_t i = 0; i < n; ++i) fa[i] = a[i];
    for (std::int64_t i = 0; i < n; ++i) fb[i] = b[i];
    fft_nd(fa.data(), g, false);
    fft_nd(fb.data(), g, false);
    for (std::int64_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_nd(fa.data(), g, true);
    out.resize(n);
    const double scale = g.dV();  // Riemann-sum convolution
    for (std::int64_t i = 0; i < n; ++i) out[i] = fa[i].real() * scale;
}

}  // namespace mns
