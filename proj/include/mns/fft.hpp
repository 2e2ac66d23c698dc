#pragma once

#include <complex>
#include <vector>

#include "mns/grid.hpp"

namespace mns {

using cplx = std::complex<double>;

// Radix-2 complex FFT, power-of-two lengths only. Plan-free and reentrant;
// forward is unnormalized, inverse carries the 1/n factor.
class Fft {
public:
    explicit Fft(int n);
    int size() const { return n_; }
    void forward(cplx* line) const { run(line, false); }
    void inverse(cplx* line) const { run(line, true); }

private:
    void run(cplx* line, bool inv) const;
    int n_;
    std::vector<int> rev_;
    std::vector<cplx> tw_;  // e^{-2pi i k/n}, k < n/2
};

bool is_pow2(int n);

// In-place d-dimensional transform over a GridSpec-shaped complex array.
void fft_nd(cplx* data, const GridSpec& g, bool inverse);

// Periodic continuous convolution on the grid: out = (a * b) with the h^d
// quadrature factor, via DFT. Real inputs, real output.
void fft_convolve(const std::vector<double>& a, const std::vector<double>& b,
                  const GridSpec& g, std::vector<double>& out);

}  // namespace mns
