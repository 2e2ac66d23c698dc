#pragma once

#include <span>
#include <vector>

#include "mns/fft.hpp"
#include "mns/grid.hpp"
#include "mns/particles.hpp"

namespace mns {

// Smooth dyadic partition of unity on the frequency lattice 2*pi*k/L.
// chi covers {|xi| <= lambda}; the annular bump phi is supported in
// {1/lambda <= |xi| <= 2*lambda} and phi_j = phi(2^{-j} xi). For
// lambda in (1, sqrt 2) consecutive annuli overlap and |i-j| > 1 blocks are
// disjoint; the telescoping construction makes chi + sum phi_j exactly 1.
struct DyadicPartition {
    double lambda = 4.0 / 3.0;
    GridSpec g;
    int j_max = 0;
    // multiplier planes indexed j + 1, j = -1 .. j_max
    std::vector<std::vector<double>> mult;

    const std::vector<double>& multiplier(int j) const { return mult[j + 1]; }
};

// Builds and numerically validates the partition; throws std::invalid_argument
// ("PARTITION_INVALID ...") when lambda is out of range or an invariant fails.
DyadicPartition build_partition(double lambda, const GridSpec& g);

// Littlewood-Paley block Delta_j f via DFT multiplier; j in [-1, j_max],
// anything below -1 is identically zero. Real in, real out.
void block(std::span<const double> f, int j, const DyadicPartition& P,
           std::span<double> out);

enum class NormFamily { besov, triebel_lizorkin };

struct NormSpec {
    NormFamily family = NormFamily::besov;
    double s = 0.0;
    double p = 2.0;  // Lebesgue exponent; [1, inf] (finite, >1, for TL)
    double r = 2.0;  // summation exponent over blocks; (1, inf]
};

void validate_norm_spec(const NormSpec& spec);

// Grid L^p norm with the h^{d/p} quadrature factor (p = inf -> sup norm).
double lp_norm(std::span<const double> f, const GridSpec& g, double p);

// Besov:   || ( 2^{js} ||Delta_j f||_{L^p} )_j ||_{l^r}
// T-L:     || || ( 2^{js} Delta_j f )_j ||_{l^r} ||_{L^p}
double norm(std::span<const double> f, const NormSpec& spec,
            const DyadicPartition& P);

// Cloud-in-cell raster of the raw empirical measures (density units: the grid
// quadrature of the output is the total deposited mass).
std::vector<double> cic_density(const ParticleState& s, const GridSpec& g);
std::vector<double> cic_momentum(const ParticleState& s, const GridSpec& g);

struct DistanceResult {
    double dist_s = 0.0;  // ||S^N - rho||
    double dist_v = 0.0;  // (sum_q ||V^N_q - rho ups_q||^2)^{1/2}
};

// Negative-order distances of the raw measures to the limit fields in
// E^{-alpha}_{2, r_tilde}; requires alpha > d/2 + 1.
DistanceResult distribution_distance(const ParticleState& s,
                                     std::span<const double> rho,
                                     std::span<const double> ups, double alpha,
                                     double r_tilde, NormFamily family,
                                     const DyadicPartition& P);

}  // namespace mns
