#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qauth/linalg/matrix.hpp"

namespace qauth::linalg {

/// Engine used for every seeded draw. Callers own their engines; nothing in
/// the library keeps generator state.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

/// Matrix with i.i.d. standard complex Gaussian entries (Ginibre ensemble).
inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  ComplexMatrix g(rows, cols);
  for (auto& z : g.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// diag(R) absorbed into Q. Modified Gram-Schmidt with one
/// re-orthogonalisation pass yields R with a positive real diagonal, which is
/// exactly the phase-normalised factorisation.
inline ComplexMatrix haar_random_unitary(std::size_t dim, Rng& rng) {
  ComplexMatrix q = ginibre(dim, dim, rng);
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj{};
        for (std::size_t r = 0; r < dim; ++r) proj += std::conj(q(r, k)) * q(r, j);
        for (std::size_t r = 0; r < dim; ++r) q(r, j) -= proj * q(r, k);
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) norm += std::norm(q(r, j));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < dim; ++r) q(r, j) /= norm;
  }
  return q;
}

inline ComplexMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_unitary(dim, rng);
}

/// Uniformly distributed (Fubini-Study) pure state as a unit column vector.
inline ComplexMatrix random_pure_vector(std::size_t dim, Rng& rng) {
  ComplexMatrix v = ginibre(dim, 1, rng);
  v *= 1.0 / frobenius_norm(v);
  return v;
}

/// Random mixed state G G^dagger / tr(G G^dagger) with G Ginibre (Hilbert-Schmidt measure).
inline ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix rho = g * adjoint(g);
  rho *= 1.0 / trace(rho).real();
  return rho;
}

}  // namespace qauth::linalg
