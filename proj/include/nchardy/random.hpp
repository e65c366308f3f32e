#ifndef NCHARDY_RANDOM_HPP
#define NCHARDY_RANDOM_HPP

#include <random>

#include "nchardy/corr.hpp"
#include "nchardy/graph.hpp"
#include "nchardy/types.hpp"

// Seeded generators used by the property suites and tests. Everything is
// driven by a caller-owned engine so runs reproduce bundle seeds.
namespace nchardy {

using Rng = std::mt19937_64;

cx random_complex(Rng& rng);

AlgebraElement random_algebra_element(GraphPtr g, Rng& rng);

// Dense coefficients: standard complex Gaussian on every length-k path.
CorrTensor random_tensor(GraphPtr g, int degree, Rng& rng);

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Haar-ish unitary from the QR of a Gaussian matrix.
Matrix random_unitary(Eigen::Index n, Rng& rng);

Matrix random_psd(Eigen::Index n, Rng& rng);

}  // namespace nchardy

#endif
