#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sigmax/core.hpp"

namespace sigmax {

inline constexpr int kDefaultEmbedDim = 8;

using Matrix = std::vector<std::vector<double>>;

// Undirected hop distances between all vertex pairs. Pairs in different
// components get diameter + 1 (diameter of the finite part, at least 1).
Matrix geodesic_from_adjacency(const std::vector<std::vector<std::int32_t>>& adj,
                               Exec exec = Exec::serial);
Matrix geodesic_distances(const SocialGraph& g, Exec exec = Exec::serial);

struct MdsResult {
  Matrix coords;    // one K-vector per input point
  int rank = 0;     // positive eigenvalues actually used
  bool padded = false;  // fewer than K positive eigenvalues; rest zero-filled
};

// Classical multidimensional scaling: double-center the entrywise-squared
// distance matrix, take the top-K eigenpairs (deterministic cyclic Jacobi),
// scale eigenvectors by sqrt(eigenvalue). Sign convention: each eigenvector's
// first nonzero coordinate is positive.
MdsResult mds_embed(const Matrix& distances, int k);

// Dense symmetric eigensolver used by mds_embed; exposed for testing.
// Returns eigenvalues descending with matching eigenvectors (rows).
void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors);

struct Embedding {
  std::unordered_map<std::string, std::vector<double>> user_vec, item_vec;
  int dim = 0;  // per-id vector length K; node blocks are 2K

  std::vector<double> node_vector(const PurchaseNode& n) const;
};

// Users embedded from social hop distances; items from a complete graph
// (every pair at distance 1) or, when `log-driven` adjacency is supplied,
// from item co-purchase hops.
Embedding embed_users_items(const SocialGraph& social,
                            const std::vector<std::string>& items, int k,
                            Exec exec = Exec::serial);
Embedding embed_users_items_copurchase(
    const SocialGraph& social, const std::vector<std::string>& items,
    const std::vector<std::pair<std::string, std::string>>& item_pairs, int k,
    Exec exec = Exec::serial);

// Concatenation of [user block || item block] over sorted sources, then dest.
std::vector<double> hyperedge_vector(const Hyperedge& e, const Embedding& emb);

// exp(-|x|^2 / (2 h^2)); h == 0 degenerates to the indicator of x == 0.
double gaussian_kernel(std::span<const double> x, double h);

}  // namespace sigmax
