#include "sigmax/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace sigmax {

Matrix geodesic_from_adjacency(const std::vector<std::vector<std::int32_t>>& adj,
                               Exec exec) {
  const int n = static_cast<int>(adj.size());
  Matrix d(n, std::vector<double>(n, -1.0));

  auto bfs_row = [&](int src) {
    std::vector<int> dist(n, -1);
    std::deque<int> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (dist[v] == -1) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (int v = 0; v < n; ++v) d[src][v] = dist[v];
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int src = 0; src < n; ++src) bfs_row(src);
  } else {
    for (int src = 0; src < n; ++src) bfs_row(src);
  }

  double diameter = 1.0;  // floor so disconnected pairs always exceed real hops
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j] > diameter) diameter = d[i][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j] < 0.0) d[i][j] = diameter + 1.0;
  return d;
}

Matrix geodesic_distances(const SocialGraph& g, Exec exec) {
  return geodesic_from_adjacency(g.undirected_adjacency(), exec);
}

// Cyclic Jacobi rotations; deterministic sweep order, no pivoting heuristics.
void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors) {
  const int n = static_cast<int>(a.size());
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) vectors[i][i] = 1.0;
  values.assign(n, 0.0);
  if (n == 0) return;

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
  if (scale == 0.0) scale = 1.0;
  const double tol = 1e-14 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p][q]));
    if (off <= tol) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= tol) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = vectors[i][p], viq = vectors[i][q];
          vectors[i][p] = c * vip - s * viq;
          vectors[i][q] = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a[x][x] > a[y][y]; });

  Matrix sorted_vectors(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    values[j] = a[order[j]][order[j]];
    for (int i = 0; i < n; ++i) sorted_vectors[j][i] = vectors[i][order[j]];
  }
  vectors = std::move(sorted_vectors);  // row j = eigenvector j
}

MdsResult mds_embed(const Matrix& distances, int k) {
  const int n = static_cast<int>(distances.size());
  if (k < 1) throw ValidationError("embedding dimension must be positive");
  MdsResult res;
  res.coords.assign(n, std::vector<double>(k, 0.0));
  if (n == 0) return res;

  Matrix sq(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sq[i][j] = distances[i][j] * distances[i][j];

  std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
  double grand = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      row_mean[i] += sq[i][j];
      col_mean[j] += sq[i][j];
      grand += sq[i][j];
    }
  for (int i = 0; i < n; ++i) row_mean[i] /= n;
  for (int j = 0; j < n; ++j) col_mean[j] /= n;
  grand /= static_cast<double>(n) * n;

  Matrix b(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b[i][j] = -0.5 * (sq[i][j] - row_mean[i] - col_mean[j] + grand);

  std::vector<double> values;
  Matrix vectors;
  jacobi_eigen(std::move(b), values, vectors);

  const double positive_floor = 1e-12;
  for (int j = 0; j < k && j < n; ++j) {
    if (values[j] <= positive_floor) break;
    std::vector<double>& v = vectors[j];
    for (int i = 0; i < n; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0.0)
          for (double& x : v) x = -x;
        break;
      }
    }
    const double s = std::sqrt(values[j]);
    for (int i = 0; i < n; ++i) res.coords[i][j] = v[i] * s;
    ++res.rank;
  }
  res.padded = res.rank < k;
  return res;
}

std::vector<double> Embedding::node_vector(const PurchaseNode& n) const {
  auto ui = user_vec.find(n.user);
  auto ii = item_vec.find(n.item);
  if (ui == user_vec.end())
    throw ValidationError("no embedding for user '" + n.user + "'");
  if (ii == item_vec.end())
    throw ValidationError("no embedding for item '" + n.item + "'");
  std::vector<double> out;
  out.reserve(2 * dim);
  out.insert(out.end(), ui->second.begin(), ui->second.end());
  out.insert(out.end(), ii->second.begin(), ii->second.end());
  return out;
}

namespace {

void fill_from_coords(const std::vector<std::string>& names, const Matrix& coords,
                      std::unordered_map<std::string, std::vector<double>>& out) {
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = coords[i];
}

}  // namespace

Embedding embed_users_items(const SocialGraph& social,
                            const std::vector<std::string>& items, int k, Exec exec) {
  Embedding emb;
  emb.dim = k;
  fill_from_coords(social.users(), mds_embed(geodesic_distances(social, exec), k).coords,
                   emb.user_vec);

  std::vector<std::string> sorted_items = items;
  std::sort(sorted_items.begin(), sorted_items.end());
  sorted_items.erase(std::unique(sorted_items.begin(), sorted_items.end()),
                     sorted_items.end());
  const int m = static_cast<int>(sorted_items.size());
  Matrix d(m, std::vector<double>(m, 1.0));
  for (int i = 0; i < m; ++i) d[i][i] = 0.0;
  fill_from_coords(sorted_items, mds_embed(d, k).coords, emb.item_vec);
  return emb;
}

Embedding embed_users_items_copurchase(
    const SocialGraph& social, const std::vector<std::string>& items,
    const std::vector<std::pair<std::string, std::string>>& item_pairs, int k,
    Exec exec) {
  Embedding emb;
  emb.dim = k;
  fill_from_coords(social.users(), mds_embed(geodesic_distances(social, exec), k).coords,
                   emb.user_vec);

  std::vector<std::string> sorted_items = items;
  std::sort(sorted_items.begin(), sorted_items.end());
  sorted_items.erase(std::unique(sorted_items.begin(), sorted_items.end()),
                     sorted_items.end());
  auto idx_of = [&](const std::string& s) -> int {
    auto it = std::lower_bound(sorted_items.begin(), sorted_items.end(), s);
    if (it == sorted_items.end() || *it != s) return -1;
    return static_cast<int>(it - sorted_items.begin());
  };
  std::vector<std::vector<std::int32_t>> adj(sorted_items.size());
  for (const auto& [a, b] : item_pairs) {
    if (a == b) continue;
    const int ia = idx_of(a), ib = idx_of(b);
    if (ia < 0 || ib < 0) continue;
    adj[ia].push_back(ib);
    adj[ib].push_back(ia);
  }
  for (auto& lst : adj) {
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
  }
  fill_from_coords(sorted_items, mds_embed(geodesic_from_adjacency(adj, exec), k).coords,
                   emb.item_vec);
  return emb;
}

std::vector<double> hyperedge_vector(const Hyperedge& e, const Embedding& emb) {
  std::vector<PurchaseNode> sources = e.sources;
  std::sort(sources.begin(), sources.end());
  std::vector<double> out;
  out.reserve((sources.size() + 1) * 2 * emb.dim);
  for (const PurchaseNode& s : sources) {
    const std::vector<double> v = emb.node_vector(s);
    out.insert(out.end(), v.begin(), v.end());
  }
  const std::vector<double> v = emb.node_vector(e.dest);
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

double gaussian_kernel(std::span<const double> x, double h) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  if (h == 0.0) return sq == 0.0 ? 1.0 : 0.0;
  return std::exp(-sq / (2.0 * h * h));
}

}  // namespace sigmax
