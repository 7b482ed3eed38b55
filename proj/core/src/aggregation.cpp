#include "ldslab/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace ldslab {

namespace {

// splitmix64; deterministic across platforms.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_double() {  // uniform in [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  std::size_t next_below(std::size_t n) {
    return static_cast<std::size_t>((static_cast<__uint128_t>(next()) * n) >> 64);
  }
};

double squared_distance(const FeatureMatrix& m, std::size_t row, const double* point) {
  double total = 0.0;
  const double* a = &m.data[row * m.cols];
  for (std::size_t c = 0; c < m.cols; ++c) {
    const double d = a[c] - point[c];
    total += d * d;
  }
  return total;
}

}  // namespace

bool PeriodMapping::valid() const {
  if (num_periods <= 0 || steps_per_period <= 0 || num_representatives <= 0) return false;
  if (rep_of.size() != static_cast<std::size_t>(num_periods)) return false;
  if (designated.size() != static_cast<std::size_t>(num_representatives)) return false;
  if (weight.size() != static_cast<std::size_t>(num_representatives)) return false;
  std::vector<int> counts(num_representatives, 0);
  for (int w : rep_of) {
    if (w < 0 || w >= num_representatives) return false;
    ++counts[w];
  }
  int total = 0;
  for (int w = 0; w < num_representatives; ++w) {
    if (counts[w] != weight[w] || counts[w] == 0) return false;
    total += counts[w];
    const int n = designated[w];
    if (n < 0 || n >= num_periods || rep_of[n] != w) return false;
  }
  return total == num_periods;
}

FeatureMatrix build_feature_matrix(const TimeSeriesTable& ts, int num_periods,
                                   int steps_per_period) {
  const std::size_t N = static_cast<std::size_t>(num_periods);
  const std::size_t T = static_cast<std::size_t>(steps_per_period);
  if (num_periods <= 0 || steps_per_period <= 0 || ts.length() != N * T) {
    throw DimensionError("timeseries length " + std::to_string(ts.length()) +
                         " does not equal N*T = " + std::to_string(N * T));
  }
  const std::size_t num_columns = ts.columns().size();
  FeatureMatrix features;
  features.rows = N;
  features.cols = T * num_columns;
  features.data.assign(N * features.cols, 0.0);

  for (std::size_t c = 0; c < num_columns; ++c) {
    const std::vector<double>& column = ts.columns()[c];
    double max_value = 0.0;
    for (double v : column) max_value = std::max(max_value, std::abs(v));
    const double scale = max_value > 0.0 ? 1.0 / max_value : 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t t = 0; t < T; ++t) {
        features.at(n, c * T + t) = column[n * T + t] * scale;
      }
    }
  }
  return features;
}

ClusteringResult cluster_kmeans(const FeatureMatrix& features, int k, std::uint64_t seed,
                                int max_iter) {
  const std::size_t N = features.rows;
  if (k < 1 || static_cast<std::size_t>(k) > N) {
    throw InvalidK("k = " + std::to_string(k) + " with " + std::to_string(N) + " periods");
  }
  if (max_iter < 1) max_iter = 1;
  const std::size_t K = static_cast<std::size_t>(k);
  const std::size_t D = features.cols;

  SplitMix64 rng(seed);
  ClusteringResult result;
  result.centroids.rows = K;
  result.centroids.cols = D;
  result.centroids.data.assign(K * D, 0.0);

  // k-means++ seeding: the first centroid is uniform, later ones are sampled
  // proportionally to the squared distance to the nearest chosen centroid.
  std::vector<std::size_t> chosen;
  chosen.push_back(rng.next_below(N));
  std::vector<double> min_dist(N, 0.0);
  while (chosen.size() < K) {
    double total = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c : chosen) {
        best = std::min(best, squared_distance(features, n, &features.data[c * D]));
      }
      min_dist[n] = best;
      total += best;
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.next_below(N);
    } else {
      const double r = rng.next_double() * total;
      double cumulative = 0.0;
      pick = N - 1;
      for (std::size_t n = 0; n < N; ++n) {
        cumulative += min_dist[n];
        if (r < cumulative) {
          pick = n;
          break;
        }
      }
    }
    chosen.push_back(pick);
  }
  for (std::size_t c = 0; c < K; ++c) {
    std::copy_n(&features.data[chosen[c] * D], D, &result.centroids.data[c * D]);
  }

  result.assignment.assign(N, -1);
  std::vector<int> counts(K, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    // Assignment step; ties go to the lowest cluster id.
    bool changed = false;
    double inertia = 0.0;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t n = 0; n < N; ++n) {
      int best = 0;
      double best_dist = squared_distance(features, n, &result.centroids.data[0]);
      for (std::size_t c = 1; c < K; ++c) {
        const double d = squared_distance(features, n, &result.centroids.data[c * D]);
        if (d < best_dist) {
          best_dist = d;
          best = static_cast<int>(c);
        }
      }
      if (result.assignment[n] != best) changed = true;
      result.assignment[n] = best;
      ++counts[best];
      inertia += best_dist;
    }

    // Empty-cluster repair: move the point farthest from its centroid.
    for (std::size_t c = 0; c < K; ++c) {
      if (counts[c] > 0) continue;
      std::size_t farthest = 0;
      double farthest_dist = -1.0;
      for (std::size_t n = 0; n < N; ++n) {
        if (counts[result.assignment[n]] <= 1) continue;
        const double d =
            squared_distance(features, n, &result.centroids.data[result.assignment[n] * D]);
        if (d > farthest_dist) {
          farthest_dist = d;
          farthest = n;
        }
      }
      --counts[result.assignment[farthest]];
      inertia -= farthest_dist;
      result.assignment[farthest] = static_cast<int>(c);
      ++counts[c];
      std::copy_n(&features.data[farthest * D], D, &result.centroids.data[c * D]);
      changed = true;
    }

    result.inertia = inertia;
    result.inertia_trace.push_back(inertia);
    if (!changed && iter > 0) break;

    // Mean step.
    std::vector<double> sums(K * D, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
      const std::size_t c = static_cast<std::size_t>(result.assignment[n]);
      for (std::size_t d = 0; d < D; ++d) sums[c * D + d] += features.at(n, d);
    }
    for (std::size_t c = 0; c < K; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < D; ++d) {
        result.centroids.data[c * D + d] = sums[c * D + d] / counts[c];
      }
    }
  }

  // Final inertia against the final centroids.
  double inertia = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    inertia += squared_distance(features, n,
                                &result.centroids.data[result.assignment[n] * D]);
  }
  result.inertia = inertia;
  result.inertia_trace.push_back(inertia);
  return result;
}

PeriodMapping select_representatives(const ClusteringResult& clustering,
                                     const FeatureMatrix& features) {
  const std::size_t N = features.rows;
  const std::size_t D = features.cols;
  if (clustering.assignment.size() != N) {
    throw DimensionError("clustering covers " + std::to_string(clustering.assignment.size()) +
                         " periods, features have " + std::to_string(N));
  }
  const std::size_t K = clustering.centroids.rows;

  PeriodMapping mapping;
  mapping.num_periods = static_cast<int>(N);
  mapping.num_representatives = static_cast<int>(K);
  mapping.rep_of = clustering.assignment;
  mapping.designated.assign(K, -1);
  mapping.weight.assign(K, 0);

  std::vector<double> best_dist(K, std::numeric_limits<double>::infinity());
  for (std::size_t n = 0; n < N; ++n) {
    const std::size_t c = static_cast<std::size_t>(clustering.assignment[n]);
    ++mapping.weight[c];
    const double d = squared_distance(features, n, &clustering.centroids.data[c * D]);
    if (d < best_dist[c]) {  // strict: ties keep the lowest period index
      best_dist[c] = d;
      mapping.designated[c] = static_cast<int>(n);
    }
  }
  for (std::size_t c = 0; c < K; ++c) {
    if (mapping.designated[c] < 0) {
      throw EmptyClusterError("cluster " + std::to_string(c + 1) + " has no members");
    }
  }

  // Canonical numbering: representatives ordered by their designated period.
  std::vector<int> order(K);
  for (std::size_t c = 0; c < K; ++c) order[c] = static_cast<int>(c);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return mapping.designated[a] < mapping.designated[b]; });
  std::vector<int> rank(K);
  for (std::size_t c = 0; c < K; ++c) rank[order[c]] = static_cast<int>(c);
  PeriodMapping canonical = mapping;
  for (std::size_t c = 0; c < K; ++c) {
    canonical.designated[rank[c]] = mapping.designated[c];
    canonical.weight[rank[c]] = mapping.weight[c];
  }
  for (int& w : canonical.rep_of) w = rank[w];
  return canonical;
}

PeriodMapping identity_mapping(int num_periods, int steps_per_period) {
  if (num_periods < 1) {
    throw InvalidDims("identity mapping needs at least one period");
  }
  PeriodMapping mapping;
  mapping.num_periods = num_periods;
  mapping.steps_per_period = steps_per_period;
  mapping.num_representatives = num_periods;
  mapping.rep_of.resize(num_periods);
  mapping.designated.resize(num_periods);
  mapping.weight.assign(num_periods, 1);
  for (int n = 0; n < num_periods; ++n) {
    mapping.rep_of[n] = n;
    mapping.designated[n] = n;
  }
  return mapping;
}

PeriodMapping aggregate(const SystemConfig& config, const TimeSeriesTable& ts) {
  const int N = config.horizon.num_periods();
  const int T = config.horizon.steps_per_period;
  const FeatureMatrix features = build_feature_matrix(ts, N, T);
  const ClusteringResult clustering = cluster_kmeans(
      features, config.aggregation.num_representatives, config.aggregation.seed);
  PeriodMapping mapping = select_representatives(clustering, features);
  mapping.steps_per_period = T;
  return mapping;
}

void write_mapping_csv(const PeriodMapping& mapping, const std::filesystem::path& period_file,
                       const std::filesystem::path& representative_file) {
  std::ofstream periods(period_file);
  if (!periods) {
    throw IoError("cannot open '" + period_file.string() + "' for writing");
  }
  periods << "period,representative\n";
  for (int n = 0; n < mapping.num_periods; ++n) {
    periods << n + 1 << "," << mapping.rep_of[n] + 1 << "\n";
  }

  std::ofstream reps(representative_file);
  if (!reps) {
    throw IoError("cannot open '" + representative_file.string() + "' for writing");
  }
  reps << "representative,designated_period,weight\n";
  for (int w = 0; w < mapping.num_representatives; ++w) {
    reps << w + 1 << "," << mapping.designated[w] + 1 << "," << mapping.weight[w] << "\n";
  }
}

}  // namespace ldslab
