#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ldslab/timeseries.hpp"

namespace ldslab {

// Assignment of input periods to representative periods. All indices are
// 0-based in memory; file formats are 1-based.
struct PeriodMapping {
  int num_periods = 0;          // N
  int steps_per_period = 0;     // T
  int num_representatives = 0;  // W
  std::vector<int> rep_of;      // size N, values in [0, W)
  std::vector<int> designated;  // size W, the input period each representative IS
  std::vector<int> weight;      // size W, number of periods assigned

  bool valid() const;
};

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

struct ClusteringResult {
  std::vector<int> assignment;        // size N, values in [0, k)
  FeatureMatrix centroids;            // k rows
  double inertia = 0.0;               // sum of squared distances to centroids
  std::vector<double> inertia_trace;  // value after each Lloyd iteration
};

// Row n concatenates, column by column, the values of period n, each column
// normalized by its global maximum (all-zero columns stay all-zero).
FeatureMatrix build_feature_matrix(const TimeSeriesTable& ts, int num_periods,
                                   int steps_per_period);

// Lloyd iteration with k-means++ seeding from a deterministic PRNG; empty
// clusters are repaired by reassigning the farthest point.
ClusteringResult cluster_kmeans(const FeatureMatrix& features, int k, std::uint64_t seed,
                                int max_iter = 100);

// Representative = medoid of its cluster; ties break to the lowest period.
PeriodMapping select_representatives(const ClusteringResult& clustering,
                                     const FeatureMatrix& features);

PeriodMapping identity_mapping(int num_periods, int steps_per_period);

// Full pipeline driven by the config's aggregation settings.
PeriodMapping aggregate(const SystemConfig& config, const TimeSeriesTable& ts);

// CSV outputs (1-based): `period,representative` and
// `representative,designated_period,weight`.
void write_mapping_csv(const PeriodMapping& mapping, const std::filesystem::path& period_file,
                       const std::filesystem::path& representative_file);

}  // namespace ldslab
