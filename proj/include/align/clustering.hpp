#pragma once

#include "align/types.hpp"

#include <span>
#include <vector>

namespace align {

struct DbscanParams {
    double eps = 0.6;  // meters
    int min_pts = 7;   // self-inclusive neighborhood count
};

constexpr int kNoiseLabel = -1;

struct Cluster {
    int cluster_id = 0;
    std::vector<int> member_indices;
    std::vector<int> core_indices;  // subset of member_indices
    Point3 core_anchor{0.0, 0.0, 0.0};  // centroid of the core points
};

// DBSCAN with closed-ball neighborhoods (distance <= eps) counted
// self-inclusively. Deterministic: seeds are expanded in ascending index
// order and neighbor lists are visited ascending, so border points join the
// first core cluster that reaches them. Labels are kNoiseLabel or a cluster
// id assigned in order of first expansion.
std::vector<int> dbscan(std::span<const Point3> points, const DbscanParams& params);

// Groups a labeling into clusters ordered by ascending cluster_id.
std::vector<Cluster> extract_clusters(std::span<const Point3> points,
                                      std::span<const int> labels,
                                      const DbscanParams& params);

}  // namespace align
