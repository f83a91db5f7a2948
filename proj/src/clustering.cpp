#include "align/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

namespace align {

namespace {

// Uniform grid with cell size eps; a point's neighbors all live in the
// surrounding 3x3x3 cell block.
class EpsGrid {
  public:
    EpsGrid(std::span<const Point3> points, double eps)
        : points_(points), inv_eps_(1.0 / eps), eps_sq_(eps * eps) {
        cells_.reserve(points.size());
        for (size_t i = 0; i < points.size(); ++i)
            cells_[key(points[i])].push_back(static_cast<int>(i));
    }

    // Ascending index order, self-inclusive, closed ball.
    std::vector<int> neighbors(int idx) const {
        const Point3& p = points_[idx];
        std::vector<int> out;
        const int64_t cx = coord(p.x());
        const int64_t cy = coord(p.y());
        const int64_t cz = coord(p.z());
        for (int64_t dx = -1; dx <= 1; ++dx)
            for (int64_t dy = -1; dy <= 1; ++dy)
                for (int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
                    if (it == cells_.end()) continue;
                    for (int j : it->second)
                        if ((points_[j] - p).squaredNorm() <= eps_sq_) out.push_back(j);
                }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    int64_t coord(double x) const {
        return static_cast<int64_t>(std::floor(x * inv_eps_));
    }
    uint64_t key(const Point3& p) const {
        return pack(coord(p.x()), coord(p.y()), coord(p.z()));
    }
    static uint64_t pack(int64_t x, int64_t y, int64_t z) {
        const uint64_t mask = (1ULL << 21) - 1;
        return ((static_cast<uint64_t>(x) & mask) << 42) |
               ((static_cast<uint64_t>(y) & mask) << 21) |
               (static_cast<uint64_t>(z) & mask);
    }

    std::span<const Point3> points_;
    double inv_eps_;
    double eps_sq_;
    std::unordered_map<uint64_t, std::vector<int>> cells_;
};

}  // namespace

std::vector<int> dbscan(std::span<const Point3> points, const DbscanParams& params) {
    const int n = static_cast<int>(points.size());
    constexpr int kUnvisited = -2;
    std::vector<int> labels(n, kUnvisited);
    if (n == 0) return labels;

    const EpsGrid grid(points, params.eps);
    int next_cluster = 0;

    for (int seed = 0; seed < n; ++seed) {
        if (labels[seed] != kUnvisited) continue;
        const auto seed_neighbors = grid.neighbors(seed);
        if (static_cast<int>(seed_neighbors.size()) < params.min_pts) {
            labels[seed] = kNoiseLabel;
            continue;
        }
        const int cid = next_cluster++;
        labels[seed] = cid;
        std::deque<int> frontier(seed_neighbors.begin(), seed_neighbors.end());
        while (!frontier.empty()) {
            const int q = frontier.front();
            frontier.pop_front();
            if (labels[q] == kNoiseLabel) labels[q] = cid;  // border point
            if (labels[q] != kUnvisited) continue;
            labels[q] = cid;
            const auto q_neighbors = grid.neighbors(q);
            if (static_cast<int>(q_neighbors.size()) >= params.min_pts)
                frontier.insert(frontier.end(), q_neighbors.begin(), q_neighbors.end());
        }
    }
    return labels;
}

std::vector<Cluster> extract_clusters(std::span<const Point3> points,
                                      std::span<const int> labels,
                                      const DbscanParams& params) {
    int max_label = -1;
    for (int label : labels) max_label = std::max(max_label, label);
    if (max_label < 0) return {};

    std::vector<Cluster> clusters(max_label + 1);
    for (int cid = 0; cid <= max_label; ++cid) clusters[cid].cluster_id = cid;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0) clusters[labels[i]].member_indices.push_back(static_cast<int>(i));
    }

    const EpsGrid grid(points, params.eps);
    for (auto& cluster : clusters) {
        Point3 sum = Point3::Zero();
        for (int idx : cluster.member_indices) {
            if (static_cast<int>(grid.neighbors(idx).size()) >= params.min_pts) {
                cluster.core_indices.push_back(idx);
                sum += points[idx];
            }
        }
        if (!cluster.core_indices.empty())
            cluster.core_anchor = sum / static_cast<double>(cluster.core_indices.size());
    }
    return clusters;
}

}  // namespace align
