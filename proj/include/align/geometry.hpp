#pragma once

#include "align/types.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace align {

// Pinhole projection into one camera. Returns the projection when the
// camera-frame depth is strictly positive and the pixel lands in
// [0, width) x [0, height); empty otherwise. Depth is recorded before the
// perspective divide.
std::optional<ProjectedPoint> project_point(const Point3& p,
                                            const CameraCalibration& calib,
                                            int source_index = 0);

// Batched projection; concatenation of non-empty per-point results with
// source_index set to the cloud position, input order preserved.
std::vector<ProjectedPoint> project_cloud(std::span<const Point3> cloud,
                                          const CameraCalibration& calib);

// Points inside the closed ROI box, paired with their original index.
// Stable order.
std::vector<std::pair<int, Point3>> filter_roi(std::span<const Point3> cloud,
                                               const RegionOfInterest& roi);

// Least-squares fit of a 3x3 map H with H * (u, v, 1)^T ~= (x, y, z)^T over
// all pairs. Needs >= 3 pairs whose homogeneous pixels span rank 3.
// Throws DegenerateConfiguration when the smallest singular value of the
// pixel matrix is below 1e-8 times the largest.
Homography estimate_homography(
    std::span<const std::pair<Pixel, Point3>> pairs);

inline Point3 apply_homography(const Homography& h, const Pixel& p) {
    return h * Eigen::Vector3d(p.x(), p.y(), 1.0);
}

// Sum of squared residuals ||H * (u,v,1) - (x,y,z)||^2 over the pairs.
double homography_residual(const Homography& h,
                           std::span<const std::pair<Pixel, Point3>> pairs);

// Camera-frame position of a LiDAR-frame point.
Eigen::Vector3d to_camera_frame(const Point3& p,
                                const CameraCalibration& calib);

}  // namespace align
