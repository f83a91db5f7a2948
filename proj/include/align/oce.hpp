#pragma once

#include "align/types.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace align {

// Class-indexed depth compensation offsets, meters, nuScenes class order.
struct DepthOffsetTable {
    std::array<double, kNumClasses> d{1.5, 3.0, 3.0, 3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0};

    static const std::array<double, kNumClasses>& max_per_class();
    // Empty when every offset is >= 0 and within the per-class maximum.
    std::vector<std::string> validate() const;
};

struct MaskPoint {
    ProjectedPoint projected;
    Point3 point;  // the (x, y, z) half of the (u, v, x, y, z) tuple
};

struct MaskPointSet {
    int instance_id = 0;
    std::vector<MaskPoint> members;
};

struct OceAnchor {
    Point3 position{0.0, 0.0, 0.0};
    int class_id = 0;
    int instance_id = 0;
    Point3 surface_point{0.0, 0.0, 0.0};
    bool used_centroid_fallback = false;
    bool clamped_to_roi = false;
};

struct OceSkip {
    int instance_id = 0;
    std::string reason;
};

struct OceResult {
    std::vector<OceAnchor> anchors;  // ascending instance_id
    std::vector<OceSkip> skipped;
    std::vector<int> fallback_instances;
};

// Cloud points whose projection into the mask's camera lands on a true
// bitmap pixel (nearest-cell rasterization).
MaskPointSet gate_points(const Scene& scene, int camera_id, const InstanceMask& mask);

// Center of the mask's tight bounding box.
Pixel mask_center(const InstanceMask& mask);

// The 4 members closest to `center` in pixel space; ties broken by lower
// source_index. Throws InsufficientPoints when fewer than 4 members exist.
std::array<MaskPoint, 4> select_support(const MaskPointSet& points, const Pixel& center);

struct CenterEstimate {
    Point3 surface_point{0.0, 0.0, 0.0};
    Point3 position{0.0, 0.0, 0.0};
};

// Fits a local pixel->3D map on the support, lifts the mask center to a
// surface point and pushes it outward by d along the ray from the origin.
// Throws DegenerateConfiguration (collinear support pixels) and
// ZeroSurfacePoint (surface point too close to the origin).
CenterEstimate estimate_center(std::span<const MaskPoint> support, const Pixel& center,
                               double depth_offset);

// Surface point + offset along the ray direction; the Eq.-5 displacement.
Point3 apply_depth_offset(const Point3& surface_point, double depth_offset);

// One anchor per instance mask that gates >= 4 points (degenerate support
// falls back to the gated-point centroid). Anchors outside the ROI are
// clamped to its bounds. Deterministic: masks processed in ascending
// instance_id order.
OceResult run_oce(const Scene& scene, const DepthOffsetTable& offsets,
                  const RegionOfInterest& roi);

}  // namespace align
