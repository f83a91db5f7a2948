#include "align/oce.hpp"

#include "align/errors.hpp"
#include "align/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace align {

const std::array<double, kNumClasses>& DepthOffsetTable::max_per_class() {
    // d_max per class, nuScenes class order.
    static const std::array<double, kNumClasses> kMax = {3.9, 7.6, 7.5, 7.4, 4.4,
                                                         1.4, 1.9, 1.5, 1.4, 2.0};
    return kMax;
}

std::vector<std::string> DepthOffsetTable::validate() const {
    std::vector<std::string> violations;
    for (int c = 0; c < kNumClasses; ++c) {
        if (d[c] < 0.0)
            violations.push_back(std::string("depth offset for ") + kClassNames[c] +
                                 " is negative");
        if (d[c] > max_per_class()[c])
            violations.push_back(std::string("depth offset for ") + kClassNames[c] +
                                 " exceeds class maximum " +
                                 std::to_string(max_per_class()[c]));
    }
    return violations;
}

MaskPointSet gate_points(const Scene& scene, int camera_id, const InstanceMask& mask) {
    MaskPointSet set;
    set.instance_id = mask.instance_id;
    const CameraCalibration* calib = scene.camera_by_id(camera_id);
    if (!calib) return set;
    for (size_t i = 0; i < scene.points.size(); ++i) {
        auto pp = project_point(scene.points[i], *calib, static_cast<int>(i));
        if (!pp) continue;
        const int u = static_cast<int>(std::lround(pp->pixel.x()));
        const int v = static_cast<int>(std::lround(pp->pixel.y()));
        if (mask.at(u, v)) set.members.push_back({*pp, scene.points[i]});
    }
    return set;
}

Pixel mask_center(const InstanceMask& mask) {
    return Pixel((mask.u_min + mask.u_max) / 2.0, (mask.v_min + mask.v_max) / 2.0);
}

std::array<MaskPoint, 4> select_support(const MaskPointSet& points, const Pixel& center) {
    if (points.members.size() < 4)
        throw InsufficientPoints("instance " + std::to_string(points.instance_id) + " gated " +
                                 std::to_string(points.members.size()) + " points, need 4");

    std::vector<int> order(points.members.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto closer = [&](int a, int b) {
        const double da = (points.members[a].projected.pixel - center).squaredNorm();
        const double db = (points.members[b].projected.pixel - center).squaredNorm();
        if (da != db) return da < db;
        return points.members[a].projected.source_index < points.members[b].projected.source_index;
    };
    std::partial_sort(order.begin(), order.begin() + 4, order.end(), closer);

    return {points.members[order[0]], points.members[order[1]], points.members[order[2]],
            points.members[order[3]]};
}

Point3 apply_depth_offset(const Point3& surface_point, double depth_offset) {
    const double norm = surface_point.norm();
    if (norm < 1e-6)
        throw ZeroSurfacePoint("surface point norm " + std::to_string(norm) +
                               " leaves the ray direction undefined");
    return surface_point + depth_offset * (surface_point / norm);
}

CenterEstimate estimate_center(std::span<const MaskPoint> support, const Pixel& center,
                               double depth_offset) {
    std::vector<std::pair<Pixel, Point3>> pairs;
    pairs.reserve(support.size());
    for (const auto& m : support) pairs.emplace_back(m.projected.pixel, m.point);

    CenterEstimate estimate;
    estimate.surface_point = apply_homography(estimate_homography(pairs), center);
    estimate.position = apply_depth_offset(estimate.surface_point, depth_offset);
    return estimate;
}

OceResult run_oce(const Scene& scene, const DepthOffsetTable& offsets,
                  const RegionOfInterest& roi) {
    std::vector<const InstanceMask*> masks;
    masks.reserve(scene.masks.size());
    for (const auto& m : scene.masks) masks.push_back(&m);
    std::sort(masks.begin(), masks.end(), [](const InstanceMask* a, const InstanceMask* b) {
        return a->instance_id < b->instance_id;
    });

    OceResult result;
    for (const InstanceMask* mask : masks) {
        const MaskPointSet gated = gate_points(scene, mask->camera_id, *mask);
        if (gated.members.size() < 4) {
            result.skipped.push_back({mask->instance_id, "insufficient_points"});
            continue;
        }
        const Pixel center = mask_center(*mask);
        const double d = offsets.d[mask->class_id];

        CenterEstimate estimate;
        bool fallback = false;
        try {
            estimate = estimate_center(select_support(gated, center), center, d);
        } catch (const DegenerateConfiguration&) {
            Point3 centroid = Point3::Zero();
            for (const auto& m : gated.members) centroid += m.point;
            centroid /= static_cast<double>(gated.members.size());
            try {
                estimate.surface_point = centroid;
                estimate.position = apply_depth_offset(centroid, d);
                fallback = true;
            } catch (const ZeroSurfacePoint&) {
                result.skipped.push_back({mask->instance_id, "zero_surface_point"});
                continue;
            }
        } catch (const ZeroSurfacePoint&) {
            result.skipped.push_back({mask->instance_id, "zero_surface_point"});
            continue;
        }

        OceAnchor anchor;
        anchor.surface_point = estimate.surface_point;
        anchor.position = roi.clamp(estimate.position);
        anchor.clamped_to_roi = (anchor.position != estimate.position);
        anchor.class_id = mask->class_id;
        anchor.instance_id = mask->instance_id;
        anchor.used_centroid_fallback = fallback;
        if (fallback) result.fallback_instances.push_back(mask->instance_id);
        result.anchors.push_back(anchor);
    }
    return result;
}

}  // namespace align
