#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace align {

using Point3 = Eigen::Vector3d;   // meters, ego/LiDAR frame (right-handed, z up)
using Pixel = Eigen::Vector2d;    // image coordinates, u = x() right, v = y() down
using Homography = Eigen::Matrix3d;  // maps (u, v, 1)^T -> (x, y, z)^T

// nuScenes class order: car, truck, bus, trailer, construction_vehicle,
// pedestrian, motorcycle, bicycle, traffic_cone, barrier
constexpr int kNumClasses = 10;

extern const char* const kClassNames[kNumClasses];

struct CameraCalibration {
    Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
    Eigen::Matrix4d extrinsic = Eigen::Matrix4d::Identity();  // LiDAR frame -> camera frame
    int image_width = 0;
    int image_height = 0;
    int camera_id = 0;
};

// Returns a human-readable list of invariant violations; empty means valid.
std::vector<std::string> validate_calibration(const CameraCalibration& calib);

struct RegionOfInterest {
    double x_min = -54.0, x_max = 54.0;
    double y_min = -54.0, y_max = 54.0;
    double z_min = -5.0, z_max = 3.0;

    bool contains(const Point3& p) const {
        return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min &&
               p.y() <= y_max && p.z() >= z_min && p.z() <= z_max;
    }
    Point3 clamp(const Point3& p) const {
        return Point3(std::clamp(p.x(), x_min, x_max),
                      std::clamp(p.y(), y_min, y_max),
                      std::clamp(p.z(), z_min, z_max));
    }
    double x_extent() const { return x_max - x_min; }
    bool valid() const {
        return x_min < x_max && y_min < y_max && z_min < z_max;
    }
};

struct ProjectedPoint {
    int source_index = 0;  // index into the originating point cloud
    Pixel pixel{0.0, 0.0};
    double depth = 0.0;  // meters along camera z-axis, recorded before the perspective divide
};

enum class AnchorKind { Oce, Cluster, Neighbor, Background };

const char* anchor_kind_name(AnchorKind kind);
std::optional<AnchorKind> anchor_kind_from_name(const std::string& name);

struct QueryAnchor {
    Point3 position{0.0, 0.0, 0.0};
    AnchorKind kind = AnchorKind::Background;
    std::optional<int> class_id;
    std::optional<int> source;  // instance_id for oce/neighbor, cluster_id for cluster
};

struct AnchorSet {
    std::vector<QueryAnchor> anchors;
    std::string config_hash;
    std::string scene_id;
};

struct InstanceMask {
    int camera_id = 0;
    int class_id = 0;
    int instance_id = 0;
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bitmap;  // row-major W*H, nonzero = inside mask
    int u_min = 0, v_min = 0, u_max = 0, v_max = 0;  // tight bbox, inclusive

    bool at(int u, int v) const {
        if (u < 0 || v < 0 || u >= width || v >= height) return false;
        return bitmap[static_cast<size_t>(v) * width + u] != 0;
    }
    size_t pixel_count() const;
};

struct GTBox {
    Point3 center{0.0, 0.0, 0.0};
    double width = 0.0, length = 0.0, height = 0.0;  // meters
    double yaw = 0.0;                                // radians, about +z
    int class_id = 0;
    double visible_fraction = 1.0;  // [0, 1]
};

struct Scene {
    std::vector<Point3> points;
    std::vector<float> intensities;  // parallel to points; may be empty
    std::vector<CameraCalibration> cameras;
    std::vector<InstanceMask> masks;
    std::vector<GTBox> ground_truth;
    bool has_ground_truth = false;
    std::string scene_id;

    const CameraCalibration* camera_by_id(int camera_id) const;
};

}  // namespace align
