#include "align/geometry.hpp"

#include "align/errors.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace align {

const char* const kClassNames[kNumClasses] = {
    "car",        "truck",      "bus",     "trailer",      "construction_vehicle",
    "pedestrian", "motorcycle", "bicycle", "traffic_cone", "barrier"};

const char* anchor_kind_name(AnchorKind kind) {
    switch (kind) {
        case AnchorKind::Oce: return "oce";
        case AnchorKind::Cluster: return "cluster";
        case AnchorKind::Neighbor: return "neighbor";
        case AnchorKind::Background: return "background";
    }
    return "background";
}

std::optional<AnchorKind> anchor_kind_from_name(const std::string& name) {
    if (name == "oce") return AnchorKind::Oce;
    if (name == "cluster") return AnchorKind::Cluster;
    if (name == "neighbor") return AnchorKind::Neighbor;
    if (name == "background") return AnchorKind::Background;
    return std::nullopt;
}

size_t InstanceMask::pixel_count() const {
    size_t n = 0;
    for (uint8_t b : bitmap) n += (b != 0);
    return n;
}

const CameraCalibration* Scene::camera_by_id(int camera_id) const {
    for (const auto& cam : cameras)
        if (cam.camera_id == camera_id) return &cam;
    return nullptr;
}

std::vector<std::string> validate_calibration(const CameraCalibration& calib) {
    std::vector<std::string> violations;
    if (!(calib.intrinsics(0, 0) > 0.0))
        violations.push_back("intrinsics fx must be positive");
    if (!(calib.intrinsics(1, 1) > 0.0))
        violations.push_back("intrinsics fy must be positive");
    if (calib.image_width <= 0) violations.push_back("width must be > 0");
    if (calib.image_height <= 0) violations.push_back("height must be > 0");
    if (calib.camera_id < 0 || calib.camera_id > 5)
        violations.push_back("camera_id must be in [0, 5]");

    const Eigen::Matrix3d r = calib.extrinsic.topLeftCorner<3, 3>();
    const Eigen::Matrix3d gram = r * r.transpose();
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6)
        violations.push_back("extrinsic rotation block is not orthonormal within 1e-6");

    const Eigen::RowVector4d bottom = calib.extrinsic.row(3);
    if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-9)
        violations.push_back("extrinsic bottom row must be [0, 0, 0, 1]");
    return violations;
}

Eigen::Vector3d to_camera_frame(const Point3& p, const CameraCalibration& calib) {
    return (calib.extrinsic * p.homogeneous()).head<3>();
}

std::optional<ProjectedPoint> project_point(const Point3& p,
                                            const CameraCalibration& calib,
                                            int source_index) {
    const Eigen::Vector3d pc = to_camera_frame(p, calib);
    const double depth = pc.z();
    if (!(depth > 0.0)) return std::nullopt;

    const Eigen::Vector3d uvw = calib.intrinsics * pc;
    const double u = uvw.x() / uvw.z();
    const double v = uvw.y() / uvw.z();
    if (!(u >= 0.0 && u < calib.image_width && v >= 0.0 && v < calib.image_height))
        return std::nullopt;
    return ProjectedPoint{source_index, Pixel(u, v), depth};
}

std::vector<ProjectedPoint> project_cloud(std::span<const Point3> cloud,
                                          const CameraCalibration& calib) {
    std::vector<ProjectedPoint> out;
    out.reserve(cloud.size() / 4);
    for (size_t i = 0; i < cloud.size(); ++i) {
        if (auto pp = project_point(cloud[i], calib, static_cast<int>(i)))
            out.push_back(*pp);
    }
    return out;
}

std::vector<std::pair<int, Point3>> filter_roi(std::span<const Point3> cloud,
                                               const RegionOfInterest& roi) {
    std::vector<std::pair<int, Point3>> out;
    for (size_t i = 0; i < cloud.size(); ++i) {
        if (roi.contains(cloud[i])) out.emplace_back(static_cast<int>(i), cloud[i]);
    }
    return out;
}

Homography estimate_homography(
    std::span<const std::pair<Pixel, Point3>> pairs) {
    const auto k = static_cast<Eigen::Index>(pairs.size());
    if (k < 3)
        throw DegenerateConfiguration("estimate_homography needs at least 3 pairs, got " +
                                      std::to_string(pairs.size()));

    // Each row of H solves the same k x 3 system with a different rhs, so one
    // SVD of the homogeneous-pixel matrix serves all three.
    Eigen::MatrixXd a(k, 3);
    Eigen::MatrixXd b(k, 3);
    for (Eigen::Index i = 0; i < k; ++i) {
        a.row(i) << pairs[i].first.x(), pairs[i].first.y(), 1.0;
        b.row(i) = pairs[i].second.transpose();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    if (sigma(2) < 1e-8 * sigma(0))
        throw DegenerateConfiguration(
            "homogeneous pixel matrix is rank-deficient (sigma_min/sigma_max = " +
            std::to_string(sigma(2) / sigma(0)) + ")");

    Homography h;
    for (int r = 0; r < 3; ++r) h.row(r) = svd.solve(b.col(r)).transpose();
    return h;
}

double homography_residual(const Homography& h,
                           std::span<const std::pair<Pixel, Point3>> pairs) {
    double total = 0.0;
    for (const auto& [pixel, point] : pairs)
        total += (apply_homography(h, pixel) - point).squaredNorm();
    return total;
}

}  // namespace align
