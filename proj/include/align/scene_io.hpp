#pragma once

#include "align/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace align {

// Column-major run-length encoding, COCO style: counts alternate between
// runs of false and true pixels, starting with false.
std::vector<int> rle_encode(const std::vector<uint8_t>& bitmap, int width, int height);
std::vector<uint8_t> rle_decode(const std::vector<int>& counts, int width, int height);

// Tight bounding box (u_min, v_min, u_max, v_max) of the true pixels.
// Throws EmptyMask when there are none.
std::array<int, 4> tight_bbox(const std::vector<uint8_t>& bitmap, int width, int height);

// Packed little-endian f32 x 5 records (x, y, z, intensity, ring).
std::vector<std::pair<Point3, float>> load_point_cloud(const std::filesystem::path& path);
void save_point_cloud(const std::filesystem::path& path,
                      const std::vector<Point3>& points,
                      const std::vector<float>& intensities);

std::vector<CameraCalibration> load_calibration(const std::filesystem::path& path);
void save_calibration(const std::filesystem::path& path,
                      const std::vector<CameraCalibration>& cameras);

std::vector<InstanceMask> load_masks(const std::filesystem::path& path);
void save_masks(const std::filesystem::path& path, const std::vector<InstanceMask>& masks,
                int width, int height);

std::vector<GTBox> load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const std::filesystem::path& path, const std::vector<GTBox>& boxes);

// JSON lines: one header line (scene_id, config_hash, count), then one anchor
// per line. Positions round-trip at full binary precision.
void save_anchors(const AnchorSet& set, const std::filesystem::path& path);
AnchorSet load_anchors(const std::filesystem::path& path);

// A scene directory holds <scene_id>.bin, calib.json, masks.json and
// optionally gt.json.
Scene load_scene(const std::filesystem::path& dir);
void save_scene(const Scene& scene, const std::filesystem::path& dir);

}  // namespace align
