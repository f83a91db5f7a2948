#include "align/scene_io.hpp"

#include "align/errors.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <sstream>

namespace align {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw SchemaError("invalid JSON in " + path.string());
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

const json& require_key(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError("missing key \"" + std::string(key) + "\" in " + where);
    return *it;
}

Eigen::Matrix3d parse_mat3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw SchemaError(where + " must be a 3x3 array");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
        if (!j[r].is_array() || j[r].size() != 3)
            throw SchemaError(where + " must be a 3x3 array");
        for (int c = 0; c < 3; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

Eigen::Matrix4d parse_mat4(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4)
        throw SchemaError(where + " must be a 4x4 array");
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r) {
        if (!j[r].is_array() || j[r].size() != 4)
            throw SchemaError(where + " must be a 4x4 array");
        for (int c = 0; c < 4; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<int> rle_encode(const std::vector<uint8_t>& bitmap, int width, int height) {
    std::vector<int> counts;
    int run = 0;
    uint8_t current = 0;  // first run counts false pixels
    for (int u = 0; u < width; ++u) {
        for (int v = 0; v < height; ++v) {
            const uint8_t value = bitmap[static_cast<size_t>(v) * width + u] ? 1 : 0;
            if (value == current) {
                ++run;
            } else {
                counts.push_back(run);
                current = value;
                run = 1;
            }
        }
    }
    counts.push_back(run);
    return counts;
}

std::vector<uint8_t> rle_decode(const std::vector<int>& counts, int width, int height) {
    const size_t total = static_cast<size_t>(width) * height;
    std::vector<uint8_t> bitmap(total, 0);
    size_t pos = 0;
    uint8_t current = 0;
    for (int count : counts) {
        if (count < 0) throw RleLengthMismatch("negative RLE count");
        if (pos + count > total)
            throw RleLengthMismatch("RLE counts exceed " + std::to_string(total) + " pixels");
        if (current) {
            for (int i = 0; i < count; ++i) {
                const size_t idx = pos + i;
                const size_t u = idx / height;
                const size_t v = idx % height;
                bitmap[v * width + u] = 1;
            }
        }
        pos += count;
        current = !current;
    }
    if (pos != total)
        throw RleLengthMismatch("RLE counts sum to " + std::to_string(pos) + ", expected " +
                                std::to_string(total));
    return bitmap;
}

std::array<int, 4> tight_bbox(const std::vector<uint8_t>& bitmap, int width, int height) {
    int u0 = width, v0 = height, u1 = -1, v1 = -1;
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            if (!bitmap[static_cast<size_t>(v) * width + u]) continue;
            u0 = std::min(u0, u);
            v0 = std::min(v0, v);
            u1 = std::max(u1, u);
            v1 = std::max(v1, v);
        }
    }
    if (u1 < 0) throw EmptyMask("mask has no true pixels");
    return {u0, v0, u1, v1};
}

std::vector<std::pair<Point3, float>> load_point_cloud(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open " + path.string());
    const auto size = static_cast<size_t>(in.tellg());
    if (size % 20 != 0)
        throw FormatError(path.string() + ": size " + std::to_string(size) +
                          " is not a multiple of 20 bytes");
    in.seekg(0);
    std::vector<char> buffer(size);
    if (size > 0 && !in.read(buffer.data(), static_cast<std::streamsize>(size)))
        throw IoError("read failed for " + path.string());

    const size_t n = size / 20;
    std::vector<std::pair<Point3, float>> cloud;
    cloud.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        float f[5];
        std::memcpy(f, buffer.data() + i * 20, 20);
        cloud.emplace_back(Point3(f[0], f[1], f[2]), f[3]);  // ring discarded
    }
    return cloud;
}

void save_point_cloud(const std::filesystem::path& path,
                      const std::vector<Point3>& points,
                      const std::vector<float>& intensities) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (size_t i = 0; i < points.size(); ++i) {
        const float f[5] = {static_cast<float>(points[i].x()),
                            static_cast<float>(points[i].y()),
                            static_cast<float>(points[i].z()),
                            i < intensities.size() ? intensities[i] : 0.0f, 0.0f};
        out.write(reinterpret_cast<const char*>(f), 20);
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<CameraCalibration> load_calibration(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    const json& cams = require_key(j, "cameras", path.string());
    if (!cams.is_array()) throw SchemaError("\"cameras\" must be an array in " + path.string());

    std::vector<CameraCalibration> out;
    for (size_t i = 0; i < cams.size(); ++i) {
        const json& c = cams[i];
        const std::string where = path.string() + " cameras[" + std::to_string(i) + "]";
        CameraCalibration calib;
        calib.camera_id = require_key(c, "camera_id", where).get<int>();
        calib.intrinsics = parse_mat3(require_key(c, "intrinsics", where), where + ".intrinsics");
        calib.extrinsic = parse_mat4(require_key(c, "extrinsic", where), where + ".extrinsic");
        calib.image_width = require_key(c, "width", where).get<int>();
        calib.image_height = require_key(c, "height", where).get<int>();

        const auto violations = validate_calibration(calib);
        if (!violations.empty()) {
            std::string msg = where + ":";
            for (const auto& v : violations) msg += " " + v + ";";
            const bool rotation_only =
                violations.size() == 1 && violations[0].find("orthonormal") != std::string::npos;
            if (rotation_only) throw InvalidRotation(msg);
            throw SchemaError(msg);
        }
        out.push_back(calib);
    }
    return out;
}

void save_calibration(const std::filesystem::path& path,
                      const std::vector<CameraCalibration>& cameras) {
    json cams = json::array();
    for (const auto& c : cameras) {
        cams.push_back({{"camera_id", c.camera_id},
                        {"intrinsics", mat_to_json(c.intrinsics)},
                        {"extrinsic", mat_to_json(c.extrinsic)},
                        {"width", c.image_width},
                        {"height", c.image_height}});
    }
    write_text_file(path, json{{"cameras", cams}}.dump(2) + "\n");
}

std::vector<InstanceMask> load_masks(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    const int width = require_key(j, "width", path.string()).get<int>();
    const int height = require_key(j, "height", path.string()).get<int>();
    if (width <= 0 || height <= 0)
        throw SchemaError("mask dimensions must be positive in " + path.string());
    const json& instances = require_key(j, "instances", path.string());

    std::vector<InstanceMask> out;
    for (size_t i = 0; i < instances.size(); ++i) {
        const json& m = instances[i];
        const std::string where = path.string() + " instances[" + std::to_string(i) + "]";
        InstanceMask mask;
        mask.width = width;
        mask.height = height;
        mask.camera_id = require_key(m, "camera_id", where).get<int>();
        mask.instance_id = require_key(m, "instance_id", where).get<int>();
        mask.class_id = require_key(m, "class_id", where).get<int>();
        if (mask.class_id < 0 || mask.class_id >= kNumClasses)
            throw SchemaError(where + ": class_id " + std::to_string(mask.class_id) +
                              " outside [0, " + std::to_string(kNumClasses - 1) + "]");

        const json& bbox = require_key(m, "bbox", where);
        if (!bbox.is_array() || bbox.size() != 4)
            throw SchemaError(where + ": bbox must have 4 entries");
        const auto counts = require_key(m, "rle_counts", where).get<std::vector<int>>();
        mask.bitmap = rle_decode(counts, width, height);

        const auto tight = tight_bbox(mask.bitmap, width, height);
        mask.u_min = tight[0];
        mask.v_min = tight[1];
        mask.u_max = tight[2];
        mask.v_max = tight[3];
        const std::array<int, 4> stored = {bbox[0].get<int>(), bbox[1].get<int>(),
                                           bbox[2].get<int>(), bbox[3].get<int>()};
        if (stored != tight)
            throw BboxMismatch(where + ": stored bbox does not match decoded bitmap");
        out.push_back(std::move(mask));
    }
    return out;
}

void save_masks(const std::filesystem::path& path, const std::vector<InstanceMask>& masks,
                int width, int height) {
    json instances = json::array();
    for (const auto& m : masks) {
        instances.push_back({{"camera_id", m.camera_id},
                             {"instance_id", m.instance_id},
                             {"class_id", m.class_id},
                             {"bbox", {m.u_min, m.v_min, m.u_max, m.v_max}},
                             {"rle_counts", rle_encode(m.bitmap, width, height)}});
    }
    write_text_file(path,
                    json{{"width", width}, {"height", height}, {"instances", instances}}.dump() +
                        "\n");
}

std::vector<GTBox> load_ground_truth(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_array()) throw SchemaError("ground truth must be a JSON array in " + path.string());
    std::vector<GTBox> out;
    for (size_t i = 0; i < j.size(); ++i) {
        const json& b = j[i];
        const std::string where = path.string() + " [" + std::to_string(i) + "]";
        GTBox box;
        box.center = Point3(require_key(b, "x", where).get<double>(),
                            require_key(b, "y", where).get<double>(),
                            require_key(b, "z", where).get<double>());
        box.width = require_key(b, "w", where).get<double>();
        box.length = require_key(b, "l", where).get<double>();
        box.height = require_key(b, "h", where).get<double>();
        box.yaw = require_key(b, "yaw", where).get<double>();
        box.class_id = require_key(b, "class_id", where).get<int>();
        box.visible_fraction = require_key(b, "visible_fraction", where).get<double>();
        if (box.width <= 0 || box.length <= 0 || box.height <= 0)
            throw SchemaError(where + ": box size components must be > 0");
        if (box.visible_fraction < 0.0 || box.visible_fraction > 1.0)
            throw SchemaError(where + ": visible_fraction outside [0, 1]");
        out.push_back(box);
    }
    return out;
}

void save_ground_truth(const std::filesystem::path& path, const std::vector<GTBox>& boxes) {
    json arr = json::array();
    for (const auto& b : boxes) {
        arr.push_back({{"x", b.center.x()},
                       {"y", b.center.y()},
                       {"z", b.center.z()},
                       {"w", b.width},
                       {"l", b.length},
                       {"h", b.height},
                       {"yaw", b.yaw},
                       {"class_id", b.class_id},
                       {"visible_fraction", b.visible_fraction}});
    }
    write_text_file(path, arr.dump() + "\n");
}

void save_anchors(const AnchorSet& set, const std::filesystem::path& path) {
    std::ostringstream out;
    out << json{{"scene_id", set.scene_id},
                {"config_hash", set.config_hash},
                {"count", set.anchors.size()}}
               .dump()
        << "\n";
    for (const auto& a : set.anchors) {
        json line{{"x", a.position.x()}, {"y", a.position.y()}, {"z", a.position.z()},
                  {"kind", anchor_kind_name(a.kind)},
                  {"class_id", a.class_id ? json(*a.class_id) : json(nullptr)},
                  {"source", a.source ? json(*a.source) : json(nullptr)}};
        out << line.dump() << "\n";
    }
    write_text_file(path, out.str());
}

AnchorSet load_anchors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("missing header line in " + path.string());
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded()) throw SchemaError("invalid header JSON in " + path.string());

    AnchorSet set;
    set.scene_id = require_key(header, "scene_id", path.string()).get<std::string>();
    set.config_hash = require_key(header, "config_hash", path.string()).get<std::string>();
    const auto count = require_key(header, "count", path.string()).get<size_t>();

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json a = json::parse(line, nullptr, false);
        if (a.is_discarded()) throw SchemaError("invalid anchor JSON in " + path.string());
        QueryAnchor anchor;
        anchor.position = Point3(require_key(a, "x", path.string()).get<double>(),
                                 require_key(a, "y", path.string()).get<double>(),
                                 require_key(a, "z", path.string()).get<double>());
        const auto kind =
            anchor_kind_from_name(require_key(a, "kind", path.string()).get<std::string>());
        if (!kind) throw SchemaError("unknown anchor kind in " + path.string());
        anchor.kind = *kind;
        if (a.contains("class_id") && !a["class_id"].is_null())
            anchor.class_id = a["class_id"].get<int>();
        if (a.contains("source") && !a["source"].is_null())
            anchor.source = a["source"].get<int>();
        set.anchors.push_back(anchor);
    }
    if (set.anchors.size() != count)
        throw SchemaError(path.string() + ": header count " + std::to_string(count) +
                          " does not match " + std::to_string(set.anchors.size()) + " anchors");
    return set;
}

Scene load_scene(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");

    fs::path cloud_path;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".bin") {
            if (!cloud_path.empty())
                throw IoError(dir.string() + " contains more than one .bin point cloud");
            cloud_path = entry.path();
        }
    }
    if (cloud_path.empty()) throw IoError(dir.string() + " has no .bin point cloud");

    Scene scene;
    scene.scene_id = cloud_path.stem().string();
    for (const auto& [p, intensity] : load_point_cloud(cloud_path)) {
        scene.points.push_back(p);
        scene.intensities.push_back(intensity);
    }
    scene.cameras = load_calibration(dir / "calib.json");
    scene.masks = load_masks(dir / "masks.json");
    for (const auto& mask : scene.masks) {
        if (!scene.camera_by_id(mask.camera_id))
            throw SchemaError(dir.string() + ": mask instance " +
                              std::to_string(mask.instance_id) + " references unknown camera " +
                              std::to_string(mask.camera_id));
    }
    if (fs::exists(dir / "gt.json")) {
        scene.ground_truth = load_ground_truth(dir / "gt.json");
        scene.has_ground_truth = true;
    }
    return scene;
}

void save_scene(const Scene& scene, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_point_cloud(dir / (scene.scene_id + ".bin"), scene.points, scene.intensities);
    save_calibration(dir / "calib.json", scene.cameras);
    int width = 0, height = 0;
    if (!scene.cameras.empty()) {
        width = scene.cameras.front().image_width;
        height = scene.cameras.front().image_height;
    }
    for (const auto& m : scene.masks) {
        width = m.width;
        height = m.height;
        break;
    }
    save_masks(dir / "masks.json", scene.masks, width, height);
    if (scene.has_ground_truth) save_ground_truth(dir / "gt.json", scene.ground_truth);
}

}  // namespace align
