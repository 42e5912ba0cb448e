#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "splatsim/gaussians.hpp"
#include "splatsim/materials.hpp"

namespace splatsim {

enum class BoundaryKind { Sticky, Slip };
enum class RigidMode { Collider, Stiff };
enum class CurvatureMode { Global, Local };
enum class BindingMode { Rigid, Stretch };

enum class ForceKind { Impulse, Constant };

// A declared external force. `magnitude` is Newtons for constant forces and
// Newton-seconds (total impulse) for impulses.
struct ForceSpec {
    ForceKind kind = ForceKind::Impulse;
    Eigen::Vector3d application_point = Eigen::Vector3d::Zero();
    Eigen::Vector3d direction = Eigen::Vector3d::UnitX();  // unit
    double magnitude = 0.0;
    double start_time = 0.0;  // s
    double duration = 0.0;    // s; > 0 required for constant forces

    void validate() const;
};

struct ObjectManifest {
    int object_id = 0;
    std::string tag;
    std::filesystem::path canonical_image;  // optional, empty when unset
    std::optional<MaterialProperties> property_override;
    std::vector<ForceSpec> forces;
};

struct PgasParams {
    double base_radius = 0.05;  // world units
    double v_max = 10.0;
    double v_min = 1.0;
    double k = 3.1622776601683795;  // sqrt(10)
    double e_ref = 1e6;             // Pa; E enters Eq. as E/e_ref
    CurvatureMode curvature_mode = CurvatureMode::Local;
    int local_neighbors = 30;
    // Raw surface variation lives in [0, 1/3]; the gain rescales it onto
    // [v_min, v_max] before clamping. `faithful` disables the gain and
    // clamps the raw value directly.
    bool faithful_clamp = false;
    double curvature_gain = 30.0;  // 3 * v_max
    uint64_t rng_seed = 0;

    void validate() const;
};

struct BindingSettings {
    int neighbors = 8;
    std::optional<double> bandwidth;  // default: per-object mean sample radius
    BindingMode mode = BindingMode::Rigid;
};

struct MpdpSettings {
    std::string model = "builtin";  // builtin | uniform | file
    double spread = 0.3;
    std::filesystem::path file;  // multiplier CSV for model == "file"
};

struct RenderSettings {
    int width = 640, height = 480;
    double fov_deg = 60.0;
    Eigen::Vector3d background = Eigen::Vector3d::Zero();
    std::optional<Eigen::Vector3d> camera_position;
    std::optional<Eigen::Vector3d> look_at;
    Eigen::Vector3d up = Eigen::Vector3d::UnitY();
};

struct ProviderConfig {
    std::string base_url;
    std::string model_name = "gpt-4o";
    std::string api_key_env = "SPLATSIM_API_KEY";
    double timeout_s = 30.0;
    int max_retries = 3;
    int candidate_count = 5;  // K
    std::filesystem::path prompt_dir;    // optional override of built-in prompts
    std::filesystem::path catalog_path;  // optional override of built-in catalog

    void validate() const;
    std::string fingerprint() const;  // stable string for cache keys
};

struct SimConfig {
    int grid_resolution = 64;        // nodes per axis
    int substeps_per_frame = 768;
    double dt_substep = 4.34e-5;     // s
    int frames = 30;
    Eigen::Vector3d gravity = Eigen::Vector3d(0.0, -9.8, 0.0);
    std::optional<double> ground_height;  // world y; unset = no ground plane
    BoundaryKind boundary = BoundaryKind::Sticky;
    double damping = 0.9995;         // grid velocity factor per substep
    double force_radius_cells = 2.0;
    RigidMode rigid_mode = RigidMode::Collider;
    ShRotationMode sh_rotation = ShRotationMode::Exact;
    std::optional<Eigen::AlignedBox3d> domain;  // unset = fit to scene
    uint64_t rng_seed = 0;
    PgasParams pgas;
    BindingSettings binding;
    MpdpSettings mpdp;
    RenderSettings render;
    ProviderConfig provider;

    void validate() const;
};

// JSON loaders; absent fields take the defaults above, unknown keys warn.
SimConfig load_config(const std::filesystem::path& path,
                      std::vector<std::string>* warnings = nullptr);
std::vector<ObjectManifest> load_manifest(const std::filesystem::path& path,
                                          std::vector<std::string>* warnings = nullptr);

// Cross-checks that manifest entries reference objects present in the scene.
void validate_manifest_against_objects(const std::vector<ObjectManifest>& manifest,
                                       const std::vector<int>& scene_object_ids);

// Stable fingerprint of the effective configuration, recorded in run reports.
uint64_t config_hash(const SimConfig& config);

}  // namespace splatsim
