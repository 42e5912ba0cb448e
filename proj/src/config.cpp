#include "splatsim/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "splatsim/errors.hpp"
#include "splatsim/util.hpp"

namespace splatsim {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        json j = json::parse(in, nullptr, true, true);  // allow comments
        if (j.is_null()) j = json::object();
        return j;
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

void warn_unknown(const json& obj, const std::set<std::string>& known,
                  const std::string& context, std::vector<std::string>* warnings) {
    if (!obj.is_object()) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) {
            std::string msg = "unknown key '" + context + it.key() + "' ignored";
            if (warnings) warnings->push_back(msg);
        }
    }
}

Eigen::Vector3d parse_vec3(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 3)
        throw ValidationError("'" + name + "' must be an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw ValidationError("field '" + key + "' has the wrong type");
    }
}

Eigen::Vector3d get_vec3_or(const json& obj, const std::string& key,
                            const Eigen::Vector3d& fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    return parse_vec3(obj[key], key);
}

template <typename Enum>
Enum parse_enum(const json& obj, const std::string& key,
                const std::vector<std::pair<std::string, Enum>>& table, Enum fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    const std::string value = to_lower(obj[key].get<std::string>());
    for (const auto& [name, e] : table)
        if (name == value) return e;
    std::string allowed;
    for (const auto& [name, e] : table) allowed += (allowed.empty() ? "" : ", ") + name;
    throw ValidationError("field '" + key + "' must be one of {" + allowed + "}, got '" +
                          value + "'");
}

MaterialProperties parse_material(const json& j, const std::string& context,
                                  std::vector<std::string>* warnings) {
    warn_unknown(j, {"density", "young_modulus", "poisson_ratio", "rigid", "material_name"},
                 context, warnings);
    MaterialProperties m;
    m.density = get_or<double>(j, "density", m.density);
    m.young_modulus = get_or<double>(j, "young_modulus", m.young_modulus);
    m.poisson_ratio = get_or<double>(j, "poisson_ratio", m.poisson_ratio);
    m.rigid = get_or<bool>(j, "rigid", m.rigid);
    m.material_name = get_or<std::string>(j, "material_name", m.material_name);
    m.validate();
    return m;
}

ForceSpec parse_force(const json& j, const std::string& context,
                      std::vector<std::string>* warnings) {
    warn_unknown(j,
                 {"kind", "application_point", "direction", "magnitude", "start_time",
                  "duration"},
                 context, warnings);
    ForceSpec f;
    f.kind = parse_enum<ForceKind>(j, "kind",
                                   {{"impulse", ForceKind::Impulse},
                                    {"constant", ForceKind::Constant}},
                                   ForceKind::Impulse);
    f.application_point = get_vec3_or(j, "application_point", f.application_point);
    f.direction = get_vec3_or(j, "direction", f.direction);
    f.magnitude = get_or<double>(j, "magnitude", f.magnitude);
    f.start_time = get_or<double>(j, "start_time", f.start_time);
    f.duration = get_or<double>(j, "duration", f.duration);
    f.validate();
    return f;
}

json config_to_json(const SimConfig& c);  // forward, used by config_hash

}  // namespace

void ForceSpec::validate() const {
    if (std::abs(direction.norm() - 1.0) > 1e-6)
        throw ValidationError("force direction must be unit length");
    if (magnitude < 0.0) throw ValidationError("force magnitude must be >= 0");
    if (kind == ForceKind::Constant && !(duration > 0.0))
        throw ValidationError("constant force duration must be > 0");
    if (duration < 0.0) throw ValidationError("force duration must be >= 0");
    if (start_time < 0.0) throw ValidationError("force start_time must be >= 0");
}

void PgasParams::validate() const {
    if (!(base_radius > 0.0)) throw ValidationError("pgas base_radius must be > 0");
    if (!(v_min > 0.0) || v_min > v_max)
        throw ValidationError("pgas requires 0 < v_min <= v_max");
    if (!(k > 0.0)) throw ValidationError("pgas k must be > 0");
    if (!(e_ref > 0.0)) throw ValidationError("pgas e_ref must be > 0");
    if (local_neighbors < 3) throw ValidationError("pgas local_neighbors must be >= 3");
    if (!(curvature_gain > 0.0)) throw ValidationError("pgas curvature_gain must be > 0");
}

void ProviderConfig::validate() const {
    if (!(timeout_s > 0.0)) throw ValidationError("provider timeout must be > 0");
    if (candidate_count < 1) throw ValidationError("provider candidate_count must be >= 1");
    if (max_retries < 0) throw ValidationError("provider max_retries must be >= 0");
}

std::string ProviderConfig::fingerprint() const {
    std::ostringstream out;
    out << base_url << '|' << model_name << '|' << candidate_count;
    return out.str();
}

void SimConfig::validate() const {
    if (grid_resolution < 8) throw ValidationError("grid_resolution must be >= 8");
    if (!(dt_substep > 0.0)) throw ValidationError("dt_substep must be > 0");
    if (substeps_per_frame < 1) throw ValidationError("substeps_per_frame must be >= 1");
    if (frames < 0) throw ValidationError("frames must be >= 0");
    if (!(damping > 0.0 && damping <= 1.0))
        throw ValidationError("damping must be in (0, 1]");
    if (!(force_radius_cells > 0.0))
        throw ValidationError("force_radius_cells must be > 0");
    if (domain && domain->isEmpty()) throw ValidationError("domain box is empty");
    if (binding.neighbors < 1) throw ValidationError("binding neighbors must be >= 1");
    if (!(mpdp.spread >= 0.0 && mpdp.spread < 1.0))
        throw ValidationError("mpdp spread must be in [0, 1)");
    if (render.width <= 0 || render.height <= 0)
        throw ValidationError("render size must be positive");
    pgas.validate();
    provider.validate();
}

SimConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    const json j = parse_file(path);
    if (!j.is_object()) throw ValidationError("'" + path.string() + "': config must be a JSON object");
    warn_unknown(j,
                 {"grid_resolution", "substeps_per_frame", "dt_substep", "frames", "gravity",
                  "ground_height", "boundary", "damping", "force_radius_cells", "rigid_mode",
                  "sh_rotation", "domain", "rng_seed", "base_radius", "pgas", "binding",
                  "mpdp", "render", "provider"},
                 "", warnings);

    SimConfig c;
    c.grid_resolution = get_or<int>(j, "grid_resolution", c.grid_resolution);
    c.substeps_per_frame = get_or<int>(j, "substeps_per_frame", c.substeps_per_frame);
    c.dt_substep = get_or<double>(j, "dt_substep", c.dt_substep);
    c.frames = get_or<int>(j, "frames", c.frames);
    c.gravity = get_vec3_or(j, "gravity", c.gravity);
    if (j.contains("ground_height") && !j["ground_height"].is_null())
        c.ground_height = j["ground_height"].get<double>();
    c.boundary = parse_enum<BoundaryKind>(j, "boundary",
                                          {{"sticky", BoundaryKind::Sticky},
                                           {"slip", BoundaryKind::Slip}},
                                          c.boundary);
    c.damping = get_or<double>(j, "damping", c.damping);
    c.force_radius_cells = get_or<double>(j, "force_radius_cells", c.force_radius_cells);
    c.rigid_mode = parse_enum<RigidMode>(j, "rigid_mode",
                                         {{"collider", RigidMode::Collider},
                                          {"stiff", RigidMode::Stiff}},
                                         c.rigid_mode);
    c.sh_rotation = parse_enum<ShRotationMode>(j, "sh_rotation",
                                               {{"exact", ShRotationMode::Exact},
                                                {"truncate", ShRotationMode::Truncate}},
                                               c.sh_rotation);
    if (j.contains("domain") && !j["domain"].is_null()) {
        const json& d = j["domain"];
        warn_unknown(d, {"min", "max"}, "domain.", warnings);
        Eigen::AlignedBox3d box(parse_vec3(d.at("min"), "domain.min"),
                                parse_vec3(d.at("max"), "domain.max"));
        c.domain = box;
    }
    c.rng_seed = get_or<uint64_t>(j, "rng_seed", c.rng_seed);
    c.pgas.rng_seed = c.rng_seed;
    c.pgas.base_radius = get_or<double>(j, "base_radius", c.pgas.base_radius);

    if (j.contains("pgas")) {
        const json& p = j["pgas"];
        warn_unknown(p,
                     {"base_radius", "v_max", "v_min", "k", "e_ref", "curvature_mode",
                      "local_neighbors", "faithful_clamp", "curvature_gain"},
                     "pgas.", warnings);
        c.pgas.base_radius = get_or<double>(p, "base_radius", c.pgas.base_radius);
        c.pgas.v_max = get_or<double>(p, "v_max", c.pgas.v_max);
        c.pgas.v_min = get_or<double>(p, "v_min", c.pgas.v_min);
        c.pgas.k = get_or<double>(p, "k", c.pgas.k);
        c.pgas.e_ref = get_or<double>(p, "e_ref", c.pgas.e_ref);
        c.pgas.curvature_mode = parse_enum<CurvatureMode>(p, "curvature_mode",
                                                          {{"global", CurvatureMode::Global},
                                                           {"local", CurvatureMode::Local}},
                                                          c.pgas.curvature_mode);
        c.pgas.local_neighbors = get_or<int>(p, "local_neighbors", c.pgas.local_neighbors);
        c.pgas.faithful_clamp = get_or<bool>(p, "faithful_clamp", c.pgas.faithful_clamp);
        c.pgas.curvature_gain = get_or<double>(p, "curvature_gain", 3.0 * c.pgas.v_max);
    }

    if (j.contains("binding")) {
        const json& b = j["binding"];
        warn_unknown(b, {"neighbors", "bandwidth", "mode"}, "binding.", warnings);
        c.binding.neighbors = get_or<int>(b, "neighbors", c.binding.neighbors);
        if (b.contains("bandwidth") && !b["bandwidth"].is_null())
            c.binding.bandwidth = b["bandwidth"].get<double>();
        c.binding.mode = parse_enum<BindingMode>(b, "mode",
                                                 {{"rigid", BindingMode::Rigid},
                                                  {"stretch", BindingMode::Stretch}},
                                                 c.binding.mode);
    }

    if (j.contains("mpdp")) {
        const json& m = j["mpdp"];
        warn_unknown(m, {"model", "spread", "file"}, "mpdp.", warnings);
        c.mpdp.model = to_lower(get_or<std::string>(m, "model", c.mpdp.model));
        c.mpdp.spread = get_or<double>(m, "spread", c.mpdp.spread);
        c.mpdp.file = get_or<std::string>(m, "file", c.mpdp.file.string());
        if (c.mpdp.model != "builtin" && c.mpdp.model != "uniform" && c.mpdp.model != "file")
            throw ValidationError("mpdp.model must be builtin, uniform, or file");
        if (c.mpdp.model == "file" && c.mpdp.file.empty())
            throw ValidationError("mpdp.model 'file' requires mpdp.file");
    }

    if (j.contains("render")) {
        const json& r = j["render"];
        warn_unknown(r,
                     {"width", "height", "fov_deg", "background", "camera_position",
                      "look_at", "up"},
                     "render.", warnings);
        c.render.width = get_or<int>(r, "width", c.render.width);
        c.render.height = get_or<int>(r, "height", c.render.height);
        c.render.fov_deg = get_or<double>(r, "fov_deg", c.render.fov_deg);
        c.render.background = get_vec3_or(r, "background", c.render.background);
        if (r.contains("camera_position") && !r["camera_position"].is_null())
            c.render.camera_position = parse_vec3(r["camera_position"], "render.camera_position");
        if (r.contains("look_at") && !r["look_at"].is_null())
            c.render.look_at = parse_vec3(r["look_at"], "render.look_at");
        c.render.up = get_vec3_or(r, "up", c.render.up);
    }

    if (j.contains("provider")) {
        const json& p = j["provider"];
        warn_unknown(p,
                     {"base_url", "model_name", "api_key_env", "timeout_s", "max_retries",
                      "candidate_count", "prompt_dir", "catalog_path"},
                     "provider.", warnings);
        c.provider.base_url = get_or<std::string>(p, "base_url", c.provider.base_url);
        c.provider.model_name = get_or<std::string>(p, "model_name", c.provider.model_name);
        c.provider.api_key_env = get_or<std::string>(p, "api_key_env", c.provider.api_key_env);
        c.provider.timeout_s = get_or<double>(p, "timeout_s", c.provider.timeout_s);
        c.provider.max_retries = get_or<int>(p, "max_retries", c.provider.max_retries);
        c.provider.candidate_count = get_or<int>(p, "candidate_count", c.provider.candidate_count);
        c.provider.prompt_dir = get_or<std::string>(p, "prompt_dir", c.provider.prompt_dir.string());
        c.provider.catalog_path =
            get_or<std::string>(p, "catalog_path", c.provider.catalog_path.string());
    }

    c.validate();
    return c;
}

std::vector<ObjectManifest> load_manifest(const std::filesystem::path& path,
                                          std::vector<std::string>* warnings) {
    const json j = parse_file(path);
    json objects;
    if (j.is_array()) {
        objects = j;
    } else if (j.is_object()) {
        warn_unknown(j, {"objects"}, "", warnings);
        if (!j.contains("objects"))
            throw ValidationError("'" + path.string() + "': manifest needs an 'objects' array");
        objects = j["objects"];
    } else {
        throw ValidationError("'" + path.string() + "': manifest must be an object or array");
    }
    if (!objects.is_array())
        throw ValidationError("'" + path.string() + "': 'objects' must be an array");

    std::vector<ObjectManifest> out;
    std::set<int> seen;
    for (size_t i = 0; i < objects.size(); ++i) {
        const json& o = objects[i];
        const std::string context = "objects[" + std::to_string(i) + "].";
        warn_unknown(o,
                     {"object_id", "tag", "canonical_image", "property_override", "forces"},
                     context, warnings);
        ObjectManifest m;
        if (!o.contains("object_id"))
            throw ValidationError(context + "object_id is required");
        m.object_id = o["object_id"].get<int>();
        if (!seen.insert(m.object_id).second)
            throw ValidationError("duplicate manifest entry for object_id " +
                                  std::to_string(m.object_id));
        m.tag = get_or<std::string>(o, "tag", "");
        m.canonical_image = get_or<std::string>(o, "canonical_image", "");
        if (o.contains("property_override") && !o["property_override"].is_null())
            m.property_override =
                parse_material(o["property_override"], context + "property_override.", warnings);
        if (o.contains("forces")) {
            const json& forces = o["forces"];
            if (!forces.is_array()) throw ValidationError(context + "forces must be an array");
            for (size_t f = 0; f < forces.size(); ++f)
                m.forces.push_back(parse_force(
                    forces[f], context + "forces[" + std::to_string(f) + "].", warnings));
        }
        out.push_back(std::move(m));
    }
    return out;
}

void validate_manifest_against_objects(const std::vector<ObjectManifest>& manifest,
                                       const std::vector<int>& scene_object_ids) {
    const std::set<int> ids(scene_object_ids.begin(), scene_object_ids.end());
    for (const auto& m : manifest) {
        if (!ids.count(m.object_id))
            throw ValidationError("manifest references object_id " +
                                  std::to_string(m.object_id) + " absent from the scene");
    }
}

namespace {

json config_to_json(const SimConfig& c) {
    json j;
    j["grid_resolution"] = c.grid_resolution;
    j["substeps_per_frame"] = c.substeps_per_frame;
    j["dt_substep"] = c.dt_substep;
    j["frames"] = c.frames;
    j["gravity"] = {c.gravity.x(), c.gravity.y(), c.gravity.z()};
    j["ground_height"] = c.ground_height ? json(*c.ground_height) : json();
    j["boundary"] = c.boundary == BoundaryKind::Sticky ? "sticky" : "slip";
    j["damping"] = c.damping;
    j["force_radius_cells"] = c.force_radius_cells;
    j["rigid_mode"] = c.rigid_mode == RigidMode::Collider ? "collider" : "stiff";
    j["sh_rotation"] = c.sh_rotation == ShRotationMode::Exact ? "exact" : "truncate";
    if (c.domain) {
        j["domain"]["min"] = {c.domain->min().x(), c.domain->min().y(), c.domain->min().z()};
        j["domain"]["max"] = {c.domain->max().x(), c.domain->max().y(), c.domain->max().z()};
    }
    j["rng_seed"] = c.rng_seed;
    j["pgas"] = {{"base_radius", c.pgas.base_radius},
                 {"v_max", c.pgas.v_max},
                 {"v_min", c.pgas.v_min},
                 {"k", c.pgas.k},
                 {"e_ref", c.pgas.e_ref},
                 {"curvature_mode", c.pgas.curvature_mode == CurvatureMode::Local ? "local" : "global"},
                 {"local_neighbors", c.pgas.local_neighbors},
                 {"faithful_clamp", c.pgas.faithful_clamp},
                 {"curvature_gain", c.pgas.curvature_gain}};
    j["binding"] = {{"neighbors", c.binding.neighbors},
                    {"bandwidth", c.binding.bandwidth ? json(*c.binding.bandwidth) : json()},
                    {"mode", c.binding.mode == BindingMode::Rigid ? "rigid" : "stretch"}};
    j["mpdp"] = {{"model", c.mpdp.model}, {"spread", c.mpdp.spread}, {"file", c.mpdp.file.string()}};
    j["render"] = {{"width", c.render.width},
                   {"height", c.render.height},
                   {"fov_deg", c.render.fov_deg},
                   {"background", {c.render.background.x(), c.render.background.y(),
                                   c.render.background.z()}}};
    j["provider"] = {{"base_url", c.provider.base_url},
                     {"model_name", c.provider.model_name},
                     {"candidate_count", c.provider.candidate_count}};
    return j;
}

}  // namespace

uint64_t config_hash(const SimConfig& config) {
    return fnv1a64(config_to_json(config).dump());
}

}  // namespace splatsim
