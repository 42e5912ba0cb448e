#include "splatsim/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "splatsim/errors.hpp"

namespace splatsim {

namespace {

enum class PlyType { Float32, Float64, Int8, UInt8, Int16, UInt16, Int32, UInt32 };

size_t ply_type_size(PlyType t) {
    switch (t) {
        case PlyType::Float32: return 4;
        case PlyType::Float64: return 8;
        case PlyType::Int8:
        case PlyType::UInt8: return 1;
        case PlyType::Int16:
        case PlyType::UInt16: return 2;
        case PlyType::Int32:
        case PlyType::UInt32: return 4;
    }
    return 0;
}

PlyType parse_ply_type(const std::string& name, int line_no, const std::string& line) {
    static const std::map<std::string, PlyType> table = {
        {"float", PlyType::Float32},   {"float32", PlyType::Float32},
        {"double", PlyType::Float64},  {"float64", PlyType::Float64},
        {"char", PlyType::Int8},       {"int8", PlyType::Int8},
        {"uchar", PlyType::UInt8},     {"uint8", PlyType::UInt8},
        {"short", PlyType::Int16},     {"int16", PlyType::Int16},
        {"ushort", PlyType::UInt16},   {"uint16", PlyType::UInt16},
        {"int", PlyType::Int32},       {"int32", PlyType::Int32},
        {"uint", PlyType::UInt32},     {"uint32", PlyType::UInt32},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw ParseError("PLY header line " + std::to_string(line_no) +
                         ": unsupported property type in '" + line + "'");
    return it->second;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::Float32;
    size_t offset = 0;
};

struct PlyHeader {
    size_t vertex_count = 0;
    std::vector<PlyProperty> properties;
    size_t stride = 0;
    std::map<std::string, size_t> index;  // name -> property slot

    bool has(const std::string& name) const { return index.count(name) > 0; }
    const PlyProperty& get(const std::string& name) const {
        return properties[index.at(name)];
    }
};

double read_scalar(const char* record, const PlyProperty& p) {
    const char* src = record + p.offset;
    switch (p.type) {
        case PlyType::Float32: { float v; std::memcpy(&v, src, 4); return double(v); }
        case PlyType::Float64: { double v; std::memcpy(&v, src, 8); return v; }
        case PlyType::Int8: { int8_t v; std::memcpy(&v, src, 1); return double(v); }
        case PlyType::UInt8: { uint8_t v; std::memcpy(&v, src, 1); return double(v); }
        case PlyType::Int16: { int16_t v; std::memcpy(&v, src, 2); return double(v); }
        case PlyType::UInt16: { uint16_t v; std::memcpy(&v, src, 2); return double(v); }
        case PlyType::Int32: { int32_t v; std::memcpy(&v, src, 4); return double(v); }
        case PlyType::UInt32: { uint32_t v; std::memcpy(&v, src, 4); return double(v); }
    }
    return 0.0;
}

PlyHeader parse_header(std::istream& in, const std::string& path) {
    PlyHeader header;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& why) -> ParseError {
        return ParseError("'" + path + "' header line " + std::to_string(line_no) + " (" +
                          line + "): " + why);
    };

    if (!std::getline(in, line) || (++line_no, line != "ply" && line != "ply\r"))
        throw fail("expected 'ply' magic");
    bool format_seen = false;
    bool in_vertex_element = false;
    bool end_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) continue;
        if (keyword == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt != "binary_little_endian")
                throw fail("only binary_little_endian is supported, got '" + fmt + "'");
            format_seen = true;
        } else if (keyword == "element") {
            std::string name;
            long long count = -1;
            ls >> name >> count;
            if (name.empty() || count < 0) throw fail("malformed element declaration");
            in_vertex_element = (name == "vertex");
            if (in_vertex_element) header.vertex_count = size_t(count);
        } else if (keyword == "property") {
            std::string type_name;
            ls >> type_name;
            if (type_name == "list") {
                if (in_vertex_element) throw fail("list properties unsupported on vertices");
                continue;  // e.g. face indices; faces are not read
            }
            std::string prop_name;
            ls >> prop_name;
            if (prop_name.empty()) throw fail("property missing a name");
            if (!in_vertex_element) continue;
            PlyProperty p;
            p.name = prop_name;
            p.type = parse_ply_type(type_name, line_no, line);
            p.offset = header.stride;
            header.stride += ply_type_size(p.type);
            header.index[p.name] = header.properties.size();
            header.properties.push_back(p);
        } else if (keyword == "end_header") {
            end_seen = true;
            break;
        } else {
            throw fail("unknown header keyword '" + keyword + "'");
        }
    }
    if (!format_seen) throw ParseError("'" + path + "': header has no format line");
    if (!end_seen) throw ParseError("'" + path + "': header has no end_header");
    if (header.vertex_count == 0) throw ParseError("'" + path + "': no vertex element");
    return header;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) {
    // Writer-side clamp keeps the stored logit finite; logistic(±40) already
    // rounds to exactly 1.0/0.0 in float32.
    const double clamped = std::clamp(p, 1e-18, 1.0 - 1e-18);
    return std::clamp(std::log(clamped / (1.0 - clamped)), -50.0, 50.0);
}

void append_f32(std::string& buf, double v) {
    const float f = float(v);
    char bytes[4];
    std::memcpy(bytes, &f, 4);
    buf.append(bytes, 4);
}

void append_u32(std::string& buf, uint32_t v) {
    char bytes[4];
    std::memcpy(bytes, &v, 4);
    buf.append(bytes, 4);
}

}  // namespace

GaussianScene load_splat_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    const PlyHeader header = parse_header(in, path.string());

    const char* required[] = {"x",       "y",       "z",       "f_dc_0", "f_dc_1", "f_dc_2",
                              "opacity", "scale_0", "scale_1", "scale_2", "rot_0",  "rot_1",
                              "rot_2",   "rot_3"};
    for (const char* name : required) {
        if (!header.has(name))
            throw ParseError("'" + path.string() + "': missing required property '" +
                             std::string(name) + "'");
    }

    int rest_count = 0;
    while (header.has("f_rest_" + std::to_string(rest_count))) ++rest_count;
    if (rest_count % 3 != 0)
        throw ParseError("'" + path.string() + "': f_rest count " +
                         std::to_string(rest_count) + " is not divisible by 3");
    const int extra_terms = rest_count / 3;
    const int degree = sh_degree_for_terms(extra_terms + 1);
    if (degree < 0)
        throw ParseError("'" + path.string() + "': f_rest count " +
                         std::to_string(rest_count) + " does not match SH degree 0-3");

    const bool has_object_id = header.has("object_id");

    std::vector<char> record(header.stride);
    GaussianScene scene;
    scene.splats.reserve(header.vertex_count);
    for (size_t i = 0; i < header.vertex_count; ++i) {
        in.read(record.data(), std::streamsize(header.stride));
        if (!in)
            throw ParseError("'" + path.string() + "': truncated payload at splat " +
                             std::to_string(i));
        auto value = [&](const std::string& name) {
            const double v = read_scalar(record.data(), header.get(name));
            if (std::isnan(v))
                throw ParseError("'" + path.string() + "': NaN in property '" + name +
                                 "' at splat " + std::to_string(i));
            return v;
        };

        GaussianSplat s;
        s.center = {value("x"), value("y"), value("z")};
        s.scale = {std::exp(value("scale_0")), std::exp(value("scale_1")),
                   std::exp(value("scale_2"))};
        s.opacity = logistic(value("opacity"));
        Eigen::Quaterniond q(value("rot_0"), value("rot_1"), value("rot_2"), value("rot_3"));
        if (q.norm() < 1e-12)
            throw ParseError("'" + path.string() + "': zero quaternion at splat " +
                             std::to_string(i));
        s.rotation = q.normalized();
        s.sh.assign(size_t(sh_terms_for_degree(degree)), Eigen::Vector3d::Zero());
        s.sh[0] = {value("f_dc_0"), value("f_dc_1"), value("f_dc_2")};
        // f_rest is stored channel-major: all extra terms of R, then G, then B.
        for (int c = 0; c < 3; ++c)
            for (int t = 0; t < extra_terms; ++t)
                s.sh[size_t(t + 1)][c] = value("f_rest_" + std::to_string(c * extra_terms + t));
        s.object_id = has_object_id ? int(value("object_id")) : 0;
        scene.splats.push_back(std::move(s));
    }
    scene.recompute_bounds();
    scene.validate();
    return scene;
}

void save_splat_ply(const GaussianScene& scene, const std::filesystem::path& path) {
    if (scene.splats.empty()) throw ValidationError("refusing to write an empty scene");
    const int degree = scene.sh_degree();
    const int terms = sh_terms_for_degree(degree);
    const int extra_terms = terms - 1;

    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n";
    header << "element vertex " << scene.splats.size() << "\n";
    for (const char* n : {"x", "y", "z"}) header << "property float " << n << "\n";
    for (int i = 0; i < 3; ++i) header << "property float f_dc_" << i << "\n";
    for (int i = 0; i < 3 * extra_terms; ++i) header << "property float f_rest_" << i << "\n";
    header << "property float opacity\n";
    for (int i = 0; i < 3; ++i) header << "property float scale_" << i << "\n";
    for (int i = 0; i < 4; ++i) header << "property float rot_" << i << "\n";
    header << "property uint object_id\n";
    header << "end_header\n";

    std::string payload;
    payload.reserve(scene.splats.size() * (size_t(14 + 3 * extra_terms) * 4 + 4));
    for (const auto& s : scene.splats) {
        append_f32(payload, s.center.x());
        append_f32(payload, s.center.y());
        append_f32(payload, s.center.z());
        for (int c = 0; c < 3; ++c) append_f32(payload, s.sh[0][c]);
        for (int c = 0; c < 3; ++c)
            for (int t = 0; t < extra_terms; ++t)
                append_f32(payload, size_t(t + 1) < s.sh.size() ? s.sh[size_t(t + 1)][c] : 0.0);
        append_f32(payload, logit(s.opacity));
        for (int i = 0; i < 3; ++i) append_f32(payload, std::log(s.scale[i]));
        append_f32(payload, s.rotation.w());
        append_f32(payload, s.rotation.x());
        append_f32(payload, s.rotation.y());
        append_f32(payload, s.rotation.z());
        append_u32(payload, uint32_t(std::max(0, s.object_id)));
    }

    if (const auto parent = path.parent_path(); !parent.empty())
        std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << header.str();
    out.write(payload.data(), std::streamsize(payload.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

void save_points_ply(const std::vector<Eigen::Vector3d>& positions,
                     const std::vector<int>& object_ids,
                     const std::vector<double>& radii,
                     const std::filesystem::path& path) {
    const bool with_ids = object_ids.size() == positions.size();
    const bool with_radii = radii.size() == positions.size();
    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n";
    header << "element vertex " << positions.size() << "\n";
    header << "property float x\nproperty float y\nproperty float z\n";
    if (with_ids) header << "property uint object_id\n";
    if (with_radii) header << "property float radius\n";
    header << "end_header\n";

    std::string payload;
    for (size_t i = 0; i < positions.size(); ++i) {
        append_f32(payload, positions[i].x());
        append_f32(payload, positions[i].y());
        append_f32(payload, positions[i].z());
        if (with_ids) append_u32(payload, uint32_t(std::max(0, object_ids[i])));
        if (with_radii) append_f32(payload, radii[i]);
    }

    if (const auto parent = path.parent_path(); !parent.empty())
        std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << header.str();
    out.write(payload.data(), std::streamsize(payload.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

}  // namespace splatsim
