#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace splatsim {

// Per-object mean physical properties.
struct MaterialProperties {
    double density = 1000.0;        // kg/m^3
    double young_modulus = 1e6;     // Pa
    double poisson_ratio = 0.3;
    bool rigid = false;
    std::string material_name;

    void validate() const;  // rho > 0, E > 0, 0 <= nu < 0.5
};

struct LameParameters {
    double mu = 0.0;      // Pa
    double lambda = 0.0;  // Pa
};

LameParameters lame_from_young_poisson(double young_modulus, double poisson_ratio);

enum class FieldProvenance { Uniform, MpdpBuiltin, MpdpFile };

// Per-driving-particle property values produced by multiplier-field scaling.
struct PropertyField {
    std::vector<double> density;
    std::vector<double> young_modulus;
    std::vector<double> poisson_ratio;
    FieldProvenance provenance = FieldProvenance::Uniform;

    size_t size() const { return density.size(); }
    void validate(const MaterialProperties& mean) const;
};

// A unit-mean multiplier field over driving particles; the deployed stand-in
// for a trained geometry-conditioned predictor. Multipliers are positive and
// renormalized to arithmetic mean 1 per property before scaling.
class FieldModel {
public:
    virtual ~FieldModel() = default;
    struct Multipliers {
        std::vector<double> density, young_modulus, poisson_ratio;
    };
    virtual Multipliers evaluate(const std::vector<Eigen::Vector3d>& positions) const = 0;
    virtual FieldProvenance provenance() const = 0;
};

std::unique_ptr<FieldModel> make_uniform_model();

// Smooth multiplier from normalized geometric features (local surface
// variation, height, distance to centroid); `spread` bounds the coefficient
// of variation of the emitted multipliers.
std::unique_ptr<FieldModel> make_builtin_geometric_model(double spread = 0.3,
                                                         int curvature_neighbors = 30);

// CSV replay of externally produced multipliers: header
// index,rho_mult,E_mult,nu_mult; rows keyed by particle index.
std::unique_ptr<FieldModel> load_field_model(const std::filesystem::path& path);

PropertyField mpdp_field(const std::vector<Eigen::Vector3d>& driving_positions,
                         const MaterialProperties& mean, const FieldModel& model);

}  // namespace splatsim
