#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "torusbie/presets.hpp"

namespace torusbie {

struct ConfigError : std::runtime_error {
    std::string path; // JSON pointer of the offending key
    ConfigError(const std::string& msg, std::string p)
        : std::runtime_error(msg + " at " + (p.empty() ? "/" : p)), path(std::move(p)) {}
};

// random multiply-connected geometry: oscillatory holes, centers rejected until
// every pair keeps its clearance in the reduced (torus) metric
struct HoleGeneratorSpec {
    int count = 1;
    std::uint64_t seed = 0;
    double r_min = 0.04;
    double r_max = 0.09;
    int omega_min = 3;
    int omega_max = 8;
    double clearance = 0.03;
};

struct ContourSpec {
    double radius = 0.0;
    int samples = 200;
    int hole = -1;               // -1: one contour per hole
    std::string profile = "circle"; // "match" scales the hole's own radial profile
};

struct BoundaryDataSpec {
    std::string kind = "none"; // preset | expression | csv | none
    std::string preset;
    std::vector<double> coefficients;
    std::vector<double> amplitude;
    std::vector<int> mode;
    int exact_nodes = 1000;
    std::string expression;
    std::string csv_path;
};

struct PinSpec {
    cplx point;
    double value = 0.0;
};

struct ProblemConfig {
    cplx tau{0.0, 1.0};
    std::vector<Hole> holes;
    std::optional<HoleGeneratorSpec> generator;
    std::vector<int> nodes_per_hole; // broadcast from a scalar if needed
    std::string problem = "dirichlet";
    BoundaryDataSpec data;
    std::optional<std::vector<cplx>> betas;
    int k_max = 10;
    double eigenvalue_scale = 1.0;
    double mean_tol = 1e-4;
    int field_resolution = 0;
    std::optional<ContourSpec> contour;
    std::vector<int> n_list;
    int reference_factor = 4;
    std::string output_dir;
    std::optional<PinSpec> pin;
};

ProblemConfig parse_config(const std::string& json_text);
ProblemConfig load_config(const std::string& path);

std::vector<Hole> generate_holes(const HoleGeneratorSpec& spec, const Torus& torus);

// explicit list, or the generator output for seeded geometries
std::vector<Hole> resolve_holes(const ProblemConfig& cfg, const Torus& torus);

std::vector<int> resolve_nodes(const ProblemConfig& cfg, std::size_t hole_count);

std::vector<cplx> contour_points(const ContourSpec& spec, const std::vector<Hole>& holes);

/* data/exact/expected_fluxes for the configured boundary data; exact and
 * expected_fluxes are empty unless the data is a preset with a known solution. */
ManufacturedData resolve_boundary_data(const ProblemConfig& cfg, const std::vector<Hole>& holes,
                                       const Torus& torus);

} // namespace torusbie
