#include "torusbie/config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include "json.hpp"
#include "torusbie/expr.hpp"

namespace torusbie {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key '" + it.key() + "'", path + "/" + it.key());
    }
}

const json& need(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(std::string("missing key '") + key + "'", path);
    return *it;
}

double as_num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("expected a number", path);
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("expected an integer", path);
    return j.get<int>();
}

std::string as_str(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError("expected a string", path);
    return j.get<std::string>();
}

cplx as_pair(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("expected [re, im]", path);
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> as_num_list(const json& j, const std::string& path) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
        return out;
    }
    if (!j.is_array()) throw ConfigError("expected a number or an array of numbers", path);
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_num(j[i], path + "/" + std::to_string(i)));
    return out;
}

std::vector<int> as_int_list(const json& j, const std::string& path) {
    std::vector<int> out;
    if (j.is_number_integer()) {
        out.push_back(j.get<int>());
        return out;
    }
    if (!j.is_array()) throw ConfigError("expected an integer or an array of integers", path);
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_int(j[i], path + "/" + std::to_string(i)));
    return out;
}

Hole parse_hole(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError("expected a hole object", path);
    const std::string kind = as_str(need(j, path, "kind"), path + "/kind");
    const cplx center = as_pair(need(j, path, "center"), path + "/center");
    try {
        if (kind == "circle") {
            require_keys(j, path, {"kind", "center", "r"});
            return Hole::circle(center, as_num(need(j, path, "r"), path + "/r"));
        }
        if (kind == "trefoil") {
            require_keys(j, path, {"kind", "center", "r"});
            return Hole::trefoil(center, as_num(need(j, path, "r"), path + "/r"));
        }
        if (kind == "oscillatory") {
            require_keys(j, path, {"kind", "center", "r", "omega"});
            return Hole::oscillatory(center, as_num(need(j, path, "r"), path + "/r"),
                                     as_int(need(j, path, "omega"), path + "/omega"));
        }
        if (kind == "fourier") {
            require_keys(j, path, {"kind", "center", "cos_coeffs", "sin_coeffs"});
            std::vector<double> cc, sc;
            if (j.contains("cos_coeffs"))
                cc = as_num_list(j["cos_coeffs"], path + "/cos_coeffs");
            if (j.contains("sin_coeffs"))
                sc = as_num_list(j["sin_coeffs"], path + "/sin_coeffs");
            return Hole::fourier(center, cc, sc);
        }
    } catch (const InvalidCurve& e) {
        throw ConfigError(e.what(), path);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), path);
    }
    throw ConfigError("unknown hole kind '" + kind + "'", path + "/kind");
}

void check_even_nodes(const std::vector<int>& ns, const std::string& path) {
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] < 4 || ns[i] % 2 != 0)
            throw ConfigError("node counts must be even and at least 4",
                              path + "/" + std::to_string(i));
}

} // namespace

ProblemConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what(), "");
    }
    if (!root.is_object()) throw ConfigError("top level must be an object", "");
    require_keys(root, "",
                 {"comment", "torus", "problem", "holes", "hole_generator", "nodes_per_hole",
                  "boundary_data", "betas", "k_max", "eigenvalue_scale", "mean_tol",
                  "field_resolution", "contour", "n_list", "reference_factor", "output_dir",
                  "pin"});

    ProblemConfig cfg;

    if (root.contains("torus")) {
        const json& t = root["torus"];
        if (!t.is_object()) throw ConfigError("expected an object", "/torus");
        require_keys(t, "/torus", {"tau"});
        cfg.tau = as_pair(need(t, "/torus", "tau"), "/torus/tau");
    }
    if (!std::isfinite(cfg.tau.real()) || !std::isfinite(cfg.tau.imag()) ||
        cfg.tau.imag() < 0.05)
        throw ConfigError("tau must be finite with imaginary part >= 0.05", "/torus/tau");

    cfg.problem = as_str(need(root, "", "problem"), "/problem");
    if (cfg.problem != "dirichlet" && cfg.problem != "neumann" && cfg.problem != "steklov")
        throw ConfigError("problem must be dirichlet, neumann or steklov", "/problem");

    const bool has_holes = root.contains("holes");
    const bool has_gen = root.contains("hole_generator");
    if (has_holes == has_gen)
        throw ConfigError("exactly one of 'holes' and 'hole_generator' is required", "");
    if (has_holes) {
        const json& hs = root["holes"];
        if (!hs.is_array() || hs.empty())
            throw ConfigError("expected a nonempty array of holes", "/holes");
        for (std::size_t i = 0; i < hs.size(); ++i)
            cfg.holes.push_back(parse_hole(hs[i], "/holes/" + std::to_string(i)));
    } else {
        const json& g = root["hole_generator"];
        if (!g.is_object()) throw ConfigError("expected an object", "/hole_generator");
        require_keys(g, "/hole_generator",
                     {"count", "seed", "r_min", "r_max", "omega_min", "omega_max", "clearance"});
        HoleGeneratorSpec spec;
        spec.count = as_int(need(g, "/hole_generator", "count"), "/hole_generator/count");
        if (spec.count < 1) throw ConfigError("count must be >= 1", "/hole_generator/count");
        if (g.contains("seed")) {
            const json& s = g["seed"];
            if (!s.is_number_unsigned() && !s.is_number_integer())
                throw ConfigError("expected an integer", "/hole_generator/seed");
            spec.seed = s.get<std::uint64_t>();
        }
        if (g.contains("r_min")) spec.r_min = as_num(g["r_min"], "/hole_generator/r_min");
        if (g.contains("r_max")) spec.r_max = as_num(g["r_max"], "/hole_generator/r_max");
        if (g.contains("omega_min"))
            spec.omega_min = as_int(g["omega_min"], "/hole_generator/omega_min");
        if (g.contains("omega_max"))
            spec.omega_max = as_int(g["omega_max"], "/hole_generator/omega_max");
        if (g.contains("clearance"))
            spec.clearance = as_num(g["clearance"], "/hole_generator/clearance");
        if (!(spec.r_min > 0.0) || spec.r_max < spec.r_min || spec.r_max >= 0.5)
            throw ConfigError("need 0 < r_min <= r_max < 0.5", "/hole_generator");
        if (spec.omega_min < 0 || spec.omega_max < spec.omega_min)
            throw ConfigError("need 0 <= omega_min <= omega_max", "/hole_generator");
        if (spec.clearance < 0.0)
            throw ConfigError("clearance must be >= 0", "/hole_generator/clearance");
        cfg.generator = spec;
    }

    cfg.nodes_per_hole = as_int_list(need(root, "", "nodes_per_hole"), "/nodes_per_hole");
    check_even_nodes(cfg.nodes_per_hole, "/nodes_per_hole");

    if (root.contains("boundary_data")) {
        const json& d = root["boundary_data"];
        if (!d.is_object()) throw ConfigError("expected an object", "/boundary_data");
        const int forms = int(d.contains("preset")) + int(d.contains("expression")) +
                          int(d.contains("csv"));
        if (forms != 1)
            throw ConfigError("need exactly one of 'preset', 'expression', 'csv'",
                              "/boundary_data");
        if (d.contains("preset")) {
            require_keys(d, "/boundary_data",
                         {"preset", "amplitude", "mode", "coefficients", "exact_nodes"});
            cfg.data.kind = "preset";
            cfg.data.preset = as_str(d["preset"], "/boundary_data/preset");
            if (d.contains("amplitude"))
                cfg.data.amplitude = as_num_list(d["amplitude"], "/boundary_data/amplitude");
            if (d.contains("mode"))
                cfg.data.mode = as_int_list(d["mode"], "/boundary_data/mode");
            if (d.contains("coefficients"))
                cfg.data.coefficients =
                    as_num_list(d["coefficients"], "/boundary_data/coefficients");
            if (d.contains("exact_nodes")) {
                cfg.data.exact_nodes = as_int(d["exact_nodes"], "/boundary_data/exact_nodes");
                if (cfg.data.exact_nodes < 4 || cfg.data.exact_nodes % 2 != 0)
                    throw ConfigError("exact_nodes must be even and at least 4",
                                      "/boundary_data/exact_nodes");
            }
        } else if (d.contains("expression")) {
            require_keys(d, "/boundary_data", {"expression"});
            cfg.data.kind = "expression";
            cfg.data.expression = as_str(d["expression"], "/boundary_data/expression");
            try {
                BoundaryExpr::parse(cfg.data.expression);
            } catch (const ParseError& e) {
                throw ConfigError(e.what(), "/boundary_data/expression");
            }
        } else {
            require_keys(d, "/boundary_data", {"csv"});
            cfg.data.kind = "csv";
            cfg.data.csv_path = as_str(d["csv"], "/boundary_data/csv");
        }
    }

    if (root.contains("betas")) {
        const json& b = root["betas"];
        if (!b.is_array() || b.empty()) throw ConfigError("expected an array of points", "/betas");
        std::vector<cplx> betas;
        for (std::size_t i = 0; i < b.size(); ++i)
            betas.push_back(as_pair(b[i], "/betas/" + std::to_string(i)));
        cfg.betas = std::move(betas);
    }

    if (root.contains("k_max")) {
        cfg.k_max = as_int(root["k_max"], "/k_max");
        if (cfg.k_max < 1) throw ConfigError("k_max must be >= 1", "/k_max");
    }
    if (root.contains("eigenvalue_scale")) {
        cfg.eigenvalue_scale = as_num(root["eigenvalue_scale"], "/eigenvalue_scale");
        if (!(cfg.eigenvalue_scale > 0.0))
            throw ConfigError("eigenvalue_scale must be positive", "/eigenvalue_scale");
    }
    if (root.contains("mean_tol")) {
        cfg.mean_tol = as_num(root["mean_tol"], "/mean_tol");
        if (!(cfg.mean_tol >= 0.0)) throw ConfigError("mean_tol must be >= 0", "/mean_tol");
    }
    if (root.contains("field_resolution")) {
        cfg.field_resolution = as_int(root["field_resolution"], "/field_resolution");
        if (cfg.field_resolution < 0)
            throw ConfigError("field_resolution must be >= 0", "/field_resolution");
    }
    if (root.contains("contour")) {
        const json& c = root["contour"];
        if (!c.is_object()) throw ConfigError("expected an object", "/contour");
        require_keys(c, "/contour", {"radius", "samples", "hole", "profile"});
        ContourSpec spec;
        spec.radius = as_num(need(c, "/contour", "radius"), "/contour/radius");
        if (!(spec.radius > 0.0)) throw ConfigError("radius must be positive", "/contour/radius");
        if (c.contains("samples")) {
            spec.samples = as_int(c["samples"], "/contour/samples");
            if (spec.samples < 1) throw ConfigError("samples must be >= 1", "/contour/samples");
        }
        if (c.contains("hole")) spec.hole = as_int(c["hole"], "/contour/hole");
        if (c.contains("profile")) {
            spec.profile = as_str(c["profile"], "/contour/profile");
            if (spec.profile != "circle" && spec.profile != "match")
                throw ConfigError("profile must be 'circle' or 'match'", "/contour/profile");
        }
        cfg.contour = spec;
    }
    if (root.contains("n_list")) {
        cfg.n_list = as_int_list(root["n_list"], "/n_list");
        if (cfg.n_list.empty()) throw ConfigError("n_list must be nonempty", "/n_list");
        check_even_nodes(cfg.n_list, "/n_list");
    }
    if (root.contains("reference_factor")) {
        cfg.reference_factor = as_int(root["reference_factor"], "/reference_factor");
        if (cfg.reference_factor < 2)
            throw ConfigError("reference_factor must be >= 2", "/reference_factor");
    }
    if (root.contains("output_dir")) cfg.output_dir = as_str(root["output_dir"], "/output_dir");
    if (root.contains("pin")) {
        const json& p = root["pin"];
        if (!p.is_object()) throw ConfigError("expected an object", "/pin");
        require_keys(p, "/pin", {"point", "value"});
        PinSpec spec;
        spec.point = as_pair(need(p, "/pin", "point"), "/pin/point");
        if (p.contains("value")) spec.value = as_num(p["value"], "/pin/value");
        cfg.pin = spec;
        if (cfg.problem != "neumann")
            throw ConfigError("pin applies to Neumann problems only", "/pin");
    }

    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file '" + path + "'", "");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

std::vector<Hole> generate_holes(const HoleGeneratorSpec& spec, const Torus& torus) {
    std::mt19937_64 rng(spec.seed);
    // raw 53-bit draws; std::uniform_real_distribution is not portable across libraries
    auto uni = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };

    std::vector<Hole> out;
    const int max_attempts = spec.count * 2000;
    int attempts = 0;
    while (int(out.size()) < spec.count) {
        if (++attempts > max_attempts)
            throw ConfigError("hole generator could not place " + std::to_string(spec.count) +
                                  " holes; lower count or clearance",
                              "/hole_generator");
        const double p = uni();
        const double q = uni();
        const double r = spec.r_min + uni() * (spec.r_max - spec.r_min);
        const int span = spec.omega_max - spec.omega_min + 1;
        const int omega = spec.omega_min + std::min(span - 1, int(uni() * span));
        const cplx c = p + q * torus.tau();

        bool ok = true;
        for (const Hole& h : out) {
            const cplx d = reduce_to_cell(c - h.center, torus).z;
            // oscillatory max radius equals its r parameter
            if (std::abs(d) < r + h.max_radius() + spec.clearance) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        out.push_back(Hole::oscillatory(c, r, omega));
    }
    return out;
}

std::vector<Hole> resolve_holes(const ProblemConfig& cfg, const Torus& torus) {
    if (cfg.generator) return generate_holes(*cfg.generator, torus);
    return cfg.holes;
}

std::vector<int> resolve_nodes(const ProblemConfig& cfg, std::size_t hole_count) {
    std::vector<int> ns = cfg.nodes_per_hole;
    if (ns.size() == 1 && hole_count > 1) ns.assign(hole_count, ns[0]);
    if (ns.size() != hole_count)
        throw ConfigError("nodes_per_hole must be one value or one per hole", "/nodes_per_hole");
    return ns;
}

std::vector<cplx> contour_points(const ContourSpec& spec, const std::vector<Hole>& holes) {
    std::vector<cplx> pts;
    auto add = [&](const Hole& h) {
        const double scale = h.r > 0.0 ? h.r : h.max_radius();
        for (int k = 0; k < spec.samples; ++k) {
            const double th = 2.0 * kPi * k / spec.samples;
            const double rad =
                spec.profile == "match" ? spec.radius * h.rho(th) / scale : spec.radius;
            pts.push_back(h.center + std::polar(rad, th));
        }
    };
    if (spec.hole >= 0) {
        if (spec.hole >= int(holes.size()))
            throw ConfigError("contour hole index out of range", "/contour/hole");
        add(holes[std::size_t(spec.hole)]);
    } else {
        for (const Hole& h : holes) add(h);
    }
    return pts;
}

namespace {

std::vector<double> broadcast(std::vector<double> v, std::size_t n, const std::string& path) {
    if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    if (v.size() != n) throw ConfigError("need one value or one per hole", path);
    return v;
}

std::vector<int> broadcast(std::vector<int> v, std::size_t n, const std::string& path) {
    if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    if (v.size() != n) throw ConfigError("need one value or one per hole", path);
    return v;
}

Eigen::VectorXd read_csv_column(const std::string& path, int expected) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open boundary data file '" + path + "'");
    std::vector<double> vals;
    std::string line;
    while (std::getline(f, line)) {
        const auto comma = line.find_last_of(',');
        std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            std::size_t used = 0;
            double v = std::stod(field, &used);
            if (used > 0) vals.push_back(v);
        } catch (const std::exception&) {
            // header or blank line
        }
    }
    if (int(vals.size()) != expected)
        throw std::invalid_argument("boundary data file '" + path + "' has " +
                                    std::to_string(vals.size()) + " values, grid has " +
                                    std::to_string(expected));
    Eigen::VectorXd g(expected);
    for (int i = 0; i < expected; ++i) g[i] = vals[std::size_t(i)];
    return g;
}

} // namespace

ManufacturedData resolve_boundary_data(const ProblemConfig& cfg, const std::vector<Hole>& holes,
                                       const Torus& torus) {
    const std::size_t M = holes.size();

    if (cfg.data.kind == "none") {
        if (cfg.problem != "steklov")
            throw ConfigError("problem '" + cfg.problem + "' requires boundary_data",
                              "/boundary_data");
        return {};
    }

    if (cfg.data.kind == "preset") {
        const std::string& name = cfg.data.preset;
        if (name == "single_layer_sine") {
            if (!cfg.data.coefficients.empty())
                throw ConfigError("single_layer_sine takes no coefficients",
                                  "/boundary_data/coefficients");
            return single_layer_sine(
                holes, torus, broadcast(cfg.data.amplitude, M, "/boundary_data/amplitude"),
                broadcast(cfg.data.mode, M, "/boundary_data/mode"), cfg.data.exact_nodes);
        }
        if (name == "green_combination") {
            return green_combination(
                holes, torus, broadcast(cfg.data.coefficients, M, "/boundary_data/coefficients"),
                broadcast(cfg.data.amplitude, M, "/boundary_data/amplitude"),
                broadcast(cfg.data.mode, M, "/boundary_data/mode"), cfg.data.exact_nodes);
        }
        if (name == "green_normal_combination") {
            if (!cfg.data.amplitude.empty() || !cfg.data.mode.empty())
                throw ConfigError("green_normal_combination takes only coefficients",
                                  "/boundary_data/preset");
            return green_normal_combination(
                holes, torus, broadcast(cfg.data.coefficients, M, "/boundary_data/coefficients"));
        }
        throw ConfigError("unknown preset '" + name + "'", "/boundary_data/preset");
    }

    if (cfg.data.kind == "expression") {
        BoundaryExpr e = BoundaryExpr::parse(cfg.data.expression);
        auto tor = std::make_shared<Torus>(torus);
        ManufacturedData out;
        out.data = [e, tor](const QuadratureGrid& grid) {
            Eigen::VectorXd g(grid.total);
            for (int i = 0; i < grid.total; ++i) {
                ExprContext ctx;
                ctx.x = grid.z[i].real();
                ctx.y = grid.z[i].imag();
                ctx.t = grid.t[i];
                ctx.j = double(grid.hole_of[i]);
                ctx.normal = grid.nu[i];
                ctx.torus = tor.get();
                g[i] = e.eval(ctx);
            }
            return g;
        };
        return out;
    }

    // csv: values in node order, one per line (or the last field per line)
    std::string path = cfg.data.csv_path;
    ManufacturedData out;
    out.data = [path](const QuadratureGrid& grid) { return read_csv_column(path, grid.total); };
    return out;
}

} // namespace torusbie
