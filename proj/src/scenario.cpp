#include "vacref/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vacref/errors.hpp"
#include "vacref/sampling.hpp"

namespace vacref {

using nlohmann::json;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw validation_error("config: vectors are 3-element arrays");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json config_to_json_obj(const ScenarioConfig& c) {
    json j;
    j["geometry"] = {{"kind", c.geometry},
                     {"radius", c.radius},
                     {"thickness", c.thickness},
                     {"center", vec_to_json(c.center)},
                     {"plate_theta", c.plate_theta},
                     {"plate_phi", c.plate_phi},
                     {"plate_center", vec_to_json(c.plate_center)},
                     {"gap", c.gap}};
    j["quadrature"] = {{"nodes", c.nodes}, {"seed", c.seed}, {"sequence", "halton"}};
    j["modes"] = {{"cutoff", c.mode_cutoff}};
    j["ray"] = {{"origin", vec_to_json(c.ray_origin)},
                {"direction", vec_to_json(c.ray_direction)},
                {"reflections", c.reflections},
                {"samples", c.samples}};
    j["dynamics"] = {{"eta", c.eta},
                     {"state", c.state},
                     {"drive_rp", c.drive_rp},
                     {"drive_lp", c.drive_lp},
                     {"drive", c.drive},
                     {"drive_omega", c.drive_omega},
                     {"t0", c.t0},
                     {"t1", c.t1},
                     {"samples", c.time_samples},
                     {"use_regions", c.use_regions},
                     {"mass_rp", c.mass_rp},
                     {"mass_lp", c.mass_lp},
                     {"signs_rp", c.signs_rp},
                     {"signs_lp", c.signs_lp},
                     {"region_modes", c.region_modes},
                     {"region_lengths", c.region_lengths},
                     {"region_occupation", c.region_occupation},
                     {"region_polarization", c.region_polarization},
                     {"momentum_initial_velocities", c.momentum_initial_velocities}};
    j["units"] = c.units;
    j["verify"] = c.verify;
    return j;
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void maybe_vec(const json& j, const char* key, Vec3& out) {
    if (j.contains(key)) out = vec_from_json(j.at(key));
}

}  // namespace

CavityGeometry ScenarioConfig::cavity() const {
    CavityGeometry g;
    g.inner_radius = radius;
    g.shell_thickness = thickness;
    g.center.offset = center;
    if (geometry == "sphere") {
        g.kind = CavityKind::Sphere;
    } else if (geometry == "hemisphere") {
        g.kind = CavityKind::Hemisphere;
    } else if (geometry == "plate-hemisphere") {
        g.kind = CavityKind::PlateHemisphere;
        g.plate_theta = plate_theta;
        g.plate_phi = plate_phi;
        g.plate_center.offset = plate_center;
    } else {
        throw validation_error("config: geometry.kind must be sphere, hemisphere or "
                               "plate-hemisphere (got '" + geometry + "')");
    }
    g.validate();
    return g;
}

void ScenarioConfig::validate_common() const {
    if (!(radius > 0.0)) throw validation_error("config: geometry.radius must be > 0");
    if (thickness < 0.0) throw validation_error("config: geometry.thickness must be >= 0");
    if (nodes < 1) throw validation_error("config: quadrature.nodes must be >= 1");
    if (!(gap > 0.0)) throw validation_error("config: gap must be > 0");
    if (units != "natural" && units != "si")
        throw validation_error("config: units must be 'natural' or 'si'");
    if (drive != "zero" && drive != "unit" && drive != "sin")
        throw validation_error("config: drive must be zero, unit or sin");
    if (reflections < 1) throw validation_error("config: reflections must be >= 1");
    if (time_samples < 1) throw validation_error("config: dynamics.samples must be >= 1");
    if (!(t1 > t0)) throw validation_error("config: need t1 > t0");
}

std::string ScenarioConfig::to_json() const { return config_to_json_obj(*this).dump(); }

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw validation_error("config: JSON parse failure: " + std::string(e.what()));
    }
    ScenarioConfig c;
    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        maybe(g, "kind", c.geometry);
        maybe(g, "radius", c.radius);
        maybe(g, "thickness", c.thickness);
        maybe_vec(g, "center", c.center);
        maybe(g, "plate_theta", c.plate_theta);
        maybe(g, "plate_phi", c.plate_phi);
        maybe_vec(g, "plate_center", c.plate_center);
        maybe(g, "gap", c.gap);
    }
    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        maybe(q, "nodes", c.nodes);
        maybe(q, "seed", c.seed);
    }
    if (j.contains("modes")) maybe(j["modes"], "cutoff", c.mode_cutoff);
    if (j.contains("ray")) {
        const json& r = j["ray"];
        maybe_vec(r, "origin", c.ray_origin);
        maybe_vec(r, "direction", c.ray_direction);
        maybe(r, "reflections", c.reflections);
        maybe(r, "samples", c.samples);
    }
    if (j.contains("dynamics")) {
        const json& d = j["dynamics"];
        maybe(d, "eta", c.eta);
        maybe(d, "state", c.state);
        maybe(d, "drive_rp", c.drive_rp);
        maybe(d, "drive_lp", c.drive_lp);
        maybe(d, "drive", c.drive);
        maybe(d, "drive_omega", c.drive_omega);
        maybe(d, "t0", c.t0);
        maybe(d, "t1", c.t1);
        maybe(d, "samples", c.time_samples);
        maybe(d, "use_regions", c.use_regions);
        maybe(d, "mass_rp", c.mass_rp);
        maybe(d, "mass_lp", c.mass_lp);
        maybe(d, "signs_rp", c.signs_rp);
        maybe(d, "signs_lp", c.signs_lp);
        maybe(d, "region_modes", c.region_modes);
        maybe(d, "region_lengths", c.region_lengths);
        maybe(d, "region_occupation", c.region_occupation);
        maybe(d, "region_polarization", c.region_polarization);
        maybe(d, "momentum_initial_velocities", c.momentum_initial_velocities);
    }
    maybe(j, "units", c.units);
    maybe(j, "verify", c.verify);
    return c;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

RecordWriter::RecordWriter(std::ostream& os, const std::string& command,
                           const ScenarioConfig& config)
    : os_(os) {
    json meta;
    meta["command"] = command;
    meta["config"] = json::parse(config.to_json());
    json prov;
    prov["version"] = kVersion;
    prov["seed"] = config.seed;
    if (config.stamp) {
        prov["timestamp"] = static_cast<long>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch()).count());
    } else {
        prov["timestamp"] = "";  // deterministic output by default
    }
    meta["provenance"] = prov;
    if (config.units == "si") {
        // hbar = c = 1 internally; these factors convert natural-unit force
        // values assuming lengths in meters (momentum-per-transit-time
        // normalization carries hbar * c).
        meta["si_factors"] = {{"hbar_J_s", 1.054571817e-34},
                              {"c_m_per_s", 2.99792458e8},
                              {"force_scale_N", 1.054571817e-34 * 2.99792458e8}};
    }
    meta["results"] = json::object();
    meta_ = meta.dump();
}

void RecordWriter::flush_metadata() {
    if (!metadata_written_) {
        os_ << "# " << meta_ << "\n";
        metadata_written_ = true;
    }
}

namespace {
// Patch a value into the serialized metadata before it is flushed.
void patch_results(std::string& meta, const std::string& key, const json& value) {
    json j = json::parse(meta);
    j["results"][key] = value;
    meta = j.dump();
}
}  // namespace

void RecordWriter::add_result(const std::string& key, double value) {
    patch_results(meta_, key, value);
}
void RecordWriter::add_result(const std::string& key, const std::string& value) {
    patch_results(meta_, key, value);
}
void RecordWriter::add_result(const std::string& key, const Vec3& value) {
    patch_results(meta_, key, vec_to_json(value));
}

void RecordWriter::header(const std::vector<std::string>& columns) {
    flush_metadata();
    for (std::size_t i = 0; i < columns.size(); ++i)
        os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void RecordWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        os_ << (i ? "," : "") << format_double(values[i]);
    os_ << "\n";
}

int run_trace(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate_common();
    const double dn = cfg.ray_direction.norm();
    if (dn == 0.0) throw validation_error("config: ray.direction must be nonzero");
    const RayState ray{cfg.ray_origin, cfg.ray_direction / dn};

    RecordWriter rec(os, "trace", cfg);
    if (cfg.geometry == "sphere") {
        const ReflectionTrace tr = trace_iterative(ray, cfg.radius, cfg.reflections);
        rec.add_result("incidence_angle", tr.incidence_angle);
        rec.add_result("chord_length", tr.chord_length);
        rec.header({"index", "x", "y", "z", "theta_inc", "chord", "xi"});
        for (std::size_t i = 0; i < tr.size(); ++i)
            rec.row({static_cast<double>(i + 1), tr.points[i].x, tr.points[i].y,
                     tr.points[i].z, tr.incidence_angle, tr.chord_length,
                     tr.parameters[i]});
    } else {
        const CavityGeometry geom = cfg.cavity();
        const ReflectionCount count = max_reflections(ray, geom);
        const ReflectionTrace tr = trace_iterative(ray, cfg.radius, count.value);
        const RayState exit = hemisphere_exit_ray(ray, geom);
        rec.add_result("n_max", static_cast<double>(count.value));
        rec.add_result("incidence_angle", tr.incidence_angle);
        rec.add_result("exit_origin", exit.origin);
        rec.add_result("exit_direction", exit.direction);
        rec.header({"index", "x", "y", "z", "theta_inc", "chord", "xi"});
        for (std::size_t i = 0; i < tr.size(); ++i)
            rec.row({static_cast<double>(i + 1), tr.points[i].x, tr.points[i].y,
                     tr.points[i].z, tr.incidence_angle, tr.chord_length,
                     tr.parameters[i]});
    }
    return 0;
}

int run_classify(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate_common();
    ScenarioConfig hemi_cfg = cfg;
    if (hemi_cfg.geometry == "sphere") hemi_cfg.geometry = "hemisphere";
    const CavityGeometry geom = hemi_cfg.cavity();
    const bool plate = geom.kind == CavityKind::PlateHemisphere;

    RecordWriter rec(os, "classify", cfg);
    std::vector<std::string> cols{"sample", "origin_x", "origin_y", "origin_z",
                                  "dir_x",  "dir_y",    "dir_z",    "n_max",
                                  "z_value", "boundary", "single",  "exit_norm"};
    if (plate) {
        // plate scenes append the re-entry verdict and the parametric scales
        for (const char* c : {"reenters", "xi_1", "xi_2", "xi_3"})
            cols.emplace_back(c);
    }
    rec.header(cols);

    auto emit = [&](int idx, const RayState& ray) {
        const EscapeClassification ec = classify_reflection(ray, geom);
        std::vector<double> row{static_cast<double>(idx), ray.origin.x, ray.origin.y,
                                ray.origin.z, ray.direction.x, ray.direction.y,
                                ray.direction.z, static_cast<double>(ec.max_reflections),
                                ec.degenerate_plane ? 0.0 : max_reflections(ray, geom).z,
                                ec.boundary ? 1.0 : 0.0,
                                ec.cls == EscapeClass::SingleReflection ? 1.0 : 0.0,
                                ec.exit_crossing_norm};
        if (plate) {
            double reenters = 0.0;
            Vec3 scales{std::nan(""), std::nan(""), std::nan("")};
            try {
                const RayState exit = hemisphere_exit_ray(ray, geom);
                const PlateInteraction hit = plate_reflection_point(exit, geom);
                reenters = hit.reentry == Reentry::Reenters ? 1.0 : 0.0;
                scales = hit.scale_components;
            } catch (const degeneracy_error&) {
                // exit ray misses the plate: counts as escaping
            }
            row.insert(row.end(), {reenters, scales.x, scales.y, scales.z});
        }
        rec.row(row);
    };

    if (cfg.samples > 0) {
        const HaltonSampler smp(cfg.seed);
        const double r = cfg.radius;
        for (int j = 0; j < cfg.samples; ++j) {
            const auto idx = static_cast<std::uint64_t>(j);
            const double rho = r * std::sqrt(smp.sample(idx, 0)) * 0.999;
            const double a = 2.0 * kPi * smp.sample(idx, 1);
            const double kz = -smp.sample(idx, 2);
            const double s = std::sqrt(std::max(0.0, 1.0 - kz * kz));
            const double b = 2.0 * kPi * smp.sample(idx, 3);
            emit(j, {{rho * std::cos(a), rho * std::sin(a), 0.0},
                     {s * std::cos(b), s * std::sin(b), kz}});
        }
    } else {
        const double dn = cfg.ray_direction.norm();
        if (dn == 0.0) throw validation_error("config: ray.direction must be nonzero");
        emit(0, {cfg.ray_origin, cfg.ray_direction / dn});
    }
    return 0;
}

int run_force(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate_common();
    if (cfg.geometry == "plates1d") return run_plates1d(cfg, os);

    const CavityGeometry geom = cfg.cavity();
    const QuadratureSpec quad{cfg.nodes, cfg.seed};
    std::vector<NodeRecord> table;
    const ForceResult fr = total_force(geom, quad, &table);

    RecordWriter rec(os, "force", cfg);
    rec.add_result("geometry", cfg.geometry);
    rec.add_result("node_count", static_cast<double>(table.size()));
    rec.add_result("net_vector", fr.net_vector);
    rec.add_result("mean_radial_stress", fr.mean_radial_stress);
    rec.add_result("raw_sum_part", fr.raw_sum_part);
    rec.add_result("integral_part", fr.integral_part);
    rec.add_result("raw_parts_note",
                   "raw sum/integral are truncated at the mode cutoff and "
                   "diverge with it by construction");
    rec.add_result("units", cfg.units);
    if (cfg.verify) {
        QuadratureSpec fine{cfg.nodes * 2, cfg.seed};
        const ForceResult fr2 = total_force(geom, fine);
        const double rel = std::abs(fr2.mean_radial_stress - fr.mean_radial_stress) /
                           std::abs(fr.mean_radial_stress);
        rec.add_result("refinement_relative_change", rel);
    }
    rec.header({"sample", "theta_inc", "quantization_length", "force",
                "closed_form", "origin_x", "origin_y", "origin_z"});
    for (std::size_t i = 0; i < table.size(); ++i)
        rec.row({static_cast<double>(i), table[i].theta_inc,
                 table[i].quantization_length, table[i].force, table[i].closed_form,
                 table[i].origin.x, table[i].origin.y, table[i].origin.z});
    return 0;
}

int run_plates1d(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate_common();
    const double f = parallel_plate_force_1d(cfg.gap);
    RecordWriter rec(os, "plates1d", cfg);
    rec.add_result("force", f);
    rec.add_result("units", cfg.units);
    rec.header({"gap", "force"});
    rec.row({cfg.gap, f});
    return 0;
}

int run_dyncas(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate_common();
    PlateSystem1D sys;
    std::array<double, 3> region_energy{};
    if (cfg.use_regions) {
        std::array<FieldQuantization, 3> regions;
        for (int r = 0; r < 3; ++r) {
            regions[r].occupation = cfg.region_occupation;
            regions[r].polarization_dof = cfg.region_polarization;
            regions[r].mode_numbers = {cfg.region_modes[r], 0, 0};
            regions[r].lengths = {cfg.region_lengths[r], 1.0, 1.0};
            regions[r].mode_cutoff = std::max(1, cfg.region_modes[r]);
            region_energy[r] = energy_bounded(regions[r]);
        }
        sys = plate_coefficients(regions, cfg.mass_rp, cfg.mass_lp, cfg.signs_rp,
                                 cfg.signs_lp);
        sys.state = cfg.state;
        if (cfg.momentum_initial_velocities) {
            const auto [vr, vl] =
                initial_velocities(region_energy, cfg.mass_rp, cfg.mass_lp);
            sys.state[2] = vr;
            sys.state[3] = vl;
        }
    } else {
        sys.eta = cfg.eta;
        sys.state = cfg.state;
        sys.drive_rp = cfg.drive_rp;
        sys.drive_lp = cfg.drive_lp;
    }

    DriveFunction drv;
    if (cfg.drive == "zero") {
        drv = [](double) { return 0.0; };
    } else if (cfg.drive == "unit") {
        drv = nullptr;
    } else {
        const double w = cfg.drive_omega;
        drv = [w](double t) { return std::sin(w * t); };
    }

    const auto series = evolve_plates_series(sys, cfg.t0, cfg.t1, cfg.time_samples, drv);
    std::vector<PlateEvolution> ref;
    if (cfg.verify)
        ref = reference_evolution(sys, cfg.t0, cfg.t1, cfg.time_samples, drv);

    const Eigenvalues ev = eigenvalues(sys);
    RecordWriter rec(os, "dyncas", cfg);
    rec.add_result("lambda3_re", ev.lambda3.real());
    rec.add_result("lambda4_re", ev.lambda4.real());
    rec.add_result("complex_pair", ev.complex_pair ? "true" : "false");
    if (cfg.use_regions) {
        rec.add_result("eta1", sys.eta[0]);
        rec.add_result("eta2", sys.eta[1]);
        rec.add_result("eta3", sys.eta[2]);
        rec.add_result("eta4", sys.eta[3]);
        rec.add_result("region_energies",
                       Vec3{region_energy[0], region_energy[1], region_energy[2]});
        rec.add_result("initial_velocity_rp", sys.state[2]);
        rec.add_result("initial_velocity_lp", sys.state[3]);
    }

    std::vector<std::string> cols{"t", "R1", "R2", "dR1", "dR2"};
    if (cfg.verify) {
        cols.push_back("res_dR1");
        cols.push_back("res_dR2");
    }
    rec.header(cols);
    const double h = (cfg.t1 - cfg.t0) / cfg.time_samples;
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::vector<double> vals{cfg.t0 + static_cast<double>(i) * h,
                                 series[i].position_rp, series[i].position_lp,
                                 series[i].velocity_rp, series[i].velocity_lp};
        if (cfg.verify) {
            vals.push_back(std::abs(series[i].velocity_rp - ref[i].velocity_rp));
            vals.push_back(std::abs(series[i].velocity_lp - ref[i].velocity_lp));
        }
        rec.row(vals);
    }
    return 0;
}

}  // namespace vacref
