// vacref: vacuum-field reflection dynamics and Casimir radiation forces.
//
// Subcommands: trace, classify, force, plates1d, dyncas.  Every run is a
// pure function of (config, seed); repeated runs are byte-identical unless
// --stamp is given.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vacref/errors.hpp"
#include "vacref/scenario.hpp"

namespace {

struct CliState {
    vacref::ScenarioConfig cfg;
    std::string config_path;
    std::string out_path;
    std::string origin_csv, direction_csv, eta_csv, state_csv;
};

vacref::Vec3 parse_vec(const std::string& csv, const char* what) {
    vacref::Vec3 v;
    if (std::sscanf(csv.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
        throw vacref::validation_error(std::string("flag ") + what +
                                       " expects x,y,z");
    return v;
}

std::array<double, 4> parse_quad(const std::string& csv, const char* what) {
    std::array<double, 4> a{};
    if (std::sscanf(csv.c_str(), "%lf,%lf,%lf,%lf", &a[0], &a[1], &a[2], &a[3]) != 4)
        throw vacref::validation_error(std::string("flag ") + what +
                                       " expects four comma-separated values");
    return a;
}

int dispatch(const std::string& cmd, CliState& st) {
    if (!st.origin_csv.empty()) st.cfg.ray_origin = parse_vec(st.origin_csv, "--origin");
    if (!st.direction_csv.empty())
        st.cfg.ray_direction = parse_vec(st.direction_csv, "--direction");
    if (!st.eta_csv.empty()) st.cfg.eta = parse_quad(st.eta_csv, "--eta");
    if (!st.state_csv.empty()) st.cfg.state = parse_quad(st.state_csv, "--state");

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!st.out_path.empty()) {
        file.open(st.out_path, std::ios::binary);
        if (!file)
            throw vacref::validation_error("cannot open output file '" + st.out_path + "'");
        os = &file;
    }
    if (cmd == "trace") return vacref::run_trace(st.cfg, *os);
    if (cmd == "classify") return vacref::run_classify(st.cfg, *os);
    if (cmd == "force") return vacref::run_force(st.cfg, *os);
    if (cmd == "plates1d") return vacref::run_plates1d(st.cfg, *os);
    if (cmd == "dyncas") return vacref::run_dyncas(st.cfg, *os);
    throw vacref::validation_error("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vacuum-field reflection dynamics and Casimir radiation forces"};
    app.require_subcommand(1);

    CliState st;

    // Pre-scan for --config so file values load before flag overrides.
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                st.cfg = vacref::ScenarioConfig::from_json_file(argv[i + 1]);
            } catch (const vacref::validation_error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", st.config_path, "JSON scenario file");
        sub->add_option("--seed", st.cfg.seed, "sampling seed");
        sub->add_option("--nodes", st.cfg.nodes, "quadrature node count");
        sub->add_option("--units", st.cfg.units, "natural | si");
        sub->add_flag("--verify", st.cfg.verify, "emit verification columns");
        sub->add_flag("--stamp", st.cfg.stamp, "wall-clock timestamp in metadata");
        sub->add_option("--out", st.out_path, "output path (default stdout)");
        sub->add_option("--radius", st.cfg.radius, "cavity inner radius");
        sub->add_option("--geometry", st.cfg.geometry,
                        "sphere | hemisphere | plate-hemisphere | plates1d");
    };

    CLI::App* trace = app.add_subcommand("trace", "reflection point table");
    add_common(trace);
    trace->add_option("--origin", st.origin_csv, "ray origin x,y,z");
    trace->add_option("--direction", st.direction_csv, "ray direction x,y,z");
    trace->add_option("--reflections", st.cfg.reflections, "points to trace");

    CLI::App* classify = app.add_subcommand("classify", "single/multiple reflection table");
    add_common(classify);
    classify->add_option("--origin", st.origin_csv, "entry point x,y,z");
    classify->add_option("--direction", st.direction_csv, "entry direction x,y,z");
    classify->add_option("--samples", st.cfg.samples, "seeded sample count");
    classify->add_option("--gap", st.cfg.gap, "plate gap (plate-hemisphere scenes)");

    CLI::App* force = app.add_subcommand("force", "surface-integrated Casimir force");
    add_common(force);
    force->add_option("--gap", st.cfg.gap, "plate gap (plates1d / plate-hemisphere)");

    CLI::App* plates = app.add_subcommand("plates1d", "1D parallel-plate force");
    add_common(plates);
    plates->add_option("--gap", st.cfg.gap, "plate separation");

    CLI::App* dyncas = app.add_subcommand("dyncas", "driven-plates time series");
    add_common(dyncas);
    dyncas->add_option("--eta", st.eta_csv, "coupling coefficients eta1,eta2,eta3,eta4");
    dyncas->add_option("--state", st.state_csv, "initial R1,R2,dR1,dR2");
    dyncas->add_option("--drive-rp", st.cfg.drive_rp, "right-plate drive coefficient");
    dyncas->add_option("--drive-lp", st.cfg.drive_lp, "left-plate drive term");
    dyncas->add_option("--drive", st.cfg.drive, "driver velocity: zero | unit | sin");
    dyncas->add_option("--drive-omega", st.cfg.drive_omega, "sin driver frequency");
    dyncas->add_option("--t0", st.cfg.t0, "start time");
    dyncas->add_option("--t1", st.cfg.t1, "end time");
    dyncas->add_option("--samples", st.cfg.time_samples, "output samples");
    dyncas->add_flag("--regions", st.cfg.use_regions,
                     "derive couplings from the three cavity regions");
    dyncas->add_option("--mass-rp", st.cfg.mass_rp, "right plate mass");
    dyncas->add_option("--mass-lp", st.cfg.mass_lp, "left plate mass");
    dyncas->add_flag("--momentum-init", st.cfg.momentum_initial_velocities,
                     "starting velocities from region energy imbalance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // --gap on a plate-hemisphere scene places the plate on the dome axis.
    if ((force->count("--gap") || plates->count("--gap") || classify->count("--gap")) &&
        st.cfg.geometry == "plate-hemisphere") {
        st.cfg.plate_center = st.cfg.center + vacref::Vec3{0.0, 0.0, st.cfg.gap};
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), st);
    } catch (const vacref::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vacref::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const vacref::degeneracy_error& e) {
        std::cerr << "unsupported degeneracy: " << e.what() << "\n";
        return 4;
    }
}
