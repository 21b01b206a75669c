#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vacref/dynamical.hpp"
#include "vacref/force.hpp"
#include "vacref/hemisphere.hpp"

namespace vacref {

inline constexpr const char* kVersion = "0.1.0";

// Full scenario description shared by every subcommand.  Values arrive from
// a JSON config file, CLI flag overrides, or defaults; the effective config
// is echoed into every result record so a run can be reproduced from its
// output alone.
struct ScenarioConfig {
    // geometry
    std::string geometry = "sphere";  // sphere | hemisphere | plate-hemisphere
    double radius = 1.0;
    double thickness = 0.0;
    Vec3 center{};
    double plate_theta = 0.0;
    double plate_phi = 0.0;
    Vec3 plate_center{0.0, 0.0, 2.0};
    double gap = 1.0;  // plates1d separation

    // sampling / modes
    int nodes = 1024;
    std::uint64_t seed = 0;
    int mode_cutoff = 10000;

    // single-ray inputs (trace, classify)
    Vec3 ray_origin{0.0, 0.0, 0.0};
    Vec3 ray_direction{0.0, 0.0, 1.0};
    int reflections = 8;
    int samples = 0;  // classify: sampled table size when > 0

    // dynamics
    std::array<double, 4> eta{0.0, 0.5, -0.25, 0.3};
    std::array<double, 4> state{0.0, 0.0, 0.2, -0.1};
    double drive_rp = 0.0;
    double drive_lp = 0.0;
    std::string drive = "unit";  // zero | unit | sin
    double drive_omega = 1.0;
    double t0 = 0.0;
    double t1 = 1.0;
    int time_samples = 100;

    // region-driven dynamics: when `use_regions` is set the eta/drive
    // coefficients come from the three cavity regions via the coupling map,
    // and the starting velocities from the region energy imbalances.
    bool use_regions = false;
    double mass_rp = 1.0;
    double mass_lp = 1.0;
    std::array<int, 3> signs_rp{1, 1, 1};
    std::array<int, 3> signs_lp{1, 1, 1};
    std::array<int, 3> region_modes{1, 1, 1};
    std::array<double, 3> region_lengths{1.0, 0.5, 1.0};
    int region_occupation = 0;
    int region_polarization = 2;
    bool momentum_initial_velocities = false;

    std::string units = "natural";  // natural | si
    bool verify = false;
    bool stamp = false;  // include a wall-clock timestamp (breaks determinism)

    CavityGeometry cavity() const;       // throws validation_error
    std::string to_json() const;         // canonical serialized form
    static ScenarioConfig from_json_file(const std::string& path);
    void validate_common() const;
};

// Writes one result record: a '#'-prefixed metadata JSON line (command,
// config echo, provenance, scalar results) followed by a CSV table with a
// mandatory header row.  All floating point uses 17 significant digits.
class RecordWriter {
public:
    RecordWriter(std::ostream& os, const std::string& command,
                 const ScenarioConfig& config);

    void add_result(const std::string& key, double value);
    void add_result(const std::string& key, const std::string& value);
    void add_result(const std::string& key, const Vec3& value);

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);

private:
    void flush_metadata();
    std::ostream& os_;
    std::string meta_;
    bool metadata_written_ = false;
};

std::string format_double(double v);  // %.17g

int run_trace(const ScenarioConfig& cfg, std::ostream& os);
int run_classify(const ScenarioConfig& cfg, std::ostream& os);
int run_force(const ScenarioConfig& cfg, std::ostream& os);
int run_plates1d(const ScenarioConfig& cfg, std::ostream& os);
int run_dyncas(const ScenarioConfig& cfg, std::ostream& os);

}  // namespace vacref
