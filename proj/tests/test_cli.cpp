#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli_path;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args, const std::string& out_path) {
    const std::string cmd = g_cli_path + " " + args + " --out " + out_path +
                            " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("repeated runs are byte-identical") {
    const char* cases[] = {
        "trace --radius 1 --origin 0.2,0.1,0 --direction 0.3,-0.2,0.9 --reflections 6",
        "classify --samples 50 --seed 9",
        "force --geometry sphere --nodes 64 --seed 3",
        "plates1d --gap 1",
        "dyncas --eta 0.2,0.4,-0.3,0.1 --t1 0.5 --samples 20",
    };
    int idx = 0;
    for (const char* c : cases) {
        const std::string a = "/tmp/vacref_a" + std::to_string(idx) + ".csv";
        const std::string b = "/tmp/vacref_b" + std::to_string(idx) + ".csv";
        REQUIRE(run(c, a) == 0);
        REQUIRE(run(c, b) == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(!slurp(a).empty());
        ++idx;
    }
}

TEST_CASE("force --verify reports quadrature refinement") {
    REQUIRE(run("force --geometry plate-hemisphere --gap 0.4 --nodes 48 --seed 6 --verify",
                "/tmp/vacref_fr.csv") == 0);
    const std::string out = slurp("/tmp/vacref_fr.csv");
    REQUIRE(out.find("\"plate_center\":[0.0,0.0,0.4]") != std::string::npos);
    const auto pos = out.find("refinement_relative_change\":");
    REQUIRE(pos != std::string::npos);
    const double rel = std::atof(out.c_str() + pos + 28);
    CHECK(rel < 0.01);  // doubling the nodes moves the stress by under 1%
}

TEST_CASE("different seeds change sampled output") {
    REQUIRE(run("force --geometry hemisphere --nodes 32 --seed 1", "/tmp/vacref_s1.csv") == 0);
    REQUIRE(run("force --geometry hemisphere --nodes 32 --seed 2", "/tmp/vacref_s2.csv") == 0);
    CHECK(slurp("/tmp/vacref_s1.csv") != slurp("/tmp/vacref_s2.csv"));
}

TEST_CASE("plates1d emits the regularized gap-1 force") {
    REQUIRE(run("force --geometry plates1d --gap 1", "/tmp/vacref_p.csv") == 0);
    const std::string out = slurp("/tmp/vacref_p.csv");
    // metadata line, header, one row
    CHECK(out.find("# {") == 0);
    CHECK(out.find("gap,force") != std::string::npos);
    CHECK(out.find("-0.1308996") != std::string::npos);  // -pi/24 = -0.13089969...
}

TEST_CASE("radial sphere trace alternates antipodes") {
    REQUIRE(run("trace --radius 1 --origin 0,0,0 --direction 0,0,1 --reflections 2",
                "/tmp/vacref_t.csv") == 0);
    const std::string out = slurp("/tmp/vacref_t.csv");
    CHECK(out.find("index,x,y,z,theta_inc,chord,xi") != std::string::npos);
    std::istringstream ss(out);
    std::string line;
    int rows = 0;
    bool saw_plus = false, saw_minus = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
        ++rows;
        if (line.find(",1,") != std::string::npos && line.rfind(",1") == line.size() - 2)
            saw_plus = true;
        if (line.find(",-1,") != std::string::npos) saw_minus = true;
    }
    CHECK(rows == 2);
    CHECK(saw_plus);
    CHECK(saw_minus);
}

TEST_CASE("hemisphere axial entry traces one reflection") {
    REQUIRE(run("trace --geometry hemisphere --origin 0,0,0 --direction 0,0,-1",
                "/tmp/vacref_h.csv") == 0);
    const std::string out = slurp("/tmp/vacref_h.csv");
    CHECK(out.find("\"n_max\":1") != std::string::npos);
    int rows = 0;
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'i') ++rows;
    CHECK(rows == 1);
}

TEST_CASE("config file values load and echo") {
    const char* cfg = "/tmp/vacref_cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({"geometry":{"kind":"hemisphere","radius":2.0},)"
            << R"("quadrature":{"nodes":16,"seed":5}})";
    }
    REQUIRE(run(std::string("force --config ") + cfg, "/tmp/vacref_c.csv") == 0);
    const std::string out = slurp("/tmp/vacref_c.csv");
    CHECK(out.find("\"kind\":\"hemisphere\"") != std::string::npos);
    CHECK(out.find("\"radius\":2.0") != std::string::npos);
    CHECK(out.find("\"seed\":5") != std::string::npos);
}

TEST_CASE("exit codes: validation 2, degeneracy 4") {
    CHECK(run("force --geometry nosuch", "/tmp/vacref_e1.csv") == 2);
    CHECK(run("plates1d --gap -3", "/tmp/vacref_e2.csv") == 2);
    CHECK(run("trace --origin 5,0,0 --direction 0,0,1", "/tmp/vacref_e3.csv") == 2);
    // degenerate eigenvalue pair: eta2 = eta4 = 0, eta1 = eta3
    CHECK(run("dyncas --eta 0.5,0,0.5,0", "/tmp/vacref_e4.csv") == 4);
}

TEST_CASE("plate classify emits re-entry columns") {
    REQUIRE(run("classify --geometry plate-hemisphere --gap 0.8 --samples 20 --seed 3",
                "/tmp/vacref_pc.csv") == 0);
    const std::string out = slurp("/tmp/vacref_pc.csv");
    CHECK(out.find("reenters,xi_1,xi_2,xi_3") != std::string::npos);
}

TEST_CASE("region-driven dyncas derives couplings and starting velocities") {
    const char* cfg = "/tmp/vacref_regions.json";
    {
        std::ofstream out(cfg);
        out << R"({"dynamics":{"use_regions":true,"mass_rp":2.0,"mass_lp":1.0,)"
            << R"("signs_lp":[1,-1,1],"region_lengths":[1.0,0.5,1.0],)"
            << R"("momentum_initial_velocities":true,"t1":0.4,"samples":4}})";
    }
    REQUIRE(run(std::string("dyncas --config ") + cfg, "/tmp/vacref_rg.csv") == 0);
    const std::string out = slurp("/tmp/vacref_rg.csv");
    // region energies pi, 2pi, pi; momentum start: 2|pi-2pi|/2 and 2|pi-2pi|/1
    CHECK(out.find("\"initial_velocity_rp\":3.141592653589793") != std::string::npos);
    CHECK(out.find("\"initial_velocity_lp\":6.283185307179586") != std::string::npos);
    CHECK(out.find("\"eta1\"") != std::string::npos);

    // all-plus signs with these regions give a complex pair: exit 4
    {
        std::ofstream out2(cfg);
        out2 << R"({"dynamics":{"use_regions":true,"mass_rp":2.0,"mass_lp":1.0,)"
             << R"("region_lengths":[1.0,0.5,1.0]}})";
    }
    CHECK(run(std::string("dyncas --config ") + cfg, "/tmp/vacref_rg2.csv") == 4);
}

TEST_CASE("dyncas --verify reports small residuals") {
    REQUIRE(run("dyncas --eta 0.2,0.4,-0.3,0.1 --state 0,0,0.3,-0.1 --drive-rp 0.5 "
                "--drive sin --t1 1 --samples 10 --verify",
                "/tmp/vacref_v.csv") == 0);
    const std::string out = slurp("/tmp/vacref_v.csv");
    CHECK(out.find("res_dR1") != std::string::npos);
    // last column residuals stay tiny
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        const auto pos = line.rfind(',');
        REQUIRE(pos != std::string::npos);
        CHECK(std::abs(std::atof(line.c_str() + pos + 1)) < 1e-6);
    }
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli_path = argv[argc - 1];
        --argc;
    }
    if (g_cli_path.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-vacref>\n");
        return 1;
    }
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
