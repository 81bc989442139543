#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sph4r/io.hpp"
#include "test_util.hpp"

using namespace sph4r;
using namespace sph4r::testutil;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "sph4r_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPH4R_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.size() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("load_points_csv: published path fixture") {
    const auto pts = load_points_csv(fixture("table1_points.csv"));
    REQUIRE(pts.size() == 64);
    CHECK(pts[0].x == doctest::Approx(0.85737));
    CHECK(pts[63].z == doctest::Approx(0.43519));
}

TEST_CASE("load_problem: prescribed example resolves paths and settings") {
    const ProblemSpec spec = load_problem(fixture("example1_prescribed.problem"));
    CHECK(spec.mode == DesignMode::prescribed);
    CHECK(spec.path.size() == 64);
    CHECK(spec.population == 100);
    CHECK(spec.generations == 10000);
    CHECK(spec.cr == 0.9);
    CHECK(spec.f_lo == 0.4);
    CHECK(spec.f_hi == 0.8);
    CHECK(spec.timing.offsets.size() == 64);
    CHECK(spec.timing.offsets[1] == doctest::Approx(kTwoPi / 64));
    CHECK(!spec.out_path.empty());
}

TEST_CASE("load_problem: timing block is rejected in free mode") {
    const fs::path bad = temp_dir() / "bad_free.problem";
    std::ofstream(bad) << "mode free\npoints " << fixture("table1_points.csv")
                       << "\ntiming uniform\n";
    CHECK_THROWS_AS(load_problem(bad.string()), ParseError);
}

TEST_CASE("load_problem: unknown keys and missing sections fail") {
    const fs::path bad = temp_dir() / "bad_key.problem";
    std::ofstream(bad) << "mode prescribed\nbogus 3\n";
    CHECK_THROWS_AS(load_problem(bad.string()), ParseError);

    const fs::path nopoints = temp_dir() / "no_points.problem";
    std::ofstream(nopoints) << "mode prescribed\n";
    CHECK_THROWS_AS(load_problem(nopoints.string()), ParseError);
}

TEST_CASE("load_problem: explicit timing list pins theta1") {
    const fs::path list = temp_dir() / "angles.csv";
    {
        std::ofstream out(list);
        out << "theta\n";
        for (int k = 0; k < 64; ++k) out << 0.25 + 0.01 * k << "\n";
    }
    const fs::path prob = temp_dir() / "list.problem";
    std::ofstream(prob) << "mode prescribed\npoints " << fixture("table1_points.csv")
                        << "\ntiming list " << list.string() << "\n";
    const ProblemSpec spec = load_problem(prob.string());
    REQUIRE(spec.pinned_theta1.has_value());
    CHECK(*spec.pinned_theta1 == doctest::Approx(0.25));
    CHECK(spec.timing.offsets[3] == doctest::Approx(0.03));
    const DesignBounds b = spec.bounds();
    CHECK(b.lower[0] == b.upper[0]);
}

TEST_CASE("load_design: published design files") {
    const DesignFile t2 = load_design(fixture("table2_design.txt"));
    CHECK(t2.design.mode == DesignMode::prescribed);
    CHECK(t2.point_count == 64);
    REQUIRE(t2.design.values.size() == 11);
    CHECK(t2.design.values[0] == 0.48867);
    CHECK(t2.design.values[10] == 1.34474);

    const DesignFile t45 = load_design(fixture("table45_design.txt"));
    CHECK(t45.design.mode == DesignMode::free_timing);
    REQUIRE(t45.design.values.size() == 74);
    CHECK(t45.design.values[63] == 6.18493);
}

TEST_CASE("load_design: malformed files fail with ParseError") {
    const fs::path bad = temp_dir() / "bad_design.txt";
    std::ofstream(bad) << "mode prescribed\nn 64\ntheta1 0.1\nbeta 0.2\n";  // missing keys
    CHECK_THROWS_AS(load_design(bad.string()), ParseError);

    const fs::path short_phi = temp_dir() / "short_phi.txt";
    std::ofstream(short_phi) << "mode prescribed\nn 64\ntheta1 0.1\nbeta 0.2\ngamma 0.3\n"
                             << "phi 0.1 0.2 0.3\neta 1 1 1 1\n";
    CHECK_THROWS_AS(load_design(short_phi.string()), ParseError);
}

TEST_CASE("result round-trip: stored f_ob is reproduced exactly by re-evaluation") {
    const TargetPath path = TargetPath::from_points(load_points_csv(fixture("table1_points.csv")));
    const DesignFile df = load_design(fixture("table2_design.txt"));
    const EvaluationReport report = structural_error(df.design, path);

    ResultData result;
    result.design = df.design;
    result.point_count = 64;
    result.f_ob = report.f_ob;
    const DecodedDesign decoded = decode(df.design, 64);
    result.link_lengths = decoded.mechanism.link_lengths();
    result.grashof = grashof_check(result.link_lengths);
    result.theta0 = decoded.mechanism.theta0();
    result.phi0 = decoded.mechanism.phi0();
    result.geodesic_errors = report.geodesic_errors;
    result.seed = 7;
    result.runtime_seconds = 1.5;

    const fs::path out = temp_dir() / "roundtrip_result.txt";
    write_result(out.string(), result);

    const DesignFile loaded = load_design(out.string());
    REQUIRE(loaded.stored_f_ob.has_value());
    const EvaluationReport again = structural_error(loaded.design, path);
    CHECK(std::abs(again.f_ob - *loaded.stored_f_ob) <= 1e-12);
    for (std::size_t j = 0; j < df.design.values.size(); ++j) {
        CHECK(loaded.design.values[j] == df.design.values[j]);
    }
}

TEST_CASE("write_convergence_csv: header and rows") {
    const fs::path out = temp_dir() / "conv.csv";
    write_convergence_csv(out.string(), {{0, 2.0, 3.0}, {1, 1.0, 2.5}});
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"generation", "best_f_ob", "mean_f_ob"});
    CHECK(rows[1][0] == "0");
    CHECK(rows[2][1] == "1");
}

TEST_CASE("write_trace_csv: closed curve for the published crank, unit-norm samples") {
    const DesignFile df = load_design(fixture("table2_design.txt"));
    const DecodedDesign decoded = decode(df.design, 64);
    const Branch branch = select_branch(decoded.mechanism);

    const fs::path out = temp_dir() / "trace.csv";
    write_trace_csv(out.string(), decoded.mechanism, branch, 360);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 361);

    const auto as_point = [](const std::vector<std::string>& row, int base) {
        return Vec3{std::stod(row[static_cast<std::size_t>(base)]),
                    std::stod(row[static_cast<std::size_t>(base + 1)]),
                    std::stod(row[static_cast<std::size_t>(base + 2)])};
    };
    const Vec3 first = as_point(rows[1], 1);
    const Vec3 last = as_point(rows[360], 1);
    CHECK((first - last).norm() <= 1e-6);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        REQUIRE(rows[r].size() == 11);
        CHECK(rows[r][10] == "1");
        for (int base : {1, 4, 7}) {
            CHECK(std::abs(as_point(rows[r], base).squared_norm() - 1.0) <= 1e-12);
        }
    }

    const fs::path single = temp_dir() / "trace_one.csv";
    write_trace_csv(single.string(), decoded.mechanism, branch, 1);
    const auto one = read_csv(single);
    REQUIRE(one.size() == 2);
    CHECK(std::stod(one[1][0]) == 0.0);
}

TEST_CASE("cli: verify the published prescribed design (exit 0)") {
    const fs::path prob = temp_dir() / "verify.problem";
    std::ofstream(prob) << "mode prescribed\npoints " << fixture("table1_points.csv")
                        << "\ntiming uniform\n";
    CHECK(run_cli("verify --design " + fixture("table2_design.txt") + " --problem " +
                  prob.string()) == 0);
}

TEST_CASE("cli: malformed inputs exit 1") {
    CHECK(run_cli("verify --design /nonexistent --problem /nonexistent") == 1);
    const fs::path empty_pts = temp_dir() / "empty.csv";
    std::ofstream(empty_pts) << "x,y,z\n";
    const fs::path prob = temp_dir() / "empty.problem";
    std::ofstream(prob) << "mode prescribed\npoints " << empty_pts.string() << "\n";
    CHECK(run_cli("verify --design " + fixture("table2_design.txt") + " --problem " +
                  prob.string()) == 1);
}

TEST_CASE("cli: infeasible verification exits 2") {
    const fs::path design = temp_dir() / "infeasible_design.txt";
    std::ofstream(design) << "mode prescribed\nn 64\ntheta1 0\nbeta 0.1\ngamma 0.1\n"
                          << "phi 0.0 0.2 0.1 0.0\neta 0.0 1.4 1.45 1.4\n";
    const fs::path prob = temp_dir() / "verify2.problem";
    std::ofstream(prob) << "mode prescribed\npoints " << fixture("table1_points.csv")
                        << "\ntiming uniform\n";
    CHECK(run_cli("verify --design " + design.string() + " --problem " + prob.string()) == 2);
}

TEST_CASE("cli: free-mode verify and thetadiff") {
    const fs::path prob = temp_dir() / "free.problem";
    std::ofstream(prob) << "mode free\npoints " << fixture("table1_points.csv") << "\n";
    CHECK(run_cli("verify --design " + fixture("table45_design.txt") + " --problem " +
                  prob.string()) == 0);
    CHECK(run_cli("thetadiff --design " + fixture("table45_design.txt")) == 0);
    // Prescribed designs have no angle list to difference.
    CHECK(run_cli("thetadiff --design " + fixture("table2_design.txt")) == 1);
}

TEST_CASE("cli: synthesize smoke run writes result and convergence files") {
    const fs::path out = temp_dir() / "smoke_result.txt";
    const fs::path prob = temp_dir() / "smoke.problem";
    std::ofstream(prob) << "mode prescribed\npoints " << fixture("table1_points_n16.csv")
                        << "\ntiming uniform\npop 12\ngens 8\nseed 3\n"
                        << "out " << out.string() << "\n"
                        << "convergence " << (temp_dir() / "smoke_conv.csv").string() << "\n";
    CHECK(run_cli("synthesize --problem " + prob.string()) == 0);
    CHECK(fs::exists(out));
    const auto conv = read_csv(temp_dir() / "smoke_conv.csv");
    REQUIRE(conv.size() == 10);  // header + generations 0..8

    // Determinism: rerunning with the same seed reproduces the result file
    // except for the wall-clock line.
    const auto strip_runtime = [](const std::string& text) {
        std::istringstream in(text);
        std::ostringstream kept;
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("runtime_s", 0) != 0) kept << line << "\n";
        }
        return kept.str();
    };
    const std::string first = slurp(out);
    CHECK(run_cli("synthesize --problem " + prob.string()) == 0);
    CHECK(strip_runtime(slurp(out)) == strip_runtime(first));

    // The stored design re-verifies against the same problem (exit depends on
    // feasibility of the random best, so only require it parses: exit 0 or 2).
    const int rc = run_cli("verify --design " + out.string() + " --problem " + prob.string());
    CHECK((rc == 0 || rc == 2));
}
