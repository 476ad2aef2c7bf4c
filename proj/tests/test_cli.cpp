#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "pqc/serialize.hpp"

using namespace pqc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    json output;   // parsed --out file when present
    bool has_output = false;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "pqc_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = work_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

int run(const std::string& args) {
    const std::string cmd = std::string(PQC_CLI_PATH) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

RunResult run_to_file(const std::string& args, const std::string& out_name) {
    const fs::path out_path = work_dir() / out_name;
    RunResult result;
    result.code = run(args + " --out " + out_path.string());
    std::ifstream in(out_path);
    if (in) {
        result.output = json::parse(in, nullptr, false);
        result.has_output = !result.output.is_discarded();
    }
    return result;
}

std::string slurp(const std::string& name) {
    std::ifstream in(work_dir() / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("synth hides an antipodal pair with one bit") {
    const fs::path job = write_file("antipodal.json", R"({
        "plaintexts": [[0, 0, 1], [0, 0, -1]],
        "target": "auto",
        "seed": 5
    })");
    const RunResult r = run_to_file("synth --in " + job.string(), "antipodal_report.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("kind") == "synthesis");
    CHECK(r.output.at("schema") == "pqc-report/1");
    CHECK(r.output.at("key_entropy_bits").get<double>() == 1.0);
    CHECK(r.output.at("min_entropy_bits").get<double>() == 1.0);
    CHECK(r.output.at("cp") == true);
    CHECK(r.output.at("verification").at("constancy").at("passed") == true);
    const auto target = r.output.at("target");
    CHECK(std::abs(target.at(0).get<double>()) < 1e-12);
    CHECK(std::abs(target.at(1).get<double>()) < 1e-12);
    CHECK(std::abs(target.at(2).get<double>()) < 1e-12);
}

TEST_CASE("synth reaches an interior cipher state on a plane") {
    const fs::path job = write_file("plane.json", R"({
        "plaintexts": [[0.4, 0.5, 0], [0.4, 0, 0.5], [0.4, -0.3, -0.3]],
        "target": [0.2, 0, 0],
        "seed": 11
    })");
    const RunResult r = run_to_file("synth --in " + job.string(), "plane_report.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("span").at("dim") == 2);
    CHECK(r.output.at("span").at("ball_radius").get<double>() == Catch::Approx(0.4).margin(1e-12));
    CHECK(r.output.at("r_param").get<double>() == Catch::Approx(0.5).margin(1e-12));
    CHECK(r.output.at("key_entropy_bits").get<double>() ==
          Catch::Approx(1.8112781244591328).margin(1e-9));
    CHECK(r.output.at("ensemble").size() == 4);
    CHECK(r.output.at("verification").at("constancy").at("passed") == true);
}

TEST_CASE("synth accepts a target override flag") {
    const fs::path job = write_file("plane_auto.json", R"({
        "plaintexts": [[0.4, 0.5, 0], [0.4, 0, 0.5], [0.4, -0.3, -0.3]]
    })");
    const RunResult r = run_to_file("synth --in " + job.string() + " --target [0,0,0]",
                                    "plane_center_report.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("key_entropy_bits").get<double>() == 2.0);
    CHECK(r.output.at("r_param").get<double>() == 0.0);
}

TEST_CASE("synth refuses an unreachable cipher state") {
    const fs::path job = write_file("unreachable.json", R"({
        "plaintexts": [[0.4, 0.5, 0], [0.4, 0, 0.5], [0.4, -0.3, -0.3]],
        "target": [0.9, 0, 0]
    })");
    const RunResult r = run_to_file("synth --in " + job.string(), "unreachable_report.json");
    CHECK(r.code == 2);
    REQUIRE(r.has_output);
    CHECK(r.output.at("kind") == "error");
    CHECK(r.output.at("error").get<std::string>().find("outside reachable ball") !=
          std::string::npos);
}

TEST_CASE("classify recognizes the full mixer as a perfect encryptor") {
    const fs::path channel =
        write_file("otp.json", json_of_channel(uniform_pauli_ensemble()).dump(2));
    const RunResult r = run_to_file("classify --in " + channel.string(), "otp_class.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("kind") == "classification");
    CHECK(r.output.at("unital") == true);
    CHECK(r.output.at("cp") == true);
    CHECK(r.output.at("pqc") == true);
    CHECK(r.output.at("vanishing_axes") == json::array({0, 1, 2}));
    CHECK(r.output.at("key_entropy_bits").get<double>() == 2.0);
    // the full mixer's Choi state is the maximally mixed two-qubit state
    CHECK(r.output.at("min_choi_eigenvalue").get<double>() ==
          Catch::Approx(0.25).margin(1e-12));
    const auto lambdas = r.output.at("diagonal_form").at("lambdas");
    for (int k = 0; k < 3; ++k) CHECK(std::abs(lambdas.at(k).get<double>()) < 1e-12);
}

TEST_CASE("classify sees through an affine-only description") {
    const fs::path channel = write_file("partial.json", R"({
        "affine": {"T": [[0.7, 0, 0], [0, 0.2, 0], [0, 0, 0]]}
    })");
    const RunResult r = run_to_file("classify --in " + channel.string(), "partial_class.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("pqc") == true);
    CHECK(r.output.at("vanishing_axes") == json::array({2}));
    CHECK_FALSE(r.output.contains("key_entropy_bits")); // no unitaries given

    const fs::path identity = write_file("identity.json", R"({
        "affine": {"T": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    })");
    const RunResult ri = run_to_file("classify --in " + identity.string(), "identity_class.json");
    CHECK(ri.code == 0);
    CHECK(ri.output.at("pqc") == false);
    CHECK(ri.output.at("vanishing_axes") == json::array());
}

TEST_CASE("classify reports non-CP and non-unital maps honestly") {
    const fs::path flip = write_file("flip.json", R"({
        "affine": {"T": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]}
    })");
    const RunResult rf = run_to_file("classify --in " + flip.string(), "flip_class.json");
    CHECK(rf.code == 0);
    REQUIRE(rf.has_output);
    CHECK(rf.output.at("cp") == false);
    CHECK(rf.output.at("pqc") == false);
    CHECK(rf.output.at("min_choi_eigenvalue").get<double>() ==
          Catch::Approx(-0.5).margin(1e-12));

    const fs::path shifted = write_file("shifted.json", R"({
        "affine": {"T": [[0, 0, 0], [0, 0, 0], [0, 0, 0]], "t": [0, 0, 0.3]}
    })");
    const RunResult rs = run_to_file("classify --in " + shifted.string(), "shifted_class.json");
    CHECK(rs.code == 4);
    REQUIRE(rs.has_output);
    CHECK(rs.output.at("unital") == false);
    CHECK(rs.output.at("t_norm").get<double>() == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("curve emits the entropy table as CSV") {
    const fs::path out = work_dir() / "curve.csv";
    const int code = run("curve --samples 5 --out " + out.string());
    CHECK(code == 0);
    const std::string text = slurp("curve.csv");
    CHECK(text.rfind("r,H_bits\n", 0) == 0);
    CHECK(text.find("\n0,2\n") != std::string::npos);
    CHECK(text.find("\n1,1\n") != std::string::npos);
    CHECK(text.find("0.5,1.8112781244591329") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical reports") {
    const fs::path job = write_file("det.json", R"({
        "plaintexts": [[0.4, 0.5, 0], [0.4, 0, 0.5], [0.4, -0.3, -0.3]],
        "target": [0.1, 0, 0],
        "seed": 33
    })");
    CHECK(run("synth --in " + job.string() + " --out " + (work_dir() / "det_a.json").string()) ==
          0);
    CHECK(run("synth --in " + job.string() + " --out " + (work_dir() / "det_b.json").string()) ==
          0);
    const std::string a = slurp("det_a.json");
    const std::string b = slurp("det_b.json");
    REQUIRE_FALSE(a.empty());
    CHECK(a == b);
}

TEST_CASE("malformed input exits with the parse code") {
    CHECK(run("synth --in " + (work_dir() / "missing.json").string()) == 1);
    const fs::path bad = write_file("bad.json", "{ not json");
    CHECK(run("synth --in " + bad.string()) == 1);
    const fs::path no_states = write_file("no_states.json", R"({"plaintexts": []})");
    CHECK(run("synth --in " + no_states.string()) == 1);
}

TEST_CASE("verify passes a correct channel and rejects a wrong one") {
    json good_job = {{"plaintexts", {{0, 0, 0.5}, {0.5, 0, 0}, {0, 0.5, 0}}},
                     {"channel", json_of_channel(uniform_pauli_ensemble())},
                     {"seed", 3}};
    const fs::path good = write_file("verify_good.json", good_job.dump(2));
    const RunResult rg = run_to_file("verify --in " + good.string(), "verify_good_out.json");
    CHECK(rg.code == 0);
    REQUIRE(rg.has_output);
    CHECK(rg.output.at("kind") == "verification");
    CHECK(rg.output.at("verification").at("constancy").at("passed") == true);

    UnitaryEnsemble identity;
    identity.entries.push_back({1.0, Eigen::Matrix2cd::Identity()});
    json bad_job = {{"plaintexts", {{0, 0, 0.5}, {0.5, 0, 0}}},
                    {"channel", json_of_channel(identity)}};
    const fs::path bad = write_file("verify_bad.json", bad_job.dump(2));
    const RunResult rb = run_to_file("verify --in " + bad.string(), "verify_bad_out.json");
    CHECK(rb.code == 3);
    REQUIRE(rb.has_output);
    CHECK(rb.output.at("verification").at("constancy").at("passed") == false);
    CHECK(rb.output.at("verification").at("constancy").at("witnesses").size() >= 2);
}

TEST_CASE("verify needs an embedded channel with unitaries") {
    const fs::path no_channel = write_file("no_channel.json", R"({
        "plaintexts": [[0, 0, 0.5]]
    })");
    CHECK(run("verify --in " + no_channel.string()) == 1);

    json affine_only = {{"plaintexts", {{0, 0, 0.5}}},
                        {"channel", {{"affine", {{"T", {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}}}}}};
    const fs::path job = write_file("affine_only.json", affine_only.dump(2));
    CHECK(run("verify --in " + job.string()) == 1);
}

TEST_CASE("single plaintext jobs synthesize the identity") {
    const fs::path job = write_file("single.json", R"({
        "plaintexts": [[0.1, 0.2, 0.3]]
    })");
    const RunResult r = run_to_file("synth --in " + job.string(), "single_report.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("key_entropy_bits").get<double>() == 0.0);
    CHECK(r.output.at("min_entropy_bits").get<double>() == 0.0);
    CHECK(r.output.at("ensemble").size() == 1);

    // asking such a job for a different cipher state is refused
    const RunResult rt = run_to_file("synth --in " + job.string() + " --target [0,0,0]",
                                     "single_center_report.json");
    CHECK(rt.code == 2);
}

TEST_CASE("full-ball plaintext sets cost two bits") {
    const fs::path job = write_file("ball.json", R"({
        "plaintexts": [[0, 0, 0], [0.9, 0, 0], [0, 0.9, 0], [0, 0, 0.9]],
        "seed": 2
    })");
    const RunResult r = run_to_file("synth --in " + job.string(), "ball_report.json");
    CHECK(r.code == 0);
    REQUIRE(r.has_output);
    CHECK(r.output.at("span").at("dim") == 3);
    CHECK(r.output.at("key_entropy_bits").get<double>() == 2.0);
    CHECK(r.output.at("ensemble").size() == 4);
}
