#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#ifndef WEYLGRID_CLI_PATH
#error "WEYLGRID_CLI_PATH must point at the built CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("weylgrid_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
    ++counter;
    const std::string cmd = env + (env.empty() ? "" : " ") +
                            std::string(WEYLGRID_CLI_PATH) + " " + args +
                            " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

} // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("no-such-subcommand").code == 1);
    CHECK(run_cli("weyl").code == 1);         // missing --n
    CHECK(run_cli("gauss --a 1").code == 1);  // missing --b/--c
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("weyl verifies the commutation relations") {
    const RunResult r = run_cli("weyl --n 8");
    CHECK(r.code == 0);
    CHECK(r.out.find("eq1_dev") != std::string::npos);

    // A hopeless tolerance flips verification failure, exit 2.
    CHECK(run_cli("weyl --n 8 --tol 1e-30").code == 2);
}

TEST_CASE("gauss evaluates and verifies") {
    const RunResult r = run_cli("gauss --a 2 --b 0 --c 3 --verify");
    CHECK(r.code == 0);
    // direct value is i*sqrt(3); both columns must show it.
    CHECK(r.out.find("1.7320508075688772") != std::string::npos);

    // Parity violation is a domain error.
    const RunResult bad = run_cli("gauss --a 2 --b 1 --c 3");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("even") != std::string::npos);

    // Impossible tolerance with --verify exits 2.
    CHECK(run_cli("gauss --a 17 --b 5 --c 29 --verify --tol 1e-30").code == 2);
}

TEST_CASE("mub-chain json lists bases and pairs") {
    const RunResult r = run_cli("mub-chain --n 7 --tol 1e-10 --out json");
    REQUIRE(r.code == 0);
    const json payload = json::parse(r.out);
    CHECK(payload.at("bases").size() == 8);
    CHECK(payload.at("pairs").size() == 28);
    CHECK(payload.at("pass").get<bool>());
    for (const auto& pair : payload.at("pairs"))
        CHECK(pair.at("is_mub").get<bool>());
}

TEST_CASE("mub-chain rejects composite and even sizes with exit 1") {
    const RunResult r = run_cli("mub-chain --n 6");
    CHECK(r.code == 1);
    CHECK(r.err.find("odd prime") != std::string::npos);
    CHECK(run_cli("mub-chain --n 9").code == 1);
}

TEST_CASE("propagate reports agreeing evaluation routes") {
    const RunResult r =
        run_cli("propagate --n 5 --tau 3 --kind cn1 --rho0 0 --rhot 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("momentum_sum") != std::string::npos);
    CHECK(r.out.find("matrix_power") != std::string::npos);
    CHECK(r.out.find("nested_sum") != std::string::npos);

    // Even N is a domain error naming the constraint.
    const RunResult even = run_cli("propagate --n 4 --tau 1 --rho0 0 --rhot 0");
    CHECK(even.code == 1);
    CHECK(even.err.find("odd") != std::string::npos);

    // Potential steps force the cn2 kernel.
    CHECK(run_cli("propagate --n 5 --tau 1 --kind cn1 --potential harmonic")
              .code == 1);
    CHECK(run_cli("propagate --n 5 --tau 2 --potential harmonic").code == 0);
}

TEST_CASE("propagate matrix mode emits all N^2 entries") {
    const RunResult r = run_cli("propagate --n 3 --tau 1 --out json");
    REQUIRE(r.code == 0);
    const json payload = json::parse(r.out);
    CHECK(payload.at("rows").size() == 9);
    // Single C_N2 step: every modulus is 1/sqrt(3).
    for (const auto& row : payload.at("rows"))
        CHECK(std::abs(row.at("abs").get<double>() - 0.5773502691896258) <
              1e-12);
}

TEST_CASE("lagrangian emits the exact rationals and passes its identity") {
    const RunResult r =
        run_cli("lagrangian --n 5 --drho-max 3 --a 2 --m 3 --hbar 0.5");
    CHECK(r.code == 0);
    CHECK(r.out.find("3,49,8") != std::string::npos); // L(3) = 49/8
}

TEST_CASE("spectrum and converge") {
    const RunResult r =
        run_cli("spectrum --n 41 --potential harmonic --count 3 --out json");
    REQUIRE(r.code == 0);
    const json payload = json::parse(r.out);
    REQUIRE(payload.at("rows").size() == 3);
    CHECK(std::abs(payload.at("rows")[0].at("eigenvalue").get<double>() - 0.5) <
          1e-8);

    const RunResult conv =
        run_cli("converge --n-list 21,41 --potential harmonic --count 5");
    CHECK(conv.code == 0);
    CHECK(conv.out.find("max_abs_err") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs") {
    const std::string args =
        "converge --n-list 11,21,31 --potential harmonic --count 3";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const RunResult ja = run_cli("mub-chain --n 5 --out json");
    const RunResult jb = run_cli("mub-chain --n 5 --out json");
    CHECK(ja.out == jb.out);
}

TEST_CASE("output files respect WEYLGRID_OUT_DIR and --emit-gnuplot") {
    const fs::path dir = scratch_dir() / "outdir";
    fs::create_directories(dir);
    const RunResult r = run_cli(
        "converge --n-list 11,21 --potential harmonic --count 3 "
        "--output sweep.csv --emit-gnuplot",
        "WEYLGRID_OUT_DIR=" + dir.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "sweep.csv.gp"));
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(csv.rfind("n,max_abs_err", 0) == 0);

    // Plot scripts need a real file target.
    CHECK(run_cli("converge --n-list 11,21 --emit-gnuplot").code == 1);
}

TEST_CASE("potential sample files are validated") {
    const fs::path good = scratch_dir() / "pot5.txt";
    {
        std::ofstream f(good);
        for (int i = -2; i <= 2; ++i) f << 0.1 * i * i << "\n";
    }
    CHECK(run_cli("spectrum --n 5 --potential file:" + good.string() +
                  " --count 2")
              .code == 0);

    // Wrong line count is a hard error.
    const RunResult bad = run_cli("spectrum --n 7 --potential file:" +
                                  good.string() + " --count 2");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("lines") != std::string::npos);
}
