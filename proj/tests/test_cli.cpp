#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() /
              ("harness_cli_test_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter()++));
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path file(const std::string& name, const std::string& content) const {
        fs::path p = dir / name;
        std::ofstream out(p);
        out << content;
        return p;
    }
};

int run_cli(const std::string& args, const Sandbox& box, std::string* output = nullptr) {
    const fs::path log = box.dir / "last_output.txt";
    const std::string cmd =
        std::string(HARNESS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallSim =
    "kernel.dim = 3\n"
    "noise.family = gaussian\n"
    "wall.family = gaussian\n"
    "run.side = 9\n"
    "run.steps = 16\n"
    "run.replicates = 5\n"
    "run.seed = 11\n";

} // namespace

TEST_CASE("unknown config key exits with the config code") {
    Sandbox box;
    auto cfg = box.file("bad.txt", "kernel.dim = 3\nrun.sides = 9\n");
    std::string out;
    CHECK(run_cli("simulate --config " + cfg.string() + " --out-dir " + box.dir.string(), box,
                  &out) == 2);
    CHECK(out.find("run.sides") != std::string::npos);
}

TEST_CASE("malformed config value exits with the config code") {
    Sandbox box;
    auto cfg = box.file("bad.txt", "kernel.dim = banana\n");
    CHECK(run_cli("simulate --config " + cfg.string() + " --out-dir " + box.dir.string(), box) == 2);
}

TEST_CASE("domain too small for exact mode exits with the validation code") {
    Sandbox box;
    auto cfg = box.file("small.txt",
                        "kernel.dim = 3\nrun.side = 9\nrun.steps = 64\nrun.mode = exact\n"
                        "run.replicates = 2\nwall.family = neginf\n");
    std::string out;
    CHECK(run_cli("simulate --config " + cfg.string() + " --out-dir " + box.dir.string(), box,
                  &out) == 3);
    CHECK(out.find("DomainTooSmall") != std::string::npos);
}

TEST_CASE("simulate writes the grid and replays byte-identically from its manifest") {
    Sandbox box;
    auto cfg = box.file("sim.txt", kSmallSim);
    const std::string out_a = (box.dir / "a").string();
    const std::string out_b = (box.dir / "b").string();
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out-dir " + out_a, box) == 0);

    const std::string csv_a = slurp(fs::path(out_a) / "growth.csv");
    // header + one row per grid time 1,2,4,8,16
    int lines = 0;
    for (char c : csv_a)
        if (c == '\n') ++lines;
    CHECK(lines == 6);
    CHECK(csv_a.rfind("n,mean,se,replicates\n", 0) == 0);

    REQUIRE(run_cli("simulate --from-manifest " + (fs::path(out_a) / "manifest.json").string() +
                        " --out-dir " + out_b,
                    box) == 0);
    CHECK(slurp(fs::path(out_b) / "growth.csv") == csv_a);
    CHECK(slurp(fs::path(out_b) / "manifest.json") == slurp(fs::path(out_a) / "manifest.json"));
}

TEST_CASE("seed override changes the curve") {
    Sandbox box;
    auto cfg = box.file("sim.txt", kSmallSim);
    const std::string out_a = (box.dir / "a").string();
    const std::string out_b = (box.dir / "b").string();
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out-dir " + out_a, box) == 0);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 99 --out-dir " + out_b, box) ==
            0);
    CHECK(slurp(fs::path(out_a) / "growth.csv") != slurp(fs::path(out_b) / "growth.csv"));
}

TEST_CASE("fit subcommand round-trips a curve and rejects flat ones") {
    Sandbox box;
    std::string csv = "n,mean,se,replicates\n";
    for (int n = 1; n <= 65536; n *= 2) {
        const double m = n >= 2 ? 2.0 * std::pow(std::log(n), 0.5) : 0.1;
        csv += std::to_string(n) + "," + std::to_string(m) + ",0.01,100\n";
    }
    auto curve = box.file("curve.csv", csv);
    std::string out;
    REQUIRE(run_cli("fit --csv " + curve.string() + " --out-dir " + box.dir.string(), box, &out) ==
            0);
    CHECK(out.find("gamma_inv") != std::string::npos);
    CHECK(fs::exists(box.dir / "fit.json"));

    std::string flat = "n,mean,se,replicates\n";
    for (int n = 1; n <= 65536; n *= 2) flat += std::to_string(n) + ",3.0,0.01,100\n";
    auto flat_csv = box.file("flat.csv", flat);
    CHECK(run_cli("fit --csv " + flat_csv.string() + " --out-dir " + box.dir.string(), box) == 6);
}

TEST_CASE("property-check passes, detects the mutant, and warns on zero trials") {
    Sandbox box;
    auto cfg = box.file("prop.txt",
                        "kernel.dim = 3\nrun.steps = 10\nrun.side = 21\nrun.seed = 3\n");
    std::string out;
    REQUIRE(run_cli("property-check --config " + cfg.string() + " --trials 5 --out-dir " +
                        box.dir.string(),
                    box, &out) == 0);
    CHECK(out.find("wall_monotonicity") != std::string::npos);

    CHECK(run_cli("property-check --config " + cfg.string() + " --trials 5 --mutant --out-dir " +
                      box.dir.string(),
                  box, &out) == 5);
    CHECK(out.find("mutant") != std::string::npos);

    CHECK(run_cli("property-check --config " + cfg.string() + " --trials 0 --out-dir " +
                      box.dir.string(),
                  box, &out) == 0);
    CHECK(out.find("warning") != std::string::npos);
}

TEST_CASE("oracle-check passes on small horizons") {
    Sandbox box;
    auto cfg = box.file("oracle.txt",
                        "kernel.dim = 2\nrun.steps = 12\nrun.trials = 4\nrun.seed = 2\n");
    std::string out;
    CHECK(run_cli("oracle-check --config " + cfg.string() + " --out-dir " + box.dir.string(), box,
                  &out) == 0);
    CHECK(out.find("oracle-check pass") != std::string::npos);
}

TEST_CASE("sweep emits monotone decoupling probabilities") {
    Sandbox box;
    auto cfg = box.file("sweep.txt",
                        "kernel.dim = 3\nnoise.family = gaussian\nwall.family = gaussian\n"
                        "wall.theta = 1\nrun.side = 9\nrun.steps = 16\nrun.replicates = 10\n"
                        "run.seed = 4\nsweep.kind = upper_k\nsweep.values = 1,4\n");
    std::string out;
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out-dir " + box.dir.string(), box,
                    &out) == 0);
    const std::string csv = slurp(box.dir / "sweep.csv");
    CHECK(csv.rfind("n,K,", 0) == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}

TEST_CASE("missing config is a usage error") {
    Sandbox box;
    CHECK(run_cli("simulate --out-dir " + box.dir.string(), box) == 2);
}
