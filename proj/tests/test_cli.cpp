// End-to-end checks of the xcube command-line tool. Takes the binary path as
// argv[1]; drives it through std::system and inspects files and exit codes.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::cout << (ok ? "[ok] " : "[FAILED] ") << what << "\n";
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-xcube>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path dir = fs::temp_directory_path() / ("xcube_cli_" + std::to_string(getpid()));
    fs::create_directories(dir);
    const std::string d = dir.string();

    check(run(bin + " gsd --L 3 > " + d + "/gsd.txt") == 0, "gsd exits 0");
    check(slurp(dir / "gsd.txt").find("k=15") != std::string::npos, "gsd reports k=15");
    check(run(bin + " gsd --L 4 | grep -q 'k=21'") == 0, "gsd reports k=21 at L=4");

    check(run(bin + " no-such-command >/dev/null 2>&1") == 2, "unknown subcommand exits 2");
    check(run(bin + " gsd >/dev/null 2>&1") == 2, "missing required flag exits 2");
    check(run(bin + " mc-scan --L 4 --bc bogus >/dev/null 2>&1") == 2, "bad enum value exits 2");

    // deterministic hysteresis: identical seeds give identical bytes
    const std::string hyst =
        " hysteresis --L 4 --beta-min 0.2 --beta-max 0.3 --steps 4 --sweeps-per-point 400"
        " --seed 7 --out ";
    check(run(bin + hyst + d + "/h1.csv") == 0, "hysteresis run 1");
    check(run(bin + hyst + d + "/h2.csv") == 0, "hysteresis run 2");
    check(!slurp(dir / "h1.csv").empty() && slurp(dir / "h1.csv") == slurp(dir / "h2.csv"),
          "same seed, byte-identical CSV");

    {
        const std::string text = slurp(dir / "h1.csv");
        check(text.rfind("# tool=xcube", 0) == 0, "output begins with the config header");
        check(text.find("branch,beta,u,u_err,cv,cv_err,m,m_err,acc_rate,L,seed,sweeps") !=
                  std::string::npos,
              "hysteresis CSV schema");
        check(text.find("# seed=7") != std::string::npos, "seed echoed in the header");
    }

    // transition report consumes the hysteresis CSV (window matching the tiny run)
    check(run(bin + " transition-report --from-hysteresis " + d + "/h1.csv" +
              " --window-lo 0.2 --window-hi 0.3 --jump-lo 0.2 --jump-hi 0.3 --beta-star 0.25" +
              " --out " + d + "/report.json") == 0,
          "transition-report exits 0");
    try {
        const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
        check(j.contains("u") && j.contains("global_entanglement") && j.contains("fidelity"),
              "transition report holds the three indicators");
    } catch (...) {
        check(false, "transition report is valid JSON");
    }

    // exact-scan emits the fixed schema
    check(run(bin + " exact-scan --L 2 --beta-min 0 --beta-max 1 --steps 4 --out " + d +
              "/scan.csv") == 0,
          "exact-scan exits 0");
    check(slurp(dir / "scan.csv").find("beta,logZ,u,cv,ge,fidelity(dbeta),w_plus_avg") !=
              std::string::npos,
          "exact-scan CSV schema");

    // mc-scan: rows in beta order, independent of the worker-pool size
    const std::string scan =
        " mc-scan --L 3 --beta-min 0.1 --beta-max 0.3 --steps 3 --sweeps 500 --seed 9";
    check(run(bin + scan + " --threads 1 --out " + d + "/s1.csv") == 0, "mc-scan exits 0");
    check(run(bin + scan + " --threads 3 --out " + d + "/s2.csv") == 0, "mc-scan with a pool");
    check(!slurp(dir / "s1.csv").empty() && slurp(dir / "s1.csv") == slurp(dir / "s2.csv"),
          "worker count does not change the output bytes");
    check(slurp(dir / "s1.csv").find("branch,beta,u,u_err,cv") != std::string::npos,
          "mc-scan CSV schema");

    // syndrome demo: the four mobility experiments with their counts
    check(run(bin + " syndrome-demo --L 4 --out " + d + "/syn.json") == 0, "syndrome-demo exits 0");
    try {
        const auto j = nlohmann::json::parse(slurp(dir / "syn.json"));
        const auto& ex = j.at("experiments");
        check(ex.size() == 4, "four experiments");
        check(ex[0].at("violated_vertex_ops") == 4 && ex[1].at("violated_vertex_ops") == 6 &&
                  ex[2].at("violated_cubes") == 4 && ex[3].at("violated_cubes") == 4,
              "syndrome counts 4/6/4/4");
    } catch (...) {
        check(false, "syndrome demo is valid JSON");
    }

    // order parameter via a membrane spec file
    {
        std::ofstream spec(dir / "membrane.json");
        spec << R"({"normal":"z","plane":3,"cells":[[2,2],[3,2],[2,3],[3,3]]})";
    }
    check(run(bin + " order-parameter --L 8 --beta 0.3 --membrane-spec " + d + "/membrane.json" +
              " --sweeps 2000 --therm 500 --seed 5 --out " + d + "/op.csv") == 0,
          "order-parameter exits 0");
    {
        const std::string text = slurp(dir / "op.csv");
        check(text.find("beta,op,op_err,m,m_err,m4,corner_count") != std::string::npos,
              "order-parameter CSV schema");
        check(text.find(",4\n") != std::string::npos, "square membrane has 4 corners");
    }

    // JSON config file with flag override
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"L": 3})";
    }
    check(run(bin + " gsd --config " + d + "/cfg.json | grep -q 'k=15'") == 0,
          "config file supplies L");
    check(run(bin + " gsd --config " + d + "/cfg.json --L 2 | grep -q 'k=9'") == 0,
          "flags override the config file");
    check(run(bin + " gsd --config " + d + "/nonexistent.json >/dev/null 2>&1") == 2,
          "missing config file exits 2");

    // default output directory via the environment
    check(run("XCUBE_OUT_DIR=" + d + " " + bin + " gsd --L 2 --out env.txt >/dev/null") == 0,
          "relative --out resolves under XCUBE_OUT_DIR");
    check(fs::exists(dir / "env.txt"), "file landed in XCUBE_OUT_DIR");

    check(run(bin + " verify --quick > " + d + "/verify.txt") == 0, "verify --quick exits 0");
    check(slurp(dir / "verify.txt").find("[FAIL]") == std::string::npos, "verify has no failures");

    fs::remove_all(dir);
    std::cout << (failures == 0 ? "test_cli: all passed\n" : "test_cli: FAILURES\n");
    return failures == 0 ? 0 : 1;
}
