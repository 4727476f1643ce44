// xcube: simulator and analysis toolkit for the perturbed X-cube model and
// its dual 3D plaquette Ising model.
//
// Subcommands: gsd, syndrome-demo, exact-scan, mc-scan, hysteresis,
// order-parameter, transition-report, verify. Exit codes: 0 success,
// 1 verification/assertion failure, 2 usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xcube/duality.hpp"
#include "xcube/exact.hpp"
#include "xcube/lattice.hpp"
#include "xcube/plaquette_mc.hpp"
#include "xcube/stabilizer.hpp"
#include "xcube/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace {

using namespace xcube;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags override the JSON config file: config values are appended as flags
// only when the flag is absent from the command line.
std::vector<std::string> merge_config_args(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open config file: " + config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw UsageError("malformed config file " + config_path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else {
            args.push_back(flag);
            args.push_back(value.dump());
        }
    }
    return args;
}

// output sink: "-" = stdout; relative paths resolve under $XCUBE_OUT_DIR
class Output {
public:
    explicit Output(const std::string& path) {
        if (path == "-") return;
        std::filesystem::path p(path);
        if (const char* dir = std::getenv("XCUBE_OUT_DIR"); dir && p.is_relative())
            p = std::filesystem::path(dir) / p;
        file_.open(p);
        if (!file_) throw UsageError("cannot open output file: " + p.string());
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void echo_header(std::ostream& os, const std::string& subcommand,
                 const std::map<std::string, std::string>& cfg) {
    os << "# tool=xcube subcommand=" << subcommand << "\n";
    for (const auto& [k, v] : cfg) os << "# " << k << "=" << v << "\n";
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

lattice::Axis parse_axis(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "x") return lattice::Axis::X;
    if (s == "y") return lattice::Axis::Y;
    if (s == "z") return lattice::Axis::Z;
    throw UsageError("membrane normal must be one of x, y, z");
}

duality::Membrane load_membrane(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open membrane spec: " + path);
    json spec;
    try {
        in >> spec;
    } catch (const json::exception& e) {
        throw UsageError("malformed membrane spec: " + std::string(e.what()));
    }
    duality::Membrane mem;
    try {
        mem.normal = parse_axis(spec.at("normal").get<std::string>());
        mem.plane = spec.at("plane").get<int>();
        for (const auto& cell : spec.at("cells"))
            mem.cells.push_back({cell.at(0).get<int>(), cell.at(1).get<int>()});
    } catch (const json::exception& e) {
        throw UsageError("membrane spec needs {normal, plane, cells:[[u,v],...]}: " +
                         std::string(e.what()));
    }
    return mem;
}

// ---------------------------------------------------------------------------

int cmd_gsd(std::vector<std::string>& args) {
    CLI::App app{"ground-state degeneracy exponent"};
    int L = 3;
    std::string out_path = "-", config;
    app.add_option("--L", L, "lattice size")->required();
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);

    const lattice::Geometry g(L);
    const auto ranks = stabilizer::stabilizer_ranks(g, stabilizer::build_stabilizers(g));
    Output out(out_path);
    echo_header(out.stream(), "gsd", {{"L", std::to_string(L)}});
    out.stream() << "L=" << L << " k=" << ranks.k << " degeneracy=2^" << ranks.k
                 << " cube_rank=" << ranks.cube_rank << " vertex_rank=" << ranks.vertex_rank
                 << " expected_k=" << 6 * L - 3 << "\n";
    return ranks.k == 6 * L - 3 ? kExitOk : kExitVerification;
}

int cmd_syndrome_demo(std::vector<std::string>& args) {
    CLI::App app{"excitation mobility experiments"};
    int L = 4;
    std::string out_path = "-", config;
    app.add_option("--L", L, "lattice size (>= 3)");
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);

    const lattice::Geometry g(L);
    const auto report = stabilizer::mobility_experiments(g);
    json j;
    j["L"] = report.L;
    j["experiments"] = json::array();
    for (const auto& exp : report.experiments) {
        json e;
        e["name"] = exp.name;
        e["pauli"] = std::string(1, exp.pauli);
        e["edges"] = exp.edges;
        e["syndrome_size"] = exp.n_violated_vertex_ops + exp.n_violated_cubes;
        e["violated_vertex_ops"] = exp.n_violated_vertex_ops;
        e["violated_cubes"] = exp.n_violated_cubes;
        json locs = json::array();
        for (std::size_t i = 0; i < exp.vertex_locations.size(); ++i) {
            const auto v = g.vertex_at(exp.vertex_locations[i]);
            json loc;
            loc["vertex"] = {v.x, v.y, v.z};
            loc["violations"] = exp.violations_per_vertex[i];
            locs.push_back(loc);
        }
        e["vertex_locations"] = locs;
        json cubes = json::array();
        for (int c : exp.cube_locations) {
            const auto at = g.cube_at(c);
            cubes.push_back(json::array({at.x, at.y, at.z}));
        }
        e["cube_locations"] = cubes;
        j["experiments"].push_back(e);
    }
    Output out(out_path);
    out.stream() << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_exact_scan(std::vector<std::string>& args) {
    CLI::App app{"exact observables over a beta grid"};
    int L = 2, steps = 20, chunks = 1, rank_cap = 26;
    double beta_min = 0.0, beta_max = 1.0, dbeta = 0.01;
    std::string out_path = "-", config;
    app.add_option("--L", L)->required();
    app.add_option("--beta-min", beta_min);
    app.add_option("--beta-max", beta_max);
    app.add_option("--steps", steps);
    app.add_option("--dbeta", dbeta, "fidelity increment");
    app.add_option("--chunks", chunks, "parallel sweep chunks");
    app.add_option("--rank-cap", rank_cap);
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);
    if (steps < 1 || beta_min < 0.0 || beta_max < beta_min)
        throw UsageError("need 0 <= beta-min <= beta-max and steps >= 1");

    const lattice::Geometry g(L);
    exact::BuildOptions opts;
    opts.rank_cap = rank_cap;
    opts.chunks = chunks;
    const auto ens = exact::build_ensemble(g, opts);

    Output out(out_path);
    echo_header(out.stream(), "exact-scan",
                {{"L", std::to_string(L)},
                 {"beta_min", fmt(beta_min)},
                 {"beta_max", fmt(beta_max)},
                 {"steps", std::to_string(steps)},
                 {"dbeta", fmt(dbeta)},
                 {"rank", std::to_string(ens.rank)},
                 {"structures", std::to_string(ens.n_structures())}});
    out.stream() << "beta,logZ,u,cv,ge,fidelity(dbeta),w_plus_avg\n";
    for (int i = 0; i <= steps; ++i) {
        const double beta = beta_min + (beta_max - beta_min) * i / steps;
        const auto st = exact::ensemble_stats(ens, beta);
        const auto ge = exact::global_entanglement(ens, beta);
        const auto wm = exact::w_minus_all_edges(ens, beta);
        double w_plus_avg = 0.0;
        for (double w : wm) w_plus_avg += 1.0 - w;
        w_plus_avg /= static_cast<double>(wm.size());
        out.stream() << fmt(beta) << ',' << fmt(st.logZ) << ',' << fmt(st.mean_E / g.n_edges())
                     << ',' << fmt(exact::heat_capacity(st)) << ',' << fmt(ge.from_qubits) << ','
                     << fmt(exact::fidelity_exact(ens, beta, dbeta)) << ',' << fmt(w_plus_avg)
                     << "\n";
    }
    return kExitOk;
}

const char* kMcCsvHeader = "branch,beta,u,u_err,cv,cv_err,m,m_err,acc_rate,L,seed,sweeps";

void write_mc_row(std::ostream& os, const std::string& branch, const mc::HysteresisPoint& p, int L,
                  std::uint64_t seed, std::int64_t sweeps) {
    os << branch << ',' << fmt(p.beta) << ',' << fmt(p.u) << ',' << fmt(p.u_err) << ',' << fmt(p.cv)
       << ',' << fmt(p.cv_err) << ',' << fmt(p.m) << ',' << fmt(p.m_err) << ',' << fmt(p.acc_rate)
       << ',' << L << ',' << seed << ',' << sweeps << "\n";
}

int cmd_mc_scan(std::vector<std::string>& args) {
    CLI::App app{"independent Metropolis chains over a beta grid"};
    int L = 8, steps = 10, measure_every = 10, threads = 1;
    double beta_min = 0.1, beta_max = 0.4;
    std::int64_t sweeps = 20000, therm = -1;
    std::uint64_t seed = 1;
    std::string bc = "periodic", start = "hot", out_path = "-", config;
    app.add_option("--L", L)->required();
    app.add_option("--beta-min", beta_min);
    app.add_option("--beta-max", beta_max);
    app.add_option("--steps", steps);
    app.add_option("--sweeps", sweeps);
    app.add_option("--therm", therm, "thermalization sweeps (default sweeps/4)");
    app.add_option("--measure-every", measure_every);
    app.add_option("--seed", seed);
    app.add_option("--bc", bc)->check(CLI::IsMember({"periodic", "fixed-plus"}));
    app.add_option("--start", start)->check(CLI::IsMember({"hot", "cold"}));
    app.add_option("--threads", threads, "worker pool size");
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);
    if (steps < 0 || beta_max < beta_min) throw UsageError("need beta-min <= beta-max, steps >= 0");
    if (therm < 0) therm = sweeps / 4;

    const int n_points = steps + 1;
    std::vector<mc::HysteresisPoint> points(n_points);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_points) return;
            const double beta = steps == 0 ? beta_min : beta_min + (beta_max - beta_min) * i / steps;
            auto lat =
                bc == "periodic" ? mc::make_periodic_lattice(L) : mc::make_fixed_plus_lattice(L);
            mc::McConfig cfg;
            cfg.beta = beta;
            cfg.sweeps = sweeps;
            cfg.thermalization = therm;
            cfg.measure_every = measure_every;
            cfg.seed = xcube::stream_seed(seed, static_cast<std::uint64_t>(i));
            cfg.start = start == "hot" ? mc::Start::hot : mc::Start::cold;
            const auto series = mc::run_chain(lat, cfg);
            const auto u = series.u();
            const auto cv = series.heat_capacity();
            const auto m = series.m();
            points[i] = {beta,   u.mean, u.err, cv.mean,
                         cv.err, m.mean, m.err, series.acceptance_rate,
                         0.0,    0.0};
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::max(1, std::min(threads, n_points));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    Output out(out_path);
    echo_header(out.stream(), "mc-scan",
                {{"L", std::to_string(L)},
                 {"beta_min", fmt(beta_min)},
                 {"beta_max", fmt(beta_max)},
                 {"steps", std::to_string(steps)},
                 {"sweeps", std::to_string(sweeps)},
                 {"therm", std::to_string(therm)},
                 {"measure_every", std::to_string(measure_every)},
                 {"seed", std::to_string(seed)},
                 {"bc", bc},
                 {"start", start}});
    out.stream() << kMcCsvHeader << "\n";
    for (const auto& p : points) write_mc_row(out.stream(), "scan", p, L, seed, sweeps);
    return kExitOk;
}

int cmd_hysteresis(std::vector<std::string>& args) {
    CLI::App app{"paired heating/cooling scans across the transition"};
    int L = 10, steps = 28, measure_every = 5;
    double beta_min = 0.48, beta_max = 0.62, therm_fraction = 0.25;
    std::int64_t sweeps = 20000;
    std::uint64_t seed = 1;
    std::string out_path = "-", config;
    app.add_option("--L", L);
    app.add_option("--beta-min", beta_min);
    app.add_option("--beta-max", beta_max);
    app.add_option("--steps", steps);
    app.add_option("--sweeps-per-point", sweeps);
    app.add_option("--therm-fraction", therm_fraction);
    app.add_option("--measure-every", measure_every);
    app.add_option("--seed", seed);
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);

    const auto scan = mc::hysteresis_scan(L, beta_min, beta_max, steps, sweeps, seed,
                                          therm_fraction, measure_every);
    Output out(out_path);
    echo_header(out.stream(), "hysteresis",
                {{"L", std::to_string(L)},
                 {"beta_min", fmt(beta_min)},
                 {"beta_max", fmt(beta_max)},
                 {"steps", std::to_string(steps)},
                 {"sweeps_per_point", std::to_string(sweeps)},
                 {"therm_fraction", fmt(therm_fraction)},
                 {"measure_every", std::to_string(measure_every)},
                 {"seed", std::to_string(seed)}});
    out.stream() << kMcCsvHeader << "\n";
    for (const auto& p : scan.heating) write_mc_row(out.stream(), "heating", p, L, seed, sweeps);
    for (const auto& p : scan.cooling) write_mc_row(out.stream(), "cooling", p, L, seed, sweeps);
    return kExitOk;
}

int cmd_order_parameter(std::vector<std::string>& args) {
    CLI::App app{"foliated order parameter for a membrane"};
    int L = 12, measure_every = 10;
    double beta = 0.325;
    std::int64_t sweeps = 60000, therm = 20000;
    std::uint64_t seed = 1;
    std::string membrane_path, bc = "fixed-plus", start = "cold", out_path = "-", config;
    app.add_option("--L", L)->required();
    app.add_option("--beta", beta)->required();
    app.add_option("--membrane-spec", membrane_path, "JSON {normal, plane, cells}")->required();
    app.add_option("--bc", bc)->check(CLI::IsMember({"periodic", "fixed-plus"}));
    app.add_option("--start", start)->check(CLI::IsMember({"hot", "cold"}));
    app.add_option("--sweeps", sweeps);
    app.add_option("--therm", therm);
    app.add_option("--measure-every", measure_every);
    app.add_option("--seed", seed);
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);

    const lattice::Geometry g(L);
    const auto mem = load_membrane(membrane_path);
    auto lat = bc == "periodic" ? mc::make_periodic_lattice(L) : mc::make_fixed_plus_lattice(L);
    mc::McConfig cfg;
    cfg.beta = beta;
    cfg.sweeps = sweeps;
    cfg.thermalization = therm;
    cfg.measure_every = measure_every;
    cfg.seed = seed;
    cfg.start = start == "hot" ? mc::Start::hot : mc::Start::cold;
    const auto res = duality::foliated_order_parameter_mc(mem, g, lat, cfg);

    Output out(out_path);
    echo_header(out.stream(), "order-parameter",
                {{"L", std::to_string(L)},
                 {"beta", fmt(beta)},
                 {"membrane_spec", membrane_path},
                 {"bc", bc},
                 {"start", start},
                 {"sweeps", std::to_string(sweeps)},
                 {"therm", std::to_string(therm)},
                 {"measure_every", std::to_string(measure_every)},
                 {"seed", std::to_string(seed)},
                 {"separation_ok", res.separation_ok ? "true" : "false"}});
    if (!res.separation_ok)
        out.stream() << "# warning: corner separation below L/4; m^4 comparison unreliable\n";
    out.stream() << "beta,op,op_err,m,m_err,m4,corner_count\n";
    out.stream() << fmt(res.beta) << ',' << fmt(res.op) << ',' << fmt(res.op_err) << ','
                 << fmt(res.m) << ',' << fmt(res.m_err) << ',' << fmt(res.m4) << ','
                 << res.corner_count << "\n";
    return kExitOk;
}

// rebuild scan data from a hysteresis CSV produced by this tool
mc::HysteresisScan load_hysteresis_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open hysteresis CSV: " + path);
    mc::HysteresisScan scan;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line.rfind("branch,", 0) != 0)
                throw UsageError("unexpected hysteresis CSV header: " + line);
            saw_header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 12) throw UsageError("short hysteresis CSV row: " + line);
        mc::HysteresisPoint p;
        p.beta = std::stod(fields[1]);
        p.u = std::stod(fields[2]);
        p.u_err = std::stod(fields[3]);
        p.cv = std::stod(fields[4]);
        p.cv_err = std::stod(fields[5]);
        p.m = std::stod(fields[6]);
        p.m_err = std::stod(fields[7]);
        p.acc_rate = std::stod(fields[8]);
        scan.L = std::stoi(fields[9]);
        scan.seed = std::stoull(fields[10]);
        scan.sweeps_per_point = std::stoll(fields[11]);
        if (fields[0] == "heating")
            scan.heating.push_back(p);
        else if (fields[0] == "cooling")
            scan.cooling.push_back(p);
        else
            throw UsageError("unknown branch in hysteresis CSV: " + fields[0]);
    }
    if (scan.heating.empty() || scan.cooling.empty())
        throw UsageError("hysteresis CSV holds no usable branch rows");
    return scan;
}

std::vector<duality::SeriesPoint> load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open series CSV: " + path);
    std::vector<duality::SeriesPoint> series;
    std::string line;
    int beta_col = -1, val_col = -1, err_col = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (beta_col < 0) {
            for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
                if (fields[i] == "beta") beta_col = i;
                if (fields[i] == "op" || fields[i] == "value") val_col = i;
                if (fields[i] == "op_err" || fields[i] == "err") err_col = i;
            }
            if (beta_col < 0 || val_col < 0)
                throw UsageError("series CSV needs beta and op/value columns");
            continue;
        }
        duality::SeriesPoint p;
        p.beta = std::stod(fields.at(beta_col));
        p.value = std::stod(fields.at(val_col));
        p.err = err_col >= 0 ? std::stod(fields.at(err_col)) : 0.0;
        series.push_back(p);
    }
    std::sort(series.begin(), series.end(),
              [](const auto& a, const auto& b) { return a.beta < b.beta; });
    return series;
}

int cmd_transition_report(std::vector<std::string>& args) {
    CLI::App app{"assemble the three transition indicators into a JSON report"};
    std::string hysteresis_path, op_path, out_path = "-", config;
    double window_lo = 0.48, window_hi = 0.62, jump_lo = 0.50, jump_hi = 0.62;
    double beta_star = 0.551, dbeta = 0.01;
    app.add_option("--from-hysteresis", hysteresis_path, "CSV from the hysteresis subcommand")
        ->required();
    app.add_option("--from-op", op_path, "CSV with beta,op[,op_err] columns");
    app.add_option("--window-lo", window_lo);
    app.add_option("--window-hi", window_hi);
    app.add_option("--jump-lo", jump_lo);
    app.add_option("--jump-hi", jump_hi);
    app.add_option("--beta-star", beta_star, "bracketing anchor");
    app.add_option("--dbeta", dbeta, "fidelity increment");
    app.add_option("--out", out_path);
    app.add_option("--config", config);
    app.parse(args);

    const auto scan = load_hysteresis_csv(hysteresis_path);
    std::vector<duality::SeriesPoint> op_series;
    if (!op_path.empty()) op_series = load_series_csv(op_path);
    const auto report = duality::transition_report(scan, op_series, window_lo, window_hi, dbeta,
                                                   jump_lo, jump_hi, beta_star);
    Output out(out_path);
    out.stream() << duality::transition_report_json(report) << "\n";
    return kExitOk;
}

int cmd_verify(std::vector<std::string>& args) {
    CLI::App app{"cross-engine oracle suite"};
    bool quick = false;
    std::uint64_t seed = 20240551;
    std::string config;
    app.add_flag("--quick", quick, "skip the long-running comparisons");
    app.add_option("--seed", seed);
    app.add_option("--config", config);
    app.parse(args);

    const auto checks = xcube::verify::run_checks(quick, seed);
    for (const auto& c : checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- " << c.detail << "\n";
    const bool ok = xcube::verify::all_pass(checks);
    std::cout << (ok ? "verify: all checks passed" : "verify: FAILURES above") << "\n";
    return ok ? kExitOk : kExitVerification;
}

void print_usage(std::ostream& os) {
    os << "usage: xcube <subcommand> [options]\n"
          "  gsd                ground-state degeneracy exponent\n"
          "  syndrome-demo      excitation mobility report (JSON)\n"
          "  exact-scan         exact observables over a beta grid (CSV)\n"
          "  mc-scan            independent Metropolis chains (CSV)\n"
          "  hysteresis         heating/cooling scans across the transition (CSV)\n"
          "  order-parameter    foliated order parameter for a membrane (CSV)\n"
          "  transition-report  three-indicator JSON report from scan CSVs\n"
          "  verify             cross-engine oracle suite (exit 1 on failure)\n"
          "Every subcommand takes --config <file.json> (flags override) and --out\n"
          "<path|-> (relative paths resolve under $XCUBE_OUT_DIR).\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage(std::cerr);
        return kExitUsage;
    }
    const std::string name = argv[1];
    if (name == "--help" || name == "-h" || name == "help") {
        print_usage(std::cout);
        return kExitOk;
    }

    using Handler = int (*)(std::vector<std::string>&);
    static const std::map<std::string, Handler> handlers = {
        {"gsd", cmd_gsd},
        {"syndrome-demo", cmd_syndrome_demo},
        {"exact-scan", cmd_exact_scan},
        {"mc-scan", cmd_mc_scan},
        {"hysteresis", cmd_hysteresis},
        {"order-parameter", cmd_order_parameter},
        {"transition-report", cmd_transition_report},
        {"verify", cmd_verify},
    };
    const auto it = handlers.find(name);
    if (it == handlers.end()) {
        std::cerr << "unknown subcommand: " << name << "\n";
        print_usage(std::cerr);
        return kExitUsage;
    }

    try {
        auto merged = merge_config_args({argv + 2, argv + argc});
        std::reverse(merged.begin(), merged.end());  // CLI11 consumes args back to front
        try {
            return it->second(merged);
        } catch (const CLI::CallForHelp&) {
            print_usage(std::cout);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            std::cerr << "argument error: " << e.what() << "\n";
            return kExitUsage;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
}
