#include "xcube/verify.hpp"

#include "xcube/duality.hpp"
#include "xcube/exact.hpp"
#include "xcube/lattice.hpp"
#include "xcube/plaquette_mc.hpp"
#include "xcube/rng.hpp"
#include "xcube/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace xcube::verify {

namespace {

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << x;
    return ss.str();
}

duality::Membrane random_membrane(const lattice::Geometry& g, Rng& rng) {
    duality::Membrane mem;
    mem.normal = static_cast<lattice::Axis>(rng() % 3);
    mem.plane = static_cast<int>(rng() % g.L());
    const int n_cells = 1 + static_cast<int>(rng() % 6);
    std::set<std::array<int, 2>> cells;
    while (static_cast<int>(cells.size()) < n_cells)
        cells.insert({static_cast<int>(rng() % g.L()), static_cast<int>(rng() % g.L())});
    mem.cells.assign(cells.begin(), cells.end());
    return mem;
}

}  // namespace

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> run_checks(bool quick, std::uint64_t seed) {
    std::vector<Check> out;
    auto add = [&](std::string name, bool pass, std::string detail) {
        out.push_back({std::move(name), pass, std::move(detail)});
    };

    const lattice::Geometry g2(2);
    const auto ens2 = exact::build_ensemble(g2);
    auto lat2 = mc::make_periodic_lattice(2);

    // partition-function duality: log Z_cl - log Z_q is a beta-independent
    // multiple of ln 2 (the kernel of the spin -> structure map)
    {
        const std::vector<double> betas = {0.1, 0.3, 0.5, 1.0};
        double max_dev = 0.0;
        const double expected = (8 - ens2.rank) * std::log(2.0);
        for (double b : betas) {
            const double zq = exact::ensemble_stats(ens2, b).logZ;
            const double zc = exact::classical_oracle(lat2, b).logZ;
            max_dev = std::max(max_dev, std::abs(zc - zq - expected));
        }
        add("partition-function duality (L=2)", max_dev < 1e-10,
            "max |logZ_cl - logZ_q - (L^3-r)ln2| = " + fmt(max_dev));
    }

    // one-qubit diagonals against classical plaquette expectations
    {
        exact::OracleOptions oo;
        oo.per_plaquette = true;
        const auto oracle = exact::classical_oracle(lat2, 0.5, oo);
        const auto wm = exact::w_minus_all_edges(ens2, 0.5);
        double max_diff = 0.0;
        for (int e = 0; e < g2.n_edges(); ++e)
            max_diff = std::max(max_diff,
                                std::abs((1.0 - 2.0 * wm[e]) - oracle.plaquette_expectations[e]));
        add("one-qubit / plaquette map (L=2, beta=0.5)", max_diff < 1e-10,
            "max edge deviation = " + fmt(max_diff));

        const auto st = exact::ensemble_stats(ens2, 0.5);
        const double cv_q = exact::heat_capacity(st);
        const double cv_cl = 0.25 * oracle.var_E;
        add("heat capacity match (L=2, beta=0.5)", std::abs(cv_q - cv_cl) < 1e-10,
            "|beta^2 Var| difference = " + fmt(std::abs(cv_q - cv_cl)));
    }

    // global entanglement: qubit-sum route vs internal-energy route
    {
        double max_diff = 0.0;
        bool bounds = true;
        for (double b : {0.1, 0.3, 0.551, 1.0}) {
            const auto ge = exact::global_entanglement(ens2, b);
            max_diff = std::max(max_diff, std::abs(ge.from_qubits - ge.from_internal_energy));
            bounds = bounds && ge.from_qubits >= 0.0 && ge.from_qubits <= 1.0;
        }
        add("global entanglement routes (L=2)", max_diff < 1e-10 && bounds,
            "max route difference = " + fmt(max_diff));
    }

    // membrane algebra
    {
        const lattice::Geometry g8(8);
        duality::Membrane rect{lattice::Axis::Z, 3, {}};
        for (int x = 1; x <= 3; ++x)
            for (int y = 1; y <= 4; ++y) rect.cells.push_back({x, y});
        duality::Membrane ell{lattice::Axis::Z, 3, {}};
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y) ell.cells.push_back({x, y});
        for (int x = 0; x < 2; ++x)
            for (int y = 2; y < 4; ++y) ell.cells.push_back({x, y});
        const int nr = static_cast<int>(duality::corner_set(rect, g8).spins.size());
        const int nl = static_cast<int>(duality::corner_set(ell, g8).spins.size());
        add("membrane corner counts", nr == 4 && nl == 6,
            "rectangle -> " + std::to_string(nr) + ", L-shape -> " + std::to_string(nl));

        Rng rng(splitmix64(seed ^ 0xabcdef));
        bool identity = true;
        for (int trial = 0; trial < 50 && identity; ++trial) {
            std::vector<std::int8_t> spins(g8.n_cubes());
            for (auto& s : spins) s = (rng() & 1u) ? 1 : -1;
            for (int k = 0; k < 5 && identity; ++k)
                identity = duality::membrane_identity_check(spins, random_membrane(g8, rng), g8);
        }
        add("membrane corner identity (L=8)", identity, "50 configurations x 5 membranes");
    }

    // local moves against full recomputation
    {
        auto lat = mc::make_periodic_lattice(4);
        Rng rng(splitmix64(seed ^ 0x1234));
        for (auto& s : lat.spins) s = (rng() & 1u) ? 1 : -1;
        double max_dev = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int site = static_cast<int>(rng() % lat.n_sites);
            const double before = lat.total_energy();
            const double de = mc::delta_energy(lat, site);
            lat.spins[site] = static_cast<std::int8_t>(-lat.spins[site]);
            max_dev = std::max(max_dev, std::abs(lat.total_energy() - before - de));
        }
        add("delta-energy consistency", max_dev == 0.0, "max |E_after - E_before - dE| = " + fmt(max_dev));
    }

    // same seed, same bytes
    {
        auto a = mc::make_periodic_lattice(3);
        auto b = mc::make_periodic_lattice(3);
        mc::McConfig cfg;
        cfg.beta = 0.4;
        cfg.sweeps = 200;
        cfg.thermalization = 50;
        cfg.measure_every = 2;
        cfg.seed = seed;
        cfg.start = mc::Start::hot;
        const auto ra = mc::run_chain(a, cfg);
        const auto rb = mc::run_chain(b, cfg);
        add("seed determinism", ra.energy == rb.energy && ra.magnet == rb.magnet,
            std::to_string(ra.energy.size()) + " records compared");
    }

    if (quick) return out;

    const lattice::Geometry g3(3);
    const auto ens3 = exact::build_ensemble(g3);

    {
        double max_diff = 0.0;
        for (double b : {0.1, 0.3, 0.551, 1.0}) {
            const auto ge = exact::global_entanglement(ens3, b);
            max_diff = std::max(max_diff, std::abs(ge.from_qubits - ge.from_internal_energy));
        }
        add("global entanglement routes (L=3)", max_diff < 1e-10,
            "max route difference = " + fmt(max_diff));
    }

    // Monte Carlo internal energy against the exact ensemble
    {
        const double beta = 0.3;
        auto lat = mc::make_periodic_lattice(3);
        mc::McConfig cfg;
        cfg.beta = beta;
        cfg.sweeps = 100000;
        cfg.thermalization = 10000;
        cfg.measure_every = 10;
        cfg.seed = splitmix64(seed ^ 0x77);
        cfg.start = mc::Start::hot;
        const auto series = mc::run_chain(lat, cfg);
        const auto u = series.u();
        const double exact_u = exact::ensemble_stats(ens3, beta).mean_E / g3.n_edges();
        const double dev = std::abs(u.mean - exact_u);
        add("MC internal energy vs exact (L=3, beta=0.3)", dev <= 3.0 * u.err,
            "deviation " + fmt(dev) + " vs 3 sigma " + fmt(3.0 * u.err));
    }

    // Stationary distribution of the chain against exact Boltzmann weights.
    // beta = 0.25 with 1000-sweep thinning: the slowest mode is the hop
    // between the degenerate plane-flip sectors, and the chi-square needs
    // samples spaced beyond it.
    {
        const double beta = 0.25;
        exact::OracleOptions oo;
        oo.per_config_probs = true;
        const auto oracle = exact::classical_oracle(lat2, beta, oo);
        auto lat = mc::make_periodic_lattice(2);
        Rng rng(splitmix64(seed ^ 0x3030));
        for (int t = 0; t < 2000; ++t) mc::metropolis_sweep(lat, beta, rng);
        std::vector<std::uint64_t> counts(256, 0);
        const std::int64_t n_samples = 20000;
        for (std::int64_t t = 0; t < n_samples; ++t) {
            for (int r = 0; r < 1000; ++r) mc::metropolis_sweep(lat, beta, rng);
            std::uint64_t mask = 0;
            for (int s = 0; s < lat.n_sites; ++s)
                if (lat.spins[s] < 0) mask |= std::uint64_t{1} << s;
            ++counts[mask];
        }
        const auto chi = stats::chi_square_gof(counts, oracle.config_probs);
        add("stationary distribution chi-square (L=2, beta=0.25)", chi.p_value > 0.01,
            "chi2 = " + fmt(chi.statistic) + ", dof = " + std::to_string(chi.dof) +
                ", p = " + fmt(chi.p_value));
    }

    // fidelity expansion: residual halves when dbeta halves
    {
        const double beta = 0.4;
        const auto st = exact::ensemble_stats(ens3, beta);
        const double lead = exact::heat_capacity(st) / (8.0 * beta * beta);
        double residuals[3];
        const double dbs[3] = {0.02, 0.01, 0.005};
        for (int i = 0; i < 3; ++i) {
            const double f = exact::fidelity_exact(ens3, beta, dbs[i]);
            residuals[i] = std::abs((1.0 - f) / (dbs[i] * dbs[i]) - lead);
        }
        const double r0 = residuals[0] / residuals[1];
        const double r1 = residuals[1] / residuals[2];
        const bool ok = r0 > 1.7 && r0 < 2.3 && r1 > 1.7 && r1 < 2.3;
        add("fidelity-heat-capacity residual scaling (L=3, beta=0.4)", ok,
            "halving ratios " + fmt(r0) + ", " + fmt(r1));
    }

    // foliated order parameter: exact ensemble vs brute-force corner product
    {
        const double beta = 0.3;
        duality::Membrane mem{lattice::Axis::Z, 1, {{1, 1}, {2, 1}, {1, 2}, {2, 2}}};
        const double from_ensemble = duality::foliated_order_parameter_exact(ens3, beta, mem, g3);
        auto lat3 = mc::make_periodic_lattice(3);
        exact::OracleOptions oo;
        oo.allow_large = true;
        std::vector<int> corner_sites;
        for (int cube : duality::corner_set(mem, g3).spins)
            corner_sites.push_back(mc::site_of_cube(lat3, cube));
        oo.spin_products.push_back(corner_sites);
        const auto oracle = exact::classical_oracle(lat3, beta, oo);
        const double dev = std::abs(from_ensemble - oracle.spin_product_means[0]);
        add("foliated order parameter, exact vs classical oracle (L=3)", dev < 1e-8,
            "deviation = " + fmt(dev));
    }

    return out;
}

}  // namespace xcube::verify
