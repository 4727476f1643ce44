#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xcube/exact.hpp"
#include "xcube/lattice.hpp"
#include "xcube/plaquette_mc.hpp"
#include "xcube/rng.hpp"
#include "xcube/stats.hpp"

#include <cmath>
#include <map>

using namespace xcube;
using namespace xcube::mc;

TEST_CASE("lattice construction: periodic and fixed-plus") {
    const auto lat = make_periodic_lattice(3);
    CHECK(lat.n_sites == 27);
    CHECK(lat.n_mutable == 27);
    CHECK(lat.n_plaquettes == 81);
    CHECK(lat.total_energy() == -81.0);

    const auto fixed = make_fixed_plus_lattice(3);
    CHECK(fixed.n_sites == 125);
    CHECK(fixed.n_mutable == 27);
    // plaquettes touching a mutable spin: 3 * L * (L+1)^2
    CHECK(fixed.n_plaquettes == 3 * 3 * 16);
    CHECK(fixed.is_frozen(box_site(3, 0, 2, 2)));
    CHECK(!fixed.is_frozen(box_site(3, 1, 2, 2)));
}

TEST_CASE("delta energy: all-plus lattice, involution, frozen guard") {
    auto lat = make_periodic_lattice(4);
    for (int s = 0; s < lat.n_sites; ++s) CHECK(delta_energy(lat, s) == 24.0);

    const double e0 = lat.total_energy();
    lat.spins[5] = -1;
    lat.spins[5] = 1;
    CHECK(lat.total_energy() == e0);

    auto fixed = make_fixed_plus_lattice(2);
    CHECK_THROWS_AS(delta_energy(fixed, box_site(2, 0, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(delta_energy(fixed, -1), std::invalid_argument);
}

TEST_CASE("delta energy equals a full recomputation on random states") {
    for (auto make : {make_periodic_lattice, make_fixed_plus_lattice}) {
        auto lat = make(3);
        Rng rng(7);
        for (int s : lat.mutable_sites) lat.spins[s] = (rng() & 1u) ? 1 : -1;
        for (int trial = 0; trial < 100; ++trial) {
            const int site = lat.mutable_sites[rng() % lat.mutable_sites.size()];
            const double before = lat.total_energy();
            const double de = delta_energy(lat, site);
            lat.spins[site] = static_cast<std::int8_t>(-lat.spins[site]);
            // all terms are integers at J = 1, so this is exact
            CHECK(lat.total_energy() - before == de);
        }
    }
}

TEST_CASE("energy bounds on random states") {
    auto lat = make_periodic_lattice(4);
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        for (auto& s : lat.spins) s = (rng() & 1u) ? 1 : -1;
        const double e = lat.total_energy();
        CHECK(e >= -lat.n_plaquettes);
        CHECK(e <= lat.n_plaquettes);
    }
}

TEST_CASE("plane flips leave the energy invariant (planar symmetries)") {
    auto lat = make_periodic_lattice(4);
    const lattice::Geometry g(4);
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        for (auto& s : lat.spins) s = (rng() & 1u) ? 1 : -1;
        const double e0 = lat.total_energy();
        const int axis = static_cast<int>(rng() % 3);
        const int coord = static_cast<int>(rng() % 4);
        for (int c = 0; c < g.n_cubes(); ++c)
            if (g.cube_at(c)[axis] == coord) lat.spins[c] = static_cast<std::int8_t>(-lat.spins[c]);
        CHECK(lat.total_energy() == e0);
    }
}

TEST_CASE("metropolis at beta = 0 accepts everything") {
    auto lat = make_periodic_lattice(4);
    Rng rng(1);
    const int accepted = metropolis_sweep(lat, 0.0, rng);
    CHECK(accepted == lat.n_mutable);
}

TEST_CASE("a cold start deep in the ordered phase never melts") {
    auto lat = make_periodic_lattice(8);
    McConfig cfg;
    cfg.beta = 3.0;
    cfg.sweeps = 3000;
    cfg.thermalization = 0;
    cfg.measure_every = 10;
    cfg.seed = 5;
    cfg.start = Start::cold;
    const auto series = run_chain(lat, cfg);
    // acceptance ~ e^{-72}: not a single flip happens
    CHECK(series.u().mean == -1.0);
    CHECK(series.acceptance_rate == 0.0);
}

TEST_CASE("cold start at beta = 1 stays within a percent of u = -1") {
    auto lat = make_periodic_lattice(6);
    McConfig cfg;
    cfg.beta = 1.0;
    cfg.sweeps = 10000;
    cfg.thermalization = 2000;
    cfg.measure_every = 10;
    cfg.seed = 17;
    cfg.start = Start::cold;
    const auto u = run_chain(lat, cfg).u();
    CHECK(u.mean == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("record bookkeeping and config validation") {
    auto lat = make_periodic_lattice(3);
    McConfig cfg;
    cfg.beta = 0.2;
    cfg.sweeps = 107;
    cfg.thermalization = 13;
    cfg.measure_every = 4;
    cfg.seed = 3;
    cfg.start = Start::hot;
    const auto series = run_chain(lat, cfg);
    CHECK(series.n_records() == (107 - 13) / 4);

    McConfig bad = cfg;
    bad.thermalization = 107;
    CHECK_THROWS_AS(run_chain(lat, bad), std::invalid_argument);
    bad = cfg;
    bad.measure_every = 0;
    CHECK_THROWS_AS(run_chain(lat, bad), std::invalid_argument);
    bad = cfg;
    bad.track_products = {{0, 1, 2, 3, 4, 5, 6, 7, 8}};
    CHECK_THROWS_AS(run_chain(lat, bad), std::invalid_argument);
}

TEST_CASE("identical seeds give identical series") {
    auto a = make_periodic_lattice(4);
    auto b = make_periodic_lattice(4);
    McConfig cfg;
    cfg.beta = 0.45;
    cfg.sweeps = 2000;
    cfg.thermalization = 200;
    cfg.measure_every = 5;
    cfg.seed = 20240601;
    cfg.start = Start::hot;
    cfg.track_products = {{0, 5, 9}};
    const auto ra = run_chain(a, cfg);
    const auto rb = run_chain(b, cfg);
    CHECK(ra.energy == rb.energy);
    CHECK(ra.magnet == rb.magnet);
    CHECK(ra.products == rb.products);
    CHECK(ra.acceptance_rate == rb.acceptance_rate);
}

TEST_CASE("hot chains in the high-temperature phase (L=8)") {
    // u(0.1) sits at -0.1043(3): -tanh(beta) plus the four-plaquette
    // closed-surface correction (8 t^3 + ...), cross-checked against the
    // exact L=3 ensemble below
    auto lat = make_periodic_lattice(8);
    McConfig cfg;
    cfg.beta = 0.1;
    cfg.sweeps = 100000;
    cfg.thermalization = 10000;
    cfg.measure_every = 10;
    cfg.seed = 421;
    cfg.start = Start::hot;
    const auto u = run_chain(lat, cfg).u();
    CHECK(u.mean == doctest::Approx(-0.1043).epsilon(0.04));
    CHECK(std::abs(u.mean) < 0.11);

    cfg.beta = 0.05;
    cfg.sweeps = 60000;
    cfg.thermalization = 6000;
    cfg.seed = 422;
    const auto u2 = run_chain(lat, cfg).u();
    CHECK(std::abs(u2.mean) < 0.1);
    CHECK(u2.mean == doctest::Approx(-std::tanh(0.05)).epsilon(0.02));
}

TEST_CASE("MC matches the exact ensemble deep in the disordered phase (L=3)") {
    const lattice::Geometry g(3);
    exact::BuildOptions opts;
    opts.edge_tables = false;
    const auto ens = exact::build_ensemble(g, opts);
    const double exact_u = exact::ensemble_stats(ens, 0.1).mean_E / g.n_edges();

    auto lat = make_periodic_lattice(3);
    McConfig cfg;
    cfg.beta = 0.1;
    cfg.sweeps = 100000;
    cfg.thermalization = 10000;
    cfg.measure_every = 10;
    cfg.seed = 98;
    cfg.start = Start::hot;
    const auto u = run_chain(lat, cfg).u();
    CHECK(std::abs(u.mean - exact_u) <= 3.0 * u.err);
}

TEST_CASE("MC internal energy matches the exact ensemble at L=3") {
    const lattice::Geometry g(3);
    const auto ens = exact::build_ensemble(g);
    const double exact_u = exact::ensemble_stats(ens, 0.3).mean_E / g.n_edges();

    auto lat = make_periodic_lattice(3);
    McConfig cfg;
    cfg.beta = 0.3;
    cfg.sweeps = 100000;
    cfg.thermalization = 10000;
    cfg.measure_every = 10;
    cfg.seed = 97;
    cfg.start = Start::hot;
    const auto u = run_chain(lat, cfg).u();
    CHECK(std::abs(u.mean - exact_u) <= 3.0 * u.err);
}

TEST_CASE("magnetization flag and values") {
    auto periodic = make_periodic_lattice(3);
    const auto mp = magnetization(periodic);
    CHECK(mp.value == 1.0);
    CHECK(!mp.order_parameter_valid);

    auto fixed = make_fixed_plus_lattice(3);
    const auto mf = magnetization(fixed);
    CHECK(mf.value == 1.0);
    CHECK(mf.order_parameter_valid);
}

TEST_CASE("fixed boundaries: ordered-phase magnetization") {
    auto lat = make_fixed_plus_lattice(8);
    McConfig cfg;
    cfg.beta = 0.325;
    cfg.sweeps = 6000;
    cfg.thermalization = 2000;
    cfg.measure_every = 10;
    cfg.seed = 31;
    cfg.start = Start::cold;
    CHECK(run_chain(lat, cfg).m().mean > 0.9);
    // the disordered-phase counterpart needs L >= 12 before the frozen +1
    // skin stops dominating the volume average; covered with the order
    // parameter runs in the duality tests
}

TEST_CASE("corner product on a frozen-cold lattice is exactly one") {
    auto lat = make_fixed_plus_lattice(4);
    McConfig cfg;
    cfg.beta = 2.0;
    cfg.sweeps = 500;
    cfg.thermalization = 100;
    cfg.measure_every = 5;
    cfg.seed = 8;
    cfg.start = Start::cold;
    cfg.track_products = {{box_site(4, 2, 2, 2)}};
    const auto series = run_chain(lat, cfg);
    CHECK(corner_correlator(series, 0).mean == 1.0);
}

TEST_CASE("hysteresis scan mechanics on a small grid") {
    const auto scan = hysteresis_scan(4, 0.30, 0.50, 4, 600, 77);
    REQUIRE(scan.heating.size() == 5);
    REQUIRE(scan.cooling.size() == 5);
    for (int i = 0; i <= 4; ++i) {
        CHECK(scan.heating[i].beta == doctest::Approx(0.30 + 0.05 * i).epsilon(1e-12));
        CHECK(scan.cooling[i].beta == doctest::Approx(scan.heating[i].beta).epsilon(1e-12));
    }
    // deterministic end to end
    const auto again = hysteresis_scan(4, 0.30, 0.50, 4, 600, 77);
    for (int i = 0; i <= 4; ++i) {
        CHECK(scan.heating[i].u == again.heating[i].u);
        CHECK(scan.cooling[i].cv == again.cooling[i].cv);
    }
    CHECK_THROWS_AS(hysteresis_scan(4, 0.5, 0.3, 4, 600, 77), std::invalid_argument);
}

TEST_CASE("binning statistics behave") {
    std::vector<double> flat(200, 3.5);
    const auto s = stats::binned_mean(flat);
    CHECK(s.mean == 3.5);
    CHECK(s.err == 0.0);
    std::vector<double> tiny(5, 1.0);
    CHECK_THROWS_AS(stats::binned_mean(tiny, 20), std::invalid_argument);

    // iid gaussian-ish stream: jackknife cv ~ beta^2 * variance
    Rng rng(123);
    std::vector<double> series(20000);
    for (auto& x : series) {
        double s12 = 0.0;
        for (int k = 0; k < 12; ++k) s12 += uniform01(rng);
        x = s12 - 6.0;  // unit variance
    }
    const auto cv = stats::jackknife_cv(series, 2.0);
    CHECK(cv.mean == doctest::Approx(4.0).epsilon(0.1));
    CHECK(cv.err > 0.0);
    CHECK(cv.err < 0.5);
}

TEST_CASE("empirical stationary distribution matches the exact Boltzmann weights") {
    // Configuration-level test below the transition. Samples are thinned by
    // 1000 sweeps: the slowest mode is the hop between the 16 degenerate
    // plane-flip sectors, and the chi-square needs samples separated by it.
    const double beta = 0.25;
    auto ref = make_periodic_lattice(2);
    exact::OracleOptions oo;
    oo.per_config_probs = true;
    const auto oracle = exact::classical_oracle(ref, beta, oo);

    auto lat = make_periodic_lattice(2);
    Rng rng(2020);
    for (int t = 0; t < 2000; ++t) metropolis_sweep(lat, beta, rng);
    std::vector<std::uint64_t> counts(256, 0);
    for (int t = 0; t < 20000; ++t) {
        for (int r = 0; r < 1000; ++r) metropolis_sweep(lat, beta, rng);
        std::uint64_t mask = 0;
        for (int s = 0; s < lat.n_sites; ++s)
            if (lat.spins[s] < 0) mask |= std::uint64_t{1} << s;
        ++counts[mask];
    }
    const auto chi = stats::chi_square_gof(counts, oracle.config_probs);
    CHECK(chi.p_value > 0.01);
}

TEST_CASE("stationary distribution over violation patterns in the ordered phase") {
    // At beta = 0.5 the plane-flip sectors are frozen on any feasible time
    // scale, so the configuration-level histogram cannot equilibrate; the
    // violation pattern (cubic structure) is blind to the frozen sectors and
    // must still be Boltzmann-distributed.
    const double beta = 0.5;
    auto ref = make_periodic_lattice(2);
    exact::OracleOptions oo;
    oo.per_config_probs = true;
    const auto oracle = exact::classical_oracle(ref, beta, oo);

    // group configurations by their plaquette-violation pattern
    auto scratch = make_periodic_lattice(2);
    std::map<std::vector<int>, int> pattern_ids;
    std::vector<int> structure_of(256);
    for (int cfg = 0; cfg < 256; ++cfg) {
        for (int s = 0; s < 8; ++s) scratch.spins[s] = (cfg >> s) & 1 ? -1 : 1;
        std::vector<int> pattern(scratch.n_plaquettes);
        for (int p = 0; p < scratch.n_plaquettes; ++p) pattern[p] = scratch.plaquette_product(p) < 0;
        const auto [it, fresh] = pattern_ids.try_emplace(pattern, static_cast<int>(pattern_ids.size()));
        structure_of[cfg] = it->second;
    }
    REQUIRE(pattern_ids.size() == 16);  // 2^r with r = 4
    std::vector<double> probs(pattern_ids.size(), 0.0);
    for (int cfg = 0; cfg < 256; ++cfg) probs[structure_of[cfg]] += oracle.config_probs[cfg];

    auto lat = make_periodic_lattice(2);
    Rng rng(2021);
    for (int t = 0; t < 1000; ++t) metropolis_sweep(lat, beta, rng);
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (int t = 0; t < 100000; ++t) {
        for (int r = 0; r < 10; ++r) metropolis_sweep(lat, beta, rng);
        std::uint64_t mask = 0;
        for (int s = 0; s < 8; ++s)
            if (lat.spins[s] < 0) mask |= std::uint64_t{1} << s;
        ++counts[structure_of[mask]];
    }
    const auto chi = stats::chi_square_gof(counts, probs);
    CHECK(chi.p_value > 0.01);
}
