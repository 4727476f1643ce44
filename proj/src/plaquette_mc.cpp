#include "xcube/plaquette_mc.hpp"

#include "xcube/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xcube::mc {

namespace {

void build_incidence_tables(SpinLattice& lat) {
    const int nm = lat.n_mutable;
    std::vector<std::vector<int>> by_site(lat.n_sites);
    for (int p = 0; p < lat.n_plaquettes; ++p)
        for (int s : lat.plaquettes[p]) by_site[s].push_back(p);

    lat.partners.assign(static_cast<std::size_t>(nm) * 12 * 3, 0);
    lat.incident_plaq.assign(static_cast<std::size_t>(nm) * 12, 0);
    for (int m = 0; m < nm; ++m) {
        const int site = lat.mutable_sites[m];
        const auto& inc = by_site[site];
        if (inc.size() != 12)
            throw std::logic_error("SpinLattice: mutable spin without 12 incident plaquettes");
        for (int j = 0; j < 12; ++j) {
            const int p = inc[j];
            lat.incident_plaq[m * 12 + j] = p;
            int t = 0;
            for (int s : lat.plaquettes[p])
                if (s != site) lat.partners[(m * 12 + j) * 3 + t++] = s;
            if (t != 3) throw std::logic_error("SpinLattice: degenerate plaquette");
        }
    }
}

}  // namespace

void SpinLattice::set_coupling(int p, double j) {
    couplings.at(p) = j;
    uniform_couplings = std::all_of(couplings.begin(), couplings.end(),
                                    [&](double v) { return v == couplings[0]; });
    uniform_value = couplings[0];
}

void SpinLattice::set_all_couplings(double j) {
    std::fill(couplings.begin(), couplings.end(), j);
    uniform_couplings = true;
    uniform_value = j;
}

double SpinLattice::total_energy() const {
    double e = 0.0;
    for (int p = 0; p < n_plaquettes; ++p) e -= couplings[p] * plaquette_product(p);
    return e;
}

SpinLattice make_periodic_lattice(int L) {
    const lattice::Geometry g(L);
    SpinLattice lat;
    lat.L = L;
    lat.bc = Boundary::periodic;
    lat.n_sites = g.n_cubes();
    lat.n_mutable = lat.n_sites;
    lat.n_plaquettes = g.n_edges();
    lat.spins.assign(lat.n_sites, 1);
    lat.plaquettes.resize(lat.n_plaquettes);
    for (int e = 0; e < lat.n_plaquettes; ++e) lat.plaquettes[e] = g.spins_of_edge(e);
    lat.couplings.assign(lat.n_plaquettes, 1.0);
    lat.mutable_sites.resize(lat.n_sites);
    for (int s = 0; s < lat.n_sites; ++s) lat.mutable_sites[s] = s;
    lat.mutable_index = lat.mutable_sites;
    build_incidence_tables(lat);
    return lat;
}

int box_site(int L, int x, int y, int z) {
    const int M = L + 2;
    return x + M * (y + M * z);
}

SpinLattice make_fixed_plus_lattice(int L) {
    if (L < 2) throw std::invalid_argument("make_fixed_plus_lattice: L must be at least 2");
    const int M = L + 2;
    SpinLattice lat;
    lat.L = L;
    lat.bc = Boundary::fixed_plus;
    lat.n_sites = M * M * M;
    lat.spins.assign(lat.n_sites, 1);
    lat.mutable_index.assign(lat.n_sites, -1);
    for (int z = 1; z <= L; ++z)
        for (int y = 1; y <= L; ++y)
            for (int x = 1; x <= L; ++x) {
                lat.mutable_index[box_site(L, x, y, z)] = static_cast<int>(lat.mutable_sites.size());
                lat.mutable_sites.push_back(box_site(L, x, y, z));
            }
    lat.n_mutable = static_cast<int>(lat.mutable_sites.size());

    auto is_mutable = [&](int x, int y, int z) {
        return x >= 1 && x <= L && y >= 1 && y <= L && z >= 1 && z <= L;
    };
    // all axis-aligned unit squares inside the box that touch a mutable spin
    for (int normal = 0; normal < 3; ++normal) {
        const int u = (normal + 1) % 3, v = (normal + 2) % 3;
        int lim[3];
        lim[normal] = M;      // plaquette extends in u,v only
        lim[u] = M - 1;
        lim[v] = M - 1;
        for (int z = 0; z < lim[2]; ++z)
            for (int y = 0; y < lim[1]; ++y)
                for (int x = 0; x < lim[0]; ++x) {
                    int c[3] = {x, y, z};
                    std::array<int, 4> q{};
                    bool touches = false;
                    int t = 0;
                    for (int du = 0; du <= 1; ++du)
                        for (int dv = 0; dv <= 1; ++dv) {
                            int s[3] = {c[0], c[1], c[2]};
                            s[u] += du;
                            s[v] += dv;
                            q[t++] = box_site(L, s[0], s[1], s[2]);
                            touches = touches || is_mutable(s[0], s[1], s[2]);
                        }
                    if (touches) lat.plaquettes.push_back(q);
                }
    }
    lat.n_plaquettes = static_cast<int>(lat.plaquettes.size());
    lat.couplings.assign(lat.n_plaquettes, 1.0);
    build_incidence_tables(lat);
    return lat;
}

int site_of_cube(const SpinLattice& lat, int cube) {
    const int L = lat.L;
    const int x = cube % L, y = (cube / L) % L, z = cube / (L * L);
    if (lat.bc == Boundary::periodic) return cube;
    return box_site(L, x + 1, y + 1, z + 1);
}

double delta_energy(const SpinLattice& lat, int site) {
    if (site < 0 || site >= lat.n_sites) throw std::invalid_argument("delta_energy: site out of range");
    const int m = lat.mutable_index[site];
    if (m < 0) throw std::invalid_argument("delta_energy: site is frozen");
    const std::int8_t* sp = lat.spins.data();
    const std::int32_t* part = lat.partners.data() + static_cast<std::size_t>(m) * 36;
    double sum = 0.0;
    if (lat.uniform_couplings) {
        int acc = 0;
        for (int j = 0; j < 12; ++j) {
            const std::int32_t* q = part + 3 * j;
            acc += sp[q[0]] * sp[q[1]] * sp[q[2]];
        }
        sum = lat.uniform_value * acc;
    } else {
        const std::int32_t* inc = lat.incident_plaq.data() + static_cast<std::size_t>(m) * 12;
        for (int j = 0; j < 12; ++j) {
            const std::int32_t* q = part + 3 * j;
            sum += lat.couplings[inc[j]] * (sp[q[0]] * sp[q[1]] * sp[q[2]]);
        }
    }
    return 2.0 * lat.spins[site] * sum;
}

int metropolis_sweep(SpinLattice& lat, double beta, Rng& rng) {
    int accepted = 0;
    std::int8_t* sp = lat.spins.data();
    if (lat.uniform_couplings) {
        // Delta E = 2 J s 'sum' with integer sum in [-12,12]: tabulate the 25 weights
        double accept[25];
        for (int s = -12; s <= 12; ++s) {
            const double de = 2.0 * lat.uniform_value * s;
            accept[s + 12] = de <= 0.0 ? 1.0 : std::exp(-beta * de);
        }
        for (int m = 0; m < lat.n_mutable; ++m) {
            const int site = lat.mutable_sites[m];
            const std::int32_t* part = lat.partners.data() + static_cast<std::size_t>(m) * 36;
            int acc = 0;
            for (int j = 0; j < 12; ++j) {
                const std::int32_t* q = part + 3 * j;
                acc += sp[q[0]] * sp[q[1]] * sp[q[2]];
            }
            const int key = sp[site] > 0 ? acc : -acc;  // sign of s * sum
            const double a = accept[key + 12];
            if (a >= 1.0 || uniform01(rng) < a) {
                sp[site] = static_cast<std::int8_t>(-sp[site]);
                ++accepted;
            }
        }
    } else {
        for (int m = 0; m < lat.n_mutable; ++m) {
            const int site = lat.mutable_sites[m];
            const double de = delta_energy(lat, site);
            if (de <= 0.0 || uniform01(rng) < std::exp(-beta * de)) {
                sp[site] = static_cast<std::int8_t>(-sp[site]);
                ++accepted;
            }
        }
    }
    return accepted;
}

MeasurementSeries run_chain(SpinLattice& lat, const McConfig& cfg) {
    if (cfg.thermalization < 0 || cfg.sweeps <= cfg.thermalization)
        throw std::invalid_argument("run_chain: need sweeps > thermalization >= 0");
    if (cfg.measure_every < 1) throw std::invalid_argument("run_chain: measure_every >= 1");
    for (const auto& set : cfg.track_products) {
        if (set.empty() || set.size() > 8)
            throw std::invalid_argument("run_chain: tracked products take 1..8 spins");
        for (int s : set)
            if (s < 0 || s >= lat.n_sites) throw std::invalid_argument("run_chain: bad tracked site");
    }

    Rng rng(cfg.seed);
    if (cfg.start == Start::hot) {
        for (int s : lat.mutable_sites)
            lat.spins[s] = (rng() & 1u) ? 1 : -1;
    } else if (cfg.start == Start::cold) {
        for (int s : lat.mutable_sites) lat.spins[s] = 1;
    }

    MeasurementSeries out;
    out.beta = cfg.beta;
    out.n_plaquettes = lat.n_plaquettes;
    out.n_mutable = lat.n_mutable;
    out.products.resize(cfg.track_products.size());

    for (std::int64_t t = 0; t < cfg.thermalization; ++t) metropolis_sweep(lat, cfg.beta, rng);

    std::int64_t accepted = 0;
    std::int64_t proposed = 0;
    const std::int64_t measured_sweeps = cfg.sweeps - cfg.thermalization;
    for (std::int64_t t = 1; t <= measured_sweeps; ++t) {
        accepted += metropolis_sweep(lat, cfg.beta, rng);
        proposed += lat.n_mutable;
        if (t % cfg.measure_every == 0) {
            out.energy.push_back(lat.total_energy());
            double msum = 0.0;
            for (int s : lat.mutable_sites) msum += lat.spins[s];
            out.magnet.push_back(msum / lat.n_mutable);
            for (std::size_t k = 0; k < cfg.track_products.size(); ++k) {
                int prod = 1;
                for (int s : cfg.track_products[k]) prod *= lat.spins[s];
                out.products[k].push_back(static_cast<double>(prod));
            }
        }
    }
    out.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
    return out;
}

stats::BinnedStat MeasurementSeries::u(int bins) const {
    auto e = stats::binned_mean(energy, bins);
    const double n = static_cast<double>(n_plaquettes);
    return {e.mean / n, e.err / n};
}

stats::BinnedStat MeasurementSeries::m(int bins) const { return stats::binned_mean(magnet, bins); }

stats::BinnedStat MeasurementSeries::heat_capacity(int bins) const {
    return stats::jackknife_cv(energy, beta, bins);
}

stats::BinnedStat MeasurementSeries::product(int set, int bins) const {
    return stats::binned_mean(products.at(set), bins);
}

Magnetization magnetization(const SpinLattice& lat) {
    double s = 0.0;
    for (int site : lat.mutable_sites) s += lat.spins[site];
    return {s / lat.n_mutable, lat.bc == Boundary::fixed_plus};
}

stats::BinnedStat corner_correlator(const MeasurementSeries& series, int product_set) {
    return series.product(product_set);
}

HysteresisScan hysteresis_scan(int L, double beta_min, double beta_max, int steps,
                               std::int64_t sweeps_per_point, std::uint64_t seed,
                               double therm_fraction, int measure_every,
                               const std::vector<int>& corner_sites) {
    if (beta_min >= beta_max) throw std::invalid_argument("hysteresis_scan: beta_min < beta_max required");
    if (steps < 1) throw std::invalid_argument("hysteresis_scan: steps >= 1");
    if (therm_fraction < 0.0 || therm_fraction >= 1.0)
        throw std::invalid_argument("hysteresis_scan: therm_fraction in [0,1)");

    HysteresisScan scan;
    scan.L = L;
    scan.seed = seed;
    scan.sweeps_per_point = sweeps_per_point;

    const auto therm = static_cast<std::int64_t>(therm_fraction * static_cast<double>(sweeps_per_point));

    auto run_branch = [&](bool ascending, Start initial, std::uint64_t branch_seed) {
        std::vector<HysteresisPoint> branch;
        SpinLattice lat = make_periodic_lattice(L);
        for (int i = 0; i <= steps; ++i) {
            const int pos = ascending ? i : steps - i;
            const double beta =
                beta_min + (beta_max - beta_min) * static_cast<double>(pos) / static_cast<double>(steps);
            McConfig cfg;
            cfg.beta = beta;
            cfg.sweeps = sweeps_per_point;
            cfg.thermalization = therm;
            cfg.measure_every = measure_every;
            cfg.seed = stream_seed(branch_seed, static_cast<std::uint64_t>(i));
            cfg.start = (i == 0) ? initial : Start::inherit;
            if (!corner_sites.empty()) cfg.track_products.push_back(corner_sites);
            const MeasurementSeries series = run_chain(lat, cfg);
            const auto u = series.u();
            const auto cv = series.heat_capacity();
            const auto m = series.m();
            HysteresisPoint point{beta, u.mean, u.err, cv.mean, cv.err, m.mean, m.err,
                                  series.acceptance_rate, 0.0, 0.0};
            if (!corner_sites.empty()) {
                const auto op = series.product(0);
                point.op = op.mean;
                point.op_err = op.err;
            }
            branch.push_back(point);
        }
        if (!ascending) std::reverse(branch.begin(), branch.end());
        return branch;
    };

    scan.heating = run_branch(true, Start::hot, splitmix64(seed ^ 0x68656174ull));
    scan.cooling = run_branch(false, Start::cold, splitmix64(seed ^ 0x636f6f6cull));
    return scan;
}

}  // namespace xcube::mc
