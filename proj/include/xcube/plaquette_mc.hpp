#pragma once

#include "xcube/rng.hpp"
#include "xcube/stats.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace xcube::mc {

enum class Boundary { periodic, fixed_plus };
enum class Start { hot, cold, inherit };

// Classical plaquette-Ising system: +-1 spins at dual-lattice vertices and
// four-spin plaquette terms, H = -sum_p J_p s_i s_j s_k s_l.
//
// periodic:   L^3 spins; spin index == cube index of lattice::Geometry(L);
//             plaquette index == edge index (its spins are spins_of_edge).
// fixed_plus: L^3 mutable spins embedded in an (L+2)^3 box whose shell is
//             frozen at +1; every plaquette touching at least one mutable
//             spin contributes to the energy. Box site (x,y,z) has index
//             x + M*(y + M*z) with M = L+2; mutable sites are coords 1..L.
struct SpinLattice {
    int L = 0;
    Boundary bc = Boundary::periodic;
    int n_sites = 0;
    int n_mutable = 0;
    int n_plaquettes = 0;

    std::vector<std::int8_t> spins;                // per site, +-1
    std::vector<std::array<int, 4>> plaquettes;    // 4 site ids each
    std::vector<double> couplings;                 // J_p, default 1
    bool uniform_couplings = true;
    double uniform_value = 1.0;

    std::vector<int> mutable_sites;   // site ids in sweep order
    std::vector<int> mutable_index;   // site id -> position in mutable_sites, or -1

    // hot-loop tables, indexed by mutable position m and incident slot j < 12:
    //   partners[(m*12 + j)*3 + t]  three other spins of that plaquette
    //   incident_plaq[m*12 + j]     the plaquette id
    std::vector<std::int32_t> partners;
    std::vector<std::int32_t> incident_plaq;

    void set_coupling(int p, double j);
    void set_all_couplings(double j);
    double total_energy() const;
    double plaquette_product(int p) const {
        const auto& q = plaquettes[p];
        return static_cast<double>(spins[q[0]] * spins[q[1]] * spins[q[2]] * spins[q[3]]);
    }
    bool is_frozen(int site) const { return mutable_index[site] < 0; }
};

SpinLattice make_periodic_lattice(int L);
SpinLattice make_fixed_plus_lattice(int L);

// box site index for fixed_plus coordinates (0..L+1 per direction)
int box_site(int L, int x, int y, int z);
// site id of the mutable spin dual to periodic cube index c (identity for periodic bc)
int site_of_cube(const SpinLattice& lat, int cube);

// Energy change of flipping `site`; throws std::invalid_argument for a frozen
// site. Exactly the 12 incident plaquettes are visited.
double delta_energy(const SpinLattice& lat, int site);

// One Metropolis sweep in fixed sequential site order; returns the number of
// accepted flips. Deterministic given (state, rng state).
int metropolis_sweep(SpinLattice& lat, double beta, Rng& rng);

struct McConfig {
    double beta = 0.0;
    std::int64_t sweeps = 0;
    std::int64_t thermalization = 0;
    int measure_every = 1;
    std::uint64_t seed = 1;
    Start start = Start::cold;
    // optional products of spin sets (site ids) recorded at each measurement
    std::vector<std::vector<int>> track_products;
};

struct MeasurementSeries {
    double beta = 0.0;
    int n_plaquettes = 0;
    int n_mutable = 0;
    double acceptance_rate = 0.0;

    std::vector<double> energy;                   // E_total per measurement
    std::vector<double> magnet;                   // mean mutable spin per measurement
    std::vector<std::vector<double>> products;    // [set][record]

    std::size_t n_records() const { return energy.size(); }
    stats::BinnedStat u(int bins = 20) const;            // <E>/N_plaq with binning error
    stats::BinnedStat m(int bins = 20) const;
    stats::BinnedStat heat_capacity(int bins = 20) const;  // beta^2 Var(E), jackknife
    stats::BinnedStat product(int set, int bins = 20) const;
};

// Thermalize then measure. Number of records is
// floor((sweeps - thermalization)/measure_every); validates the config.
MeasurementSeries run_chain(SpinLattice& lat, const McConfig& cfg);

// magnetization per mutable spin; only an order parameter under fixed_plus bc
struct Magnetization {
    double value = 0.0;
    bool order_parameter_valid = false;
};
Magnetization magnetization(const SpinLattice& lat);

// binned time average of the product of 1..8 listed spins
stats::BinnedStat corner_correlator(const MeasurementSeries& series, int product_set);

struct HysteresisPoint {
    double beta = 0.0;
    double u = 0.0, u_err = 0.0;
    double cv = 0.0, cv_err = 0.0;
    double m = 0.0, m_err = 0.0;
    double acc_rate = 0.0;
    double op = 0.0, op_err = 0.0;  // tracked corner product, when requested
};

struct HysteresisScan {
    int L = 0;
    std::uint64_t seed = 0;
    std::int64_t sweeps_per_point = 0;
    std::vector<HysteresisPoint> heating;  // ascending beta from a hot start
    std::vector<HysteresisPoint> cooling;  // descending beta from a cold start
};

// Both branches inherit state between neighbouring beta points; at each point
// therm_fraction of the sweeps are discarded before measuring. A nonempty
// corner_sites set is tracked as a spin product into op/op_err.
HysteresisScan hysteresis_scan(int L, double beta_min, double beta_max, int steps,
                               std::int64_t sweeps_per_point, std::uint64_t seed,
                               double therm_fraction = 0.25, int measure_every = 5,
                               const std::vector<int>& corner_sites = {});

}  // namespace xcube::mc
