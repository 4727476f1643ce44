#pragma once

#include "xcube/exact.hpp"
#include "xcube/lattice.hpp"
#include "xcube/plaquette_mc.hpp"

#include <span>
#include <string>
#include <vector>

namespace xcube::duality {

// A planar membrane: a set of parallel edges, one per 2D cell. Cell (u,v)
// names the edge with axis `normal`, coordinate `plane` along the normal and
// in-plane coordinates u,v on the axes (normal+1)%3 and (normal+2)%3.
struct Membrane {
    lattice::Axis normal = lattice::Axis::Z;
    int plane = 0;
    std::vector<std::array<int, 2>> cells;
};

std::vector<int> membrane_edge_list(const Membrane& mem, const lattice::Geometry& g);
BitVec membrane_edge_mask(const Membrane& mem, const lattice::Geometry& g);

// Dual spins incident to an odd number of member plaquettes (everything even
// cancels through s^2 = 1). Sorted cube indices; always of even cardinality.
struct CornerSet {
    std::vector<int> spins;
};

CornerSet corner_set(const Membrane& mem, const lattice::Geometry& g);

// Checks prod_{p in A}(s_i s_j s_k s_l)_p == prod_{corners} s_c on a concrete
// spin configuration (one +-1 value per cube). Must hold for every input.
bool membrane_identity_check(std::span<const std::int8_t> spins, const Membrane& mem,
                             const lattice::Geometry& g);

// pairwise in-plane L-infinity separation of the corners, under the periodic
// metric; the m^4 comparison wants min_separation >= L/4
int corner_min_separation(const CornerSet& corners, const lattice::Geometry& g);

struct GeValue {
    double value = 0.0;
    bool clamped = false;  // u fell outside [-1, 0] and was clamped
};

// GE = 1 - u^2 for internal energy per plaquette u in [-1, 0]
GeValue ge_from_u(double u);

// F = 1 - cv dbeta^2 / (8 beta^2); throws std::domain_error at beta = 0
double fidelity_from_cv(double beta, double dbeta, double cv);

struct OrderParameterResult {
    double beta = 0.0;
    double op = 0.0, op_err = 0.0;
    double m = 0.0, m_err = 0.0;
    double m4 = 0.0;
    int corner_count = 0;
    bool separation_ok = false;  // corners >= L/4 apart in-plane
};

// MC route: time average of the corner-spin product (the derivative identity
// reduces <O_A> to exactly this product). Runs the chain on `lat`.
OrderParameterResult foliated_order_parameter_mc(const Membrane& mem, const lattice::Geometry& g,
                                                 mc::SpinLattice& lat, const mc::McConfig& cfg);

// exact route via the structure ensemble
double foliated_order_parameter_exact(const exact::CubicStructureEnsemble& ens, double beta,
                                      const Membrane& mem, const lattice::Geometry& g);

struct SeriesPoint {
    double beta = 0.0;
    double value = 0.0;
    double err = 0.0;
};

struct JumpEstimate {
    double beta = 0.0;  // midpoint of the steepest consecutive pair
    double size = 0.0;  // value change across it
};

struct TransitionReport {
    double window_lo = 0.0, window_hi = 0.0;       // required scan coverage
    double jump_window_lo = 0.0, jump_window_hi = 0.0;  // where jumps must land

    JumpEstimate u_heating, u_cooling;
    double u_max_branch_gap = 0.0;
    double u_gap_beta = 0.0;

    JumpEstimate ge_heating, ge_cooling;
    double ge_max_branch_gap = 0.0;
    bool ge_disordered_above_ordered = false;  // where branches disagree
    bool ge_any_clamped = false;

    double cv_peak_beta_heating = 0.0, cv_peak_beta_cooling = 0.0;
    double fidelity_dbeta = 0.0;
    double fidelity_min_beta = 0.0;  // deepest dip over both branches
    double fidelity_min_value = 1.0;

    bool has_order_parameter = false;
    JumpEstimate op_jump;

    bool all_jumps_in_window = false;
    bool brackets_transition = false;  // jump estimates straddle beta* = 0.551
};

// Assembles the three transition indicators from scan data. Throws
// std::invalid_argument when the branches do not cover [window_lo, window_hi].
// Jump estimates are checked against [jump_lo, jump_hi] and against the
// bracketing anchor beta_star.
TransitionReport transition_report(const mc::HysteresisScan& scan,
                                   std::span<const SeriesPoint> op_series = {},
                                   double window_lo = 0.48, double window_hi = 0.62,
                                   double fidelity_dbeta = 0.01, double jump_lo = 0.50,
                                   double jump_hi = 0.62, double beta_star = 0.551);

std::string transition_report_json(const TransitionReport& report);

}  // namespace xcube::duality
