#include "xcube/duality.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace xcube::duality {

using lattice::Geometry;

namespace {

void validate_membrane(const Membrane& mem) {
    if (mem.cells.empty()) throw std::invalid_argument("membrane: needs at least one cell");
    std::set<std::array<int, 2>> seen(mem.cells.begin(), mem.cells.end());
    if (seen.size() != mem.cells.size())
        throw std::invalid_argument("membrane: duplicate cells");
}

}  // namespace

std::vector<int> membrane_edge_list(const Membrane& mem, const Geometry& g) {
    validate_membrane(mem);
    const int n = static_cast<int>(mem.normal);
    const int u = (n + 1) % 3, v = (n + 2) % 3;
    std::vector<int> edges;
    edges.reserve(mem.cells.size());
    for (const auto& cell : mem.cells) {
        lattice::Vec3 base;
        base[n] = mem.plane;
        base[u] = cell[0];
        base[v] = cell[1];
        edges.push_back(g.edge_index(base, mem.normal));
    }
    return edges;
}

BitVec membrane_edge_mask(const Membrane& mem, const Geometry& g) {
    BitVec mask(static_cast<std::size_t>(g.n_edges()));
    for (int e : membrane_edge_list(mem, g)) mask.set(e);
    return mask;
}

CornerSet corner_set(const Membrane& mem, const Geometry& g) {
    std::map<int, int> multiplicity;
    for (int e : membrane_edge_list(mem, g))
        for (int c : g.spins_of_edge(e)) ++multiplicity[c];
    CornerSet out;
    for (const auto& [cube, count] : multiplicity)
        if (count % 2) out.spins.push_back(cube);
    return out;
}

bool membrane_identity_check(std::span<const std::int8_t> spins, const Membrane& mem,
                             const Geometry& g) {
    if (spins.size() != static_cast<std::size_t>(g.n_cubes()))
        throw std::invalid_argument("membrane_identity_check: one spin per cube required");
    int lhs = 1;
    for (int e : membrane_edge_list(mem, g)) {
        int prod = 1;
        for (int c : g.spins_of_edge(e)) prod *= spins[c];
        lhs *= prod;
    }
    int rhs = 1;
    for (int c : corner_set(mem, g).spins) rhs *= spins[c];
    return lhs == rhs;
}

int corner_min_separation(const CornerSet& corners, const Geometry& g) {
    const int L = g.L();
    auto dist = [L](int a, int b) {
        const int d = std::abs(a - b);
        return std::min(d, L - d);
    };
    int best = L;  // max possible periodic separation is L/2, so L means "no pair"
    for (std::size_t i = 0; i < corners.spins.size(); ++i)
        for (std::size_t j = i + 1; j < corners.spins.size(); ++j) {
            const auto a = g.cube_at(corners.spins[i]);
            const auto b = g.cube_at(corners.spins[j]);
            // corners share the coordinate along the membrane normal; the
            // largest periodic axis distance is the in-plane separation
            const int sep = std::max({dist(a.x, b.x), dist(a.y, b.y), dist(a.z, b.z)});
            best = std::min(best, sep);
        }
    return best;
}

GeValue ge_from_u(double u) {
    GeValue out;
    if (u > 0.0) {
        u = 0.0;
        out.clamped = true;
    } else if (u < -1.0) {
        u = -1.0;
        out.clamped = true;
    }
    out.value = 1.0 - u * u;
    return out;
}

double fidelity_from_cv(double beta, double dbeta, double cv) {
    if (beta <= 0.0) throw std::domain_error("fidelity_from_cv: beta must be positive");
    return 1.0 - cv * dbeta * dbeta / (8.0 * beta * beta);
}

OrderParameterResult foliated_order_parameter_mc(const Membrane& mem, const Geometry& g,
                                                 mc::SpinLattice& lat, const mc::McConfig& cfg) {
    if (lat.L != g.L()) throw std::invalid_argument("foliated_order_parameter_mc: size mismatch");
    if (lat.bc == mc::Boundary::fixed_plus) {
        // the corner reduction must not wrap through the frozen shell
        for (const auto& cell : mem.cells)
            if (cell[0] < 1 || cell[0] > g.L() - 1 || cell[1] < 1 || cell[1] > g.L() - 1)
                throw std::invalid_argument(
                    "foliated_order_parameter_mc: membrane cells must stay inside 1..L-1 under "
                    "fixed boundaries");
    }
    const CornerSet corners = corner_set(mem, g);
    std::vector<int> sites;
    sites.reserve(corners.spins.size());
    for (int cube : corners.spins) sites.push_back(mc::site_of_cube(lat, cube));

    mc::McConfig run_cfg = cfg;
    run_cfg.track_products.push_back(sites);
    const int set = static_cast<int>(run_cfg.track_products.size()) - 1;
    const auto series = mc::run_chain(lat, run_cfg);

    const auto op = mc::corner_correlator(series, set);
    const auto m = series.m();

    OrderParameterResult out;
    out.beta = cfg.beta;
    out.op = op.mean;
    out.op_err = op.err;
    out.m = m.mean;
    out.m_err = m.err;
    out.m4 = m.mean * m.mean * m.mean * m.mean;
    out.corner_count = static_cast<int>(corners.spins.size());
    out.separation_ok = 4 * corner_min_separation(corners, g) >= g.L();
    return out;
}

double foliated_order_parameter_exact(const exact::CubicStructureEnsemble& ens, double beta,
                                      const Membrane& mem, const Geometry& g) {
    return exact::membrane_expectation_exact(ens, beta, membrane_edge_mask(mem, g));
}

namespace {

JumpEstimate steepest_jump(const std::vector<SeriesPoint>& series) {
    JumpEstimate jump;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double d = series[i + 1].value - series[i].value;
        if (std::abs(d) > std::abs(jump.size)) {
            jump.size = d;
            jump.beta = 0.5 * (series[i].beta + series[i + 1].beta);
        }
    }
    return jump;
}

std::vector<SeriesPoint> u_series(const std::vector<mc::HysteresisPoint>& branch) {
    std::vector<SeriesPoint> out;
    out.reserve(branch.size());
    for (const auto& p : branch) out.push_back({p.beta, p.u, p.u_err});
    return out;
}

}  // namespace

TransitionReport transition_report(const mc::HysteresisScan& scan,
                                   std::span<const SeriesPoint> op_series, double window_lo,
                                   double window_hi, double fidelity_dbeta, double jump_lo,
                                   double jump_hi, double beta_star) {
    const auto& heat = scan.heating;
    const auto& cool = scan.cooling;
    if (heat.size() < 5 || heat.size() != cool.size())
        throw std::invalid_argument("transition_report: need matching branches with >= 5 points");
    for (std::size_t i = 0; i < heat.size(); ++i)
        if (std::abs(heat[i].beta - cool[i].beta) > 1e-12)
            throw std::invalid_argument("transition_report: branch beta grids differ");
    const double eps = 1e-9;
    if (heat.front().beta > window_lo + eps || heat.back().beta < window_hi - eps)
        throw std::invalid_argument("transition_report: scan does not cover the required window");

    TransitionReport rep;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;
    rep.jump_window_lo = jump_lo;
    rep.jump_window_hi = jump_hi;
    rep.fidelity_dbeta = fidelity_dbeta;

    const auto uh = u_series(heat);
    const auto uc = u_series(cool);
    rep.u_heating = steepest_jump(uh);
    rep.u_cooling = steepest_jump(uc);
    for (std::size_t i = 0; i < heat.size(); ++i) {
        const double gap = std::abs(heat[i].u - cool[i].u);
        if (gap > rep.u_max_branch_gap) {
            rep.u_max_branch_gap = gap;
            rep.u_gap_beta = heat[i].beta;
        }
    }

    std::vector<SeriesPoint> geh, gec;
    bool ordering_ok = true;
    for (std::size_t i = 0; i < heat.size(); ++i) {
        const auto gh = ge_from_u(heat[i].u);
        const auto gc = ge_from_u(cool[i].u);
        rep.ge_any_clamped = rep.ge_any_clamped || gh.clamped || gc.clamped;
        geh.push_back({heat[i].beta, gh.value, 0.0});
        gec.push_back({cool[i].beta, gc.value, 0.0});
        rep.ge_max_branch_gap = std::max(rep.ge_max_branch_gap, std::abs(gh.value - gc.value));
    }
    // compare the phases only inside the metastability window, i.e. where the
    // branch separation is both statistically significant and a sizable
    // fraction of the full hysteresis gap
    for (std::size_t i = 0; i < heat.size(); ++i) {
        const double sigma = std::hypot(heat[i].u_err, cool[i].u_err);
        const double gap = std::abs(heat[i].u - cool[i].u);
        if (gap > 3.0 * sigma && gap > 0.1 * rep.u_max_branch_gap &&
            geh[i].value <= gec[i].value)
            ordering_ok = false;
    }
    rep.ge_disordered_above_ordered = ordering_ok;
    rep.ge_heating = steepest_jump(geh);
    rep.ge_cooling = steepest_jump(gec);

    auto cv_peak = [](const std::vector<mc::HysteresisPoint>& branch) {
        double best = -1.0, at = branch.front().beta;
        for (const auto& p : branch)
            if (p.cv > best) {
                best = p.cv;
                at = p.beta;
            }
        return at;
    };
    rep.cv_peak_beta_heating = cv_peak(heat);
    rep.cv_peak_beta_cooling = cv_peak(cool);

    rep.fidelity_min_value = 1.0;
    for (const auto* branch : {&heat, &cool})
        for (const auto& p : *branch) {
            const double f = fidelity_from_cv(p.beta, fidelity_dbeta, p.cv);
            if (f < rep.fidelity_min_value) {
                rep.fidelity_min_value = f;
                rep.fidelity_min_beta = p.beta;
            }
        }

    std::vector<double> jump_betas = {rep.u_heating.beta, rep.u_cooling.beta,
                                      rep.cv_peak_beta_heating, rep.cv_peak_beta_cooling};
    if (!op_series.empty()) {
        rep.has_order_parameter = true;
        rep.op_jump = steepest_jump(std::vector<SeriesPoint>(op_series.begin(), op_series.end()));
        jump_betas.push_back(rep.op_jump.beta);
    }
    rep.all_jumps_in_window =
        std::all_of(jump_betas.begin(), jump_betas.end(), [&](double b) {
            return b >= rep.jump_window_lo - eps && b <= rep.jump_window_hi + eps;
        });
    const auto [lo, hi] = std::minmax(rep.u_heating.beta, rep.u_cooling.beta);
    rep.brackets_transition = lo <= beta_star && beta_star <= hi;
    return rep;
}

std::string transition_report_json(const TransitionReport& r) {
    nlohmann::json j;
    j["window"] = {r.window_lo, r.window_hi};
    j["jump_window"] = {r.jump_window_lo, r.jump_window_hi};
    j["u"] = {
        {"heating_jump", {{"beta", r.u_heating.beta}, {"size", r.u_heating.size}}},
        {"cooling_jump", {{"beta", r.u_cooling.beta}, {"size", r.u_cooling.size}}},
        {"max_branch_gap", r.u_max_branch_gap},
        {"gap_beta", r.u_gap_beta},
    };
    j["global_entanglement"] = {
        {"heating_jump", {{"beta", r.ge_heating.beta}, {"size", r.ge_heating.size}}},
        {"cooling_jump", {{"beta", r.ge_cooling.beta}, {"size", r.ge_cooling.size}}},
        {"max_branch_gap", r.ge_max_branch_gap},
        {"disordered_above_ordered", r.ge_disordered_above_ordered},
        {"any_clamped", r.ge_any_clamped},
    };
    j["heat_capacity"] = {
        {"peak_beta_heating", r.cv_peak_beta_heating},
        {"peak_beta_cooling", r.cv_peak_beta_cooling},
    };
    j["fidelity"] = {
        {"dbeta", r.fidelity_dbeta},
        {"min_beta", r.fidelity_min_beta},
        {"min_value", r.fidelity_min_value},
    };
    if (r.has_order_parameter)
        j["order_parameter"] = {
            {"jump", {{"beta", r.op_jump.beta}, {"size", r.op_jump.size}}},
        };
    j["all_jumps_in_window"] = r.all_jumps_in_window;
    j["brackets_transition"] = r.brackets_transition;
    return j.dump(2);
}

}  // namespace xcube::duality
