#include "xcube/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace xcube::exact {

namespace {

constexpr int kFreeGuard = 12;   // 2^12 configurations without opt-in
constexpr int kLargeGuard = 27;  // 2^27 behind allow_large

}  // namespace

OracleResult classical_oracle(const mc::SpinLattice& lat, double beta, const OracleOptions& opts) {
    const int nm = lat.n_mutable;
    if (nm > kLargeGuard)
        throw std::invalid_argument("classical_oracle: " + std::to_string(nm) +
                                    " mutable spins exceed the enumeration guard");
    if (nm > kFreeGuard && !opts.allow_large)
        throw std::invalid_argument("classical_oracle: sweeps beyond 2^" +
                                    std::to_string(kFreeGuard) +
                                    " configurations require allow_large");
    if ((opts.per_plaquette || opts.per_config_probs) && nm > kFreeGuard)
        throw std::invalid_argument(
            "classical_oracle: per-plaquette / per-config output only below 2^12 configurations");
    for (const auto& set : opts.spin_products)
        for (int s : set)
            if (s < 0 || s >= lat.n_sites)
                throw std::invalid_argument("classical_oracle: bad site in spin product");

    const int np = lat.n_plaquettes;
    const std::uint64_t total = std::uint64_t{1} << nm;

    // enumeration state: mutable spins all +1, frozen spins as built
    std::vector<std::int8_t> spins = lat.spins;
    for (int s : lat.mutable_sites) spins[s] = 1;
    std::vector<std::int8_t> prod(np);
    int nviol = 0;
    for (int p = 0; p < np; ++p) {
        const auto& q = lat.plaquettes[p];
        prod[p] = static_cast<std::int8_t>(spins[q[0]] * spins[q[1]] * spins[q[2]] * spins[q[3]]);
        if (prod[p] < 0) ++nviol;
    }
    double energy = 0.0;
    for (int p = 0; p < np; ++p) energy -= lat.couplings[p] * prod[p];

    // weights: with uniform couplings the energy is J*(2v - np) for violation
    // count v, so the 0..np weights are tabulated; otherwise shift by the
    // worst-case exponent so nothing overflows
    std::vector<double> wtab;
    double x0 = 0.0;
    if (lat.uniform_couplings) {
        std::vector<double> expo(np + 1);
        for (int v = 0; v <= np; ++v) expo[v] = -beta * lat.uniform_value * (2.0 * v - np);
        x0 = *std::max_element(expo.begin(), expo.end());
        wtab.resize(np + 1);
        for (int v = 0; v <= np; ++v) wtab[v] = std::exp(expo[v] - x0);
    } else {
        double j_abs = 0.0;
        for (double j : lat.couplings) j_abs += std::abs(j);
        x0 = beta * j_abs;
    }

    // tracked spin products: flip membership per mutable index
    const std::size_t nsets = opts.spin_products.size();
    std::vector<int> set_prod(nsets, 1);
    std::vector<std::vector<int>> sets_of_mutable(nm);
    for (std::size_t k = 0; k < nsets; ++k) {
        int pr = 1;
        for (int s : opts.spin_products[k]) pr *= spins[s];
        set_prod[k] = pr;
        for (int s : opts.spin_products[k]) {
            const int m = lat.mutable_index[s];
            if (m >= 0) sets_of_mutable[m].push_back(static_cast<int>(k));
        }
    }

    long double w0 = 0, w1 = 0, w2 = 0, wm = 0;
    std::vector<long double> acc_pe;
    if (opts.per_plaquette) acc_pe.assign(np, 0);
    std::vector<long double> acc_sets(nsets, 0);
    OracleResult out;
    if (opts.per_config_probs) out.config_probs.assign(total, 0.0);

    long long magsum = nm;  // all mutable spins +1 initially

    for (std::uint64_t i = 0; i < total; ++i) {
        const double w =
            lat.uniform_couplings ? wtab[nviol] : std::exp(-beta * energy - x0);
        const double e = lat.uniform_couplings ? lat.uniform_value * (2.0 * nviol - np) : energy;
        w0 += w;
        w1 += static_cast<long double>(w) * e;
        w2 += static_cast<long double>(w) * e * e;
        wm += static_cast<long double>(w) * magsum;
        if (opts.per_plaquette)
            for (int p = 0; p < np; ++p) acc_pe[p] += prod[p] > 0 ? w : -w;
        for (std::size_t k = 0; k < nsets; ++k) acc_sets[k] += set_prod[k] > 0 ? w : -w;
        if (opts.per_config_probs) out.config_probs[i ^ (i >> 1)] = w;

        const std::uint64_t next = i + 1;
        if (next >= total) break;
        const int m = std::countr_zero(next);
        const int site = lat.mutable_sites[m];
        spins[site] = static_cast<std::int8_t>(-spins[site]);
        magsum += 2 * spins[site];
        for (int j = 0; j < 12; ++j) {
            const int p = lat.incident_plaq[m * 12 + j];
            energy += 2.0 * lat.couplings[p] * prod[p];
            prod[p] = static_cast<std::int8_t>(-prod[p]);
            nviol += prod[p] < 0 ? 1 : -1;
        }
        for (int k : sets_of_mutable[m]) set_prod[k] = -set_prod[k];
    }

    out.logZ = static_cast<double>(std::log(w0)) + x0;
    out.mean_E = static_cast<double>(w1 / w0);
    out.var_E = static_cast<double>(w2 / w0) - out.mean_E * out.mean_E;
    out.magnetization = static_cast<double>(wm / w0) / nm;
    if (opts.per_plaquette) {
        out.plaquette_expectations.resize(np);
        for (int p = 0; p < np; ++p)
            out.plaquette_expectations[p] = static_cast<double>(acc_pe[p] / w0);
    }
    if (opts.per_config_probs) {
        const double norm = static_cast<double>(w0);
        for (auto& v : out.config_probs) v /= norm;
    }
    out.spin_product_means.resize(nsets);
    for (std::size_t k = 0; k < nsets; ++k)
        out.spin_product_means[k] = static_cast<double>(acc_sets[k] / w0);
    return out;
}

}  // namespace xcube::exact
