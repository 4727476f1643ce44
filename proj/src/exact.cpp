#include "xcube/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace xcube::exact {

namespace {

// bit positions of each basis vector, for cheap Gray-walk toggles
std::vector<std::vector<int>> basis_bit_lists(const std::vector<BitVec>& basis) {
    std::vector<std::vector<int>> lists(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto& b = basis[j];
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b.test(i)) lists[j].push_back(static_cast<int>(i));
    }
    return lists;
}

// structure for Gray code gray(i) = i ^ (i >> 1)
BitVec structure_at(const std::vector<BitVec>& basis, int n_edges, std::uint64_t index) {
    BitVec m(static_cast<std::size_t>(n_edges));
    const std::uint64_t gray = index ^ (index >> 1);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if ((gray >> j) & 1u) m ^= basis[j];
    return m;
}

// Walk structures with indices in [i0, i1), calling visit(m, Q) for each and
// flip(j) after each step; both see the state in index order.
template <class Visit>
void gray_walk(const std::vector<BitVec>& basis, const std::vector<std::vector<int>>& bits,
               int n_edges, std::uint64_t i0, std::uint64_t i1, Visit&& visit) {
    BitVec m = structure_at(basis, n_edges, i0);
    int q = static_cast<int>(m.popcount());
    for (std::uint64_t i = i0; i < i1; ++i) {
        visit(m, q);
        const std::uint64_t next = i + 1;
        if (next >= i1) break;
        const int j = std::countr_zero(next);
        for (int b : bits[static_cast<std::size_t>(j)]) {
            if (m.test(b)) {
                m.flip(b);
                --q;
            } else {
                m.flip(b);
                ++q;
            }
        }
    }
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> chunk_ranges(std::uint64_t total, int chunks) {
    if (chunks < 1) throw std::invalid_argument("chunks must be positive");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    const std::uint64_t base = total / static_cast<std::uint64_t>(chunks);
    const std::uint64_t extra = total % static_cast<std::uint64_t>(chunks);
    std::uint64_t at = 0;
    for (int c = 0; c < chunks; ++c) {
        const std::uint64_t len = base + (static_cast<std::uint64_t>(c) < extra ? 1 : 0);
        out.emplace_back(at, at + len);
        at += len;
    }
    return out;
}

// run one worker per chunk; results land in chunk order for a fixed merge
template <class Work>
void run_chunked(std::uint64_t total, int chunks, Work&& work) {
    const auto ranges = chunk_ranges(total, chunks);
    if (chunks == 1) {
        work(0, ranges[0].first, ranges[0].second);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(ranges.size());
    for (std::size_t c = 0; c < ranges.size(); ++c)
        pool.emplace_back([&, c] { work(static_cast<int>(c), ranges[c].first, ranges[c].second); });
    for (auto& t : pool) t.join();
}

// log-sum-exp over ln(count) + beta*(N-2Q), in ascending Q order
double log_partition(const CubicStructureEnsemble& ens, double beta) {
    const int n = ens.n_edges;
    double mx = -std::numeric_limits<double>::infinity();
    for (int q = 0; q <= n; ++q)
        if (ens.count_by_q[q])
            mx = std::max(mx, std::log(static_cast<double>(ens.count_by_q[q])) + beta * (n - 2 * q));
    double s = 0.0;
    for (int q = 0; q <= n; ++q)
        if (ens.count_by_q[q])
            s += std::exp(std::log(static_cast<double>(ens.count_by_q[q])) + beta * (n - 2 * q) - mx);
    return mx + std::log(s);
}

}  // namespace

CubicStructureEnsemble build_ensemble(const lattice::Geometry& g, const BuildOptions& opts) {
    const int n = g.n_edges();
    std::vector<BitVec> supports;
    supports.reserve(g.n_cubes());
    for (int c = 0; c < g.n_cubes(); ++c) {
        BitVec v(static_cast<std::size_t>(n));
        for (int e : g.edges_of_cube(c)) v.set(e);
        supports.push_back(std::move(v));
    }
    auto basis = gf2_reduce(std::move(supports));
    const int rank = static_cast<int>(basis.size());
    if (rank > opts.rank_cap)
        throw std::runtime_error("build_ensemble: cube-operator rank " + std::to_string(rank) +
                                 " exceeds the enumeration cap " + std::to_string(opts.rank_cap) +
                                 " (raise rank_cap to enumerate 2^" + std::to_string(rank) +
                                 " structures)");

    CubicStructureEnsemble ens;
    ens.n_edges = n;
    ens.rank = rank;
    ens.basis = std::move(basis);
    const auto bits = basis_bit_lists(ens.basis);
    const std::uint64_t total = ens.n_structures();
    const int chunks = std::max(1, opts.chunks);

    // integer occupation histograms per chunk; the merge (plain integer
    // addition in chunk order) is exact, so results do not depend on the
    // chunk count
    std::vector<std::vector<std::uint64_t>> q_hist(chunks, std::vector<std::uint64_t>(n + 1, 0));
    std::vector<std::vector<std::uint64_t>> e_hist;
    if (opts.edge_tables)
        e_hist.assign(chunks, std::vector<std::uint64_t>(static_cast<std::size_t>(n) * (n + 1), 0));

    run_chunked(total, chunks, [&](int c, std::uint64_t i0, std::uint64_t i1) {
        auto& qh = q_hist[c];
        if (opts.edge_tables) {
            auto& eh = e_hist[c];
            gray_walk(ens.basis, bits, n, i0, i1, [&](const BitVec& m, int q) {
                ++qh[q];
                const auto words = m.words();
                for (std::size_t w = 0; w < words.size(); ++w) {
                    std::uint64_t bitsw = words[w];
                    while (bitsw) {
                        const int p = static_cast<int>(64 * w) + std::countr_zero(bitsw);
                        bitsw &= bitsw - 1;
                        ++eh[static_cast<std::size_t>(p) * (n + 1) + q];
                    }
                }
            });
        } else {
            gray_walk(ens.basis, bits, n, i0, i1, [&](const BitVec&, int q) { ++qh[q]; });
        }
    });

    ens.count_by_q.assign(n + 1, 0);
    for (int c = 0; c < chunks; ++c)
        for (int q = 0; q <= n; ++q) ens.count_by_q[q] += q_hist[c][q];
    if (opts.edge_tables) {
        ens.edge_count.assign(static_cast<std::size_t>(n) * (n + 1), 0);
        for (int c = 0; c < chunks; ++c)
            for (std::size_t i = 0; i < ens.edge_count.size(); ++i) ens.edge_count[i] += e_hist[c][i];
    }
    return ens;
}

WeightedEnsembleStats ensemble_stats(const CubicStructureEnsemble& ens, double beta) {
    if (beta < 0.0) throw std::invalid_argument("ensemble_stats: beta must be nonnegative");
    const int n = ens.n_edges;
    WeightedEnsembleStats st;
    st.beta = beta;
    st.logZ = log_partition(ens, beta);
    double mean = 0.0;
    for (int q = 0; q <= n; ++q)
        if (ens.count_by_q[q]) {
            const double p = static_cast<double>(ens.count_by_q[q]) *
                             std::exp(beta * (n - 2 * q) - st.logZ);
            mean += p * static_cast<double>(2 * q - n);
        }
    double var = 0.0;
    for (int q = 0; q <= n; ++q)
        if (ens.count_by_q[q]) {
            const double p = static_cast<double>(ens.count_by_q[q]) *
                             std::exp(beta * (n - 2 * q) - st.logZ);
            const double d = static_cast<double>(2 * q - n) - mean;
            var += p * d * d;
        }
    st.mean_E = mean;
    st.var_E = var;
    return st;
}

double heat_capacity(const WeightedEnsembleStats& stats) {
    return stats.beta * stats.beta * stats.var_E;
}

double fidelity_exact(const CubicStructureEnsemble& ens, double beta, double dbeta) {
    if (beta < 0.0 || beta + dbeta < 0.0)
        throw std::invalid_argument("fidelity_exact: both beta and beta+dbeta must be nonnegative");
    const double mid = log_partition(ens, beta + 0.5 * dbeta);
    const double a = log_partition(ens, beta);
    const double b = log_partition(ens, beta + dbeta);
    return std::exp(mid - 0.5 * a - 0.5 * b);
}

std::vector<double> w_minus_all_edges(const CubicStructureEnsemble& ens, double beta) {
    if (ens.edge_count.empty())
        throw std::logic_error("w_minus_all_edges: ensemble built without edge tables");
    const int n = ens.n_edges;
    const double logZ = log_partition(ens, beta);
    std::vector<double> term(n + 1, 0.0);
    for (int q = 0; q <= n; ++q) term[q] = std::exp(beta * (n - 2 * q) - logZ);
    std::vector<double> out(n, 0.0);
    for (int p = 0; p < n; ++p) {
        const std::uint64_t* row = ens.edge_row(p);
        double s = 0.0;
        for (int q = 0; q <= n; ++q)
            if (row[q]) s += static_cast<double>(row[q]) * term[q];
        out[p] = s;
    }
    return out;
}

OneQubitDiagonal one_qubit_diagonal(const CubicStructureEnsemble& ens, double beta, int edge) {
    if (edge < 0 || edge >= ens.n_edges) throw std::invalid_argument("one_qubit_diagonal: bad edge");
    if (ens.edge_count.empty())
        throw std::logic_error("one_qubit_diagonal: ensemble built without edge tables");
    const int n = ens.n_edges;
    const double logZ = log_partition(ens, beta);
    const std::uint64_t* row = ens.edge_row(edge);
    double wm = 0.0;
    for (int q = 0; q <= n; ++q)
        if (row[q]) wm += static_cast<double>(row[q]) * std::exp(beta * (n - 2 * q) - logZ);
    return {1.0 - wm, wm};
}

GlobalEntanglement global_entanglement(const CubicStructureEnsemble& ens, double beta) {
    const auto wm = w_minus_all_edges(ens, beta);
    const int n = ens.n_edges;
    double purity_sum = 0.0;
    for (double w : wm) purity_sum += (1.0 - w) * (1.0 - w) + w * w;
    const auto st = ensemble_stats(ens, beta);
    const double u = st.mean_E / n;
    return {2.0 * (1.0 - purity_sum / n), 1.0 - u * u};
}

double membrane_expectation_exact(const CubicStructureEnsemble& ens, double beta,
                                  const BitVec& edge_mask, int chunks) {
    if (edge_mask.size() != static_cast<std::size_t>(ens.n_edges))
        throw std::invalid_argument("membrane_expectation_exact: mask length mismatch");
    const int n = ens.n_edges;
    const auto bits = basis_bit_lists(ens.basis);
    std::vector<int> parity_delta(ens.basis.size());
    for (std::size_t j = 0; j < ens.basis.size(); ++j)
        parity_delta[j] = BitVec::and_parity(ens.basis[j], edge_mask);

    const int nch = std::max(1, chunks);
    // counts[c][parity][Q]
    std::vector<std::vector<std::uint64_t>> counts(nch, std::vector<std::uint64_t>(2 * (n + 1), 0));
    run_chunked(ens.n_structures(), nch, [&](int c, std::uint64_t i0, std::uint64_t i1) {
        auto& cnt = counts[c];
        const BitVec m0 = structure_at(ens.basis, n, i0);
        int parity = BitVec::and_parity(m0, edge_mask);
        BitVec m = m0;
        int q = static_cast<int>(m.popcount());
        for (std::uint64_t i = i0; i < i1; ++i) {
            ++cnt[static_cast<std::size_t>(parity) * (n + 1) + q];
            const std::uint64_t next = i + 1;
            if (next >= i1) break;
            const int j = std::countr_zero(next);
            for (int b : bits[static_cast<std::size_t>(j)]) {
                if (m.test(b)) --q; else ++q;
                m.flip(b);
            }
            parity ^= parity_delta[static_cast<std::size_t>(j)];
        }
    });

    std::vector<std::uint64_t> even(n + 1, 0), odd(n + 1, 0);
    for (int c = 0; c < nch; ++c)
        for (int q = 0; q <= n; ++q) {
            even[q] += counts[c][q];
            odd[q] += counts[c][(n + 1) + q];
        }
    const double logZ = log_partition(ens, beta);
    double s = 0.0;
    for (int q = 0; q <= n; ++q) {
        const double net = static_cast<double>(even[q]) - static_cast<double>(odd[q]);
        if (net != 0.0) s += net * std::exp(beta * (n - 2 * q) - logZ);
    }
    return s;
}

CoupledObservables exact_with_couplings(const CubicStructureEnsemble& ens, double beta,
                                        std::span<const double> couplings,
                                        std::span<const BitVec> membranes, bool per_edge,
                                        int chunks) {
    const int n = ens.n_edges;
    if (static_cast<int>(couplings.size()) != n)
        throw std::invalid_argument("exact_with_couplings: need one coupling per edge");

    double j_sum = 0.0, j_abs = 0.0;
    for (double j : couplings) {
        j_sum += j;
        j_abs += std::abs(j);
    }
    // fixed shift: exponent beta*(sum J - 2 S) <= beta*sum|J|, so shifted
    // weights never overflow
    const double x0 = beta * j_abs;

    const auto bits = basis_bit_lists(ens.basis);
    const int nch = std::max(1, chunks);
    const std::size_t nmem = membranes.size();
    for (const auto& msk : membranes)
        if (msk.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("exact_with_couplings: membrane mask length mismatch");
    std::vector<std::vector<int>> mem_delta(nmem, std::vector<int>(ens.basis.size()));
    for (std::size_t k = 0; k < nmem; ++k)
        for (std::size_t j = 0; j < ens.basis.size(); ++j)
            mem_delta[k][j] = BitVec::and_parity(ens.basis[j], membranes[k]);

    struct Acc {
        long double w0 = 0, w1 = 0, w2 = 0;
        std::vector<long double> edge;
        std::vector<long double> membrane;
    };
    std::vector<Acc> accs(nch);
    for (auto& a : accs) {
        if (per_edge) a.edge.assign(n, 0);
        a.membrane.assign(nmem, 0);
    }

    run_chunked(ens.n_structures(), nch, [&](int c, std::uint64_t i0, std::uint64_t i1) {
        Acc& a = accs[c];
        BitVec m = structure_at(ens.basis, n, i0);
        double s_occ = 0.0;  // sum of couplings over occupied edges
        for (int p = 0; p < n; ++p)
            if (m.test(p)) s_occ += couplings[p];
        std::vector<int> parity(nmem, 0);
        for (std::size_t k = 0; k < nmem; ++k) parity[k] = BitVec::and_parity(m, membranes[k]);

        for (std::uint64_t i = i0; i < i1; ++i) {
            const double energy = 2.0 * s_occ - j_sum;      // classical H of this structure
            const long double w = std::exp(-beta * energy - x0);
            a.w0 += w;
            a.w1 += w * energy;
            a.w2 += w * energy * energy;
            if (per_edge) {
                const auto words = m.words();
                for (std::size_t wd = 0; wd < words.size(); ++wd) {
                    std::uint64_t b = words[wd];
                    while (b) {
                        const int p = static_cast<int>(64 * wd) + std::countr_zero(b);
                        b &= b - 1;
                        a.edge[p] += w;
                    }
                }
            }
            for (std::size_t k = 0; k < nmem; ++k) a.membrane[k] += parity[k] ? -w : w;

            const std::uint64_t next = i + 1;
            if (next >= i1) break;
            const int j = std::countr_zero(next);
            for (int b : bits[static_cast<std::size_t>(j)]) {
                if (m.test(b)) s_occ -= couplings[b]; else s_occ += couplings[b];
                m.flip(b);
            }
            for (std::size_t k = 0; k < nmem; ++k) parity[k] ^= mem_delta[k][j];
        }
    });

    // deterministic merge in chunk order
    Acc total;
    if (per_edge) total.edge.assign(n, 0);
    total.membrane.assign(nmem, 0);
    for (const auto& a : accs) {
        total.w0 += a.w0;
        total.w1 += a.w1;
        total.w2 += a.w2;
        if (per_edge)
            for (int p = 0; p < n; ++p) total.edge[p] += a.edge[p];
        for (std::size_t k = 0; k < nmem; ++k) total.membrane[k] += a.membrane[k];
    }
    if (total.w0 <= 0)
        throw std::range_error("exact_with_couplings: all weights underflowed the fixed shift");

    CoupledObservables out;
    out.beta = beta;
    out.logZ = static_cast<double>(std::log(total.w0)) + x0;
    out.mean_E = static_cast<double>(total.w1 / total.w0);
    out.var_E = static_cast<double>(total.w2 / total.w0) - out.mean_E * out.mean_E;
    if (per_edge) {
        out.w_minus.resize(n);
        for (int p = 0; p < n; ++p) out.w_minus[p] = static_cast<double>(total.edge[p] / total.w0);
    }
    out.membrane_expectation.resize(nmem);
    for (std::size_t k = 0; k < nmem; ++k)
        out.membrane_expectation[k] = static_cast<double>(total.membrane[k] / total.w0);
    return out;
}

}  // namespace xcube::exact
