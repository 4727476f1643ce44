#include "xcube/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xcube::stats {

namespace {

std::vector<double> block_means(std::span<const double> series, int bins) {
    if (bins < 2) throw std::invalid_argument("binning: need at least 2 bins");
    const std::size_t n = series.size();
    const std::size_t bs = n / static_cast<std::size_t>(bins);
    if (bs == 0) throw std::invalid_argument("binning: series shorter than bin count");
    std::vector<double> means(bins, 0.0);
    for (int b = 0; b < bins; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < bs; ++i) s += series[b * bs + i];
        means[b] = s / static_cast<double>(bs);
    }
    return means;
}

}  // namespace

BinnedStat binned_mean(std::span<const double> series, int bins) {
    const auto bm = block_means(series, bins);
    const double mean = std::accumulate(bm.begin(), bm.end(), 0.0) / bm.size();
    double ss = 0.0;
    for (double x : bm) ss += (x - mean) * (x - mean);
    const double n = static_cast<double>(bm.size());
    return {mean, std::sqrt(ss / (n * (n - 1.0)))};
}

BinnedStat jackknife_cv(std::span<const double> energy, double beta, int bins) {
    if (bins < 2) throw std::invalid_argument("jackknife: need at least 2 bins");
    const std::size_t n = energy.size();
    const std::size_t bs = n / static_cast<std::size_t>(bins);
    if (bs == 0) throw std::invalid_argument("jackknife: series shorter than bin count");

    std::vector<double> s1(bins, 0.0), s2(bins, 0.0);
    for (int b = 0; b < bins; ++b)
        for (std::size_t i = 0; i < bs; ++i) {
            const double e = energy[b * bs + i];
            s1[b] += e;
            s2[b] += e * e;
        }
    const double tot1 = std::accumulate(s1.begin(), s1.end(), 0.0);
    const double tot2 = std::accumulate(s2.begin(), s2.end(), 0.0);
    const double cnt = static_cast<double>(bins) * static_cast<double>(bs);

    auto cv_from = [beta](double m1, double m2, double m0) {
        const double mean = m1 / m0;
        return beta * beta * (m2 / m0 - mean * mean);
    };
    const double full = cv_from(tot1, tot2, cnt);

    std::vector<double> jk(bins, 0.0);
    for (int b = 0; b < bins; ++b)
        jk[b] = cv_from(tot1 - s1[b], tot2 - s2[b], cnt - static_cast<double>(bs));
    const double jmean = std::accumulate(jk.begin(), jk.end(), 0.0) / bins;
    double ss = 0.0;
    for (double x : jk) ss += (x - jmean) * (x - jmean);
    const double nb = static_cast<double>(bins);
    return {full, std::sqrt((nb - 1.0) / nb * ss)};
}

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> probabilities,
                         double min_expected) {
    if (observed.size() != probabilities.size())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    std::uint64_t total = 0;
    for (auto o : observed) total += o;
    const double tot = static_cast<double>(total);

    // pool rare cells so every expectation is at least min_expected
    double stat = 0.0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = tot * probabilities[i];
        if (e < min_expected) {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += e;
        } else {
            const double d = static_cast<double>(observed[i]) - e;
            stat += d * d / e;
            ++cells;
        }
    }
    if (pooled_exp > 0.0) {
        const double d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        ++cells;
    }
    const int dof = cells - 1;
    return {stat, dof, chi_square_pvalue(stat, dof), cells};
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace xcube::stats
