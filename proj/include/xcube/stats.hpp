#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xcube::stats {

struct BinnedStat {
    double mean = 0.0;
    double err = 0.0;
};

// Mean with a binning error bar: the series is cut into `bins` equal blocks
// (trailing remainder dropped) and the error is the standard error of the
// block means. Needs at least `bins` samples.
BinnedStat binned_mean(std::span<const double> series, int bins = 20);

// beta^2 * Var(E) from an energy series, with a delete-one-bin jackknife
// error over the same equal blocks.
BinnedStat jackknife_cv(std::span<const double> energy, double beta, int bins = 20);

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
    int pooled_cells = 0;  // cells after merging low-expectation ones
};

// Goodness-of-fit of observed counts against given probabilities. Cells with
// expected count below `min_expected` are pooled into one bucket before the
// statistic is formed (Cochran's rule).
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> probabilities,
                         double min_expected = 5.0);

// upper tail of the chi-square distribution
double chi_square_pvalue(double statistic, int dof);

}  // namespace xcube::stats
