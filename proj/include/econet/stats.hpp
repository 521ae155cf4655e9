#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace econet {

struct CcdfPoint {
    std::size_t k;
    double p;  // P(K >= k)
};

std::vector<CcdfPoint> ccdf(const std::vector<std::size_t>& degrees);

struct PowerLawFit {
    double alpha;        // exponent estimate, > 1
    std::size_t xmin;
    std::size_t n_tail;  // observations >= xmin
    double sigma;        // standard error of alpha
};

// Discrete MLE: alpha = 1 + n / sum ln(x_i / (xmin - 0.5)).
PowerLawFit fit_power_law(const std::vector<std::size_t>& degrees, std::size_t xmin);

struct TestResult {
    std::string test_name;
    double statistic = 0;
    double p_value = 1;
    bool two_tailed = true;
    std::size_t n_effective = 0;
    std::string notes;
};

// Signed-rank Z with mid-ranks for ties; zero differences dropped.
TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs);

// D = sup |F_a - F_b|; p from the asymptotic Kolmogorov series.
TestResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// Pairs binned by pooled k-quantiles into a k x k paired table.
Eigen::MatrixXd bin_paired(const std::vector<std::pair<double, double>>& pairs,
                           std::size_t k);

// Stuart-Maxwell chi-square (McNemar for 2x2).
TestResult marginal_homogeneity(const Eigen::MatrixXd& table);

// Upper-tail probabilities used by the tests; exposed for reuse.
double normal_sf(double z);                        // P(Z > z)
double chi_squared_sf(double x, double df);        // P(X > x)
double kolmogorov_sf(double d, double n_effective);

}  // namespace econet
