#include "econet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace econet {

namespace {

double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Regularized incomplete gamma P(a,x) by series, Q(a,x) by continued fraction.
double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q domain");
    if (x == 0) return 1;
    return x < a + 1 ? 1 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

}  // namespace

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double chi_squared_sf(double x, double df) {
    if (x <= 0) return 1;
    return std::clamp(gamma_q(df / 2, x / 2), 0.0, 1.0);
}

double kolmogorov_sf(double d, double n_effective) {
    if (d <= 0) return 1;
    double sn = std::sqrt(n_effective);
    double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0;
    for (int j = 1; j <= 100; ++j) {
        double term = 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-14) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

std::vector<CcdfPoint> ccdf(const std::vector<std::size_t>& degrees) {
    if (degrees.empty()) throw std::invalid_argument("ccdf of empty sample");
    for (auto d : degrees)
        if (d == 0) throw std::invalid_argument("ccdf requires positive degrees");
    std::vector<std::size_t> sorted(degrees);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<CcdfPoint> points;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        points.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    }
    return points;
}

PowerLawFit fit_power_law(const std::vector<std::size_t>& degrees, std::size_t xmin) {
    if (xmin == 0) throw std::invalid_argument("xmin must be positive");
    double log_sum = 0;
    std::size_t n_tail = 0;
    const double shift = static_cast<double>(xmin) - 0.5;
    for (auto d : degrees) {
        if (d < xmin) continue;
        ++n_tail;
        log_sum += std::log(static_cast<double>(d) / shift);
    }
    if (n_tail < 2)
        throw std::invalid_argument("power-law fit needs at least 2 tail observations");
    double alpha = 1.0 + static_cast<double>(n_tail) / log_sum;
    return {alpha, xmin, n_tail, (alpha - 1.0) / std::sqrt(static_cast<double>(n_tail))};
}

namespace {

// CDF of the signed-rank null via Edgeworth expansion with continuity
// correction; ranks are the realized (mid-)ranks so tie corrections for
// the variance and fourth cumulant fall out automatically.
double signed_rank_cdf(double w, const std::vector<double>& ranks) {
    double mu = 0, var = 0, k4 = 0;
    for (double r : ranks) {
        mu += r / 2;
        var += r * r / 4;
        k4 -= r * r * r * r / 8;
    }
    double sigma = std::sqrt(var);
    double z = (w + 0.5 - mu) / sigma;
    double lam4 = k4 / (var * var);
    return std_normal_cdf(z) - std_normal_pdf(z) * (lam4 / 24) * (z * z * z - 3 * z);
}

std::vector<double> midranks(const std::vector<double>& abs_d) {
    std::vector<std::size_t> idx(abs_d.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
    std::vector<double> ranks(abs_d.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && abs_d[idx[j + 1]] == abs_d[idx[i]]) ++j;
        double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = mid;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("wilcoxon of empty sample");
    std::vector<double> diffs;
    for (const auto& [x, y] : pairs) {
        double d = y - x;
        if (d != 0) diffs.push_back(d);
    }
    TestResult res;
    res.test_name = "wilcoxon-signed-rank";
    res.n_effective = diffs.size();
    if (diffs.empty()) {
        res.statistic = 0;
        res.p_value = 1;
        res.notes = "all differences zero";
        return res;
    }
    std::vector<double> abs_d(diffs.size());
    std::transform(diffs.begin(), diffs.end(), abs_d.begin(),
                   [](double d) { return std::abs(d); });
    auto ranks = midranks(abs_d);
    std::vector<double> sorted_abs(abs_d);
    std::sort(sorted_abs.begin(), sorted_abs.end());
    bool ties = std::adjacent_find(sorted_abs.begin(), sorted_abs.end()) !=
                sorted_abs.end();
    double w_plus = 0, mu = 0, var = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0) w_plus += ranks[i];
        mu += ranks[i] / 2;
        var += ranks[i] * ranks[i] / 4;
    }
    res.statistic = (w_plus - mu) / std::sqrt(var);
    double lower = signed_rank_cdf(w_plus, ranks);
    double upper = 1 - signed_rank_cdf(w_plus - 1, ranks);
    res.p_value = std::clamp(2 * std::min(lower, upper), 0.0, 1.0);
    res.notes = std::string("zero differences dropped") +
                (ties ? "; mid-ranks applied for ties" : "");
    return res;
}

TestResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks of empty sample");
    std::vector<double> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double d = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() && ib < sb.size()) {
        double x = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] <= x) ++ia;
        while (ib < sb.size() && sb[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na -
                                 static_cast<double>(ib) / nb));
    }
    double ne = na * nb / (na + nb);
    TestResult res;
    res.test_name = "ks-two-sample";
    res.statistic = d;
    res.p_value = kolmogorov_sf(d, ne);
    res.n_effective = static_cast<std::size_t>(std::lround(ne));
    res.notes = "asymptotic Kolmogorov series, effective n = " + std::to_string(ne);
    return res;
}

Eigen::MatrixXd bin_paired(const std::vector<std::pair<double, double>>& pairs,
                           std::size_t k) {
    if (k < 2) throw std::invalid_argument("need at least 2 categories");
    std::vector<double> pooled;
    pooled.reserve(pairs.size() * 2);
    for (const auto& [x, y] : pairs) {
        pooled.push_back(x);
        pooled.push_back(y);
    }
    std::sort(pooled.begin(), pooled.end());
    std::size_t distinct =
        static_cast<std::size_t>(std::unique(pooled.begin(), pooled.end()) - pooled.begin());
    if (distinct < k)
        throw std::invalid_argument("fewer distinct pooled values than categories");
    pooled.clear();
    for (const auto& [x, y] : pairs) {
        pooled.push_back(x);
        pooled.push_back(y);
    }
    std::sort(pooled.begin(), pooled.end());

    // right-closed quantile boundaries
    std::vector<double> bounds;
    const std::size_t n = pooled.size();
    for (std::size_t i = 1; i < k; ++i) {
        std::size_t idx = (i * n + k - 1) / k;  // ceil(i/k * n)
        bounds.push_back(pooled[idx - 1]);
    }
    auto category = [&](double v) {
        for (std::size_t i = 0; i < bounds.size(); ++i)
            if (v <= bounds[i]) return i;
        return k - 1;
    };
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                  static_cast<Eigen::Index>(k));
    for (const auto& [x, y] : pairs)
        table(static_cast<Eigen::Index>(category(x)),
              static_cast<Eigen::Index>(category(y))) += 1;
    return table;
}

TestResult marginal_homogeneity(const Eigen::MatrixXd& table) {
    const Eigen::Index k = table.rows();
    if (k < 2 || table.cols() != k)
        throw std::invalid_argument("table must be square with k >= 2");
    if (table.minCoeff() < 0) throw std::invalid_argument("negative cell count");
    if (table.sum() < 1) throw std::invalid_argument("table has no observations");

    Eigen::VectorXd row = table.rowwise().sum();
    Eigen::VectorXd col = table.colwise().sum();

    // drop structurally empty categories
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < k; ++i)
        if (row[i] + col[i] > 0) keep.push_back(i);
    const auto kk = static_cast<Eigen::Index>(keep.size());
    if (kk < 2) throw std::invalid_argument("fewer than 2 populated categories");

    Eigen::VectorXd d(kk - 1);
    Eigen::MatrixXd cov(kk - 1, kk - 1);
    for (Eigen::Index i = 0; i < kk - 1; ++i) {
        Eigen::Index a = keep[static_cast<std::size_t>(i)];
        d[i] = row[a] - col[a];
        for (Eigen::Index j = 0; j < kk - 1; ++j) {
            Eigen::Index b = keep[static_cast<std::size_t>(j)];
            cov(i, j) = (i == j) ? row[a] + col[a] - 2 * table(a, a)
                                 : -(table(a, b) + table(b, a));
        }
    }

    TestResult res;
    res.test_name = "marginal-homogeneity";
    res.n_effective = static_cast<std::size_t>(std::lround(table.sum()));
    if (d.isZero(0)) {
        res.statistic = 0;
        res.p_value = 1;
        res.notes = "marginals identical";
        return res;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "singular covariance; degenerate categories among {";
        for (std::size_t i = 0; i < keep.size(); ++i)
            msg << (i ? "," : "") << keep[i];
        msg << "}";
        throw std::invalid_argument(msg.str());
    }
    double chi2 = d.dot(lu.solve(d));
    res.statistic = chi2;
    res.p_value = chi_squared_sf(chi2, static_cast<double>(kk - 1));
    std::ostringstream notes;
    notes << "Stuart-Maxwell, df = " << (kk - 1);
    if (kk == 2) {
        double b = table(keep[0], keep[1]);
        double c = table(keep[1], keep[0]);
        notes << "; McNemar signed z = " << (b - c) / std::sqrt(b + c);
    }
    res.notes = notes.str();
    return res;
}

}  // namespace econet
