#include "econet/communities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace econet {

namespace {

// splitmix64; stable substream derivation from (seed, index)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double ll_term(double m_rs, double kr, double ks) {
    if (m_rs <= 0 || kr <= 0 || ks <= 0) return 0;
    return m_rs * std::log(m_rs / (kr * ks));
}

struct FitState {
    Eigen::MatrixXd m_counts;       // endpoint counts, diagonal doubled
    Eigen::VectorXd kappa;          // group total degrees
    std::vector<std::uint32_t> groups;
    std::vector<std::uint32_t> group_size;
    double objective = 0;

    void rebuild(const EcosystemGraph& g, std::uint32_t m) {
        m_counts = Eigen::MatrixXd::Zero(m, m);
        kappa = Eigen::VectorXd::Zero(m);
        group_size.assign(m, 0);
        for (std::uint32_t i = 0; i < g.node_count(); ++i) {
            ++group_size[groups[i]];
            kappa[groups[i]] += static_cast<double>(g.degree(i));
        }
        for (auto [u, v] : g.edges()) {
            m_counts(groups[u], groups[v]) += 1;
            m_counts(groups[v], groups[u]) += 1;
        }
        objective = 0;
        for (std::uint32_t r = 0; r < m; ++r)
            for (std::uint32_t s = 0; s < m; ++s)
                objective += ll_term(m_counts(r, s), kappa[r], kappa[s]);
    }

    // Sum of objective terms in any row or column touching g1 or g2.
    double partial(std::uint32_t g1, std::uint32_t g2) const {
        const auto m = static_cast<std::uint32_t>(kappa.size());
        double sum = 0;
        for (std::uint32_t s = 0; s < m; ++s) {
            sum += ll_term(m_counts(g1, s), kappa[g1], kappa[s]);
            sum += ll_term(m_counts(g2, s), kappa[g2], kappa[s]);
        }
        for (std::uint32_t r = 0; r < m; ++r) {
            if (r == g1 || r == g2) continue;
            sum += ll_term(m_counts(r, g1), kappa[r], kappa[g1]);
            sum += ll_term(m_counts(r, g2), kappa[r], kappa[g2]);
        }
        return sum;
    }

    // cnt[s] = neighbors of the moving node currently in group s
    void shift(const std::vector<double>& cnt, double deg, std::uint32_t g1,
               std::uint32_t g2, double sign) {
        const auto m = static_cast<std::uint32_t>(kappa.size());
        for (std::uint32_t s = 0; s < m; ++s) {
            if (cnt[s] == 0) continue;
            double c = sign * cnt[s];
            m_counts(g1, s) -= c;
            m_counts(s, g1) -= c;
            m_counts(g2, s) += c;
            m_counts(s, g2) += c;
        }
        kappa[g1] -= sign * deg;
        kappa[g2] += sign * deg;
    }

    double move_gain(const std::vector<double>& cnt, double deg, std::uint32_t g1,
                     std::uint32_t g2) {
        double before = partial(g1, g2);
        shift(cnt, deg, g1, g2, +1);
        double after = partial(g1, g2);
        shift(cnt, deg, g1, g2, -1);
        return after - before;
    }

    void apply_move(const EcosystemGraph& g, std::uint32_t node, std::uint32_t g2) {
        std::uint32_t g1 = groups[node];
        std::vector<double> cnt(kappa.size(), 0);
        for (auto j : g.neighbors(node)) cnt[groups[j]] += 1;
        double gain = move_gain(cnt, static_cast<double>(g.degree(node)), g1, g2);
        shift(cnt, static_cast<double>(g.degree(node)), g1, g2, +1);
        groups[node] = g2;
        --group_size[g1];
        ++group_size[g2];
        objective += gain;
    }
};

}  // namespace

void Partition::validate(const EcosystemGraph& g) const {
    if (groups.size() != g.node_count())
        throw std::invalid_argument("partition does not cover the graph");
    if (m == 0) throw std::invalid_argument("partition has no groups");
    std::vector<std::size_t> sizes(m, 0);
    for (auto gi : groups) {
        if (gi >= m) throw std::invalid_argument("group index out of range");
        ++sizes[gi];
    }
    for (std::uint32_t r = 0; r < m; ++r)
        if (sizes[r] == 0)
            throw std::invalid_argument("empty group " + std::to_string(r));
}

double dcsbm_objective(const EcosystemGraph& g, const Partition& p) {
    p.validate(g);
    if (g.edge_count() == 0)
        throw std::invalid_argument("objective undefined on an edgeless graph");
    FitState st;
    st.groups = p.groups;
    st.rebuild(g, p.m);
    return st.objective;
}

Partition fit_dcsbm(const EcosystemGraph& g, std::uint32_t m, std::uint64_t seed,
                    std::uint32_t restarts) {
    if (m < 2) throw std::invalid_argument("group count must be >= 2");
    if (m > g.node_count())
        throw std::invalid_argument("more groups than nodes");
    if (g.edge_count() == 0)
        throw std::invalid_argument("cannot fit an edgeless graph");
    if (restarts < 1) throw std::invalid_argument("restarts must be positive");

    const std::uint32_t n = static_cast<std::uint32_t>(g.node_count());
    std::vector<std::uint32_t> best_groups;
    double best_obj = -std::numeric_limits<double>::infinity();

    for (std::uint32_t restart = 0; restart < restarts; ++restart) {
        std::mt19937_64 rng(derive_seed(seed, restart));
        FitState st;
        st.groups.resize(n);
        // shuffled init with one node pinned per group so all groups start nonempty
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::uniform_int_distribution<std::uint32_t> pick(0, m - 1);
        for (std::uint32_t i = 0; i < n; ++i)
            st.groups[order[i]] = i < m ? i : pick(rng);
        st.rebuild(g, m);

        for (;;) {
            const double pass_start = st.objective;
            std::vector<char> moved(n, 0);
            std::vector<std::uint32_t> best_pass_groups = st.groups;
            double best_pass_obj = st.objective;

            for (std::uint32_t step = 0; step < n; ++step) {
                double best_gain = -std::numeric_limits<double>::infinity();
                std::uint32_t best_node = n, best_target = 0;
                std::vector<double> cnt(m);
                for (std::uint32_t i = 0; i < n; ++i) {
                    if (moved[i]) continue;
                    std::uint32_t g1 = st.groups[i];
                    std::fill(cnt.begin(), cnt.end(), 0.0);
                    for (auto j : g.neighbors(i)) cnt[st.groups[j]] += 1;
                    double deg = static_cast<double>(g.degree(i));
                    for (std::uint32_t g2 = 0; g2 < m; ++g2) {
                        if (g2 == g1) continue;
                        double gain = st.move_gain(cnt, deg, g1, g2);
                        if (gain > best_gain) {
                            best_gain = gain;
                            best_node = i;
                            best_target = g2;
                        }
                    }
                }
                if (best_node == n) break;
                std::uint32_t emptied = st.groups[best_node];
                st.apply_move(g, best_node, best_target);
                moved[best_node] = 1;
                if (st.group_size[emptied] == 0) {
                    // Reseed the emptied group with the node losing least objective.
                    double repair_gain = -std::numeric_limits<double>::infinity();
                    std::uint32_t repair_node = n;
                    for (std::uint32_t j = 0; j < n; ++j) {
                        if (j == best_node || st.group_size[st.groups[j]] < 2) continue;
                        std::fill(cnt.begin(), cnt.end(), 0.0);
                        for (auto nb : g.neighbors(j)) cnt[st.groups[nb]] += 1;
                        double gain = st.move_gain(cnt, static_cast<double>(g.degree(j)),
                                                   st.groups[j], emptied);
                        if (gain > repair_gain) {
                            repair_gain = gain;
                            repair_node = j;
                        }
                    }
                    if (repair_node == n) break;  // cannot keep m groups; abandon pass
                    st.apply_move(g, repair_node, emptied);
                    moved[repair_node] = 1;
                }
                if (st.objective > best_pass_obj) {
                    best_pass_obj = st.objective;
                    best_pass_groups = st.groups;
                }
            }

            st.groups = best_pass_groups;
            st.rebuild(g, m);
            if (!(st.objective >
                  pass_start + 1e-10 * std::max(1.0, std::abs(pass_start))))
                break;
        }

        if (st.objective > best_obj) {
            best_obj = st.objective;
            best_groups = st.groups;
        }
    }

    Partition p{std::move(best_groups), m};
    p.validate(g);
    return p;
}

MixingMatrix mixing_matrix(const EcosystemGraph& g, const Partition& p) {
    p.validate(g);
    if (g.edge_count() == 0)
        throw std::invalid_argument("mixing matrix undefined on an edgeless graph");
    MixingMatrix mx;
    // accumulate integer endpoint counts, divide once
    mx.e = Eigen::MatrixXd::Zero(p.m, p.m);
    for (auto [u, v] : g.edges()) {
        mx.e(p.groups[u], p.groups[v]) += 1;
        mx.e(p.groups[v], p.groups[u]) += 1;
    }
    mx.e /= 2.0 * static_cast<double>(g.edge_count());
    mx.a = mx.e.rowwise().sum();
    return mx;
}

double modularity(const MixingMatrix& mx, ModularityVariant variant) {
    double q = 0;
    for (Eigen::Index i = 0; i < mx.e.rows(); ++i) {
        if (variant == ModularityVariant::Standard)
            q += mx.e(i, i) - mx.a[i] * mx.a[i];
        else
            q += (mx.e(i, i) - mx.a[i]) * (mx.e(i, i) - mx.a[i]);
    }
    return q;
}

double normalized_modularity(double q, std::uint32_t m) {
    if (m < 2)
        throw std::invalid_argument("normalization undefined for fewer than 2 groups");
    return static_cast<double>(m) / (m - 1.0) * q;
}

CompositionReport composition(const EcosystemGraph& g, const Partition& p) {
    p.validate(g);
    std::vector<double> virt(p.m, 0), size(p.m, 0);
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        size[p.groups[i]] += 1;
        if (g.node(i).kind == NodeKind::Virtual) virt[p.groups[i]] += 1;
    }
    CompositionReport rep;
    rep.virtual_fraction.resize(p.m);
    for (std::uint32_t r = 0; r < p.m; ++r)
        rep.virtual_fraction[r] = virt[r] / size[r];
    rep.mean_virtual_fraction =
        std::accumulate(rep.virtual_fraction.begin(), rep.virtual_fraction.end(), 0.0) /
        static_cast<double>(p.m);
    rep.gini = gini(rep.virtual_fraction);
    return rep;
}

double gini(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("gini of empty list");
    for (double v : values)
        if (v < 0) throw std::invalid_argument("gini requires nonnegative values");
    double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (total == 0) return 0;
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    // G = sum_i (2i - n - 1) x_(i) / (n sum x), one division at the end
    double weighted = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
    return weighted / (n * total);
}

std::vector<SweepRow> sweep_group_count(const EcosystemGraph& g, std::uint32_t m_lo,
                                        std::uint32_t m_hi, std::uint64_t seed,
                                        std::uint32_t restarts) {
    if (m_lo < 2 || m_hi < m_lo || m_hi > g.node_count())
        throw std::invalid_argument("sweep range must lie within [2, node count]");
    std::vector<SweepRow> rows;
    for (std::uint32_t m = m_lo; m <= m_hi; ++m) {
        Partition p = fit_dcsbm(g, m, seed, restarts);
        double obj = dcsbm_objective(g, p);
        double q = modularity(mixing_matrix(g, p));
        rows.push_back({m, obj, normalized_modularity(q, m)});
    }
    return rows;
}

}  // namespace econet
