#include "econet/synthgen.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace econet {

void SynthParams::validate() const {
    if (n_physical < 1) throw std::invalid_argument("n_physical must be >= 1");
    if (attach_m < 1 || attach_m >= n_physical)
        throw std::invalid_argument("attach_m must be in [1, n_physical)");
    for (double p : {p_website, p_mirror, p_cross})
        if (p < 0 || p > 1) throw std::invalid_argument("probabilities must be in [0,1]");
    if (extra_vv < 0) throw std::invalid_argument("extra_vv must be nonnegative");
}

namespace {

std::string padded_id(char prefix, std::size_t i, std::size_t width) {
    std::string num = std::to_string(i);
    return prefix + std::string(width > num.size() ? width - num.size() : 0, '0') + num;
}

}  // namespace

EcosystemGraph generate_coupled(const SynthParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    const std::size_t n = params.n_physical;
    const std::size_t width = std::to_string(n - 1).size();

    // physical layer: preferential attachment, weight = degree + 1
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> phys_edges;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t want = std::min(params.attach_m, i);
        std::set<std::size_t> targets;
        while (targets.size() < want) {
            double total = 0;
            for (std::size_t j = 0; j < i; ++j)
                if (!targets.count(j)) total += static_cast<double>(degree[j] + 1);
            std::uniform_real_distribution<double> u(0, total);
            double r = u(rng), acc = 0;
            for (std::size_t j = 0; j < i; ++j) {
                if (targets.count(j)) continue;
                acc += static_cast<double>(degree[j] + 1);
                if (r <= acc) {
                    targets.insert(j);
                    break;
                }
            }
        }
        for (auto t : targets) {
            phys_edges.emplace_back(t, i);
            ++degree[t];
            ++degree[i];
        }
    }

    std::vector<Node> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back({padded_id('P', i, width), NodeKind::Physical, ""});
    for (const auto& [a, b] : phys_edges)
        edges.emplace_back(padded_id('P', a, width), padded_id('P', b, width));

    // virtual twins plus coupling edges
    std::bernoulli_distribution owns(params.p_website);
    std::vector<char> has_twin(n, 0);
    std::vector<std::size_t> virtual_ids;
    for (std::size_t i = 0; i < n; ++i) {
        if (params.p_website > 0 && owns(rng)) {
            has_twin[i] = 1;
            virtual_ids.push_back(i);
            nodes.push_back({padded_id('V', i, width), NodeKind::Virtual, ""});
            edges.emplace_back(padded_id('P', i, width), padded_id('V', i, width));
        }
    }

    // mirror physical edges between twins
    std::bernoulli_distribution mirrors(params.p_mirror);
    std::set<std::pair<std::size_t, std::size_t>> vv;
    for (const auto& [a, b] : phys_edges) {
        if (has_twin[a] && has_twin[b] && params.p_mirror > 0 && mirrors(rng)) {
            vv.emplace(std::min(a, b), std::max(a, b));
            edges.emplace_back(padded_id('V', a, width), padded_id('V', b, width));
        }
    }

    // cross-coupling: a physical node links the twins of its physical neighbors
    std::bernoulli_distribution crosses(params.p_cross);
    for (const auto& [a, b] : phys_edges) {
        if (has_twin[b] && params.p_cross > 0 && crosses(rng))
            edges.emplace_back(padded_id('P', a, width), padded_id('V', b, width));
        if (has_twin[a] && params.p_cross > 0 && crosses(rng))
            edges.emplace_back(padded_id('P', b, width), padded_id('V', a, width));
    }

    // extra random virtual-virtual edges among non-edges
    const std::size_t nv = virtual_ids.size();
    if (nv >= 2 && params.extra_vv > 0) {
        auto wanted = static_cast<std::size_t>(
            std::llround(params.extra_vv * static_cast<double>(nv)));
        std::size_t max_extra = nv * (nv - 1) / 2 - vv.size();
        wanted = std::min(wanted, max_extra);
        std::uniform_int_distribution<std::size_t> pick(0, nv - 1);
        std::size_t added = 0;
        while (added < wanted) {
            std::size_t a = virtual_ids[pick(rng)];
            std::size_t b = virtual_ids[pick(rng)];
            if (a == b) continue;
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            if (!vv.insert(key).second) continue;
            edges.emplace_back(padded_id('V', a, width), padded_id('V', b, width));
            ++added;
        }
    }

    return EcosystemGraph(std::move(nodes), std::move(edges));
}

}  // namespace econet
