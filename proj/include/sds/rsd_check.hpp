#pragma once

#include "sds/encode.hpp"
#include "sds/lottery.hpp"

namespace sds {

/// The complete canonical domain for (m, n): every canonical profile and
/// every manipulation edge, with no bound on the misreport distance.
inline DomainGraph full_domain_graph(int m, int n, int threads = 1) {
    DomainGraph g;
    g.m = m;
    g.n = n;
    auto canon = enumerate_canonical_profiles(m, n, threads);
    g.profiles.reserve(canon.size());
    for (auto& cp : canon) g.profiles.push_back(cp.anon);
    std::sort(g.profiles.begin(), g.profiles.end());
    g.seed = g.profiles.front();
    int tau_max = m * (m - 1);  // every pair reversed
    std::vector<std::vector<ManipulationEdge>> per_source(g.profiles.size());
    parallel_for(g.profiles.size(), threads,
                 [&](size_t i) { per_source[i] = manipulation_edges(g.profiles[i], tau_max); });
    for (auto& batch : per_source)
        for (auto& e : batch) g.edges.push_back(std::move(e));
    return g;
}

/// Assignment p_<id>_<x> = rsd(representative)(x) for each profile in the
/// domain; well-defined on classes because random serial dictatorship is
/// anonymous and neutral.
inline std::map<VarId, Rational> rsd_assignment(const DomainGraph& g,
                                                const ConstraintSystem& sys, int threads = 1) {
    std::vector<Lottery> lotteries(g.profiles.size());
    parallel_for(g.profiles.size(), threads,
                 [&](size_t i) { lotteries[i] = rsd(realize(g.profiles[i])); });
    std::map<VarId, Rational> assignment;
    for (size_t i = 0; i < g.profiles.size(); ++i) {
        std::string id = g.id_of(static_cast<int>(i));
        for (int x = 0; x < g.m; ++x)
            assignment[sys.vars.lookup(id, x)] = lotteries[i].prob(x);
    }
    return assignment;
}

/// Same for a system whose profile ids name explicit profiles (the bundled
/// table reconstruction).
inline std::map<VarId, Rational> rsd_assignment_named(
    const std::map<std::string, Profile>& profiles, const ConstraintSystem& sys) {
    std::map<VarId, Rational> assignment;
    std::map<std::string, Lottery> cache;
    for (VarId v = 0; v < sys.vars.size(); ++v) {
        const std::string& id = sys.vars.profile_of(v);
        auto it = cache.find(id);
        if (it == cache.end()) it = cache.emplace(id, rsd(profiles.at(id))).first;
        assignment[v] = it->second.prob(sys.vars.alt_of(v));
    }
    return assignment;
}

}  // namespace sds
