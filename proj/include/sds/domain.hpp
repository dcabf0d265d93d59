#pragma once

#include "sds/canon.hpp"
#include "sds/parallel.hpp"

#include <istream>
#include <sstream>

namespace sds {

/// One strategyproofness opportunity: an agent holding `truthful` in the
/// (canonical) source profile misreports `misreport`; the manipulated
/// profile canonicalizes to `target` via `map` (manipulated labeling ->
/// target labeling).
struct ManipulationEdge {
    AnonymousProfile source;  // canonical
    WeakOrder truthful;
    WeakOrder misreport;
    AnonymousProfile target;  // canonical
    Permutation map;
};

/// Internally consistent iff re-deriving the target from source + misreport
/// reproduces it and `map` is a valid witness.
inline bool edge_is_consistent(const ManipulationEdge& e) {
    const auto& tab = OrderTable::get(e.source.num_alternatives());
    auto manipulated = e.source.with_move(tab.index_of(e.truthful), tab.index_of(e.misreport));
    return apply_permutation(manipulated, e.map) == e.target &&
           canonicalize(manipulated).anon == e.target;
}

/// k-bounded misreport edges out of a canonical profile: one edge per
/// (distinct relation held in R, misreport within Kendall tau distance k),
/// zero-distance misreports skipped.
inline std::vector<ManipulationEdge> manipulation_edges(const AnonymousProfile& R, int k) {
    if (k < 0) throw std::domain_error("manipulation_edges: k must be >= 0");
    const auto& tab = OrderTable::get(R.num_alternatives());
    std::vector<ManipulationEdge> out;
    for (auto& [held, count] : R.counts()) {
        for (size_t mis = 0; mis < tab.orders.size(); ++mis) {
            int idx = static_cast<int>(mis);
            if (idx == held) continue;
            if (kendall_tau(tab.orders[held], tab.orders[idx]) > k) continue;
            auto manipulated = R.with_move(held, idx);
            auto canon = canonicalize(manipulated);
            out.push_back(ManipulationEdge{R, tab.orders[held], tab.orders[idx],
                                           std::move(canon.anon), canon.witness});
        }
    }
    return out;
}

/// Profiles reachable by the schedule of bounded manipulations, plus every
/// generated edge. Profiles are kept sorted; ids are positional.
struct DomainGraph {
    int m = 0;
    int n = 0;
    AnonymousProfile seed;  // canonical
    std::vector<int> schedule;
    std::vector<AnonymousProfile> profiles;  // sorted, unique, contains seed
    std::vector<ManipulationEdge> edges;

    int index_of(const AnonymousProfile& r) const {
        auto it = std::lower_bound(profiles.begin(), profiles.end(), r);
        if (it == profiles.end() || !(*it == r))
            throw std::out_of_range("profile not in domain graph");
        return static_cast<int>(it - profiles.begin());
    }

    bool contains(const AnonymousProfile& r) const {
        auto it = std::lower_bound(profiles.begin(), profiles.end(), r);
        return it != profiles.end() && *it == r;
    }

    /// Stable textual id: zero-padded position in the sorted profile list.
    std::string id_of(int index) const {
        std::string digits = std::to_string(index);
        return "c" + std::string(5 - std::min<size_t>(5, digits.size()), '0') + digits;
    }
};

/// Level-by-level BFS: level 0 is the canonical seed; level t holds every
/// target of a schedule[t]-bounded manipulation out of a level t-1 profile
/// (misreport distance measured against the relation currently held there).
/// Edges are deduplicated by (source, truthful, misreport).
inline DomainGraph expand_domain(const Profile& seed, const std::vector<int>& schedule,
                                 int threads = 1) {
    DomainGraph g;
    g.m = seed.num_alternatives();
    g.n = seed.num_agents();
    g.schedule = schedule;
    g.seed = canonicalize(anonymize(seed)).anon;

    const auto& tab = OrderTable::get(g.m);
    std::set<AnonymousProfile> known{g.seed};
    std::set<std::tuple<AnonymousProfile, int, int>> edge_keys;
    std::vector<AnonymousProfile> level{g.seed};

    for (int k : schedule) {
        std::vector<std::vector<ManipulationEdge>> per_source(level.size());
        parallel_for(level.size(), threads,
                     [&](size_t i) { per_source[i] = manipulation_edges(level[i], k); });
        std::set<AnonymousProfile> next;
        for (auto& batch : per_source) {
            for (auto& e : batch) {
                next.insert(e.target);
                known.insert(e.target);
                auto key = std::make_tuple(e.source, tab.index_of(e.truthful),
                                           tab.index_of(e.misreport));
                if (edge_keys.insert(std::move(key)).second) g.edges.push_back(std::move(e));
            }
        }
        level.assign(next.begin(), next.end());
    }

    g.profiles.assign(known.begin(), known.end());
    return g;
}

/// Lemma-1 style lifting: agents of R' keep their preferences over the
/// original alternatives, rank all new alternatives strictly below and tied
/// among themselves; added agents are fully indifferent.
inline Profile lift_profile(const Profile& original, int m, int n) {
    int m0 = original.num_alternatives();
    int n0 = original.num_agents();
    if (m0 > m || n0 > n) throw std::domain_error("lift_profile: target sizes too small");
    std::vector<int> extras;
    for (int x = m0; x < m; ++x) extras.push_back(x);
    std::vector<WeakOrder> orders;
    for (auto& r : original.orders()) {
        auto classes = r.classes();
        if (!extras.empty()) classes.push_back(extras);
        orders.push_back(WeakOrder(std::move(classes)));
    }
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    for (int i = n0; i < n; ++i) orders.push_back(WeakOrder({all}));
    return Profile(std::move(orders));
}

// --- domain graph file format ------------------------------------------------

inline std::string serialize_domain(const DomainGraph& g) {
    const auto& tab = OrderTable::get(g.m);
    std::ostringstream out;
    out << "# sdscheck domain graph\n";
    out << "m " << g.m << "\n";
    out << "n " << g.n << "\n";
    out << "schedule ";
    for (size_t i = 0; i < g.schedule.size(); ++i) out << (i ? "," : "") << g.schedule[i];
    if (g.schedule.empty()) out << "-";
    out << "\n";
    out << "seed " << g.id_of(g.index_of(g.seed)) << "\n";
    out << "[profiles]\n";
    for (size_t i = 0; i < g.profiles.size(); ++i)
        out << g.id_of(static_cast<int>(i)) << " " << canonical_key(g.profiles[i]) << "\n";
    out << "[edges]\n";
    for (auto& e : g.edges) {
        out << g.id_of(g.index_of(e.source)) << " " << tab.index_of(e.truthful) << " "
            << format_weak_order(e.misreport) << " " << g.id_of(g.index_of(e.target)) << " "
            << e.map.cycles() << "\n";
    }
    return out.str();
}

inline DomainGraph parse_domain(std::istream& in) {
    DomainGraph g;
    std::string line;
    int section = 0;  // 0 header, 1 profiles, 2 edges
    std::string seed_id;
    std::map<std::string, int> index_by_id;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line == "[profiles]") {
            section = 1;
            continue;
        }
        if (line == "[edges]") {
            if (g.m == 0) throw std::invalid_argument("domain file: missing header");
            section = 2;
            g.profiles.shrink_to_fit();
            continue;
        }
        std::istringstream ls(line);
        if (section == 0) {
            std::string key;
            ls >> key;
            if (key == "m") ls >> g.m;
            else if (key == "n") ls >> g.n;
            else if (key == "seed") ls >> seed_id;
            else if (key == "schedule") {
                std::string spec;
                ls >> spec;
                if (spec != "-") {
                    std::istringstream ss(spec);
                    std::string item;
                    while (std::getline(ss, item, ',')) g.schedule.push_back(std::stoi(item));
                }
            } else {
                throw std::invalid_argument("domain file: unknown header key " + key);
            }
        } else if (section == 1) {
            std::string id, key;
            ls >> id >> key;
            index_by_id[id] = static_cast<int>(g.profiles.size());
            g.profiles.push_back(parse_canonical_key(key, g.m));
        } else {
            std::string src, mis, tgt, cyc;
            int truthful_idx;
            ls >> src >> truthful_idx >> mis >> tgt;
            std::getline(ls, cyc);
            const auto& tab = OrderTable::get(g.m);
            ManipulationEdge e{g.profiles.at(index_by_id.at(src)), tab.orders.at(truthful_idx),
                               parse_weak_order(mis), g.profiles.at(index_by_id.at(tgt)),
                               Permutation::parse_cycles(cyc, g.m)};
            g.edges.push_back(std::move(e));
        }
    }
    if (seed_id.empty()) throw std::invalid_argument("domain file: missing seed");
    g.seed = g.profiles.at(index_by_id.at(seed_id));
    for (size_t i = 1; i < g.profiles.size(); ++i)
        if (!(g.profiles[i - 1] < g.profiles[i]))
            throw std::invalid_argument("domain file: profiles not sorted");
    return g;
}

}  // namespace sds
