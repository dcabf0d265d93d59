#pragma once

#include "sds/parallel.hpp"
#include "sds/profile.hpp"

#include <cstdint>
#include <set>

namespace sds {

/// All permutations of 0..m-1 in lexicographic order of their image vectors.
inline const std::vector<Permutation>& all_permutations(int m) {
    static std::map<int, std::vector<Permutation>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) {
        std::vector<Permutation> perms;
        std::vector<int> img(m);
        std::iota(img.begin(), img.end(), 0);
        do perms.push_back(Permutation(img));
        while (std::next_permutation(img.begin(), img.end()));
        it = cache.emplace(m, std::move(perms)).first;
    }
    return it->second;
}

/// Canonical (lexicographically minimal) relabeling of an anonymous profile,
/// together with a permutation realizing it: anon == witness(input).
struct CanonicalProfile {
    AnonymousProfile anon;
    Permutation witness;
};

/// order_perm_table(m)[p][i] = index of permutation p applied to order i.
inline const std::vector<std::vector<int>>& order_perm_table(int m) {
    static std::map<int, std::vector<std::vector<int>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) {
        const auto& tab = OrderTable::get(m);
        const auto& perms = all_permutations(m);
        std::vector<std::vector<int>> t(perms.size(), std::vector<int>(tab.orders.size()));
        for (size_t p = 0; p < perms.size(); ++p)
            for (size_t i = 0; i < tab.orders.size(); ++i)
                t[p][i] = tab.index_of(apply_permutation(tab.orders[i], perms[p]));
        it = cache.emplace(m, std::move(t)).first;
    }
    return it->second;
}

namespace detail {

using CountVec = std::vector<std::pair<int, int>>;  // (order index, count), ascending index

inline CountVec permute_counts(const CountVec& counts, const std::vector<int>& order_map) {
    CountVec out;
    out.reserve(counts.size());
    for (auto& [idx, c] : counts) out.emplace_back(order_map[idx], c);
    std::sort(out.begin(), out.end());
    return out;
}

/// Dense-lexicographic comparison of sparse count vectors (see
/// AnonymousProfile::operator<): a missing index counts as zero.
inline bool dense_lex_less(const CountVec& a, const CountVec& b) {
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int ia = i < a.size() ? a[i].first : INT32_MAX;
        int ib = j < b.size() ? b[j].first : INT32_MAX;
        if (ia < ib) return false;
        if (ib < ia) return true;
        if (a[i].second != b[j].second) return a[i].second < b[j].second;
        ++i;
        ++j;
    }
    return false;
}

}  // namespace detail

inline CanonicalProfile canonicalize(const AnonymousProfile& r) {
    int m = r.num_alternatives();
    const auto& perm_tab = order_perm_table(m);
    const auto& perms = all_permutations(m);
    detail::CountVec counts(r.counts().begin(), r.counts().end());
    detail::CountVec best;
    size_t best_p = 0;
    for (size_t p = 0; p < perms.size(); ++p) {
        auto cand = detail::permute_counts(counts, perm_tab[p]);
        if (p == 0 || detail::dense_lex_less(cand, best)) {
            best = std::move(cand);
            best_p = p;
        }
    }
    std::map<int, int> counts_map(best.begin(), best.end());
    return CanonicalProfile{AnonymousProfile(m, std::move(counts_map)), perms[best_p]};
}

/// All alternative permutations fixing the anonymous profile. Always
/// contains the identity; brute force over m! is fine at this scale.
inline std::vector<Permutation> automorphisms(const AnonymousProfile& r) {
    int m = r.num_alternatives();
    const auto& perm_tab = order_perm_table(m);
    const auto& perms = all_permutations(m);
    detail::CountVec counts(r.counts().begin(), r.counts().end());
    std::vector<Permutation> out;
    for (size_t p = 0; p < perms.size(); ++p)
        if (detail::permute_counts(counts, perm_tab[p]) == counts) out.push_back(perms[p]);
    return out;
}

/// Partition of the alternative set; blocks sorted, members sorted.
struct OrbitPartition {
    std::vector<std::vector<int>> blocks;

    bool operator==(const OrbitPartition& o) const { return blocks == o.blocks; }
};

inline OrbitPartition partition_from_permutations(int m, const std::vector<Permutation>& perms) {
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto& pi : perms)
        for (int x = 0; x < m; ++x) {
            int a = find(x), b = find(pi(x));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<int, std::vector<int>> groups;
    for (int x = 0; x < m; ++x) groups[find(x)].push_back(x);
    OrbitPartition out;
    for (auto& [root, block] : groups) out.blocks.push_back(block);
    return out;
}

/// Finest partition merging x,y whenever some automorphism maps x to y.
inline OrbitPartition orbits(const AnonymousProfile& r) {
    return partition_from_permutations(r.num_alternatives(), automorphisms(r));
}

inline OrbitPartition apply_permutation(const OrbitPartition& o, const Permutation& pi) {
    OrbitPartition out;
    for (auto& block : o.blocks) {
        std::vector<int> nb;
        for (int x : block) nb.push_back(pi(x));
        std::sort(nb.begin(), nb.end());
        out.blocks.push_back(std::move(nb));
    }
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

/// Stable string key for a canonical profile: "(orderIndex:count)" pairs,
/// hyphen-joined, ascending order index. Used in reports and file formats.
inline std::string canonical_key(const AnonymousProfile& r) {
    std::string out;
    for (auto& [idx, c] : r.counts()) {
        if (!out.empty()) out += '-';
        out += "(" + std::to_string(idx) + ":" + std::to_string(c) + ")";
    }
    return out;
}

inline AnonymousProfile parse_canonical_key(const std::string& key, int m) {
    std::map<int, int> counts;
    size_t i = 0;
    while (i < key.size()) {
        if (key[i] == '-') { ++i; continue; }
        if (key[i] != '(') throw std::invalid_argument("bad canonical key: " + key);
        size_t colon = key.find(':', i);
        size_t close = key.find(')', i);
        if (colon == std::string::npos || close == std::string::npos || colon > close)
            throw std::invalid_argument("bad canonical key: " + key);
        int idx = std::stoi(key.substr(i + 1, colon - i - 1));
        int c = std::stoi(key.substr(colon + 1, close - colon - 1));
        counts[idx] += c;
        i = close + 1;
    }
    return AnonymousProfile(m, std::move(counts));
}

namespace detail {

// Packs a count vector into one word for dedup: 11 bits per (index, count)
// entry, at most 5 entries. Injective for order index < 128, count <= 15.
inline uint64_t pack_counts(const CountVec& counts) {
    uint64_t w = 0;
    for (auto& [idx, c] : counts) w = (w << 11) | (static_cast<uint64_t>(idx) << 4) | static_cast<uint64_t>(c);
    return w;
}

inline void enum_multisets_rec(int num_orders, int slots, int lowest, detail::CountVec& cur,
                               const std::function<void(const detail::CountVec&)>& emit) {
    if (slots == 0) {
        emit(cur);
        return;
    }
    for (int idx = lowest; idx < num_orders; ++idx) {
        for (int take = slots; take >= 1; --take) {
            cur.emplace_back(idx, take);
            enum_multisets_rec(num_orders, slots - take, idx + 1, cur, emit);
            cur.pop_back();
        }
    }
}

}  // namespace detail

/// Exactly one representative per anonymity+neutrality equivalence class of
/// n-agent profiles over m alternatives, as canonical anonymous profiles.
/// Deterministic regardless of `threads`.
inline std::vector<CanonicalProfile> enumerate_canonical_profiles(int m, int n, int threads = 1) {
    if (m > 4) throw std::domain_error("enumerate_canonical_profiles: m > 4 not supported");
    if (n > 5) throw std::domain_error("enumerate_canonical_profiles: n > 5 not supported");
    const auto& perm_tab = order_perm_table(m);
    int num_orders = static_cast<int>(OrderTable::get(m).orders.size());

    // Materialize all multisets first (cheap), then canonicalize in parallel.
    std::vector<detail::CountVec> multisets;
    detail::CountVec cur;
    detail::enum_multisets_rec(num_orders, n, 0, cur,
                               [&](const detail::CountVec& c) { multisets.push_back(c); });

    std::vector<uint64_t> canon_packed(multisets.size());
    parallel_for(multisets.size(), threads, [&](size_t i) {
        detail::CountVec best;
        for (size_t p = 0; p < perm_tab.size(); ++p) {
            auto cand = detail::permute_counts(multisets[i], perm_tab[p]);
            if (p == 0 || detail::dense_lex_less(cand, best)) best = std::move(cand);
        }
        canon_packed[i] = detail::pack_counts(best);
    });

    std::sort(canon_packed.begin(), canon_packed.end());
    canon_packed.erase(std::unique(canon_packed.begin(), canon_packed.end()), canon_packed.end());

    std::vector<CanonicalProfile> out;
    out.reserve(canon_packed.size());
    for (uint64_t w : canon_packed) {
        std::map<int, int> counts;
        while (w) {
            counts[static_cast<int>((w >> 4) & 0x7f)] = static_cast<int>(w & 0xf);
            w >>= 11;
        }
        out.push_back(CanonicalProfile{AnonymousProfile(m, std::move(counts)), Permutation::identity(m)});
    }
    std::sort(out.begin(), out.end(),
              [](const CanonicalProfile& a, const CanonicalProfile& b) { return a.anon < b.anon; });
    return out;
}

}  // namespace sds
