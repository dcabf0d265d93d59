#pragma once

#include "sds/weak_order.hpp"

#include <istream>
#include <map>
#include <mutex>
#include <sstream>

namespace sds {

/// One weak order per agent, all over the same alternative set.
class Profile {
public:
    Profile() = default;

    explicit Profile(std::vector<WeakOrder> orders) : orders_(std::move(orders)) {
        if (orders_.empty()) throw std::invalid_argument("profile: no agents");
        int m = orders_[0].num_alternatives();
        for (auto& r : orders_)
            if (r.num_alternatives() != m)
                throw std::invalid_argument("profile: mixed alternative sets");
    }

    int num_agents() const { return static_cast<int>(orders_.size()); }
    int num_alternatives() const { return orders_[0].num_alternatives(); }
    const WeakOrder& order(int i) const { return orders_.at(i); }
    const std::vector<WeakOrder>& orders() const { return orders_; }

    bool operator==(const Profile& o) const { return orders_ == o.orders_; }

private:
    std::vector<WeakOrder> orders_;
};

/// Agent i's order replaced, everyone else unchanged.
inline Profile replace(const Profile& R, int i, const WeakOrder& order) {
    if (i < 0 || i >= R.num_agents()) throw std::out_of_range("replace: agent index");
    auto orders = R.orders();
    orders[i] = order;
    return Profile(std::move(orders));
}

inline Profile apply_permutation(const Profile& R, const Permutation& pi) {
    std::vector<WeakOrder> orders;
    orders.reserve(R.num_agents());
    for (auto& r : R.orders()) orders.push_back(apply_permutation(r, pi));
    return Profile(std::move(orders));
}

/// Multiplicity map over the fixed weak-order enumeration for some m.
/// Keys index into enumerate_weak_orders(m); values are positive counts.
class AnonymousProfile {
public:
    AnonymousProfile() = default;

    AnonymousProfile(int m, std::map<int, int> counts) : m_(m), counts_(std::move(counts)) {
        for (auto& [idx, c] : counts_)
            if (c <= 0) throw std::invalid_argument("anonymous profile: non-positive count");
    }

    int num_alternatives() const { return m_; }

    int num_agents() const {
        int n = 0;
        for (auto& [idx, c] : counts_) n += c;
        return n;
    }

    const std::map<int, int>& counts() const { return counts_; }

    int count(int order_index) const {
        auto it = counts_.find(order_index);
        return it == counts_.end() ? 0 : it->second;
    }

    /// Counts after moving one agent from `from_index` to `to_index`.
    AnonymousProfile with_move(int from_index, int to_index) const {
        auto c = counts_;
        auto it = c.find(from_index);
        if (it == c.end()) throw std::invalid_argument("with_move: no agent holds that relation");
        if (--it->second == 0) c.erase(it);
        c[to_index] += 1;
        return AnonymousProfile(m_, std::move(c));
    }

    bool operator==(const AnonymousProfile& o) const { return m_ == o.m_ && counts_ == o.counts_; }
    bool operator<(const AnonymousProfile& o) const {
        // Dense-lexicographic over the full count vector: at the first order
        // index where the counts differ, the smaller count is smaller.
        auto a = counts_.begin(), b = o.counts_.begin();
        while (a != counts_.end() || b != o.counts_.end()) {
            int ia = a == counts_.end() ? INT32_MAX : a->first;
            int ib = b == o.counts_.end() ? INT32_MAX : b->first;
            if (ia < ib) return false;  // we have a positive count where other has 0
            if (ib < ia) return true;
            if (a->second != b->second) return a->second < b->second;
            ++a;
            ++b;
        }
        return false;
    }

private:
    int m_ = 0;
    std::map<int, int> counts_;
};

/// Shared per-m enumeration with an index lookup; the tables are tiny and
/// immutable, so a function-local static per m is fine.
struct OrderTable {
    std::vector<WeakOrder> orders;
    std::map<std::vector<int>, int> index_by_ranks;

    explicit OrderTable(int m) : orders(enumerate_weak_orders(m)) {
        for (size_t i = 0; i < orders.size(); ++i)
            index_by_ranks.emplace(orders[i].ranks(), static_cast<int>(i));
    }

    int index_of(const WeakOrder& r) const {
        auto it = index_by_ranks.find(r.ranks());
        if (it == index_by_ranks.end()) throw std::logic_error("order not in enumeration");
        return it->second;
    }

    static const OrderTable& get(int m) {
        static std::map<int, OrderTable> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it == cache.end()) it = cache.emplace(m, OrderTable(m)).first;
        return it->second;
    }
};

inline AnonymousProfile anonymize(const Profile& R) {
    const auto& tab = OrderTable::get(R.num_alternatives());
    std::map<int, int> counts;
    for (auto& r : R.orders()) counts[tab.index_of(r)] += 1;
    return AnonymousProfile(R.num_alternatives(), std::move(counts));
}

/// Any labeled profile with the given multiset of orders (agents in
/// ascending order-index sequence).
inline Profile realize(const AnonymousProfile& r) {
    const auto& tab = OrderTable::get(r.num_alternatives());
    std::vector<WeakOrder> orders;
    for (auto& [idx, c] : r.counts())
        for (int i = 0; i < c; ++i) orders.push_back(tab.orders[idx]);
    return Profile(std::move(orders));
}

/// Re-index counts through the fixed enumeration under a renaming of
/// alternatives.
inline AnonymousProfile apply_permutation(const AnonymousProfile& r, const Permutation& pi) {
    const auto& tab = OrderTable::get(r.num_alternatives());
    std::map<int, int> counts;
    for (auto& [idx, c] : r.counts())
        counts[tab.index_of(apply_permutation(tab.orders[idx], pi))] += c;
    return AnonymousProfile(r.num_alternatives(), std::move(counts));
}

/// Profile file: one order per line, agents in line order; blank lines and
/// '#' comments skipped.
inline Profile parse_profile(std::istream& in) {
    std::vector<WeakOrder> orders;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        orders.push_back(parse_weak_order(line));
    }
    return Profile(std::move(orders));
}

inline Profile parse_profile(const std::string& text) {
    std::istringstream in(text);
    return parse_profile(in);
}

inline std::string format_profile(const Profile& R) {
    std::string out;
    for (auto& r : R.orders()) {
        out += format_weak_order(r);
        out += '\n';
    }
    return out;
}

}  // namespace sds
