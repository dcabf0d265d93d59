#pragma once

#include "sds/profile.hpp"
#include "sds/rational.hpp"

#include <optional>

namespace sds {

/// Exact probability vector over alternatives 0..m-1; entries sum to 1.
class Lottery {
public:
    Lottery() = default;

    explicit Lottery(std::vector<Rational> probs) : probs_(std::move(probs)) {
        Rational sum = 0;
        for (auto& p : probs_) {
            if (p < 0) throw std::invalid_argument("lottery: negative probability");
            sum += p;
        }
        if (sum != 1) throw std::invalid_argument("lottery: probabilities sum to " + rat_str(sum));
    }

    static Lottery degenerate(int m, int x) {
        std::vector<Rational> p(m, Rational(0));
        p[x] = 1;
        return Lottery(std::move(p));
    }

    static Lottery uniform_over(int m, const std::vector<int>& support) {
        std::vector<Rational> p(m, Rational(0));
        for (int x : support) p[x] = Rational(1, support.size());
        return Lottery(std::move(p));
    }

    int num_alternatives() const { return static_cast<int>(probs_.size()); }
    const Rational& prob(int x) const { return probs_.at(x); }
    const std::vector<Rational>& probs() const { return probs_; }

    std::vector<int> support() const {
        std::vector<int> s;
        for (int x = 0; x < num_alternatives(); ++x)
            if (probs_[x] > 0) s.push_back(x);
        return s;
    }

    bool operator==(const Lottery& o) const { return probs_ == o.probs_; }

private:
    std::vector<Rational> probs_;
};

/// "7/24*a + 7/24*b + 5/24*c + 5/24*d"; zero terms omitted.
inline std::string format_lottery(const Lottery& p) {
    std::string out;
    for (int x = 0; x < p.num_alternatives(); ++x) {
        if (p.prob(x) == 0) continue;
        if (!out.empty()) out += " + ";
        out += rat_str(p.prob(x)) + "*" + alt_letter(x);
    }
    return out.empty() ? "0" : out;
}

/// Accepts integer and fraction coefficients; `m` fixes the dimension.
inline Lottery parse_lottery(const std::string& text, int m) {
    std::vector<Rational> probs(m, Rational(0));
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i; };
    bool first = true;
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        if (!first) {
            if (text[i] != '+') throw ParseError("expected '+'", i);
            ++i;
            skip_ws();
        }
        size_t start = i;
        while (i < text.size() && (isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
        if (i == start) throw ParseError("expected coefficient", i);
        Rational coef = rat_parse(text.substr(start, i - start));
        skip_ws();
        if (i >= text.size() || text[i] != '*') throw ParseError("expected '*'", i);
        ++i;
        skip_ws();
        if (i >= text.size()) throw ParseError("expected alternative", i);
        int a = alt_index(text[i++]);
        if (a >= m) throw ParseError("alternative out of range", i - 1);
        probs[a] += coef;
        first = false;
    }
    return Lottery(std::move(probs));
}

/// Probability p gives to the upper contour set {y : y >= x} of `order`.
inline Rational upper_contour_prob(const Lottery& p, const WeakOrder& order, int x) {
    auto ranks = order.ranks();
    Rational sum = 0;
    for (int y = 0; y < p.num_alternatives(); ++y)
        if (ranks[y] <= ranks[x]) sum += p.prob(y);
    return sum;
}

/// p stochastically dominates q (weakly) for `order`: every upper contour
/// set gets at least as much probability under p.
inline bool sd_geq(const Lottery& p, const Lottery& q, const WeakOrder& order) {
    if (p.num_alternatives() != q.num_alternatives() ||
        p.num_alternatives() != order.num_alternatives())
        throw std::invalid_argument("sd_geq: mismatched alternative sets");
    // One prefix per indifference class suffices.
    for (auto& cls : order.classes()) {
        int x = cls[0];
        if (upper_contour_prob(p, order, x) < upper_contour_prob(q, order, x)) return false;
    }
    return true;
}

inline bool sd_gt(const Lottery& p, const Lottery& q, const WeakOrder& order) {
    return sd_geq(p, q, order) && !sd_geq(q, p, order);
}

/// Utility values per alternative, consistent with some weak order.
struct UtilityVector {
    std::vector<Rational> values;

    const Rational& value(int x) const { return values.at(x); }
};

inline bool consistent_with(const UtilityVector& u, const WeakOrder& order) {
    auto ranks = order.ranks();
    int m = order.num_alternatives();
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            bool geq_pref = ranks[x] <= ranks[y];
            bool geq_util = u.value(x) >= u.value(y);
            if (geq_pref != geq_util) return false;
        }
    return true;
}

inline Rational expected_utility(const UtilityVector& u, const Lottery& p) {
    if (u.values.size() != static_cast<size_t>(p.num_alternatives()))
        throw std::invalid_argument("expected_utility: dimension mismatch");
    Rational sum = 0;
    for (int x = 0; x < p.num_alternatives(); ++x) sum += p.prob(x) * u.value(x);
    return sum;
}

namespace detail {

// SplitMix64; fixed-sequence generator so tests are reproducible.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic in `seed`: equal within a class, strictly decreasing across
/// classes, values in [0,1] with the top class at 1.
inline UtilityVector sample_consistent_utility(const WeakOrder& order, uint64_t seed) {
    int c = order.num_classes();
    // Random positive integer gaps; value of class k is the tail-sum share.
    std::vector<Int> gaps(c);
    Int total = 0;
    for (int k = 0; k < c; ++k) {
        gaps[k] = Int(1 + detail::mix64(seed * 0x100000001b3ull + k) % 64);
        total += gaps[k];
    }
    std::vector<Rational> class_value(c);
    Int tail = total;
    for (int k = 0; k < c; ++k) {
        class_value[k] = Rational(tail, total);
        tail -= gaps[k];
    }
    UtilityVector u;
    u.values.assign(order.num_alternatives(), Rational(0));
    for (int k = 0; k < c; ++k)
        for (int x : order.classes()[k]) u.values[x] = class_value[k];
    return u;
}

/// If p fails to stochastically dominate q for `order`, builds a consistent
/// utility giving q strictly higher expected utility than p: values in a
/// narrow window [1-eps/2, 1] on the violated upper contour set and in
/// [0, eps/2) strictly below it. Returns nothing iff sd_geq(p, q, order).
inline std::optional<UtilityVector> construct_violating_utility(const Lottery& p, const Lottery& q,
                                                                const WeakOrder& order) {
    int c = order.num_classes();
    int violated = -1;
    Rational eps;
    for (int k = 0; k < c; ++k) {
        int x = order.classes()[k][0];
        Rational diff = upper_contour_prob(q, order, x) - upper_contour_prob(p, order, x);
        if (diff > 0) {
            violated = k;
            eps = diff;
            break;
        }
    }
    if (violated < 0) return std::nullopt;

    int k = violated;  // strictly below there is at least one class (k < c-1)
    std::vector<Rational> class_value(c);
    for (int j = 0; j <= k; ++j)
        class_value[j] = 1 - Rational(j, k + 1) * eps / 2;
    for (int j = k + 1; j < c; ++j)
        class_value[j] = Rational(c - 1 - j, c - 1 - k) * eps / 2;

    UtilityVector u;
    u.values.assign(order.num_alternatives(), Rational(0));
    for (int j = 0; j < c; ++j)
        for (int x : order.classes()[j]) u.values[x] = class_value[j];
    return u;
}

/// Random serial dictatorship: average over all n! agent orderings of the
/// uniform lottery on the set that survives sequential refinement to each
/// agent's maximal alternatives.
inline Lottery rsd(const Profile& R) {
    int m = R.num_alternatives();
    int n = R.num_agents();
    std::vector<int> agents(n);
    std::iota(agents.begin(), agents.end(), 0);
    std::vector<Rational> acc(m, Rational(0));
    Int orderings = 0;
    do {
        std::vector<int> alive(m);
        std::iota(alive.begin(), alive.end(), 0);
        for (int i : agents) alive = R.order(i).maximal_within(alive);
        for (int x : alive) acc[x] += Rational(1, alive.size());
        ++orderings;
    } while (std::next_permutation(agents.begin(), agents.end()));
    for (auto& v : acc) v /= Rational(orderings);
    return Lottery(std::move(acc));
}

}  // namespace sds
