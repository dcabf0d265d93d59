#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sds {

/// Alternatives are indices 0..m-1, printed as letters a..z.
inline char alt_letter(int a) { return static_cast<char>('a' + a); }

inline int alt_index(char c) {
    if (c < 'a' || c > 'z') throw std::invalid_argument(std::string("not an alternative: ") + c);
    return c - 'a';
}

/// A complete transitive preference relation, stored as ordered indifference
/// classes (best class first). Classes are non-empty, disjoint, and cover
/// exactly the alternatives 0..m-1; members are kept sorted within a class.
class WeakOrder {
public:
    WeakOrder() = default;

    explicit WeakOrder(std::vector<std::vector<int>> classes) : classes_(std::move(classes)) {
        for (auto& c : classes_) std::sort(c.begin(), c.end());
        validate();
    }

    const std::vector<std::vector<int>>& classes() const { return classes_; }
    int num_classes() const { return static_cast<int>(classes_.size()); }

    int num_alternatives() const {
        size_t n = 0;
        for (auto& c : classes_) n += c.size();
        return static_cast<int>(n);
    }

    /// rank(x) = position of x's indifference class, 0 = best.
    std::vector<int> ranks() const {
        std::vector<int> r(num_alternatives(), -1);
        for (size_t k = 0; k < classes_.size(); ++k)
            for (int a : classes_[k]) r[a] = static_cast<int>(k);
        return r;
    }

    /// x is weakly preferred to y.
    bool geq(int x, int y) const {
        auto r = ranks();
        return r[x] <= r[y];
    }

    /// Best alternatives within `subset` (the maximal elements of the
    /// restriction of the order to `subset`).
    std::vector<int> maximal_within(const std::vector<int>& subset) const {
        auto r = ranks();
        int best = num_classes();
        for (int a : subset) best = std::min(best, r[a]);
        std::vector<int> out;
        for (int a : subset)
            if (r[a] == best) out.push_back(a);
        std::sort(out.begin(), out.end());
        return out;
    }

    bool operator==(const WeakOrder& o) const { return classes_ == o.classes_; }
    bool operator!=(const WeakOrder& o) const { return !(*this == o); }
    bool operator<(const WeakOrder& o) const { return classes_ < o.classes_; }

private:
    void validate() const {
        int m = num_alternatives();
        std::vector<int> seen(m, 0);
        for (auto& c : classes_) {
            if (c.empty()) throw std::invalid_argument("weak order: empty indifference class");
            for (int a : c) {
                if (a < 0 || a >= m) throw std::invalid_argument("weak order: alternative out of range");
                if (seen[a]++) throw std::invalid_argument("weak order: duplicate alternative");
            }
        }
    }

    std::vector<std::vector<int>> classes_;
};

/// Bijection on 0..m-1; image[x] is where x goes.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
        std::vector<int> seen(image_.size(), 0);
        for (int v : image_) {
            if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v]++)
                throw std::invalid_argument("permutation: not a bijection");
        }
    }

    static Permutation identity(int m) {
        std::vector<int> img(m);
        std::iota(img.begin(), img.end(), 0);
        return Permutation(std::move(img));
    }

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int x) const { return image_[x]; }
    const std::vector<int>& image() const { return image_; }

    Permutation inverse() const {
        std::vector<int> inv(image_.size());
        for (size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<int>(i);
        return Permutation(std::move(inv));
    }

    /// (this ∘ other)(x) = this(other(x))
    Permutation compose(const Permutation& other) const {
        std::vector<int> img(image_.size());
        for (size_t i = 0; i < image_.size(); ++i) img[i] = image_[other.image_[i]];
        return Permutation(std::move(img));
    }

    bool is_identity() const {
        for (size_t i = 0; i < image_.size(); ++i)
            if (image_[i] != static_cast<int>(i)) return false;
        return true;
    }

    bool operator==(const Permutation& o) const { return image_ == o.image_; }
    bool operator<(const Permutation& o) const { return image_ < o.image_; }

    /// Cycle notation, fixed points included: "(a d)(b c)", "(a)(b)(c)(d)".
    std::string cycles() const {
        std::string out;
        std::vector<bool> done(image_.size(), false);
        for (size_t i = 0; i < image_.size(); ++i) {
            if (done[i]) continue;
            out += '(';
            size_t j = i;
            bool first = true;
            do {
                if (!first) out += ' ';
                out += alt_letter(static_cast<int>(j));
                done[j] = true;
                j = image_[j];
                first = false;
            } while (j != i);
            out += ')';
        }
        return out;
    }

    /// Parses cycle notation over m alternatives; unmentioned points are fixed.
    static Permutation parse_cycles(const std::string& text, int m) {
        std::vector<int> img(m);
        std::iota(img.begin(), img.end(), 0);
        std::vector<int> cycle;
        bool open = false;
        auto close_cycle = [&] {
            for (size_t i = 0; i < cycle.size(); ++i)
                img[cycle[i]] = cycle[(i + 1) % cycle.size()];
            cycle.clear();
        };
        for (char c : text) {
            if (c == '(') {
                if (open) throw std::invalid_argument("cycles: nested '('");
                open = true;
            } else if (c == ')') {
                if (!open || cycle.empty()) throw std::invalid_argument("cycles: bad ')'");
                close_cycle();
                open = false;
            } else if (c == ' ' || c == ',') {
                continue;
            } else {
                int a = alt_index(c);
                if (a >= m) throw std::invalid_argument("cycles: alternative out of range");
                if (!open) throw std::invalid_argument("cycles: element outside cycle");
                cycle.push_back(a);
            }
        }
        if (open) throw std::invalid_argument("cycles: unterminated cycle");
        return Permutation(std::move(img));
    }

private:
    std::vector<int> image_;
};

/// Renames alternatives; class structure and class order are unchanged.
inline WeakOrder apply_permutation(const WeakOrder& r, const Permutation& pi) {
    std::vector<std::vector<int>> classes;
    classes.reserve(r.classes().size());
    for (auto& c : r.classes()) {
        std::vector<int> nc;
        nc.reserve(c.size());
        for (int a : c) nc.push_back(pi(a));
        classes.push_back(std::move(nc));
    }
    return WeakOrder(std::move(classes));
}

/// Kendall tau distance between weak orders over the same alternatives:
/// per unordered pair, 0 if both orders classify it the same way, 1 if
/// exactly one of them ties it, 2 if they order it strictly in opposite
/// directions.
inline int kendall_tau(const WeakOrder& r1, const WeakOrder& r2) {
    int m = r1.num_alternatives();
    if (m != r2.num_alternatives())
        throw std::invalid_argument("kendall_tau: mismatched alternative sets");
    auto a = r1.ranks(), b = r2.ranks();
    int total = 0;
    for (int x = 0; x < m; ++x) {
        for (int y = x + 1; y < m; ++y) {
            int s1 = (a[x] < a[y]) ? 1 : (a[x] > a[y]) ? -1 : 0;
            int s2 = (b[x] < b[y]) ? 1 : (b[x] > b[y]) ? -1 : 0;
            if (s1 == s2) continue;
            total += (s1 == 0 || s2 == 0) ? 1 : 2;
        }
    }
    return total;
}

namespace detail {

inline void enum_orders_rec(std::vector<int>& remaining, std::vector<std::vector<int>>& prefix,
                            std::vector<WeakOrder>& out) {
    if (remaining.empty()) {
        out.push_back(WeakOrder(prefix));
        return;
    }
    // Choose the next-best class: every non-empty subset of `remaining`,
    // visited in lexicographic order of the sorted member list.
    size_t k = remaining.size();
    std::vector<std::vector<int>> subsets;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        std::vector<int> s;
        for (size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) s.push_back(remaining[i]);
        subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end());
    for (auto& s : subsets) {
        std::vector<int> rest;
        for (int a : remaining)
            if (std::find(s.begin(), s.end(), a) == s.end()) rest.push_back(a);
        prefix.push_back(s);
        enum_orders_rec(rest, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace detail

/// All weak orders on m alternatives, in the fixed deterministic order used
/// throughout (classes chosen best-first, subsets in lexicographic order).
/// This order is what canonicalization compares against.
inline std::vector<WeakOrder> enumerate_weak_orders(int m) {
    if (m < 1 || m > 6) throw std::domain_error("enumerate_weak_orders: need 1 <= m <= 6");
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    std::vector<WeakOrder> out;
    std::vector<std::vector<int>> prefix;
    detail::enum_orders_rec(all, prefix, out);
    return out;
}

/// Formats in the comma/brace notation: "a,{b,c},d".
inline std::string format_weak_order(const WeakOrder& r) {
    std::string out;
    for (size_t k = 0; k < r.classes().size(); ++k) {
        if (k) out += ',';
        auto& c = r.classes()[k];
        if (c.size() == 1) {
            out += alt_letter(c[0]);
        } else {
            out += '{';
            for (size_t i = 0; i < c.size(); ++i) {
                if (i) out += ',';
                out += alt_letter(c[i]);
            }
            out += '}';
        }
    }
    return out;
}

/// Parse error with a character position, for CLI diagnostics.
struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& what, size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Parses "a,{b,c},d". Whitespace is ignored. The alternatives mentioned
/// must be exactly a..<letter m-1> for some m.
inline WeakOrder parse_weak_order(const std::string& text) {
    std::vector<std::vector<int>> classes;
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i; };
    auto parse_alt = [&]() -> int {
        skip_ws();
        if (i >= text.size() || text[i] < 'a' || text[i] > 'z')
            throw ParseError("expected alternative letter", i);
        return alt_index(text[i++]);
    };
    while (true) {
        skip_ws();
        if (i < text.size() && text[i] == '{') {
            ++i;
            std::vector<int> cls;
            cls.push_back(parse_alt());
            skip_ws();
            while (i < text.size() && text[i] == ',') {
                ++i;
                cls.push_back(parse_alt());
                skip_ws();
            }
            if (i >= text.size() || text[i] != '}') throw ParseError("expected '}'", i);
            ++i;
            classes.push_back(std::move(cls));
        } else {
            classes.push_back({parse_alt()});
        }
        skip_ws();
        if (i >= text.size()) break;
        if (text[i] != ',') throw ParseError("expected ','", i);
        ++i;
    }
    // Mentioned alternatives must form a contiguous range starting at 'a'.
    int maxa = -1;
    size_t count = 0;
    for (auto& c : classes)
        for (int a : c) {
            maxa = std::max(maxa, a);
            ++count;
        }
    if (count != static_cast<size_t>(maxa + 1))
        throw ParseError("duplicate or missing alternative", text.size());
    try {
        return WeakOrder(std::move(classes));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), text.size());
    }
}

}  // namespace sds
