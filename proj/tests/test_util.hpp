#pragma once

#include "sds/lottery.hpp"
#include "sds/profile.hpp"

#include <cstdint>

namespace sds::testing {

/// The four-agent four-alternative profile whose RSD lottery is
/// 7/24 a + 7/24 b + 5/24 c + 5/24 d.
inline Profile example1_profile() {
    return parse_profile(
        "{a,c},{b,d}\n"
        "{b,d},{a,c}\n"
        "{a,d},b,c\n"
        "{b,c},a,d\n");
}

inline uint64_t rng_next(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Random exact lottery: integer weights in [0, 8], renormalized.
inline Lottery random_lottery(int m, uint64_t& state) {
    std::vector<Rational> w(m);
    Rational total = 0;
    for (int x = 0; x < m; ++x) {
        w[x] = Rational(rng_next(state) % 9);
        total += w[x];
    }
    if (total == 0) return Lottery::degenerate(m, static_cast<int>(rng_next(state) % m));
    for (auto& v : w) v /= total;
    return Lottery(std::move(w));
}

inline WeakOrder random_weak_order(int m, uint64_t& state) {
    auto orders = enumerate_weak_orders(m);
    return orders[rng_next(state) % orders.size()];
}

inline Profile random_profile(int m, int n, uint64_t& state) {
    std::vector<WeakOrder> orders;
    for (int i = 0; i < n; ++i) orders.push_back(random_weak_order(m, state));
    return Profile(std::move(orders));
}

}  // namespace sds::testing
