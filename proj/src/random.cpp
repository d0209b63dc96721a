#include "bundlesym/random.hpp"

namespace bundlesym {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::string_view stream)
    : seed_(seed), key_(splitmix64(seed ^ splitmix64(fnv1a(stream)))) {}

std::uint64_t CounterRng::next_u64() {
    // Two rounds of the mixer over (key, counter).
    return splitmix64(splitmix64(key_ + counter_++) ^ key_);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Vec CounterRng::uniform_vec(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
}

Mat CounterRng::uniform_mat(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
    return m;
}

LieAlgebraElement random_algebra(CounterRng& rng, const GroupPtr& group, double radius, double max_norm) {
    Vec v = rng.uniform_vec(group->dim(), -radius, radius);
    const double n = v.norm();
    if (n > max_norm) v *= max_norm / n;
    return {v};
}

GroupElement random_group_element(CounterRng& rng, const GroupPtr& group) {
    return exp(group, random_algebra(rng, group, 2.5, 2.5));
}

} // namespace bundlesym
