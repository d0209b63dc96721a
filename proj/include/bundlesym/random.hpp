#pragma once

#include <cstdint>
#include <string_view>

#include "bundlesym/liegroup.hpp"

namespace bundlesym {

/**
 * Counter-based generator: the k-th draw of stream (seed, name) is a pure
 * function of (seed, hash(name), k), so results do not depend on how other
 * streams were consumed or on the standard library's distributions.
 */
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view stream);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Vec uniform_vec(Eigen::Index n, double lo, double hi);
    Mat uniform_mat(Eigen::Index rows, Eigen::Index cols, double lo, double hi);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Random algebra element with coordinates in [-radius, radius] and norm below max_norm.
LieAlgebraElement random_algebra(CounterRng& rng, const GroupPtr& group, double radius, double max_norm);
/// exp of a random algebra element of norm < 2.5 (strictly inside the log domain).
GroupElement random_group_element(CounterRng& rng, const GroupPtr& group);

} // namespace bundlesym
