#ifndef HELLVEC_HELLINGER_HPP
#define HELLVEC_HELLINGER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hellvec/cooccur.hpp"
#include "hellvec/sparse.hpp"

namespace hellvec {

struct Neighbor {
    std::uint32_t id = 0;
    double distance = 0.0;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborList {
    static constexpr std::uint32_t kNoQuery = 0xFFFFFFFFu;

    std::uint32_t query = kNoQuery;
    /// Nondecreasing distance, ties by ascending id.
    std::vector<Neighbor> neighbors;
};

/// ||a - b||^2 by a merge over the union of supports.
double squared_l2_distance(SparseRowView a, SparseRowView b);

/// (1/sqrt(2)) ||sqrt(P) - sqrt(Q)||_2. nullopt when either row is empty:
/// a word without counted context has no distribution.
std::optional<double> hellinger_distance(SparseRowView a, SparseRowView b);

/// Exact k nearest rows by Hellinger distance, excluding the query and empty
/// rows. Distances are scanned in parallel; selection is a bounded heap.
/// Throws NoDistributionError when the query row is empty.
NeighborList nearest_neighbors(std::uint32_t query, std::size_t k, const DistributionMatrix& m);

namespace reference {
NeighborList nearest_neighbors(std::uint32_t query, std::size_t k, const DistributionMatrix& m);
}  // namespace reference

}  // namespace hellvec

#endif
