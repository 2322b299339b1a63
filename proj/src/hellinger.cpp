#include "hellvec/hellinger.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <tuple>

#include "hellvec/errors.hpp"

namespace hellvec {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Candidate {
    double sq;
    std::uint32_t id;
    bool operator<(const Candidate& o) const { return std::tie(sq, id) < std::tie(o.sq, o.id); }
};

void check_query(std::uint32_t query, const DistributionMatrix& m) {
    if (query >= m.rows()) throw UsageError("query id " + std::to_string(query) + " out of range");
    if (m.row(query).empty()) {
        throw NoDistributionError("word id " + std::to_string(query) + " has no counted context");
    }
}

NeighborList select_k(std::uint32_t query, std::size_t k, const std::vector<double>& sq, const DistributionMatrix& m) {
    std::priority_queue<Candidate> heap;  // max-heap keeps the k best
    for (std::uint32_t r = 0; r < sq.size(); ++r) {
        if (r == query || m.row(r).empty()) continue;
        const Candidate c{sq[r], r};
        if (heap.size() < k) {
            heap.push(c);
        } else if (k > 0 && c < heap.top()) {
            heap.pop();
            heap.push(c);
        }
    }
    NeighborList out;
    out.query = query;
    out.neighbors.resize(heap.size());
    for (auto i = heap.size(); i-- > 0;) {
        out.neighbors[i] = {heap.top().id, std::min(1.0, std::sqrt(heap.top().sq) * kInvSqrt2)};
        heap.pop();
    }
    return out;
}

}  // namespace

double squared_l2_distance(SparseRowView a, SparseRowView b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.nnz() && j < b.nnz()) {
        if (a.cols[i] == b.cols[j]) {
            const double d = a.vals[i++] - b.vals[j++];
            s += d * d;
        } else if (a.cols[i] < b.cols[j]) {
            s += a.vals[i] * a.vals[i];
            ++i;
        } else {
            s += b.vals[j] * b.vals[j];
            ++j;
        }
    }
    for (; i < a.nnz(); ++i) s += a.vals[i] * a.vals[i];
    for (; j < b.nnz(); ++j) s += b.vals[j] * b.vals[j];
    return s;
}

std::optional<double> hellinger_distance(SparseRowView a, SparseRowView b) {
    if (a.empty() || b.empty()) return std::nullopt;
    // Unit norms are only exact to rounding; disjoint supports would otherwise land a ulp above 1.
    return std::min(1.0, std::sqrt(squared_l2_distance(a, b)) * kInvSqrt2);
}

NeighborList nearest_neighbors(std::uint32_t query, std::size_t k, const DistributionMatrix& m) {
    check_query(query, m);
    const auto q = m.row(query);
    std::vector<double> sq(m.rows(), 0.0);
    const auto n = static_cast<std::int64_t>(m.rows());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t r = 0; r < n; ++r) {
        const auto row = m.row(static_cast<std::size_t>(r));
        if (!row.empty()) sq[static_cast<std::size_t>(r)] = squared_l2_distance(q, row);
    }
    return select_k(query, k, sq, m);
}

namespace reference {

NeighborList nearest_neighbors(std::uint32_t query, std::size_t k, const DistributionMatrix& m) {
    check_query(query, m);
    std::vector<Candidate> all;
    for (std::uint32_t r = 0; r < m.rows(); ++r) {
        if (r == query || m.row(r).empty()) continue;
        all.push_back({squared_l2_distance(m.row(query), m.row(r)), r});
    }
    std::sort(all.begin(), all.end());
    all.resize(std::min(k, all.size()));
    NeighborList out;
    out.query = query;
    for (const auto& c : all) out.neighbors.push_back({c.id, std::min(1.0, std::sqrt(c.sq) * kInvSqrt2)});
    return out;
}

}  // namespace reference

}  // namespace hellvec
