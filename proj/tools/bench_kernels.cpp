// Times the OpenMP kernels against their serial references on a synthetic
// Zipf corpus and checks that both produce the same result.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "hellvec/cooccur.hpp"
#include "hellvec/hellinger.hpp"
#include "hellvec/reduce.hpp"

using namespace hellvec;

namespace {

template <typename F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* kernel, double serial, double parallel, bool same) {
    std::printf("%-10s serial %9.4f s  parallel %9.4f s  speedup %6.2fx  %s\n", kernel, serial, parallel,
                parallel > 0.0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernel timings"};
    std::size_t tokens = 2'000'000, words = 20'000, contexts = 1'000, queries = 20;
    std::uint32_t window = 5;
    std::uint64_t seed = 7;
    app.add_option("--tokens", tokens, "corpus size");
    app.add_option("--words", words, "vocabulary size");
    app.add_option("--contexts", contexts, "context dictionary size");
    app.add_option("--window", window, "symmetric window size");
    app.add_option("--queries", queries, "nearest-neighbor queries");
    app.add_option("--seed", seed, "corpus seed");
    CLI11_PARSE(app, argc, argv);

    std::mt19937_64 rng(seed);
    std::vector<double> weights(words);
    for (std::size_t i = 0; i < words; ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
    std::discrete_distribution<std::int32_t> zipf(weights.begin(), weights.end());
    std::vector<TokenIds> docs;
    std::uniform_int_distribution<std::size_t> doc_len(50, 2000);
    for (std::size_t made = 0; made < tokens;) {
        TokenIds doc(std::min(doc_len(rng), tokens - made));
        for (auto& t : doc) t = zipf(rng);
        made += doc.size();
        docs.push_back(std::move(doc));
    }

    std::vector<std::uint32_t> ctx_words(std::min(contexts, words));
    for (std::uint32_t i = 0; i < ctx_words.size(); ++i) ctx_words[i] = i;
    const ContextDictionary ctx(ctx_words, words, ContextScenario::top_k(contexts), "bench");
    const WindowSpec spec{window, true};
    std::printf("%zu tokens, %zu words, %zu contexts, window %u, %d threads\n", tokens, words, ctx_words.size(), window,
                omp_get_max_threads());

    CooccurrenceMatrix serial_counts, parallel_counts;
    const double cs = seconds([&] { serial_counts = reference::count_cooccurrences(docs, ctx, spec); });
    const double cp = seconds([&] { parallel_counts = count_cooccurrences(docs, ctx, spec, {1u << 16}); });
    report("count", cs, cp, serial_counts.counts == parallel_counts.counts);

    const auto dist = normalize_rows(parallel_counts);
    RowMatrix g_serial, g_parallel;
    const double gs = seconds([&] { g_serial = reference::gram_matrix(dist.values); });
    const double gp = seconds([&] { g_parallel = gram_matrix(dist.values); });
    report("gram", gs, gp, g_serial == g_parallel);

    bool same = true;
    double ks = 0.0, kp = 0.0;
    for (std::uint32_t q = 0; q < queries && q < dist.rows(); ++q) {
        if (dist.is_zero_row(q)) continue;
        NeighborList a, b;
        ks += seconds([&] { a = reference::nearest_neighbors(q, 10, dist); });
        kp += seconds([&] { b = nearest_neighbors(q, 10, dist); });
        same = same && a.neighbors == b.neighbors;
    }
    report("knn", ks, kp, same);
    return 0;
}
