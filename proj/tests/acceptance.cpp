// Acceptance checks 1-12. Each prints one line "criterion N: PASS|FAIL detail".
// Exit status is nonzero when any requested criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <Eigen/QR>
#include <omp.h>

#include "CLI11.hpp"
#include "hellvec/errors.hpp"
#include "hellvec/evalsuite.hpp"
#include "hellvec/hellinger.hpp"
#include "hellvec/infer.hpp"
#include "hellvec/log.hpp"
#include "hellvec/pipeline.hpp"
#include "hellvec/reduce.hpp"
#include "support.hpp"

using namespace hellvec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fs::path g_work;

// ---------------------------------------------------------------------------

Outcome metric_suite() {
    Stopwatch clock;
    test::Rng rng(101);
    std::size_t violations = 0;
    double worst_triangle = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const auto dim = static_cast<std::uint32_t>(std::lround(std::pow(10.0, test::uniform_real(rng, 1.0, 4.0))));
        const auto nnz = [&] { return test::uniform_index(rng, 1, std::min<std::size_t>(dim, 300)); };
        const auto a = test::random_sqrt_row(rng, dim, nnz());
        const auto b = test::random_sqrt_row(rng, dim, nnz());
        const auto c = test::random_sqrt_row(rng, dim, nnz());
        const double ab = *hellinger_distance(a.view(), b.view());
        const double ba = *hellinger_distance(b.view(), a.view());
        const double bc = *hellinger_distance(b.view(), c.view());
        const double ac = *hellinger_distance(a.view(), c.view());
        worst_triangle = std::max(worst_triangle, ac - ab - bc);
        if (ab != ba) ++violations;
        if (*hellinger_distance(a.view(), a.view()) != 0.0) ++violations;
        if (ac > ab + bc + 1e-12) ++violations;
        for (const double h : {ab, bc, ac}) {
            if (h < 0.0 || h > 1.0) ++violations;
        }
    }
    const double t = clock.seconds();
    return {violations == 0 && t < 10.0,
            fmt("1000 triples, %zu violations, max triangle excess %.3g, %.2f s", violations, worst_triangle, t)};
}

Outcome normalization_suite() {
    test::Rng rng(202);
    double worst_norm = 0.0, worst_sum = 0.0;
    std::size_t rows = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t words = test::uniform_index(rng, 1, 60);
        const auto vocab = test::synthetic_vocab(words);
        const auto ctx = select_context_dictionary(vocab, ContextScenario::top_k(test::uniform_index(rng, 1, words)));
        const auto docs = test::random_corpus(rng, words, 2000);
        const auto counts = count_cooccurrences(docs, ctx, {static_cast<std::uint32_t>(test::uniform_index(rng, 1, 6)), trial % 2 == 0});
        const auto dist = normalize_rows(counts);
        for (std::uint32_t r = 0; r < dist.rows(); ++r) {
            const auto row = dist.row(r);
            if (row.empty()) {
                if (!counts.counts.row(r).empty()) return {false, "nonzero count row normalized to empty"};
                continue;
            }
            double sq = 0.0;
            for (const double v : row.vals) sq += v * v;
            // Reconstruct p(c|w) from the raw counts as an independent check.
            const auto c = counts.counts.row(r);
            double total = 0.0, psum = 0.0;
            for (const double v : c.vals) total += v;
            for (std::size_t k = 0; k < c.nnz(); ++k) psum += row.vals[k] * row.vals[k];
            for (std::size_t k = 0; k < c.nnz(); ++k) {
                if (std::abs(row.vals[k] * row.vals[k] - c.vals[k] / total) > 1e-12) return {false, "p(c|w) mismatch"};
            }
            worst_norm = std::max(worst_norm, std::abs(std::sqrt(sq) - 1.0));
            worst_sum = std::max(worst_sum, std::abs(psum - 1.0));
            ++rows;
        }
    }
    return {worst_norm < 1e-9 && worst_sum < 1e-9,
            fmt("%zu rows, max |norm-1| %.3g, max |sum p - 1| %.3g", rows, worst_norm, worst_sum)};
}

Outcome counting_oracle() {
    test::Rng rng(303);
    std::size_t cases = 0, mismatches = 0;
    for (int corpus = 0; corpus < 200; ++corpus) {
        const std::size_t words = test::uniform_index(rng, 1, 50);
        const auto vocab = test::synthetic_vocab(words);
        const auto ctx = select_context_dictionary(
            vocab, corpus % 4 == 0 ? ContextScenario::all() : ContextScenario::top_k(test::uniform_index(rng, 1, words)));
        const auto docs = test::random_corpus(rng, words, 1000);
        for (const bool sym : {true, false}) {
            for (const std::uint32_t size : {1u, 5u, 10u}) {
                const WindowSpec window{size, sym};
                // Random contiguous shards, each counted in parallel, then merged.
                std::vector<CooccurrenceMatrix> parts;
                std::size_t begin = 0;
                while (begin < docs.size()) {
                    const std::size_t end = std::min(docs.size(), begin + test::uniform_index(rng, 1, 8));
                    parts.push_back(count_cooccurrences(std::span(docs).subspan(begin, end - begin), ctx, window,
                                                        {test::uniform_index(rng, 1, 64)}));
                    begin = end;
                }
                const auto merged = merge(parts);
                const auto oracle = test::oracle_counts(docs, ctx, window);
                ++cases;
                if (!(merged.counts == oracle) || !(reference::count_cooccurrences(docs, ctx, window).counts == oracle)) {
                    ++mismatches;
                }
            }
        }
    }
    return {mismatches == 0, fmt("%zu corpus/window cases, %zu mismatches", cases, mismatches)};
}

Outcome pca_correctness() {
    test::Rng rng(404);
    double worst_exact = 0.0, worst_increase = -INFINITY, worst_iso = 0.0;
    for (const std::size_t r : {1, 3, 5}) {
        for (int trial = 0; trial < 4; ++trial) {
            const std::size_t rows = trial == 0 ? 200 : test::uniform_index(rng, r + 5, 200);
            const std::size_t cols = trial == 0 ? 100 : test::uniform_index(rng, r + 2, 100);
            const RowMatrix x = test::random_rank_r(rng, rows, cols, r);
            const auto m = test::as_distributions(x);
            worst_exact = std::max(worst_exact, reconstruction_error(m, hellinger_pca(m, r).encoder));
            double prev = INFINITY;
            for (std::size_t d = 1; d <= std::min<std::size_t>(cols, 12); ++d) {
                const double e = reconstruction_error(m, hellinger_pca(m, d).encoder);
                worst_increase = std::max(worst_increase, e - prev);
                prev = e;
            }
        }
    }
    // Full rank on general distributions: Euclidean distance = sqrt(2) * Hellinger.
    for (int trial = 0; trial < 3; ++trial) {
        const auto m = test::random_distributions(rng, 120, static_cast<std::uint32_t>(test::uniform_index(rng, 20, 100)),
                                                  0.2, 0.05);
        const auto pca = hellinger_pca(m, m.cols());
        const auto& e = pca.embeddings.vectors;
        for (std::uint32_t a = 0; a < m.rows(); ++a) {
            if (m.is_zero_row(a)) continue;
            for (std::uint32_t b = a + 1; b < m.rows(); ++b) {
                if (m.is_zero_row(b)) continue;
                const double gap = std::abs((e.row(a) - e.row(b)).norm() - std::sqrt(2.0) * *hellinger_distance(m.row(a), m.row(b)));
                worst_iso = std::max(worst_iso, gap);
            }
        }
    }
    const bool pass = worst_exact < 1e-8 && worst_increase <= 1e-12 && worst_iso < 1e-8;
    return {pass, fmt("max error at d=r %.3g, max increase in d %.3g, max |dist - sqrt2 H| %.3g", worst_exact,
                      worst_increase, worst_iso)};
}

double one_loss(const RowMatrix& U, const RowMatrix& V, const Eigen::VectorXd& x) {
    return (V * (U.transpose() * x) - x).squaredNorm();
}

Outcome gradient_check() {
    Stopwatch clock;
    test::Rng rng(505);
    const auto m = test::random_distributions(rng, 30, 8, 0.5);
    const RowMatrix xs = test::dense(m.values);
    RowMatrix U(8, 3), V(8, 3);
    for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = test::uniform_real(rng, -0.5, 0.5);
    for (Eigen::Index i = 0; i < V.size(); ++i) V.data()[i] = test::uniform_real(rng, -0.5, 0.5);
    const double h = 1e-5;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto r = static_cast<std::uint32_t>(test::uniform_index(rng, 0, 29));
        const Eigen::VectorXd x = xs.row(r).transpose();
        const auto g = slra_gradients(U, V, m.row(r));
        const auto i = static_cast<Eigen::Index>(test::uniform_index(rng, 0, 7));
        const auto j = static_cast<Eigen::Index>(test::uniform_index(rng, 0, 2));
        for (const bool of_u : {true, false}) {
            RowMatrix p = of_u ? U : V, q = p;
            p(i, j) += h;
            q(i, j) -= h;
            const double fd = of_u ? (one_loss(p, V, x) - one_loss(q, V, x)) / (2 * h)
                                   : (one_loss(U, p, x) - one_loss(U, q, x)) / (2 * h);
            const double an = of_u ? g.dU(i, j) : g.dV(i, j);
            const double scale = std::max({std::abs(fd), std::abs(an), 1e-8});
            worst = std::max(worst, std::abs(fd - an) / scale);
        }
    }
    const double t = clock.seconds();
    return {worst < 1e-4 && t < 5.0, fmt("20 coordinates each of U and V, max relative error %.3g, %.3f s", worst, t)};
}

Outcome slra_vs_optimal() {
    Stopwatch clock;
    test::Rng rng(606);
    const auto m = test::random_distributions(rng, 500, 100, 0.3);
    SlraHyperparams hp;
    hp.epochs = 200;
    const auto model = slra_train(m, 10, hp);
    const double slra = reconstruction_error(m, model);
    const double opt = test::optimal_rank_error(test::dense(m.values), 10);
    const double t = clock.seconds();
    return {slra <= 1.10 * opt && t < 60.0,
            fmt("SLRA %.6g vs optimal %.6g (ratio %.4f), %.1f s", slra, opt, slra / opt, t)};
}

Outcome roundoff() {
    Stopwatch clock;
    test::Rng rng(707);
    const Eigen::Index n = 2000, k = 500, d = 50;
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd a(n, k), b(k, k);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = gauss(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = gauss(rng);
    a.col(0).setOnes();
    const Eigen::MatrixXd A = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() * Eigen::MatrixXd::Identity(n, k);
    const Eigen::MatrixXd B = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ();
    // One dominant direction, a band four orders down, and a tail from six to eight orders down.
    Eigen::VectorXd sigma(k);
    const double s1 = std::sqrt(static_cast<double>(n));
    sigma[0] = s1;
    for (Eigen::Index i = 1; i < d; ++i) sigma[i] = s1 * 1e-4;
    for (Eigen::Index i = d; i < k; ++i) {
        sigma[i] = s1 * std::pow(10.0, -6.0 - 2.0 * static_cast<double>(i - d) / static_cast<double>(k - d - 1));
    }
    const RowMatrix x = A * sigma.asDiagonal() * B.transpose();
    const auto sp = test::sparse(x);
    const auto fp = Fingerprint::of("roundoff");

    double opt = 0.0;
    for (Eigen::Index i = d; i < k; ++i) opt += sigma[i] * sigma[i];
    const double pca64 = reconstruction_error(sp, hellinger_pca(sp, d, fp).encoder.U, hellinger_pca(sp, d, fp).encoder.U);
    const auto p32 = hellinger_pca(sp, d, fp, {GramPrecision::Float32});
    const double pca32 = reconstruction_error(sp, p32.encoder.U, p32.encoder.U);
    SlraHyperparams hp;
    hp.epochs = 200;
    double slra = NAN;
    std::string note;
    try {
        const auto model = slra_train(sp, d, hp, fp);
        slra = reconstruction_error(sp, model.encoder.U, model.V);
    } catch (const NumericError& e) {
        note = std::string(", SLRA failed: ") + e.what();
    }
    const double t = clock.seconds();
    const double span = std::log10(sigma[0] / sigma[k - 1]);
    return {slra < pca32, fmt("2000x500, singular values span %.1f orders, d=50: optimal %.4g, f64 PCA %.4g, "
                              "f32 PCA %.4g, SLRA %.4g (%.1f s)%s",
                              span, opt, pca64, pca32, slra, t, note.c_str())};
}

// Independent 3CosMul: recomputes affinities from raw coordinates.
std::optional<std::uint32_t> brute_3cosmul(const std::function<double(std::uint32_t, std::uint32_t)>& s,
                                           const std::function<bool(std::uint32_t)>& ok, std::uint32_t n,
                                           std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::optional<std::uint32_t> best;
    double best_score = -INFINITY;
    for (std::uint32_t x = 0; x < n; ++x) {
        if (x == a || x == b || x == c || !ok(x)) continue;
        const double score = s(x, b) * s(x, c) / (s(x, a) + 0.001);
        if (score > best_score) {
            best_score = score;
            best = x;
        }
    }
    return best;
}

Outcome analogy_oracle() {
    test::Rng rng(808);
    std::vector<std::string> words;
    for (int i = 0; i < 50; ++i) words.push_back("w" + std::to_string(i));
    std::size_t agree = 0, total = 0, ties = 0;

    // Dense vectors on a small integer grid, with duplicated and zero rows.
    RowMatrix v(50, 5);
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = std::round(test::uniform_real(rng, -2, 2));
    for (const auto& [dst, src] : {std::pair{11, 10}, {21, 20}, {33, 32}, {40, 39}}) v.row(dst) = v.row(src);
    v.row(45).setZero();
    const DenseRepresentation dense(words, v);
    const auto cos_aff = [&](std::uint32_t x, std::uint32_t y) {
        return (v.row(x).dot(v.row(y)) / (v.row(x).norm() * v.row(y).norm()) + 1.0) / 2.0;
    };
    const auto dense_ok = [&](std::uint32_t x) { return !v.row(x).isZero(0.0); };

    // Raw distributions with duplicates and an empty row.
    auto dist = test::random_distributions(rng, 50, 12, 0.25, 0.0);
    RowMatrix p = test::dense(dist.values);
    for (const auto& [dst, src] : {std::pair{5, 4}, {17, 16}, {30, 29}}) p.row(dst) = p.row(src);
    p.row(44).setZero();
    const auto raw_dist = test::as_distributions(p);
    const RawRepresentation raw(words, raw_dist);
    const auto hel_aff = [&](std::uint32_t x, std::uint32_t y) { return 1.0 - test::dense_hellinger(p.row(x), p.row(y)); };
    const auto raw_ok = [&](std::uint32_t x) { return !p.row(x).isZero(0.0); };

    // Rows that share their vector with another row; raw ids are offset by 100.
    const std::set<std::uint32_t> duplicated{10, 11, 20, 21, 32, 33, 39, 40, 104, 105, 116, 117, 129, 130};
    for (int q = 0; q < 100; ++q) {
        const bool use_dense = q % 2 == 0;
        const auto& ok = use_dense ? std::function<bool(std::uint32_t)>(dense_ok) : raw_ok;
        std::uint32_t a, b, c;
        do {
            a = static_cast<std::uint32_t>(test::uniform_index(rng, 0, 49));
            b = static_cast<std::uint32_t>(test::uniform_index(rng, 0, 49));
            c = static_cast<std::uint32_t>(test::uniform_index(rng, 0, 49));
        } while (a == b || b == c || a == c || !ok(a) || !ok(b) || !ok(c));
        const auto got = answer_analogy_3cosmul(use_dense ? static_cast<const Representation&>(dense) : raw, a, b, c);
        const auto want = use_dense ? brute_3cosmul(cos_aff, dense_ok, 50, a, b, c)
                                    : brute_3cosmul(hel_aff, raw_ok, 50, a, b, c);
        if (got && duplicated.count(*got + (use_dense ? 0u : 100u))) ++ties;
        ++total;
        agree += got == want ? 1 : 0;
    }
    return {agree == total, fmt("%zu/%zu questions agree (dense and raw), %zu answers among duplicated rows", agree,
                                total, ties)};
}

Outcome spearman_suite() {
    const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 4, 3}, r{4, 3, 2, 1};
    const double id = *spearman(a, a), rev = *spearman(a, r), four = *spearman(a, b);
    test::Rng rng(909);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto n = test::uniform_index(rng, 5, 200);
        std::vector<double> x(n), y(n), fx(n), gy(n);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = test::uniform_real(rng, -5, 5);
            y[k] = std::round(test::uniform_real(rng, 0, 20));
            fx[k] = std::atan(x[k]) * 3 + 1;
            gy[k] = std::exp(y[k] / 4);
        }
        const auto s0 = spearman(x, y), s1 = spearman(fx, gy);
        if (s0.has_value() != s1.has_value()) return {false, "degenerate outcome changed under a monotone map"};
        if (s0) worst = std::max(worst, std::abs(*s0 - *s1));
    }
    const bool pass = id == 1.0 && rev == -1.0 && std::abs(four - 0.8) < 1e-12 && worst < 1e-12;
    return {pass, fmt("identical %.12f, reversed %.12f, 4-point %.12f, max monotone drift %.3g", id, rev, four, worst)};
}

Outcome inference_round_trip() {
    test::Rng rng(1010);
    const std::size_t n_words = 80;
    const auto base = test::synthetic_vocab(n_words);
    std::vector<TokenIds> ids;
    std::size_t tokens = 0;
    while (tokens < 12000) {
        auto part = test::random_corpus(rng, n_words, 2000, 0.02);
        for (auto& d : part) tokens += d.size();
        ids.insert(ids.end(), part.begin(), part.end());
    }
    const auto docs = test::as_words(ids, base);
    const auto vocab = build_vocabulary(docs, 1);
    const auto ctx = select_context_dictionary(vocab, ContextScenario::top_k(40));
    const WindowSpec window{3, true};
    const auto dist = normalize_rows(count_cooccurrences(docs, vocab, ctx, window));
    const auto pca = hellinger_pca(dist, 10);

    std::vector<PhraseQuery> phrases;
    for (const auto& e : vocab.entries()) phrases.push_back({{e.word}});
    PhraseCounter counter(phrases, vocab, ctx, window);
    counter.add_documents(docs);
    const auto results = counter.results();
    const auto fp = context_fingerprint(ctx, window);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::uint32_t id = 0; id < vocab.size(); ++id) {
        if (dist.is_zero_row(id)) continue;
        const auto v = infer_vector(results[id].counts, pca.encoder, fp);
        worst = std::max(worst, (v.transpose() - pca.embeddings.vectors.row(id)).cwiseAbs().maxCoeff());
        ++checked;
    }

    const std::vector<std::vector<std::string>> six{{"i", "flew", "british", "airways", "to", "rome"}};
    const auto v6 = build_vocabulary(six, 1);
    const auto c6 = select_context_dictionary(v6, ContextScenario::all());
    const auto counts = count_phrase_contexts(six, PhraseQuery::parse("british airways"), v6, c6, {1, true});
    std::map<std::string, double> got;
    for (std::size_t k = 0; k < counts.nnz(); ++k) got[v6.word(c6.word(counts.cols[k]))] = counts.vals[k];
    const bool hand = got == std::map<std::string, double>{{"flew", 1}, {"to", 1}};

    return {worst < 1e-6 && checked == vocab.size() - dist.zero_rows.size() && hand,
            fmt("%zu tokens, %zu words round-tripped, max deviation %.3g; six-token phrase counts %s", tokens, checked,
                worst, hand ? "{flew:1, to:1}" : "WRONG")};
}

Outcome trend_check() {
    const char* corpus = std::getenv("HELLVEC_TREND_CORPUS");
    const char* ws353 = std::getenv("HELLVEC_WS353");
    if (!corpus || !ws353) {
        return {false, "needs a corpus of at least 10M tokens: set HELLVEC_TREND_CORPUS and HELLVEC_WS353 (not set)"};
    }
    PipelineConfig config;
    config.corpus = {corpus};
    TokenCounter counter;
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) {
        for (const auto& d : docs) counter.add_all(d);
    });
    if (counter.total() < 10'000'000) {
        return {false, fmt("corpus has %llu tokens; at least 10M are required",
                           static_cast<unsigned long long>(counter.total()))};
    }
    const auto vocab = counter.finish(config.min_count);
    std::vector<TokenIds> documents;
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) {
        for (const auto& d : docs) documents.push_back(to_ids(d, vocab));
    });
    std::vector<std::string> words;
    for (const auto& e : vocab.entries()) words.push_back(e.word);
    const auto ctx = select_context_dictionary(vocab, config.scenario);
    const auto ds = load_similarity(ws353);
    EvalReport reports[2];
    for (const bool sym : {false, true}) {
        const auto dist = normalize_rows(count_cooccurrences(documents, ctx, {1, sym}));
        const RawRepresentation repr(words, dist);
        reports[sym] = evaluate_similarity(repr, ds, sym ? "sym1" : "asym1");
    }
    const bool pass = reports[0].score && reports[1].score && *reports[1].score >= *reports[0].score;
    return {pass, fmt("%llu tokens; symmetric %.4f (%zu evaluated, %zu skipped) vs asymmetric %.4f (%zu, %zu)",
                      static_cast<unsigned long long>(counter.total()), reports[1].score.value_or(NAN),
                      reports[1].evaluated, reports[1].skipped, reports[0].score.value_or(NAN), reports[0].evaluated,
                      reports[0].skipped)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto dir = g_work / "determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    test::Rng rng(1212);
    {
        std::ofstream out(dir / "corpus.txt");
        for (int l = 0; l < 3000; ++l) {
            const auto len = test::uniform_index(rng, 4, 20);
            for (std::size_t i = 0; i < len; ++i) {
                const auto w = std::min(test::uniform_index(rng, 0, 199), test::uniform_index(rng, 0, 199));
                out << (i ? " " : "") << "w" << static_cast<char>('a' + w % 26) << static_cast<char>('a' + w / 26);
            }
            out << '\n';
        }
    }
    std::string detail;
    bool pass = true;
    for (const auto reducer : {Reducer::Pca, Reducer::Slra}) {
        std::vector<std::string> runs[2];
        for (int run = 0; run < 2; ++run) {
            PipelineConfig c;
            c.corpus = {dir / "corpus.txt"};
            c.min_count = 3;
            c.scenario = ContextScenario::top_k(60);
            c.window = {3, true};
            c.reducer = reducer;
            c.dim = 10;
            c.slra.epochs = 5;
            c.seed = 42;
            c.slra.seed = 42;
            c.deterministic = true;
            c.out_dir = dir / (std::string(to_string(reducer)) + std::to_string(run));
            omp_set_num_threads(1);
            run_vocab(c);
            run_cooc(c);
            run_embed(c);
            for (const auto* name : {artifact::kVocab, artifact::kCooc, artifact::kEncoder, artifact::kEmbeddings}) {
                runs[run].push_back(slurp(c.out_dir / name));
            }
        }
        const bool same = runs[0] == runs[1];
        pass = pass && same;
        std::size_t bytes = 0;
        for (const auto& f : runs[0]) bytes += f.size();
        detail += fmt("%s%s: %zu bytes %s", detail.empty() ? "" : "; ", std::string(to_string(reducer)).c_str(), bytes,
                      same ? "identical" : "DIFFER");
    }
    return {pass, detail};
}

const std::vector<std::pair<const char*, Outcome (*)()>> kCriteria{
    {"metric suite", metric_suite},
    {"normalization", normalization_suite},
    {"counting oracle", counting_oracle},
    {"PCA correctness", pca_correctness},
    {"SLRA gradient check", gradient_check},
    {"SLRA vs optimal", slra_vs_optimal},
    {"float32 round-off", roundoff},
    {"3CosMul oracle", analogy_oracle},
    {"Spearman", spearman_suite},
    {"inference round trip", inference_round_trip},
    {"window symmetry trend", trend_check},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int criterion = 0;
    std::string work = (fs::temp_directory_path() / "hellvec_acceptance").string();
    app.add_option("--criterion", criterion, "run one criterion (1-12); all when omitted")->check(CLI::Range(0, 12));
    app.add_option("--work", work, "scratch directory");
    CLI11_PARSE(app, argc, argv);
    g_work = work;
    fs::create_directories(g_work);
    log::set_level(log::Level::Quiet);

    bool all = true;
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        if (criterion != 0 && static_cast<std::size_t>(criterion) != i + 1) continue;
        Outcome o;
        try {
            o = kCriteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu: %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", kCriteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
