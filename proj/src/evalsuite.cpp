#include "hellvec/evalsuite.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "hellvec/corpus.hpp"
#include "hellvec/errors.hpp"
#include "hellvec/hellinger.hpp"

namespace hellvec {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

// Average 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

enum class Outcome : std::uint8_t { Skipped, Correct, Wrong };

EvalReport accuracy_report(std::string task, std::size_t correct, std::size_t evaluated, std::size_t skipped) {
    EvalReport r{std::move(task), std::nullopt, evaluated, skipped};
    if (evaluated > 0) r.score = static_cast<double>(correct) / static_cast<double>(evaluated);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Datasets

SimilarityDataset parse_similarity(std::istream& in, SimilarityFormat format) {
    SimilarityDataset ds;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        char sep = format == SimilarityFormat::Comma ? ',' : '\t';
        if (format == SimilarityFormat::Auto && text.find('\t') == std::string_view::npos) sep = ',';
        const auto fields = split_on(text, sep);
        const auto where = "line " + std::to_string(line_no);
        std::optional<double> score;
        if (fields.size() >= 3) score = parse_number(fields[2]);
        if (first && fields.size() >= 3 && !score) {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() < 3) throw DataError(where + ": expected word1, word2 and a score");
        if (!score || !std::isfinite(*score)) throw DataError(where + ": bad score \"" + std::string(fields[2]) + "\"");
        if (fields[0].empty() || fields[1].empty()) throw DataError(where + ": empty word");
        ds.pairs.push_back({normalize_token(fields[0]), normalize_token(fields[1]), *score});
    }
    if (ds.pairs.empty()) throw DataError("similarity dataset has no pairs");
    return ds;
}

SimilarityDataset load_similarity(const std::filesystem::path& path, SimilarityFormat format) {
    auto in = open_input(path);
    try {
        return parse_similarity(in, format);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

AnalogyDataset parse_analogy(std::istream& in) {
    AnalogyDataset ds;
    AnalogySection section = AnalogySection::Semantic;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        if (text.front() == ':') {
            section = text.find("gram") != std::string_view::npos ? AnalogySection::Syntactic
                                                                  : AnalogySection::Semantic;
            continue;
        }
        const auto words = split_whitespace(text);
        if (words.size() != 4) {
            throw DataError("line " + std::to_string(line_no) + ": expected 4 words, got " +
                            std::to_string(words.size()));
        }
        ds.questions.push_back({normalize_token(words[0]), normalize_token(words[1]), normalize_token(words[2]),
                                normalize_token(words[3]), section});
    }
    if (ds.questions.empty()) throw DataError("analogy dataset has no questions");
    return ds;
}

AnalogyDataset load_analogy(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return parse_analogy(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Statistics

std::optional<double> spearman(std::span<const double> model_scores, std::span<const double> human_scores) {
    if (model_scores.size() != human_scores.size()) throw UsageError("spearman: inputs differ in length");
    if (model_scores.empty()) throw UsageError("spearman: empty input");
    const auto x = average_ranks(model_scores);
    const auto y = average_ranks(human_scores);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Representations

Representation::Representation(std::vector<std::string> words) : words_(std::move(words)) {
    index_.reserve(words_.size());
    for (std::uint32_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
}

std::optional<std::uint32_t> Representation::find(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Representation::lookup(std::string_view word) const {
    const auto id = find(word);
    if (!id || !representable(*id)) return std::nullopt;
    return id;
}

std::vector<double> Representation::affinities(std::uint32_t id) const {
    std::vector<double> out(size(), 0.0);
    const auto n = static_cast<std::int64_t>(size());
#pragma omp parallel for schedule(dynamic, 256) if (!omp_in_parallel())
    for (std::int64_t x = 0; x < n; ++x) {
        const auto xi = static_cast<std::uint32_t>(x);
        if (representable(xi)) out[xi] = affinity(id, xi);
    }
    return out;
}

RawRepresentation::RawRepresentation(std::vector<std::string> words, const DistributionMatrix& m)
    : Representation(std::move(words)), m_(m) {
    if (size() != m.rows()) throw DataError("word list and distribution matrix differ in length");
}

bool RawRepresentation::representable(std::uint32_t id) const { return id < m_.rows() && !m_.row(id).empty(); }

double RawRepresentation::similarity(std::uint32_t a, std::uint32_t b) const {
    return -*hellinger_distance(m_.row(a), m_.row(b));
}

double RawRepresentation::affinity(std::uint32_t a, std::uint32_t b) const {
    return 1.0 - *hellinger_distance(m_.row(a), m_.row(b));
}

DenseRepresentation::DenseRepresentation(std::vector<std::string> words, const RowMatrix& vectors)
    : Representation(std::move(words)), unit_(vectors), nonzero_(static_cast<std::size_t>(vectors.rows()), false) {
    if (size() != static_cast<std::size_t>(vectors.rows())) {
        throw DataError("word list and embedding matrix differ in length");
    }
    for (Eigen::Index r = 0; r < unit_.rows(); ++r) {
        const double norm = unit_.row(r).norm();
        if (norm > 0.0) {
            unit_.row(r) /= norm;
            nonzero_[static_cast<std::size_t>(r)] = true;
        }
    }
}

bool DenseRepresentation::representable(std::uint32_t id) const { return id < nonzero_.size() && nonzero_[id]; }

double DenseRepresentation::cosine(std::uint32_t a, std::uint32_t b) const {
    return unit_.row(a).dot(unit_.row(b));
}

double DenseRepresentation::similarity(std::uint32_t a, std::uint32_t b) const { return cosine(a, b); }

double DenseRepresentation::affinity(std::uint32_t a, std::uint32_t b) const { return (cosine(a, b) + 1.0) / 2.0; }

// ---------------------------------------------------------------------------
// Scoring

std::optional<double> similarity_score(const Representation& repr, std::string_view w1, std::string_view w2) {
    const auto a = repr.lookup(w1);
    const auto b = repr.lookup(w2);
    if (!a || !b) return std::nullopt;
    return repr.similarity(*a, *b);
}

std::optional<std::uint32_t> answer_analogy_3cosmul(const Representation& repr, std::uint32_t a, std::uint32_t b,
                                                    std::uint32_t c, double epsilon) {
    if (!repr.representable(a) || !repr.representable(b) || !repr.representable(c)) return std::nullopt;
    const auto sa = repr.affinities(a);
    const auto sb = repr.affinities(b);
    const auto sc = repr.affinities(c);
    std::optional<std::uint32_t> best;
    double best_score = 0.0;
    for (std::uint32_t x = 0; x < repr.size(); ++x) {
        if (x == a || x == b || x == c || !repr.representable(x)) continue;
        const double score = sb[x] * sc[x] / (sa[x] + epsilon);
        if (!best || score > best_score) {
            best = x;
            best_score = score;
        }
    }
    return best;
}

std::optional<std::uint32_t> answer_analogy_3cosmul(const Representation& repr, std::string_view a,
                                                    std::string_view b, std::string_view c, double epsilon) {
    const auto ia = repr.lookup(a);
    const auto ib = repr.lookup(b);
    const auto ic = repr.lookup(c);
    if (!ia || !ib || !ic) return std::nullopt;
    return answer_analogy_3cosmul(repr, *ia, *ib, *ic, epsilon);
}

EvalReport evaluate_similarity(const Representation& repr, const SimilarityDataset& ds, std::string task) {
    std::vector<std::optional<double>> scores(ds.pairs.size());
    const auto n = static_cast<std::int64_t>(ds.pairs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& p = ds.pairs[static_cast<std::size_t>(i)];
        scores[static_cast<std::size_t>(i)] = similarity_score(repr, p.word1, p.word2);
    }
    std::vector<double> model, human;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!scores[i]) continue;
        model.push_back(*scores[i]);
        human.push_back(ds.pairs[i].human_score);
    }
    if (model.empty()) throw DataError(task + ": every pair has an unrepresentable word");
    return {std::move(task), spearman(model, human), model.size(), ds.pairs.size() - model.size()};
}

AnalogyReport evaluate_analogy(const Representation& repr, const AnalogyDataset& ds, double epsilon) {
    std::vector<Outcome> outcome(ds.questions.size(), Outcome::Skipped);
    const auto n = static_cast<std::int64_t>(ds.questions.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& q = ds.questions[static_cast<std::size_t>(i)];
        const auto expected = repr.lookup(q.expected);
        if (!expected) continue;
        const auto best = answer_analogy_3cosmul(repr, q.a, q.b, q.c, epsilon);
        if (!best) continue;
        outcome[static_cast<std::size_t>(i)] = best == expected ? Outcome::Correct : Outcome::Wrong;
    }

    std::size_t correct[2] = {0, 0}, evaluated[2] = {0, 0}, skipped[2] = {0, 0};
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        const auto s = static_cast<std::size_t>(ds.questions[i].section);
        if (outcome[i] == Outcome::Skipped) {
            ++skipped[s];
            continue;
        }
        ++evaluated[s];
        if (outcome[i] == Outcome::Correct) ++correct[s];
    }
    return {accuracy_report("analogy-semantic", correct[0], evaluated[0], skipped[0]),
            accuracy_report("analogy-syntactic", correct[1], evaluated[1], skipped[1]),
            accuracy_report("analogy", correct[0] + correct[1], evaluated[0] + evaluated[1], skipped[0] + skipped[1])};
}

std::string format_report(const EvalReport& report) {
    char score[32] = "n/a";
    if (report.score) std::snprintf(score, sizeof score, "%.4f", *report.score);
    std::ostringstream out;
    out << "task=" << report.task << " score=" << score << " evaluated=" << report.evaluated
        << " skipped=" << report.skipped;
    return out.str();
}

}  // namespace hellvec
