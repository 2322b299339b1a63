#include "hellvec/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hellvec/errors.hpp"
#include "hellvec/log.hpp"

namespace hellvec {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError(std::string(key) + ": cannot parse \"" + std::string(text) + "\"");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw UsageError(std::string(key) + ": expected a boolean, got \"" + std::string(text) + "\"");
}

std::string number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string flag(bool v) { return v ? "1" : "0"; }

const std::string& require(const Meta& meta, const std::string& key, const fs::path& artifact) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw DataError(meta_path(artifact).string() + ": missing key " + key);
    return it->second;
}

void require_artifact(const fs::path& path, std::string_view stage) {
    if (!fs::exists(path) || !fs::exists(meta_path(path))) {
        throw DataError(path.string() + " not found; run the " + std::string(stage) + " stage first");
    }
}

Meta corpus_meta(const CorpusOptions& o) {
    return {{"corpus_mode", o.mode == CorpusMode::Line ? "line" : "document"},
            {"normalize", flag(o.normalize)},
            {"tokenize", flag(o.tokenize)}};
}

void check_corpus_options(const PipelineConfig& config, const Meta& vocab_meta, const fs::path& vocab_path) {
    for (const auto& [key, value] : corpus_meta(config.corpus_options)) {
        if (require(vocab_meta, key, vocab_path) != value) {
            throw DataError("corpus option " + key + "=" + value + " differs from the vocabulary's (" +
                            vocab_meta.at(key) + ")");
        }
    }
}

WindowSpec window_from_meta(const Meta& meta, const fs::path& artifact) {
    WindowSpec w;
    w.size = parse_value<std::uint32_t>("window", require(meta, "window", artifact));
    w.symmetric = parse_bool("symmetric", require(meta, "symmetric", artifact));
    return w;
}

std::vector<std::string> words_of(const Vocabulary& vocab) {
    std::vector<std::string> words;
    words.reserve(vocab.size());
    for (const auto& e : vocab.entries()) words.push_back(e.word);
    return words;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + '"';
}

struct Embedded {
    RowMatrix vectors;
    std::optional<double> error;
};

Embedded reduce_with(const PipelineConfig& config, const DistributionMatrix& dist, Encoder& encoder, RowMatrix* V) {
    Embedded out;
    if (config.reducer == Reducer::Pca) {
        auto pca = hellinger_pca(dist, config.dim, PcaOptions{config.precision});
        encoder = std::move(pca.encoder);
        out.vectors = std::move(pca.embeddings.vectors);
        out.error = reconstruction_error(dist, encoder);
    } else {
        auto hp = config.slra;
        hp.seed = config.seed;
        auto model = slra_train(dist, config.dim, hp);
        out.error = model.epoch_losses.back();
        encoder = std::move(model.encoder);
        if (V) *V = std::move(model.V);
        out.vectors = embed_rows(encoder, dist).vectors;
    }
    return out;
}

}  // namespace

std::string_view to_string(Reducer r) {
    switch (r) {
        case Reducer::Pca: return "pca";
        case Reducer::Slra: return "slra";
        case Reducer::None: return "none";
    }
    return "none";
}

Reducer parse_reducer(std::string_view text) {
    if (text == "pca") return Reducer::Pca;
    if (text == "slra") return Reducer::Slra;
    if (text == "none") return Reducer::None;
    throw UsageError("reducer must be pca, slra or none, got \"" + std::string(text) + "\"");
}

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::set(std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "corpus") {
        corpus.clear();
        std::size_t start = 0;
        while (start <= value.size()) {
            const auto comma = value.find(',', start);
            const auto item = trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (!item.empty()) corpus.emplace_back(std::string(item));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else if (key == "corpus_mode") {
        if (value == "line") corpus_options.mode = CorpusMode::Line;
        else if (value == "document") corpus_options.mode = CorpusMode::Document;
        else throw UsageError("corpus_mode must be line or document");
    } else if (key == "normalize") {
        corpus_options.normalize = parse_bool(key, value);
    } else if (key == "tokenize") {
        corpus_options.tokenize = parse_bool(key, value);
    } else if (key == "min_count") {
        min_count = parse_value<std::uint64_t>(key, value);
    } else if (key == "scenario") {
        scenario = ContextScenario::parse(value);
    } else if (key == "window") {
        window.size = parse_value<std::uint32_t>(key, value);
    } else if (key == "symmetric") {
        window.symmetric = parse_bool(key, value);
    } else if (key == "reducer") {
        reducer = parse_reducer(value);
    } else if (key == "dim") {
        dim = parse_value<std::size_t>(key, value);
    } else if (key == "precision") {
        if (value == "f64") precision = GramPrecision::Float64;
        else if (value == "f32") precision = GramPrecision::Float32;
        else throw UsageError("precision must be f64 or f32");
    } else if (key == "learning_rate") {
        slra.learning_rate = parse_value<double>(key, value);
    } else if (key == "final_learning_rate") {
        slra.final_learning_rate = parse_value<double>(key, value);
    } else if (key == "epochs") {
        slra.epochs = parse_value<std::size_t>(key, value);
    } else if (key == "init_scale") {
        slra.init_scale = parse_value<double>(key, value);
    } else if (key == "seed") {
        seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "deterministic") {
        deterministic = parse_bool(key, value);
    } else if (key == "out") {
        out_dir = std::string(value);
    } else {
        throw UsageError("unknown config key \"" + std::string(key) + "\"");
    }
}

void PipelineConfig::load_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = std::string_view(line);
        text = trim(text.substr(0, text.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set(trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void PipelineConfig::validate() const {
    if (min_count == 0) throw UsageError("min_count must be at least 1");
    scenario.validate();
    window.validate();
    if (dim == 0) throw UsageError("dim must be at least 1");
    if (!(slra.learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
    if (slra.final_learning_rate < 0.0) throw UsageError("final_learning_rate must be nonnegative");
    if (slra.epochs == 0) throw UsageError("epochs must be at least 1");
    if (slra.init_scale < 0.0) throw UsageError("init_scale must be nonnegative");
    if (out_dir.empty()) throw UsageError("output directory must not be empty");
}

// ---------------------------------------------------------------------------
// Artifacts

fs::path meta_path(const fs::path& artifact) {
    auto p = artifact;
    p += ".meta";
    return p;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fill, bool binary) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        fill(out);
        out.flush();
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_meta(const fs::path& artifact, const Meta& meta) {
    write_file(
        meta_path(artifact),
        [&](std::ostream& out) {
            for (const auto& [k, v] : meta) out << k << '=' << v << '\n';
        },
        false);
}

Meta read_meta(const fs::path& artifact) {
    const auto path = meta_path(artifact);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    Meta meta;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError(path.string() + ": malformed line \"" + line + "\"");
        meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return meta;
}

Vocabulary load_vocabulary(const fs::path& dir) {
    const auto path = dir / artifact::kVocab;
    require_artifact(path, "vocab");
    const auto meta = read_meta(path);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    auto vocab = Vocabulary::read(in, parse_value<std::uint64_t>("total_tokens", require(meta, "total_tokens", path)));
    if (vocab.digest() != require(meta, "digest", path)) {
        throw DataError(path.string() + " does not match the digest in its .meta file");
    }
    return vocab;
}

CountedCorpus load_counts(const fs::path& path_in) {
    const auto path = fs::is_directory(path_in) ? path_in / artifact::kCooc : path_in;
    require_artifact(path, "cooc");
    const auto meta = read_meta(path);
    CountedCorpus out;
    out.vocab = load_vocabulary(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    const auto scenario = ContextScenario::parse(require(meta, "scenario", path));
    const auto window = window_from_meta(meta, path);
    out.ctx = select_context_dictionary(out.vocab, scenario);
    const auto fingerprint = context_fingerprint(out.ctx, window);
    if (fingerprint.hex() != require(meta, "fingerprint", path)) {
        throw FingerprintMismatchError(path.string() + " was counted under a different vocabulary or configuration");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    auto file = read_cooccurrence(in);
    if (file.kind != MatrixKind::Counts) throw DataError(path.string() + " holds probabilities, expected counts");
    if (!(file.window == window) || file.matrix.rows() != out.vocab.size() || file.matrix.cols() != out.ctx.size()) {
        throw FingerprintMismatchError(path.string() + " disagrees with its .meta file");
    }
    out.counts = {std::move(file.matrix), window, scenario, fingerprint};
    return out;
}

LoadedEmbeddings load_embeddings(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string() + "; run the embed stage first");
    auto text = read_embeddings(in);
    LoadedEmbeddings out{std::move(text.words), std::move(text.vectors), {}};
    if (fs::exists(meta_path(path))) {
        out.fingerprint = Fingerprint::from_hex(require(read_meta(path), "fingerprint", path));
    }
    return out;
}

EncoderFile load_encoder(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string() + "; run the embed stage first");
    return read_encoder(in);
}

// ---------------------------------------------------------------------------
// Stages

void for_each_batch(const PipelineConfig& config,
                    const std::function<void(std::span<const std::vector<std::string>>)>& fn,
                    std::size_t batch_tokens) {
    if (config.corpus.empty()) throw UsageError("no corpus given");
    CorpusReader reader(config.corpus, config.corpus_options);
    std::vector<std::vector<std::string>> batch;
    std::size_t tokens = 0;
    reader.for_each_document([&](std::vector<std::string>& doc) {
        tokens += doc.size();
        batch.push_back(std::move(doc));
        if (tokens >= batch_tokens) {
            fn(batch);
            batch.clear();
            tokens = 0;
        }
    });
    if (!batch.empty()) fn(batch);
}

Vocabulary run_vocab(const PipelineConfig& config) {
    config.validate();
    TokenCounter counter;
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) {
        for (const auto& d : docs) counter.add_all(d);
    });
    auto vocab = counter.finish(config.min_count);
    if (vocab.empty()) {
        throw DataError("no word occurs at least " + std::to_string(config.min_count) + " times in " +
                        std::to_string(counter.total()) + " tokens");
    }
    const auto path = config.out_dir / artifact::kVocab;
    write_file(path, [&](std::ostream& out) { vocab.write(out); }, false);
    auto meta = corpus_meta(config.corpus_options);
    meta["digest"] = vocab.digest();
    meta["min_count"] = std::to_string(config.min_count);
    meta["total_tokens"] = std::to_string(vocab.total_tokens());
    meta["words"] = std::to_string(vocab.size());
    write_meta(path, meta);
    log::info("vocabulary: " + std::to_string(vocab.size()) + " words from " + std::to_string(vocab.total_tokens()) +
              " tokens");
    return vocab;
}

CooccurrenceMatrix run_cooc(const PipelineConfig& config) {
    config.validate();
    const auto vocab = load_vocabulary(config.out_dir);
    check_corpus_options(config, read_meta(config.out_dir / artifact::kVocab), config.out_dir / artifact::kVocab);
    const auto ctx = select_context_dictionary(vocab, config.scenario);

    CooccurrenceMatrix total{SparseMatrix(vocab.size(), static_cast<std::uint32_t>(ctx.size())), config.window,
                             config.scenario, context_fingerprint(ctx, config.window)};
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) {
        const auto part = count_cooccurrences(docs, vocab, ctx, config.window);
        total.counts = total.counts.plus(part.counts);
    });

    const auto path = config.out_dir / artifact::kCooc;
    write_file(path, [&](std::ostream& out) { write_cooccurrence(out, total.counts, total.window, MatrixKind::Counts); },
               true);
    std::size_t empty = 0;
    for (std::size_t r = 0; r < total.rows(); ++r) empty += total.counts.row(r).empty() ? 1 : 0;
    write_meta(path, {{"fingerprint", total.fingerprint.hex()},
                      {"scenario", config.scenario.canonical()},
                      {"window", std::to_string(config.window.size)},
                      {"symmetric", flag(config.window.symmetric)},
                      {"vocab_digest", vocab.digest()},
                      {"contexts", std::to_string(ctx.size())},
                      {"nnz", std::to_string(total.counts.nnz())},
                      {"zero_rows", std::to_string(empty)},
                      {"avg_nonzero_contexts", number(avg_nonzero_contexts(total))}});
    log::info("co-occurrence: " + std::to_string(total.rows()) + " x " + std::to_string(total.cols()) + ", " +
              std::to_string(total.counts.nnz()) + " nonzeros, " + number(avg_nonzero_contexts(total)) +
              " contexts per word, " + std::to_string(empty) + " zero rows");
    return total;
}

EmbedSummary run_embed(const PipelineConfig& config) {
    config.validate();
    const auto counted = load_counts(config.out_dir);
    const auto dist = normalize_rows(counted.counts);
    const auto encoder_path = config.out_dir / artifact::kEncoder;
    const auto embeddings_path = config.out_dir / artifact::kEmbeddings;

    EmbedSummary summary;
    summary.reducer = config.reducer;
    summary.words = dist.rows();
    summary.contexts = dist.cols();
    summary.zero_rows = dist.zero_rows.size();

    Meta meta{{"fingerprint", dist.fingerprint.hex()},
              {"reducer", std::string(to_string(config.reducer))},
              {"zero_rows", std::to_string(dist.zero_rows.size())}};
    if (config.reducer == Reducer::None) {
        for (const auto& p : {encoder_path, meta_path(encoder_path), embeddings_path}) fs::remove(p);
        write_meta(embeddings_path, meta);
        log::info("reducer none: evaluation will use raw distributions");
        return summary;
    }

    Encoder encoder;
    RowMatrix V;
    const auto embedded = reduce_with(config, dist, encoder, config.reducer == Reducer::Slra ? &V : nullptr);
    summary.dim = encoder.dim();
    summary.reconstruction_error = embedded.error;

    write_file(
        encoder_path, [&](std::ostream& out) { write_encoder(out, encoder, config.reducer == Reducer::Slra ? &V : nullptr); },
        true);
    const auto words = words_of(counted.vocab);
    write_file(embeddings_path, [&](std::ostream& out) { write_embeddings(out, embedded.vectors, words); }, false);
    meta["dim"] = std::to_string(summary.dim);
    if (embedded.error) meta["reconstruction_error"] = number(*embedded.error);
    if (config.reducer == Reducer::Pca) {
        meta["precision"] = config.precision == GramPrecision::Float32 ? "f32" : "f64";
    } else {
        meta["seed"] = std::to_string(config.seed);
        meta["epochs"] = std::to_string(config.slra.epochs);
        meta["learning_rate"] = number(config.slra.learning_rate);
        meta["final_learning_rate"] = number(config.slra.final_learning_rate);
    }
    write_meta(embeddings_path, meta);
    log::info(std::string(to_string(config.reducer)) + ": " + std::to_string(summary.contexts) + " -> " +
              std::to_string(summary.dim) + " dims, reconstruction error " + number(*embedded.error));
    return summary;
}

LoadedRepresentation LoadedRepresentation::dense(const fs::path& embeddings) {
    auto loaded = load_embeddings(embeddings);
    const auto cooc = embeddings.parent_path() / artifact::kCooc;
    if (!loaded.fingerprint.is_null() && fs::exists(meta_path(cooc)) &&
        require(read_meta(cooc), "fingerprint", cooc) != loaded.fingerprint.hex()) {
        throw FingerprintMismatchError(embeddings.string() + " and " + cooc.string() +
                                       " come from different configurations; rerun the embed stage");
    }
    LoadedRepresentation out;
    out.dense_ = std::make_unique<RowMatrix>(std::move(loaded.vectors));
    out.repr_ = std::make_unique<DenseRepresentation>(std::move(loaded.words), *out.dense_);
    return out;
}

LoadedRepresentation LoadedRepresentation::raw(const fs::path& counts) {
    auto counted = load_counts(counts);
    LoadedRepresentation out;
    out.raw_ = std::make_unique<DistributionMatrix>(normalize_rows(counted.counts));
    out.repr_ = std::make_unique<RawRepresentation>(words_of(counted.vocab), *out.raw_);
    return out;
}

LoadedRepresentation LoadedRepresentation::from_output(const fs::path& dir) {
    const auto embeddings = dir / artifact::kEmbeddings;
    if (!fs::exists(meta_path(embeddings))) {
        throw DataError(embeddings.string() + " not found; run the embed stage first");
    }
    if (require(read_meta(embeddings), "reducer", embeddings) == "none") {
        const auto counted_fp = require(read_meta(dir / artifact::kCooc), "fingerprint", dir / artifact::kCooc);
        if (counted_fp != require(read_meta(embeddings), "fingerprint", embeddings)) {
            throw FingerprintMismatchError("co-occurrence counts changed after the embed stage; rerun it");
        }
        return raw(dir);
    }
    return dense(embeddings);
}

TaskKind task_kind(std::string_view task) {
    if (task == "analogy") return TaskKind::Analogy;
    if (task == "ws353" || task == "rg65" || task == "rw" || task == "similarity") return TaskKind::Similarity;
    throw UsageError("unknown task \"" + std::string(task) + "\" (ws353, rg65, rw, similarity, analogy)");
}

std::vector<EvalReport> run_eval(const Representation& repr, std::string_view task, const fs::path& data) {
    if (task_kind(task) == TaskKind::Analogy) {
        auto r = evaluate_analogy(repr, load_analogy(data));
        return {std::move(r.semantic), std::move(r.syntactic), std::move(r.total)};
    }
    return {evaluate_similarity(repr, load_similarity(data), std::string(task))};
}

NeighborList run_neighbors(const LoadedRepresentation& loaded, std::string_view word, std::size_t k) {
    const auto& repr = loaded.representation();
    const auto normalized = normalize_token(word);
    const auto id = repr.find(normalized);
    if (!id) throw DataError("\"" + normalized + "\" is not in the vocabulary");
    if (!repr.representable(*id)) {
        throw NoDistributionError("\"" + normalized + "\" has no counted context under this configuration");
    }
    if (loaded.is_raw()) return nearest_neighbors(*id, k, loaded.distributions());
    auto list = neighbors_of_vector(loaded.vectors().row(*id).transpose(), loaded.vectors(), k + 1);
    std::erase_if(list.neighbors, [&](const Neighbor& n) { return n.id == *id; });
    if (list.neighbors.size() > k) list.neighbors.resize(k);
    list.query = *id;
    return list;
}

std::vector<InferResult> run_infer(const PipelineConfig& config,
                                   const fs::path& encoder_path,
                                   const std::vector<std::string>& phrases,
                                   std::size_t k) {
    if (phrases.empty()) throw UsageError("no phrase given");
    const auto file = load_encoder(encoder_path);
    const auto dir = encoder_path.parent_path().empty() ? fs::path(".") : encoder_path.parent_path();
    const auto vocab = load_vocabulary(dir);
    check_corpus_options(config, read_meta(dir / artifact::kVocab), dir / artifact::kVocab);
    const auto cooc = dir / artifact::kCooc;
    require_artifact(cooc, "cooc");
    const auto cooc_meta = read_meta(cooc);
    const auto scenario = ContextScenario::parse(require(cooc_meta, "scenario", cooc));
    const auto window = window_from_meta(cooc_meta, cooc);
    const auto ctx = select_context_dictionary(vocab, scenario);
    const auto source = context_fingerprint(ctx, window);
    if (!(source == file.encoder.context_fingerprint)) {
        throw FingerprintMismatchError(encoder_path.string() + " was trained under a different context configuration");
    }

    std::vector<PhraseQuery> queries;
    for (const auto& p : phrases) queries.push_back(PhraseQuery::parse(p));
    PhraseCounter counter(queries, vocab, ctx, window);
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) { counter.add_documents(docs); });

    std::optional<LoadedEmbeddings> embeddings;
    if (fs::exists(dir / artifact::kEmbeddings)) embeddings = load_embeddings(dir / artifact::kEmbeddings);

    const auto counts = counter.results();
    std::vector<InferResult> out;
    for (std::size_t p = 0; p < queries.size(); ++p) {
        InferResult r;
        r.phrase = queries[p];
        r.occurrences = counts[p].occurrences;
        if (r.occurrences == 0) {
            r.error = "unseen in corpus";
        } else {
            try {
                r.vector = infer_vector(counts[p].counts, file.encoder, source);
                if (embeddings) r.neighbors = neighbors_of_vector(*r.vector, embeddings->vectors, k);
            } catch (const NoDistributionError&) {
                r.error = "no context word from the context dictionary";
            } catch (const NumericError& e) {
                r.error = e.what();
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::size_t run_grid(const PipelineConfig& config, const GridSpec& grid, std::ostream& csv) {
    config.validate();
    if (grid.scenarios.empty() || grid.windows.empty() || grid.symmetry.empty()) {
        throw UsageError("grid needs at least one scenario, window size and symmetry setting");
    }
    if (grid.tasks.empty()) throw UsageError("grid needs at least one task");

    struct Task {
        std::string name;
        std::optional<SimilarityDataset> similarity;
        std::optional<AnalogyDataset> analogy;
    };
    std::vector<Task> tasks;
    std::vector<std::string> columns{"scenario", "window", "symmetric", "contexts", "avg_contexts", "zero_rows"};
    for (const auto& [name, path] : grid.tasks) {
        Task t{name, std::nullopt, std::nullopt};
        std::vector<std::string> labels;
        if (task_kind(name) == TaskKind::Analogy) {
            t.analogy = load_analogy(path);
            labels = {"analogy-semantic", "analogy-syntactic", "analogy"};
        } else {
            t.similarity = load_similarity(path);
            labels = {name};
        }
        for (const auto& l : labels) {
            for (const auto* suffix : {"_score", "_evaluated", "_skipped"}) columns.push_back(l + suffix);
        }
        tasks.push_back(std::move(t));
    }
    columns.push_back("status");
    columns.push_back("error");

    TokenCounter counter;
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) {
        for (const auto& d : docs) counter.add_all(d);
    });
    const auto vocab = counter.finish(config.min_count);
    if (vocab.empty()) throw DataError("no word reaches min_count " + std::to_string(config.min_count));
    std::vector<TokenIds> documents;
    for_each_batch(config, [&](std::span<const std::vector<std::string>> docs) {
        for (const auto& d : docs) documents.push_back(to_ids(d, vocab));
    });
    log::info("grid: " + std::to_string(vocab.size()) + " words, " + std::to_string(documents.size()) + " documents");
    const auto words = words_of(vocab);

    for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
    csv << '\n';

    std::size_t failed = 0;
    for (const auto& scenario : grid.scenarios) {
        for (const auto size : grid.windows) {
            for (const bool symmetric : grid.symmetry) {
                const WindowSpec window{size, symmetric};
                std::vector<std::string> row{scenario.canonical(), std::to_string(size), flag(symmetric)};
                try {
                    const auto ctx = select_context_dictionary(vocab, scenario);
                    const auto counts = count_cooccurrences(documents, ctx, window);
                    const auto dist = normalize_rows(counts);
                    std::unique_ptr<Representation> repr;
                    RowMatrix vectors;
                    if (config.reducer == Reducer::None) {
                        repr = std::make_unique<RawRepresentation>(words, dist);
                    } else {
                        Encoder encoder;
                        vectors = reduce_with(config, dist, encoder, nullptr).vectors;
                        repr = std::make_unique<DenseRepresentation>(words, vectors);
                    }
                    row.push_back(std::to_string(ctx.size()));
                    row.push_back(number(avg_nonzero_contexts(counts)));
                    row.push_back(std::to_string(dist.zero_rows.size()));
                    for (const auto& t : tasks) {
                        std::vector<EvalReport> reports;
                        if (t.analogy) {
                            auto r = evaluate_analogy(*repr, *t.analogy);
                            reports = {r.semantic, r.syntactic, r.total};
                        } else {
                            reports = {evaluate_similarity(*repr, *t.similarity, t.name)};
                        }
                        for (const auto& r : reports) {
                            row.push_back(r.score ? number(*r.score) : "");
                            row.push_back(std::to_string(r.evaluated));
                            row.push_back(std::to_string(r.skipped));
                        }
                    }
                    row.push_back("ok");
                    row.push_back("");
                } catch (const std::exception& e) {
                    ++failed;
                    log::warning("grid cell " + row[0] + " window " + row[1] + (symmetric ? " sym" : " asym") +
                                 " failed: " + e.what());
                    row.resize(columns.size() - 2);
                    row.push_back("failed");
                    row.push_back(e.what());
                }
                for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << csv_field(row[i]);
                csv << '\n';
            }
        }
    }
    return failed;
}

}  // namespace hellvec
