// hellvec: count-based word vectors under the Hellinger distance.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "hellvec/errors.hpp"
#include "hellvec/log.hpp"
#include "hellvec/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hellvec;

namespace {

// Config keys settable from the command line; values go through PipelineConfig::set.
struct Overrides {
    std::optional<std::string> config;
    std::vector<std::string> corpus;
    std::vector<std::pair<std::string, std::optional<std::string>>> values = {
        {"corpus_mode", {}}, {"min_count", {}},     {"scenario", {}},      {"window", {}},
        {"reducer", {}},     {"dim", {}},           {"precision", {}},     {"learning_rate", {}},
        {"final_learning_rate", {}}, {"epochs", {}}, {"init_scale", {}},  {"seed", {}},
        {"out", {}},
    };
    bool tokenize = false;
    bool no_normalize = false;
    bool asymmetric = false;
    bool symmetric = false;
    bool deterministic = false;

    std::optional<std::string>& value(const std::string& key) {
        for (auto& [k, v] : values) {
            if (k == key) return v;
        }
        throw std::logic_error("unknown override " + key);
    }

    PipelineConfig build() const {
        PipelineConfig cfg;
        if (config) cfg.load_file(*config);
        if (!corpus.empty()) {
            cfg.corpus.assign(corpus.begin(), corpus.end());
        }
        for (const auto& [k, v] : values) {
            if (v) cfg.set(k, *v);
        }
        if (tokenize) cfg.corpus_options.tokenize = true;
        if (no_normalize) cfg.corpus_options.normalize = false;
        if (asymmetric && symmetric) throw UsageError("--symmetric and --asymmetric are mutually exclusive");
        if (asymmetric) cfg.window.symmetric = false;
        if (symmetric) cfg.window.symmetric = true;
        if (deterministic) cfg.deterministic = true;
        cfg.validate();
        return cfg;
    }
};

void configure_threads(const PipelineConfig& cfg) {
    if (cfg.deterministic) {
        omp_set_num_threads(1);
        return;
    }
    if (const char* env = std::getenv("HELLVEC_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n < 1) throw std::invalid_argument(env);
            omp_set_num_threads(n);
        } catch (const std::exception&) {
            throw UsageError(std::string("HELLVEC_THREADS must be a positive integer, got \"") + env + "\"");
        }
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) items.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

LoadedRepresentation open_representation(const PipelineConfig& cfg, const std::string& embeddings,
                                         const std::string& raw_cooc) {
    if (!embeddings.empty() && !raw_cooc.empty()) throw UsageError("give --embeddings or --raw-cooc, not both");
    if (!embeddings.empty()) return LoadedRepresentation::dense(embeddings);
    if (!raw_cooc.empty()) return LoadedRepresentation::raw(raw_cooc);
    return LoadedRepresentation::from_output(cfg.out_dir);
}

void print_neighbors(const NeighborList& list, const Representation& repr) {
    for (const auto& n : list.neighbors) std::printf("%s\t%.6f\n", repr.word(n.id).c_str(), n.distance);
}

int run(int argc, char** argv) {
    CLI::App app{"Count-based word representations under the Hellinger distance"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    bool verbose = false, quiet = false;
    app.add_option("--config", o.config, "key=value config file; flags override it");
    app.add_option("--corpus", o.corpus, "corpus files or directories");
    app.add_option("--corpus-mode", o.value("corpus_mode"), "line: one document per line; document: one per file");
    app.add_flag("--tokenize", o.tokenize, "split punctuation from words");
    app.add_flag("--no-normalize", o.no_normalize, "keep case and digits");
    app.add_option("--min-count", o.value("min_count"), "minimum word count (default 100)");
    app.add_option("--scenario", o.value("scenario"), "context words: top:K, all, below:HI, band:LO:HI, above:LO");
    app.add_option("--window", o.value("window"), "context window size (default 5)");
    app.add_flag("--symmetric", o.symmetric, "count both sides of a word (default)");
    app.add_flag("--asymmetric", o.asymmetric, "count only the following words");
    app.add_option("--reducer", o.value("reducer"), "pca, slra or none");
    app.add_option("--dim", o.value("dim"), "embedding dimension (default 100)");
    app.add_option("--precision", o.value("precision"), "PCA Gram precision: f64 or f32");
    app.add_option("--lr", o.value("learning_rate"), "SLRA initial learning rate");
    app.add_option("--final-lr", o.value("final_learning_rate"), "SLRA final learning rate");
    app.add_option("--epochs", o.value("epochs"), "SLRA epochs");
    app.add_option("--init-scale", o.value("init_scale"), "SLRA init range; 0 for 1/sqrt(|D|)");
    app.add_option("--seed", o.value("seed"), "random seed");
    app.add_option("--out", o.value("out"), "artifact directory");
    app.add_flag("--deterministic", o.deterministic, "single worker");
    app.add_flag("-v,--verbose", verbose, "progress logging");
    app.add_flag("-q,--quiet", quiet, "errors only");

    auto* vocab = app.add_subcommand("vocab", "count words and write vocab.txt");
    auto* cooc = app.add_subcommand("cooc", "count co-occurrences and write cooc.bin");
    auto* embed = app.add_subcommand("embed", "reduce distributions and write encoder.bin, embeddings.txt");

    auto* eval = app.add_subcommand("eval", "score a similarity or analogy dataset");
    std::string eval_embeddings, eval_raw, eval_task, eval_data;
    eval->add_option("--embeddings", eval_embeddings, "embeddings file");
    eval->add_option("--raw-cooc", eval_raw, "co-occurrence file for raw-distribution scoring");
    eval->add_option("--task", eval_task, "ws353, rg65, rw, similarity or analogy")->required();
    eval->add_option("--data", eval_data, "dataset path")->required();

    auto* neighbors = app.add_subcommand("neighbors", "nearest words");
    std::vector<std::string> nb_words;
    std::size_t nb_k = 10;
    std::string nb_embeddings, nb_raw;
    neighbors->add_option("--word", nb_words, "query word")->required();
    neighbors->add_option("--k", nb_k, "neighbors per word");
    neighbors->add_option("--embeddings", nb_embeddings, "embeddings file");
    neighbors->add_option("--raw-cooc", nb_raw, "co-occurrence file for Hellinger neighbors");

    auto* infer = app.add_subcommand("infer", "vectors for unseen words and phrases");
    std::string inf_encoder;
    std::vector<std::string> inf_phrases;
    std::size_t inf_k = 5;
    bool inf_print = false;
    infer->add_option("--encoder", inf_encoder, "encoder file (default <out>/encoder.bin)");
    infer->add_option("--phrase", inf_phrases, "phrase to infer")->required();
    infer->add_option("--k", inf_k, "neighbors per phrase");
    infer->add_flag("--print-vector", inf_print, "print the inferred vector");

    auto* grid = app.add_subcommand("grid", "score every scenario x window x symmetry cell");
    std::string g_scenarios = "top:10000", g_windows = "1,5,10", g_symmetry = "sym,asym", g_report;
    std::vector<std::string> g_evals;
    grid->add_option("--scenarios", g_scenarios, "comma-separated scenarios");
    grid->add_option("--windows", g_windows, "comma-separated window sizes");
    grid->add_option("--symmetry", g_symmetry, "comma-separated sym/asym");
    grid->add_option("--eval", g_evals, "task=path, repeatable")->required();
    grid->add_option("--report", g_report, "CSV output (default <out>/grid.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    log::set_level(quiet ? log::Level::Quiet : verbose ? log::Level::Info : log::Level::Warning);
    auto cfg = o.build();
    configure_threads(cfg);

    if (vocab->parsed()) {
        const auto v = run_vocab(cfg);
        std::printf("%s: %zu words from %llu tokens\n", (cfg.out_dir / artifact::kVocab).string().c_str(), v.size(),
                    static_cast<unsigned long long>(v.total_tokens()));
    } else if (cooc->parsed()) {
        const auto m = run_cooc(cfg);
        std::printf("%s: %zu x %u, %zu nonzeros, %.4f contexts per word\n",
                    (cfg.out_dir / artifact::kCooc).string().c_str(), m.rows(), m.cols(), m.counts.nnz(),
                    avg_nonzero_contexts(m));
    } else if (embed->parsed()) {
        const auto s = run_embed(cfg);
        if (s.reducer == Reducer::None) {
            std::printf("reducer none: no encoder; %zu words, %zu zero rows\n", s.words, s.zero_rows);
        } else {
            std::printf("%s: %zu contexts -> %zu dims, %zu words, %zu zero rows, reconstruction error %.6f\n",
                        std::string(to_string(s.reducer)).c_str(), s.contexts, s.dim, s.words, s.zero_rows,
                        s.reconstruction_error.value_or(0.0));
        }
    } else if (eval->parsed()) {
        const auto loaded = open_representation(cfg, eval_embeddings, eval_raw);
        for (const auto& r : run_eval(loaded.representation(), eval_task, eval_data)) {
            std::printf("%s\n", format_report(r).c_str());
        }
    } else if (neighbors->parsed()) {
        const auto loaded = open_representation(cfg, nb_embeddings, nb_raw);
        for (const auto& w : nb_words) {
            const auto list = run_neighbors(loaded, w, nb_k);
            std::printf("# %s (%s)\n", loaded.representation().word(list.query).c_str(),
                        loaded.is_raw() ? "hellinger" : "cosine");
            print_neighbors(list, loaded.representation());
        }
    } else if (infer->parsed()) {
        const fs::path encoder = inf_encoder.empty() ? cfg.out_dir / artifact::kEncoder : fs::path(inf_encoder);
        const auto results = run_infer(cfg, encoder, inf_phrases, inf_k);
        const auto dir = encoder.parent_path().empty() ? fs::path(".") : encoder.parent_path();
        std::optional<LoadedEmbeddings> emb;
        if (fs::exists(dir / artifact::kEmbeddings)) emb = load_embeddings(dir / artifact::kEmbeddings);
        bool any_failed = false;
        for (const auto& r : results) {
            std::printf("# %s occurrences=%zu\n", r.phrase.text().c_str(), r.occurrences);
            if (!r.vector) {
                std::printf("error: %s\n", r.error.c_str());
                any_failed = true;
                continue;
            }
            if (inf_print) {
                std::printf("vector");
                for (Eigen::Index i = 0; i < r.vector->size(); ++i) std::printf(" %.17g", (*r.vector)[i]);
                std::printf("\n");
            }
            for (const auto& n : r.neighbors.neighbors) {
                std::printf("%s\t%.6f\n", emb ? emb->words[n.id].c_str() : "?", n.distance);
            }
        }
        if (any_failed) return 2;
    } else if (grid->parsed()) {
        GridSpec spec;
        for (const auto& s : split_list(g_scenarios)) spec.scenarios.push_back(ContextScenario::parse(s));
        for (const auto& w : split_list(g_windows)) {
            PipelineConfig probe;
            probe.set("window", w);
            spec.windows.push_back(probe.window.size);
        }
        for (const auto& s : split_list(g_symmetry)) {
            if (s == "sym") spec.symmetry.push_back(true);
            else if (s == "asym") spec.symmetry.push_back(false);
            else throw UsageError("--symmetry takes sym and/or asym, got \"" + s + "\"");
        }
        for (const auto& e : g_evals) {
            const auto eq = e.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--eval expects task=path, got \"" + e + "\"");
            spec.tasks.emplace_back(e.substr(0, eq), e.substr(eq + 1));
        }
        const fs::path report = g_report.empty() ? cfg.out_dir / "grid.csv" : fs::path(g_report);
        std::size_t failed = 0;
        write_file(report, [&](std::ostream& out) { failed = run_grid(cfg, spec, out); }, false);
        const auto cells = spec.scenarios.size() * spec.windows.size() * spec.symmetry.size();
        std::printf("%s: %zu cells, %zu failed\n", report.string().c_str(), cells, failed);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "hellvec: usage error: %s\n", e.what());
        return 1;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "hellvec: numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "hellvec: numeric failure: out of memory\n");
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "hellvec: data error: %s\n", e.what());
        return 2;
    }
}
