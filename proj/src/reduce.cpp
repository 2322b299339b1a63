#include "hellvec/reduce.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hellvec/errors.hpp"
#include "hellvec/log.hpp"
#include "binary_io.hpp"

namespace hellvec {

namespace {

using namespace binary;
constexpr const char* kFormat = "HENC1";
constexpr char kMagic[5] = {'H', 'E', 'N', 'C', '1'};

void check_dim(std::size_t d, std::size_t contexts) {
    if (d == 0) throw UsageError("embedding dimension must be at least 1");
    if (d > contexts) {
        throw UsageError("embedding dimension " + std::to_string(d) + " exceeds context dictionary size " +
                         std::to_string(contexts));
    }
}

void check_factors(const SparseMatrix& m, const RowMatrix& U, const RowMatrix& V) {
    if (static_cast<std::size_t>(U.rows()) != m.cols() || U.rows() != V.rows() || U.cols() != V.cols()) {
        throw UsageError("factor dimensions do not match the context dictionary");
    }
}

// U^T x over the support of x; shared by encode and embed_rows so both agree bit for bit.
Eigen::VectorXd project(const RowMatrix& U, SparseRowView x) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(U.cols());
    for (std::size_t k = 0; k < x.nnz(); ++k) h.noalias() += x.vals[k] * U.row(x.cols[k]).transpose();
    return h;
}

double row_error(const RowMatrix& U, const RowMatrix& V, SparseRowView x) {
    Eigen::VectorXd r = V * project(U, x);
    for (std::size_t k = 0; k < x.nnz(); ++k) r[x.cols[k]] -= x.vals[k];
    return r.squaredNorm();
}

template <typename Scalar>
using Gram = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Adds x_i * x_j into G(i, j) for every i of the row's support within [lo, hi).
template <typename Scalar>
void accumulate_row(Gram<Scalar>& G, SparseRowView x, std::uint32_t lo, std::uint32_t hi) {
    const auto first = std::lower_bound(x.cols.begin(), x.cols.end(), lo) - x.cols.begin();
    for (auto a = static_cast<std::size_t>(first); a < x.nnz() && x.cols[a] < hi; ++a) {
        const auto xa = static_cast<Scalar>(x.vals[a]);
        auto g = G.row(x.cols[a]);
        for (std::size_t b = 0; b < x.nnz(); ++b) g[x.cols[b]] += xa * static_cast<Scalar>(x.vals[b]);
    }
}

template <typename Scalar>
Gram<Scalar> gram_serial(const SparseMatrix& m) {
    Gram<Scalar> G = Gram<Scalar>::Zero(m.cols(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) accumulate_row(G, m.row(r), 0, m.cols());
    return G;
}

// Every thread owns a band of G's rows and walks the data rows in order, so
// each entry sees the same sequence of additions as the serial loop.
template <typename Scalar>
Gram<Scalar> gram_parallel(const SparseMatrix& m) {
    const std::uint32_t n = m.cols();
    Gram<Scalar> G = Gram<Scalar>::Zero(n, n);
    constexpr std::uint32_t band = 64;
    const auto bands = static_cast<std::int64_t>((n + band - 1) / band);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < bands; ++b) {
        const auto lo = static_cast<std::uint32_t>(b) * band;
        const auto hi = std::min(n, lo + band);
        for (std::size_t r = 0; r < m.rows(); ++r) accumulate_row(G, m.row(r), lo, hi);
    }
    return G;
}

void modified_gram_schmidt(RowMatrix& U) {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) U.col(j) -= U.col(i).dot(U.col(j)) * U.col(i);
        const double norm = U.col(j).norm();
        if (!(norm > 0.0)) throw NumericError("PCA basis lost rank during re-orthonormalization");
        U.col(j) /= norm;
    }
}

void fix_signs(RowMatrix& U) {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        Eigen::Index arg = 0;
        U.col(j).cwiseAbs().maxCoeff(&arg);
        if (U(arg, j) < 0.0) U.col(j) = -U.col(j);
    }
}

template <typename Scalar>
std::pair<RowMatrix, Eigen::VectorXd> top_eigenvectors(const Gram<Scalar>& G, std::size_t d) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(G);
    if (solver.info() != Eigen::Success) throw NumericError("Gram eigendecomposition did not converge");
    const auto n = G.rows();
    RowMatrix U(n, static_cast<Eigen::Index>(d));
    Eigen::VectorXd values(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
        U.col(j) = solver.eigenvectors().col(n - 1 - j).template cast<double>();
        values[j] = static_cast<double>(solver.eigenvalues()[n - 1 - j]);
    }
    return {std::move(U), std::move(values)};
}

std::vector<std::uint32_t> nonzero_rows(const SparseMatrix& m) {
    std::vector<std::uint32_t> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (!m.row(r).empty()) rows.push_back(static_cast<std::uint32_t>(r));
    }
    return rows;
}

EmbeddingMatrix embed(const RowMatrix& U, const SparseMatrix& m, const Fingerprint& fingerprint) {
    EmbeddingMatrix out;
    out.vectors = RowMatrix::Zero(static_cast<Eigen::Index>(m.rows()), U.cols());
    const auto n = static_cast<std::int64_t>(m.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
        out.vectors.row(r) = project(U, m.row(static_cast<std::size_t>(r))).transpose();
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.row(r).empty()) out.zero_rows.push_back(static_cast<std::uint32_t>(r));
    }
    out.fingerprint = fingerprint;
    return out;
}

void write_number(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

}  // namespace

RowMatrix gram_matrix(const SparseMatrix& m) { return gram_parallel<double>(m); }
RowMatrixF gram_matrix_f32(const SparseMatrix& m) { return gram_parallel<float>(m); }

namespace reference {
RowMatrix gram_matrix(const SparseMatrix& m) { return gram_serial<double>(m); }
RowMatrixF gram_matrix_f32(const SparseMatrix& m) { return gram_serial<float>(m); }
}  // namespace reference

PcaResult hellinger_pca(const DistributionMatrix& m, std::size_t d, const PcaOptions& options) {
    return hellinger_pca(m.values, d, m.fingerprint, options);
}

PcaResult hellinger_pca(const SparseMatrix& m, std::size_t d, const Fingerprint& fingerprint,
                        const PcaOptions& options) {
    const std::size_t n = m.cols();
    check_dim(d, n);
    const std::size_t scalar = options.precision == GramPrecision::Float32 ? sizeof(float) : sizeof(double);
    if (n > 0 && n * n > options.max_gram_bytes / scalar) {
        throw NumericError("Gram matrix for " + std::to_string(n) + " contexts needs " +
                           std::to_string(n * n * scalar >> 20) +
                           " MiB, over the configured limit; use the SLRA reducer for large context dictionaries");
    }

    PcaResult result;
    if (options.precision == GramPrecision::Float32) {
        auto [U, values] = top_eigenvectors(gram_matrix_f32(m), d);
        modified_gram_schmidt(U);
        result.encoder.U = std::move(U);
        result.eigenvalues = std::move(values);
    } else {
        auto [U, values] = top_eigenvectors(gram_matrix(m), d);
        result.encoder.U = std::move(U);
        result.eigenvalues = std::move(values);
    }
    fix_signs(result.encoder.U);
    result.encoder.method = ReduceMethod::Pca;
    result.encoder.context_fingerprint = fingerprint;
    result.embeddings = embed(result.encoder.U, m, fingerprint);
    return result;
}

SlraGradients slra_gradients(const RowMatrix& U, const RowMatrix& V, SparseRowView x) {
    const Eigen::VectorXd h = project(U, x);
    Eigen::VectorXd r = V * h;
    for (std::size_t k = 0; k < x.nnz(); ++k) r[x.cols[k]] -= x.vals[k];
    const Eigen::VectorXd g = V.transpose() * r;

    SlraGradients out;
    out.loss = r.squaredNorm();
    out.dV = 2.0 * r * h.transpose();
    out.dU = RowMatrix::Zero(U.rows(), U.cols());
    for (std::size_t k = 0; k < x.nnz(); ++k) out.dU.row(x.cols[k]) = 2.0 * x.vals[k] * g.transpose();
    return out;
}

double slra_step(RowMatrix& U, RowMatrix& V, SparseRowView x, double learning_rate) {
    const Eigen::VectorXd h = project(U, x);
    Eigen::VectorXd r = V * h;
    for (std::size_t k = 0; k < x.nnz(); ++k) r[x.cols[k]] -= x.vals[k];
    const Eigen::VectorXd g = V.transpose() * r;
    const double loss = r.squaredNorm();

    V.noalias() -= (2.0 * learning_rate) * r * h.transpose();
    for (std::size_t k = 0; k < x.nnz(); ++k) {
        U.row(x.cols[k]).noalias() -= (2.0 * learning_rate * x.vals[k]) * g.transpose();
    }
    return loss;
}

SlraModel slra_train(const DistributionMatrix& m, std::size_t d, const SlraHyperparams& hp) {
    return slra_train(m.values, d, hp, m.fingerprint);
}

SlraModel slra_train(const SparseMatrix& m, std::size_t d, const SlraHyperparams& hp, const Fingerprint& fingerprint) {
    const std::size_t n = m.cols();
    check_dim(d, n);
    if (!(hp.learning_rate > 0.0) || hp.final_learning_rate < 0.0) {
        throw UsageError("SLRA learning rates must be positive");
    }
    if (hp.epochs == 0) throw UsageError("SLRA needs at least one epoch");
    if (hp.init_scale < 0.0) throw UsageError("SLRA init scale must be nonnegative");

    auto order = nonzero_rows(m);
    if (order.empty()) throw DataError("SLRA: the matrix has no nonzero rows");

    std::mt19937_64 rng(hp.seed);
    const double a = hp.init_scale > 0.0 ? hp.init_scale : 1.0 / std::sqrt(static_cast<double>(n));
    std::uniform_real_distribution<double> init(-a, a);
    const auto rows = static_cast<Eigen::Index>(n);
    const auto cols = static_cast<Eigen::Index>(d);

    SlraModel model;
    model.hyperparams = hp;
    model.encoder.method = ReduceMethod::Slra;
    model.encoder.context_fingerprint = fingerprint;
    auto& U = model.encoder.U;
    auto& V = model.V;
    U.resize(rows, cols);
    V.resize(rows, cols);
    for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = init(rng);
    for (Eigen::Index i = 0; i < V.size(); ++i) V.data()[i] = init(rng);

    model.initial_loss = reconstruction_error(m, U, V);
    const double total_steps = static_cast<double>(hp.epochs) * static_cast<double>(order.size());
    const double slope = total_steps > 1.0 ? (hp.final_learning_rate - hp.learning_rate) / (total_steps - 1.0) : 0.0;

    double step = 0.0;
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (const auto r : order) {
            slra_step(U, V, m.row(r), hp.learning_rate + slope * step);
            step += 1.0;
        }
        const double loss = reconstruction_error(m, U, V);
        model.epoch_losses.push_back(loss);
        log::info("slra epoch " + std::to_string(epoch + 1) + "/" + std::to_string(hp.epochs) +
                  " loss " + std::to_string(loss));
        if (!std::isfinite(loss) || loss > 10.0 * model.initial_loss) {
            std::ostringstream msg;
            msg << "SLRA diverged at epoch " << epoch + 1 << ": loss " << loss << " vs initial "
                << model.initial_loss << " (limit 10x); lower the learning rate";
            throw NumericError(msg.str());
        }
    }
    return model;
}

double reconstruction_error(const SparseMatrix& m, const RowMatrix& U, const RowMatrix& V) {
    check_factors(m, U, V);
    std::vector<double> per_row(m.rows(), 0.0);
    const auto n = static_cast<std::int64_t>(m.rows());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t r = 0; r < n; ++r) {
        const auto x = m.row(static_cast<std::size_t>(r));
        if (!x.empty()) per_row[static_cast<std::size_t>(r)] = row_error(U, V, x);
    }
    return std::accumulate(per_row.begin(), per_row.end(), 0.0);
}

double reconstruction_error(const DistributionMatrix& m, const SlraModel& model) {
    return reconstruction_error(m.values, model.encoder.U, model.V);
}

double reconstruction_error(const DistributionMatrix& m, const Encoder& encoder) {
    return reconstruction_error(m.values, encoder.U, encoder.U);
}

Eigen::VectorXd encode(const Encoder& encoder, SparseRowView sqrt_dist) {
    if (!sqrt_dist.empty() && sqrt_dist.cols.back() >= encoder.context_size()) {
        throw UsageError("encode: vector index outside the encoder's context dictionary");
    }
    return project(encoder.U, sqrt_dist);
}

Eigen::VectorXd encode(const Encoder& encoder, SparseRowView sqrt_dist, const Fingerprint& source) {
    if (!(source == encoder.context_fingerprint)) {
        throw FingerprintMismatchError("encoder was trained under context configuration " +
                                       encoder.context_fingerprint.hex() + ", input comes from " + source.hex());
    }
    return encode(encoder, sqrt_dist);
}

EmbeddingMatrix embed_rows(const Encoder& encoder, const DistributionMatrix& m) {
    if (!(m.fingerprint == encoder.context_fingerprint)) {
        throw FingerprintMismatchError("encoder was trained under context configuration " +
                                       encoder.context_fingerprint.hex() + ", matrix comes from " +
                                       m.fingerprint.hex());
    }
    if (encoder.context_size() != m.cols()) throw DataError("encoder and matrix disagree on context size");
    return embed(encoder.U, m.values, m.fingerprint);
}

void write_encoder(std::ostream& out, const Encoder& encoder, const RowMatrix* V) {
    const bool slra = encoder.method == ReduceMethod::Slra;
    if (slra && (V == nullptr || V->rows() != encoder.U.rows() || V->cols() != encoder.U.cols())) {
        throw UsageError("an SLRA encoder file needs V with the shape of U");
    }
    put_bytes(out, kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(encoder.U.rows()));
    put_u32(out, static_cast<std::uint32_t>(encoder.U.cols()));
    put_u8(out, static_cast<std::uint8_t>(encoder.method));
    put_bytes(out, encoder.context_fingerprint.bytes.data(), encoder.context_fingerprint.bytes.size());
    for (Eigen::Index i = 0; i < encoder.U.size(); ++i) put_f64(out, encoder.U.data()[i]);
    if (slra) {
        for (Eigen::Index i = 0; i < V->size(); ++i) put_f64(out, V->data()[i]);
    }
    if (!out) throw DataError("HENC1: write failed");
}

EncoderFile read_encoder(std::istream& in) {
    char magic[sizeof kMagic];
    if (!get_bytes(in, magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw DataError("not an HENC1 file");
    }
    EncoderFile file;
    const auto rows = get_u32(in, kFormat);
    const auto cols = get_u32(in, kFormat);
    const auto method = get_u8(in, kFormat);
    if (method > 1) throw DataError("HENC1: unknown method");
    if (cols == 0 || cols > rows) throw DataError("HENC1: bad dimensions");
    file.encoder.method = static_cast<ReduceMethod>(method);
    require_bytes(in, file.encoder.context_fingerprint.bytes.data(), file.encoder.context_fingerprint.bytes.size(),
                  kFormat);
    auto read_matrix = [&] {
        RowMatrix M(rows, cols);
        for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = get_f64(in, kFormat);
        return M;
    };
    file.encoder.U = read_matrix();
    if (file.encoder.method == ReduceMethod::Slra) file.V = read_matrix();
    if (in.peek() != std::char_traits<char>::eof()) throw DataError("HENC1: trailing bytes");
    return file;
}

void write_embeddings(std::ostream& out, const RowMatrix& vectors, std::span<const std::string> words) {
    if (words.size() != static_cast<std::size_t>(vectors.rows())) {
        throw UsageError("embedding rows and word list differ in length");
    }
    out << vectors.rows() << ' ' << vectors.cols() << '\n';
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
        out << words[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
            out << ' ';
            write_number(out, vectors(r, c));
        }
        out << '\n';
    }
    if (!out) throw DataError("embeddings: write failed");
}

EmbeddingText read_embeddings(std::istream& in) {
    std::string line;
    std::size_t rows = 0, cols = 0;
    if (!std::getline(in, line)) throw DataError("embeddings: empty file");
    {
        std::istringstream header(line);
        std::string extra;
        if (!(header >> rows >> cols) || (header >> extra)) {
            throw DataError("embeddings: line 1: expected \"<words> <dims>\"");
        }
    }
    EmbeddingText text;
    text.words.reserve(rows);
    text.vectors.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto where = "embeddings: line " + std::to_string(r + 2);
        if (!std::getline(in, line)) throw DataError(where + ": missing");
        const char* p = line.data();
        const char* end = p + line.size();
        const char* sp = std::find(p, end, ' ');
        if (sp == p) throw DataError(where + ": missing word");
        text.words.emplace_back(p, sp);
        p = sp;
        for (std::size_t c = 0; c < cols; ++c) {
            if (p == end || *p != ' ') throw DataError(where + ": expected " + std::to_string(cols) + " values");
            ++p;
            double v = 0.0;
            const auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc{}) throw DataError(where + ": bad number");
            text.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            p = res.ptr;
        }
        if (p != end) throw DataError(where + ": too many values");
    }
    return text;
}

}  // namespace hellvec
