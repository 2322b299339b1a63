#ifndef HELLVEC_REDUCE_HPP
#define HELLVEC_REDUCE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hellvec/cooccur.hpp"
#include "hellvec/fingerprint.hpp"
#include "hellvec/sparse.hpp"

namespace hellvec {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ReduceMethod : std::uint8_t { Pca = 0, Slra = 1 };

/// U (|D| x d): maps a sqrt-distribution over the context dictionary to d dims.
struct Encoder {
    RowMatrix U;
    ReduceMethod method = ReduceMethod::Pca;
    Fingerprint context_fingerprint;

    std::size_t context_size() const { return static_cast<std::size_t>(U.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(U.cols()); }
};

/// Unset fields fall back to the documented defaults: U, V ~ uniform(-a, a)
/// with a = 1/sqrt(|D|), learning rate decaying linearly from 0.01 to 1e-4
/// over all steps, 10 epochs.
struct SlraHyperparams {
    double learning_rate = 0.01;
    double final_learning_rate = 1e-4;
    std::size_t epochs = 10;
    std::uint64_t seed = 1;
    /// 0 selects 1/sqrt(|D|).
    double init_scale = 0.0;
};

struct SlraModel {
    Encoder encoder;
    RowMatrix V;
    SlraHyperparams hyperparams;
    double initial_loss = 0.0;
    /// Reconstruction error after each epoch.
    std::vector<double> epoch_losses;
};

/// Row w is U^T sqrt(P_w); rows of zero_rows are all-zero.
struct EmbeddingMatrix {
    RowMatrix vectors;
    std::vector<std::uint32_t> zero_rows;
    Fingerprint fingerprint;
};

enum class GramPrecision { Float64, Float32 };

struct PcaOptions {
    GramPrecision precision = GramPrecision::Float64;
    /// Refuse to allocate a |D| x |D| Gram matrix larger than this.
    std::size_t max_gram_bytes = std::size_t{1} << 30;
};

struct PcaResult {
    Encoder encoder;
    EmbeddingMatrix embeddings;
    /// Top-d eigenvalues of the Gram matrix, descending.
    Eigen::VectorXd eigenvalues;
};

// ---------------------------------------------------------------------------
// Gram matrix X^T X, uncentered

/// Parallel over row blocks of the result; each entry accumulates data rows in
/// order, so the result is bit-identical to the serial reference.
RowMatrix gram_matrix(const SparseMatrix& m);
RowMatrixF gram_matrix_f32(const SparseMatrix& m);

namespace reference {
RowMatrix gram_matrix(const SparseMatrix& m);
RowMatrixF gram_matrix_f32(const SparseMatrix& m);
}  // namespace reference

// ---------------------------------------------------------------------------
// Hellinger PCA

/// U holds the top-d eigenvectors of the uncentered Gram matrix, each column
/// signed so its largest-magnitude entry is positive.
PcaResult hellinger_pca(const DistributionMatrix& m, std::size_t d, const PcaOptions& options = {});
PcaResult hellinger_pca(const SparseMatrix& m, std::size_t d, const Fingerprint& fingerprint,
                        const PcaOptions& options = {});

// ---------------------------------------------------------------------------
// Stochastic low-rank approximation: minimize sum_w ||V U^T x_w - x_w||^2

struct SlraGradients {
    RowMatrix dU;
    RowMatrix dV;
    double loss = 0.0;
};

/// Per-example loss and gradients: with h = U^T x and r = V h - x,
/// dL/dV = 2 r h^T and dL/dU = 2 x (V^T r)^T.
SlraGradients slra_gradients(const RowMatrix& U, const RowMatrix& V, SparseRowView x);

/// One SGD step; only x's support rows of U change. Returns the loss before the update.
double slra_step(RowMatrix& U, RowMatrix& V, SparseRowView x, double learning_rate);

/// Visits the non-empty rows in a seeded shuffled order each epoch.
/// Throws NumericError when an epoch loss exceeds 10x the initial loss.
SlraModel slra_train(const DistributionMatrix& m, std::size_t d, const SlraHyperparams& hp = {});
SlraModel slra_train(const SparseMatrix& m, std::size_t d, const SlraHyperparams& hp, const Fingerprint& fingerprint);

// ---------------------------------------------------------------------------
// Reconstruction and encoding

/// Sum over non-empty rows of ||V U^T x - x||^2.
double reconstruction_error(const SparseMatrix& m, const RowMatrix& U, const RowMatrix& V);
double reconstruction_error(const DistributionMatrix& m, const SlraModel& model);
/// Projection error, V := U.
double reconstruction_error(const DistributionMatrix& m, const Encoder& encoder);

/// U^T x.
Eigen::VectorXd encode(const Encoder& encoder, SparseRowView sqrt_dist);
/// U^T x after checking that x was built under the encoder's configuration.
Eigen::VectorXd encode(const Encoder& encoder, SparseRowView sqrt_dist, const Fingerprint& source);

EmbeddingMatrix embed_rows(const Encoder& encoder, const DistributionMatrix& m);

// ---------------------------------------------------------------------------
// Files

/// "HENC1", u32 |D|, u32 d, u8 method, 16-byte fingerprint, U row-major f64,
/// then V for SLRA. Little-endian.
void write_encoder(std::ostream& out, const Encoder& encoder, const RowMatrix* V = nullptr);

struct EncoderFile {
    Encoder encoder;
    std::optional<RowMatrix> V;
};
EncoderFile read_encoder(std::istream& in);

/// First line "|W| d", then "word v1 ... vd" with round-trip precision.
void write_embeddings(std::ostream& out, const RowMatrix& vectors, std::span<const std::string> words);

struct EmbeddingText {
    std::vector<std::string> words;
    RowMatrix vectors;
};
EmbeddingText read_embeddings(std::istream& in);

}  // namespace hellvec

#endif
