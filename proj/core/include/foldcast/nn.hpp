#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "foldcast/dataset.hpp"
#include "foldcast/errors.hpp"

namespace foldcast {
namespace nn {

inline constexpr int kKernelWidth = 20;
inline constexpr int kConv1Filters = 32;
inline constexpr int kConv2Filters = 64;
inline constexpr int kClasses = 3;
inline constexpr double kLayerNormEps = 1e-5;

/// All learnable tensors of the two-conv-layer network. Kernels are stored
/// row-major as (width, in_channels, out_channels); dense weights as
/// (features, classes).
template <typename T>
struct NetParams {
  std::vector<T> conv1_k, conv1_b;
  std::vector<T> ln1_g, ln1_b;
  std::vector<T> conv2_k, conv2_b;
  std::vector<T> ln2_g, ln2_b;
  std::vector<T> dense_w, dense_b;

  static NetParams zeros();
  /// He-uniform kernels (bound sqrt(6 / fan_in)), zero biases, unit
  /// layer-norm gains.
  static NetParams he_uniform(std::uint64_t seed);

  std::vector<std::vector<T>*> tensors();
  std::vector<const std::vector<T>*> tensors() const;
};

struct TrainConfig {
  int batch_size = 32;
  int max_epochs = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  double val_fraction = 0.2;

  void validate() const;
};

// Layer primitives ----------------------------------------------------------

/// Causal 1D convolution: out[t,o] = b[o] + sum_{j,c} in[t-(k-1)+j, c] *
/// kernel[j,c,o], with zero left padding. Output length equals input
/// length.
template <typename T>
void conv1d_causal(const T* in, int length, int c_in, const T* kernels,
                   const T* bias, int k, int c_out, T* out);

/// Per-time-step normalization across channels (population variance),
/// then gain/bias per channel.
template <typename T>
void layer_norm(const T* in, int length, int channels, const T* gain,
                const T* bias, T* out, T* mean_cache = nullptr,
                T* invstd_cache = nullptr);

template <typename T>
void relu(const T* in, std::size_t n, T* out);

/// Per-channel mean over the time axis.
template <typename T>
void global_avg_pool(const T* in, int length, int channels, T* out);

/// logits = W^T f + b, then numerically stable softmax.
template <typename T>
void dense_softmax(const T* features, int c, const T* weights, const T* bias,
                   int classes, T* probabilities);

// Forward / backward --------------------------------------------------------

/// Intermediates retained for the backward pass.
template <typename T>
struct ForwardCache {
  int length = 0;
  std::vector<T> conv1_out, ln1_mean, ln1_invstd, ln1_out, relu1_out;
  std::vector<T> conv2_out, ln2_mean, ln2_invstd, ln2_out, relu2_out;
  std::vector<T> features;
  std::array<T, kClasses> probabilities{};
};

/// conv1 -> ln1 -> relu -> conv2 -> ln2 -> relu -> gap -> dense -> softmax.
/// The input channel is a single-feature sequence of length >= kernel
/// width.
template <typename T>
void forward(const NetParams<T>& params, const T* channel, int length,
             ForwardCache<T>& cache);

template <typename T>
struct BatchItem {
  const T* channel;
  int length;
  int label;
};

/// Mean cross-entropy over the batch plus reverse-mode gradients for every
/// parameter tensor.
template <typename T>
T loss_and_grads(const NetParams<T>& params,
                 const std::vector<BatchItem<T>>& batch, NetParams<T>& grads);

// Optimization --------------------------------------------------------------

template <typename T>
struct AdamState {
  NetParams<T> m = NetParams<T>::zeros();
  NetParams<T> v = NetParams<T>::zeros();
};

/// One bias-corrected Adam update; `t` is the 1-based step index.
template <typename T>
void adam_step(NetParams<T>& params, const NetParams<T>& grads,
               AdamState<T>& state, int t, const TrainConfig& config);

// Training ------------------------------------------------------------------

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  NetParams<float> params;
  std::vector<EpochStats> history;
};

/// Seeded-shuffle mini-batch loop; final short batch kept; returns the
/// final-epoch parameters. Throws DivergenceError on non-finite loss.
TrainResult train(const Dataset& train_ds, const Dataset& val_ds,
                  const TrainConfig& config);

/// Argmax of forward probabilities; ties break to the lowest class index.
std::pair<ClassLabel, std::array<double, kClasses>> predict(
    const NetParams<float>& params, const std::vector<float>& channel);

// Persistence ---------------------------------------------------------------

// Checkpoint: little-endian, magic "FBNN", version u16 = 1, then each
// tensor as (rank u8, dims u32 x rank, f32 values) in declaration order.
void save_checkpoint(const NetParams<float>& params, const std::string& path);
NetParams<float> load_checkpoint(const std::string& path);

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::string& path);

}  // namespace nn
}  // namespace foldcast
