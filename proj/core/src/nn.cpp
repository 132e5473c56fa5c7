#include "foldcast/nn.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "foldcast/rng.hpp"

namespace foldcast {
namespace nn {

namespace {

void gemm(bool trans_a, bool trans_b, int m, int n, int k, const float* a,
          int lda, const float* b, int ldb, float* c, int ldc) {
  cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, 1.0f, a, lda, b,
              ldb, 0.0f, c, ldc);
}

void gemm(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
          int lda, const double* b, int ldb, double* c, int ldc) {
  cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, 1.0, a, lda, b,
              ldb, 0.0, c, ldc);
}

/// Left-padded patch matrix: col[t, j*c_in + c] = in[t-(k-1)+j, c], zero
/// outside the sequence.
template <typename T>
void im2col_causal(const T* in, int length, int c_in, int k,
                   std::vector<T>& col) {
  col.assign(static_cast<std::size_t>(length) * k * c_in, T(0));
  for (int t = 0; t < length; ++t) {
    T* row = col.data() + static_cast<std::size_t>(t) * k * c_in;
    const int j0 = std::max(0, (k - 1) - t);
    for (int j = j0; j < k; ++j) {
      const int src = t - (k - 1) + j;
      std::memcpy(row + j * c_in, in + static_cast<std::size_t>(src) * c_in,
                  sizeof(T) * c_in);
    }
  }
}

}  // namespace

// NetParams -----------------------------------------------------------------

template <typename T>
NetParams<T> NetParams<T>::zeros() {
  NetParams<T> p;
  p.conv1_k.assign(kKernelWidth * 1 * kConv1Filters, T(0));
  p.conv1_b.assign(kConv1Filters, T(0));
  p.ln1_g.assign(kConv1Filters, T(0));
  p.ln1_b.assign(kConv1Filters, T(0));
  p.conv2_k.assign(kKernelWidth * kConv1Filters * kConv2Filters, T(0));
  p.conv2_b.assign(kConv2Filters, T(0));
  p.ln2_g.assign(kConv2Filters, T(0));
  p.ln2_b.assign(kConv2Filters, T(0));
  p.dense_w.assign(kConv2Filters * kClasses, T(0));
  p.dense_b.assign(kClasses, T(0));
  return p;
}

template <typename T>
NetParams<T> NetParams<T>::he_uniform(std::uint64_t seed) {
  NetParams<T> p = zeros();
  Rng rng(seed);
  const auto fill = [&](std::vector<T>& w, int fan_in) {
    const double bound = std::sqrt(6.0 / fan_in);
    for (auto& v : w) v = static_cast<T>(rng.uniform(-bound, bound));
  };
  fill(p.conv1_k, kKernelWidth * 1);
  fill(p.conv2_k, kKernelWidth * kConv1Filters);
  fill(p.dense_w, kConv2Filters);
  std::fill(p.ln1_g.begin(), p.ln1_g.end(), T(1));
  std::fill(p.ln2_g.begin(), p.ln2_g.end(), T(1));
  return p;
}

template <typename T>
std::vector<std::vector<T>*> NetParams<T>::tensors() {
  return {&conv1_k, &conv1_b, &ln1_g, &ln1_b, &conv2_k,
          &conv2_b, &ln2_g,   &ln2_b, &dense_w, &dense_b};
}

template <typename T>
std::vector<const std::vector<T>*> NetParams<T>::tensors() const {
  return {&conv1_k, &conv1_b, &ln1_g, &ln1_b, &conv2_k,
          &conv2_b, &ln2_g,   &ln2_b, &dense_w, &dense_b};
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw ConfigError("val_fraction must be in (0, 1)");
}

// Layer primitives ----------------------------------------------------------

template <typename T>
void conv1d_causal(const T* in, int length, int c_in, const T* kernels,
                   const T* bias, int k, int c_out, T* out) {
  if (k > length) throw ShapeMismatch("conv1d_causal: kernel wider than input");
  thread_local std::vector<T> col;
  im2col_causal(in, length, c_in, k, col);
  gemm(false, false, length, c_out, k * c_in, col.data(), k * c_in, kernels,
       c_out, out, c_out);
  for (int t = 0; t < length; ++t)
    for (int o = 0; o < c_out; ++o)
      out[static_cast<std::size_t>(t) * c_out + o] += bias[o];
}

template <typename T>
void layer_norm(const T* in, int length, int channels, const T* gain,
                const T* bias, T* out, T* mean_cache, T* invstd_cache) {
  for (int t = 0; t < length; ++t) {
    const T* row = in + static_cast<std::size_t>(t) * channels;
    T* orow = out + static_cast<std::size_t>(t) * channels;
    T mean = 0;
    for (int c = 0; c < channels; ++c) mean += row[c];
    mean /= channels;
    T var = 0;
    for (int c = 0; c < channels; ++c) {
      const T d = row[c] - mean;
      var += d * d;
    }
    var /= channels;
    const T invstd = T(1) / std::sqrt(var + T(kLayerNormEps));
    for (int c = 0; c < channels; ++c)
      orow[c] = gain[c] * (row[c] - mean) * invstd + bias[c];
    if (mean_cache) mean_cache[t] = mean;
    if (invstd_cache) invstd_cache[t] = invstd;
  }
}

template <typename T>
void relu(const T* in, std::size_t n, T* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > T(0) ? in[i] : T(0);
}

template <typename T>
void global_avg_pool(const T* in, int length, int channels, T* out) {
  for (int c = 0; c < channels; ++c) out[c] = T(0);
  for (int t = 0; t < length; ++t) {
    const T* row = in + static_cast<std::size_t>(t) * channels;
    for (int c = 0; c < channels; ++c) out[c] += row[c];
  }
  for (int c = 0; c < channels; ++c) out[c] /= length;
}

template <typename T>
void dense_softmax(const T* features, int c, const T* weights, const T* bias,
                   int classes, T* probabilities) {
  for (int j = 0; j < classes; ++j) {
    T acc = bias[j];
    for (int i = 0; i < c; ++i)
      acc += weights[static_cast<std::size_t>(i) * classes + j] * features[i];
    probabilities[j] = acc;
  }
  T max_logit = probabilities[0];
  for (int j = 1; j < classes; ++j)
    max_logit = std::max(max_logit, probabilities[j]);
  T sum = 0;
  for (int j = 0; j < classes; ++j) {
    probabilities[j] = std::exp(probabilities[j] - max_logit);
    sum += probabilities[j];
  }
  for (int j = 0; j < classes; ++j) probabilities[j] /= sum;
}

// Forward -------------------------------------------------------------------

template <typename T>
void forward(const NetParams<T>& params, const T* channel, int length,
             ForwardCache<T>& cache) {
  if (length < kKernelWidth)
    throw ShapeMismatch("forward: input shorter than kernel width");
  const std::size_t n1 = static_cast<std::size_t>(length) * kConv1Filters;
  const std::size_t n2 = static_cast<std::size_t>(length) * kConv2Filters;
  cache.length = length;
  cache.conv1_out.resize(n1);
  cache.ln1_mean.resize(length);
  cache.ln1_invstd.resize(length);
  cache.ln1_out.resize(n1);
  cache.relu1_out.resize(n1);
  cache.conv2_out.resize(n2);
  cache.ln2_mean.resize(length);
  cache.ln2_invstd.resize(length);
  cache.ln2_out.resize(n2);
  cache.relu2_out.resize(n2);
  cache.features.resize(kConv2Filters);

  conv1d_causal(channel, length, 1, params.conv1_k.data(),
                params.conv1_b.data(), kKernelWidth, kConv1Filters,
                cache.conv1_out.data());
  layer_norm(cache.conv1_out.data(), length, kConv1Filters,
             params.ln1_g.data(), params.ln1_b.data(), cache.ln1_out.data(),
             cache.ln1_mean.data(), cache.ln1_invstd.data());
  relu(cache.ln1_out.data(), n1, cache.relu1_out.data());
  conv1d_causal(cache.relu1_out.data(), length, kConv1Filters,
                params.conv2_k.data(), params.conv2_b.data(), kKernelWidth,
                kConv2Filters, cache.conv2_out.data());
  layer_norm(cache.conv2_out.data(), length, kConv2Filters,
             params.ln2_g.data(), params.ln2_b.data(), cache.ln2_out.data(),
             cache.ln2_mean.data(), cache.ln2_invstd.data());
  relu(cache.ln2_out.data(), n2, cache.relu2_out.data());
  global_avg_pool(cache.relu2_out.data(), length, kConv2Filters,
                  cache.features.data());
  dense_softmax(cache.features.data(), kConv2Filters, params.dense_w.data(),
                params.dense_b.data(), kClasses,
                cache.probabilities.data());
}

// Backward ------------------------------------------------------------------

namespace {

/// Layer-norm backward over the channel axis for every time step.
template <typename T>
void layer_norm_backward(const T* d_out, const T* in, const T* mean,
                         const T* invstd, const T* gain, int length,
                         int channels, T* d_in, T* d_gain, T* d_bias) {
  for (int t = 0; t < length; ++t) {
    const std::size_t off = static_cast<std::size_t>(t) * channels;
    const T* x = in + off;
    const T* dy = d_out + off;
    T* dx = d_in + off;
    const T mu = mean[t];
    const T is = invstd[t];
    T m1 = 0, m2 = 0;
    for (int c = 0; c < channels; ++c) {
      const T xhat = (x[c] - mu) * is;
      const T dxhat = dy[c] * gain[c];
      m1 += dxhat;
      m2 += dxhat * xhat;
      d_gain[c] += dy[c] * xhat;
      d_bias[c] += dy[c];
    }
    m1 /= channels;
    m2 /= channels;
    for (int c = 0; c < channels; ++c) {
      const T xhat = (x[c] - mu) * is;
      dx[c] = is * (dy[c] * gain[c] - m1 - xhat * m2);
    }
  }
}

/// Gradients of a causal convolution. d_in may be null when the input
/// layer needs no gradient.
template <typename T>
void conv1d_causal_backward(const T* in, const T* d_out, int length, int c_in,
                            int c_out, int k, const T* kernels, T* d_kernels,
                            T* d_bias, T* d_in) {
  thread_local std::vector<T> col, d_col, dk_local;
  im2col_causal(in, length, c_in, k, col);
  // dW = col^T * d_out, accumulated into d_kernels.
  dk_local.assign(static_cast<std::size_t>(k) * c_in * c_out, T(0));
  gemm(true, false, k * c_in, c_out, length, col.data(), k * c_in, d_out,
       c_out, dk_local.data(), c_out);
  for (std::size_t i = 0; i < dk_local.size(); ++i) d_kernels[i] += dk_local[i];
  for (int t = 0; t < length; ++t)
    for (int o = 0; o < c_out; ++o)
      d_bias[o] += d_out[static_cast<std::size_t>(t) * c_out + o];
  if (!d_in) return;
  // d_col = d_out * W^T, then scatter back to the input layout.
  d_col.assign(static_cast<std::size_t>(length) * k * c_in, T(0));
  gemm(false, true, length, k * c_in, c_out, d_out, c_out, kernels, c_out,
       d_col.data(), k * c_in);
  std::fill(d_in, d_in + static_cast<std::size_t>(length) * c_in, T(0));
  for (int t = 0; t < length; ++t) {
    const T* row = d_col.data() + static_cast<std::size_t>(t) * k * c_in;
    const int j0 = std::max(0, (k - 1) - t);
    for (int j = j0; j < k; ++j) {
      const int dst = t - (k - 1) + j;
      T* target = d_in + static_cast<std::size_t>(dst) * c_in;
      const T* src = row + j * c_in;
      for (int c = 0; c < c_in; ++c) target[c] += src[c];
    }
  }
}

}  // namespace

template <typename T>
T loss_and_grads(const NetParams<T>& params,
                 const std::vector<BatchItem<T>>& batch, NetParams<T>& grads) {
  if (batch.empty()) throw ShapeMismatch("loss_and_grads: empty batch");
  for (auto* g : grads.tensors()) std::fill(g->begin(), g->end(), T(0));

  const T inv_batch = T(1) / static_cast<T>(batch.size());
  T loss = 0;

  thread_local ForwardCache<T> cache;
  std::vector<T> d_relu2, d_ln2, d_conv2, d_relu1, d_ln1, d_conv1;

  for (const auto& item : batch) {
    forward(params, item.channel, item.length, cache);
    const int L = cache.length;
    const std::size_t n1 = static_cast<std::size_t>(L) * kConv1Filters;
    const std::size_t n2 = static_cast<std::size_t>(L) * kConv2Filters;

    const T p_label = std::max(cache.probabilities[item.label],
                               std::numeric_limits<T>::min());
    loss -= std::log(p_label) * inv_batch;

    // Softmax + cross-entropy fused.
    T d_logits[kClasses];
    for (int j = 0; j < kClasses; ++j)
      d_logits[j] = (cache.probabilities[j] - (j == item.label ? T(1) : T(0))) *
                    inv_batch;

    // Dense layer.
    T d_feat[kConv2Filters];
    for (int c = 0; c < kConv2Filters; ++c) {
      T acc = 0;
      for (int j = 0; j < kClasses; ++j) {
        grads.dense_w[static_cast<std::size_t>(c) * kClasses + j] +=
            cache.features[c] * d_logits[j];
        acc += params.dense_w[static_cast<std::size_t>(c) * kClasses + j] *
               d_logits[j];
      }
      d_feat[c] = acc;
    }
    for (int j = 0; j < kClasses; ++j) grads.dense_b[j] += d_logits[j];

    // Global average pool.
    d_relu2.assign(n2, T(0));
    const T inv_len = T(1) / static_cast<T>(L);
    for (int t = 0; t < L; ++t)
      for (int c = 0; c < kConv2Filters; ++c)
        d_relu2[static_cast<std::size_t>(t) * kConv2Filters + c] =
            d_feat[c] * inv_len;

    // ReLU after ln2.
    d_ln2.resize(n2);
    for (std::size_t i = 0; i < n2; ++i)
      d_ln2[i] = cache.ln2_out[i] > T(0) ? d_relu2[i] : T(0);

    // Layer norm 2.
    d_conv2.resize(n2);
    layer_norm_backward(d_ln2.data(), cache.conv2_out.data(),
                        cache.ln2_mean.data(), cache.ln2_invstd.data(),
                        params.ln2_g.data(), L, kConv2Filters, d_conv2.data(),
                        grads.ln2_g.data(), grads.ln2_b.data());

    // Conv 2 (input gradient feeds relu1).
    d_relu1.resize(n1);
    conv1d_causal_backward(cache.relu1_out.data(), d_conv2.data(), L,
                           kConv1Filters, kConv2Filters, kKernelWidth,
                           params.conv2_k.data(), grads.conv2_k.data(),
                           grads.conv2_b.data(), d_relu1.data());

    // ReLU after ln1.
    d_ln1.resize(n1);
    for (std::size_t i = 0; i < n1; ++i)
      d_ln1[i] = cache.ln1_out[i] > T(0) ? d_relu1[i] : T(0);

    // Layer norm 1.
    d_conv1.resize(n1);
    layer_norm_backward(d_ln1.data(), cache.conv1_out.data(),
                        cache.ln1_mean.data(), cache.ln1_invstd.data(),
                        params.ln1_g.data(), L, kConv1Filters, d_conv1.data(),
                        grads.ln1_g.data(), grads.ln1_b.data());

    // Conv 1 (no input gradient needed).
    conv1d_causal_backward(item.channel, d_conv1.data(), L, 1, kConv1Filters,
                           kKernelWidth, params.conv1_k.data(),
                           grads.conv1_k.data(), grads.conv1_b.data(),
                           static_cast<T*>(nullptr));
  }
  return loss;
}

// Adam ----------------------------------------------------------------------

template <typename T>
void adam_step(NetParams<T>& params, const NetParams<T>& grads,
               AdamState<T>& state, int t, const TrainConfig& config) {
  if (t < 1) throw ConfigError("adam_step: step index must be >= 1");
  const T b1 = static_cast<T>(config.beta1);
  const T b2 = static_cast<T>(config.beta2);
  const T lr = static_cast<T>(config.learning_rate);
  const T eps = static_cast<T>(config.adam_eps);
  const T c1 = T(1) - static_cast<T>(std::pow(config.beta1, t));
  const T c2 = T(1) - static_cast<T>(std::pow(config.beta2, t));

  auto ps = params.tensors();
  auto gs = grads.tensors();
  auto ms = state.m.tensors();
  auto vs = state.v.tensors();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    auto& p = *ps[k];
    const auto& g = *gs[k];
    auto& m = *ms[k];
    auto& v = *vs[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * g[i];
      v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
      const T mhat = m[i] / c1;
      const T vhat = v[i] / c2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

// Training ------------------------------------------------------------------

TrainResult train(const Dataset& train_ds, const Dataset& val_ds,
                  const TrainConfig& config) {
  config.validate();
  if (train_ds.samples.empty() || val_ds.samples.empty())
    throw ConfigError("train: empty dataset");
  if (train_ds.pipeline.kind != val_ds.pipeline.kind ||
      train_ds.pipeline.resample_len != val_ds.pipeline.resample_len)
    throw ConfigError("train: train/val pipelines differ");

  TrainResult result;
  result.params = NetParams<float>::he_uniform(config.seed);
  AdamState<float> adam;
  NetParams<float> grads = NetParams<float>::zeros();

  std::vector<std::size_t> order(train_ds.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  int step = 0;
  ForwardCache<float> eval_cache;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(config.seed, 1000 + epoch));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);

    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + config.batch_size);
      std::vector<BatchItem<float>> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const auto& s = train_ds.samples[order[i]];
        batch.push_back({s.channel.data(), static_cast<int>(s.channel.size()),
                         static_cast<int>(s.label)});
      }
      const float loss = loss_and_grads(result.params, batch, grads);
      if (!std::isfinite(loss))
        throw DivergenceError("training loss became non-finite");
      adam_step(result.params, grads, adam, ++step, config);
      epoch_loss += static_cast<double>(loss) * batch.size();
      seen += batch.size();
    }

    std::size_t correct = 0;
    for (const auto& s : val_ds.samples) {
      forward(result.params, s.channel.data(),
              static_cast<int>(s.channel.size()), eval_cache);
      int argmax = 0;
      for (int j = 1; j < kClasses; ++j)
        if (eval_cache.probabilities[j] > eval_cache.probabilities[argmax])
          argmax = j;
      if (argmax == static_cast<int>(s.label)) ++correct;
    }

    result.history.push_back(
        {epoch, epoch_loss / static_cast<double>(seen),
         static_cast<double>(correct) /
             static_cast<double>(val_ds.samples.size())});
  }
  return result;
}

std::pair<ClassLabel, std::array<double, kClasses>> predict(
    const NetParams<float>& params, const std::vector<float>& channel) {
  thread_local ForwardCache<float> cache;
  forward(params, channel.data(), static_cast<int>(channel.size()), cache);
  std::array<double, kClasses> probs;
  for (int j = 0; j < kClasses; ++j)
    probs[j] = static_cast<double>(cache.probabilities[j]);
  int argmax = 0;
  for (int j = 1; j < kClasses; ++j)
    if (probs[j] > probs[argmax]) argmax = j;
  return {static_cast<ClassLabel>(argmax), probs};
}

// Persistence ---------------------------------------------------------------

namespace {

constexpr char kCkptMagic[4] = {'F', 'B', 'N', 'N'};
constexpr std::uint16_t kCkptVersion = 1;

struct TensorShape {
  std::uint8_t rank;
  std::uint32_t dims[3];
};

const TensorShape kShapes[10] = {
    {3, {kKernelWidth, 1, kConv1Filters}},
    {1, {kConv1Filters, 0, 0}},
    {1, {kConv1Filters, 0, 0}},
    {1, {kConv1Filters, 0, 0}},
    {3, {kKernelWidth, kConv1Filters, kConv2Filters}},
    {1, {kConv2Filters, 0, 0}},
    {1, {kConv2Filters, 0, 0}},
    {1, {kConv2Filters, 0, 0}},
    {2, {kConv2Filters, kClasses, 0}},
    {1, {kClasses, 0, 0}},
};

}  // namespace

void save_checkpoint(const NetParams<float>& params,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kCkptMagic, 4);
  os.write(reinterpret_cast<const char*>(&kCkptVersion), 2);
  auto ts = params.tensors();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& shape = kShapes[k];
    os.write(reinterpret_cast<const char*>(&shape.rank), 1);
    os.write(reinterpret_cast<const char*>(shape.dims),
             4l * shape.rank);
    os.write(reinterpret_cast<const char*>(ts[k]->data()),
             static_cast<std::streamsize>(ts[k]->size() * sizeof(float)));
  }
  if (!os) throw IoError("write failed: " + path);
}

NetParams<float> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kCkptMagic, 4) != 0)
    throw BadMagic("not a checkpoint file: " + path);
  std::uint16_t version = 0;
  is.read(reinterpret_cast<char*>(&version), 2);
  if (!is) throw Truncated("checkpoint truncated");
  if (version != kCkptVersion)
    throw VersionMismatch("unsupported checkpoint version " +
                          std::to_string(version));

  NetParams<float> params = NetParams<float>::zeros();
  auto ts = params.tensors();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::uint8_t rank = 0;
    is.read(reinterpret_cast<char*>(&rank), 1);
    if (!is || rank != kShapes[k].rank)
      throw Truncated("checkpoint tensor rank mismatch");
    std::size_t count = 1;
    for (int d = 0; d < rank; ++d) {
      std::uint32_t dim = 0;
      is.read(reinterpret_cast<char*>(&dim), 4);
      if (!is || dim != kShapes[k].dims[d])
        throw Truncated("checkpoint tensor shape mismatch");
      count *= dim;
    }
    if (count != ts[k]->size()) throw Truncated("checkpoint size mismatch");
    is.read(reinterpret_cast<char*>(ts[k]->data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!is) throw Truncated("checkpoint truncated");
  }
  return params;
}

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "epoch,train_loss,val_accuracy\n";
  char buf[96];
  for (const auto& row : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g\n", row.epoch,
                  row.train_loss, row.val_accuracy);
    os << buf;
  }
  if (!os) throw IoError("write failed: " + path);
}

// Explicit instantiations ---------------------------------------------------

template struct NetParams<float>;
template struct NetParams<double>;

template void conv1d_causal<float>(const float*, int, int, const float*,
                                   const float*, int, int, float*);
template void conv1d_causal<double>(const double*, int, int, const double*,
                                    const double*, int, int, double*);
template void layer_norm<float>(const float*, int, int, const float*,
                                const float*, float*, float*, float*);
template void layer_norm<double>(const double*, int, int, const double*,
                                 const double*, double*, double*, double*);
template void relu<float>(const float*, std::size_t, float*);
template void relu<double>(const double*, std::size_t, double*);
template void global_avg_pool<float>(const float*, int, int, float*);
template void global_avg_pool<double>(const double*, int, int, double*);
template void dense_softmax<float>(const float*, int, const float*,
                                   const float*, int, float*);
template void dense_softmax<double>(const double*, int, const double*,
                                    const double*, int, double*);
template void forward<float>(const NetParams<float>&, const float*, int,
                             ForwardCache<float>&);
template void forward<double>(const NetParams<double>&, const double*, int,
                              ForwardCache<double>&);
template float loss_and_grads<float>(const NetParams<float>&,
                                     const std::vector<BatchItem<float>>&,
                                     NetParams<float>&);
template double loss_and_grads<double>(const NetParams<double>&,
                                       const std::vector<BatchItem<double>>&,
                                       NetParams<double>&);
template void adam_step<float>(NetParams<float>&, const NetParams<float>&,
                               AdamState<float>&, int, const TrainConfig&);
template void adam_step<double>(NetParams<double>&, const NetParams<double>&,
                                AdamState<double>&, int, const TrainConfig&);

}  // namespace nn
}  // namespace foldcast
