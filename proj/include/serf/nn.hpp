#pragma once

#include <cstdint>
#include <vector>

#include "serf/activations.hpp"
#include "serf/init.hpp"
#include "serf/rng.hpp"
#include "serf/tensor.hpp"

namespace serf {

enum class Mode { train, eval };

struct LayerSpec {
    std::size_t width = 1;
    Activation activation{};
    bool batch_norm = false;
    double dropout_rate = 0.0;  // in [0, 1)
};

// Hidden layers come from `layers`; a dense output layer of width output_dim
// with identity activation is always appended and feeds the softmax loss.
struct NetworkSpec {
    std::size_t input_dim = 1;
    std::vector<LayerSpec> layers;
    std::size_t output_dim = 1;
    Initializer initializer{};
    std::uint64_t seed = 0;
};

struct BatchNormState {
    Tensor2 gamma;         // 1 x width, starts at 1
    Tensor2 beta;          // 1 x width, starts at 0
    Tensor2 running_mean;  // 1 x width, starts at 0
    Tensor2 running_var;   // 1 x width, starts at 1
    double momentum = 0.1;
    double epsilon = 1e-5;
};

struct LayerCache {
    Tensor2 x;        // dense input
    Tensor2 z;        // x W + b
    Tensor2 mean;     // batch (or running) mean, 1 x width, BN only
    Tensor2 inv_std;  // 1 / sqrt(var + eps), 1 x width, BN only
    Tensor2 xhat;     // normalized z, BN only
    Tensor2 a_in;     // activation input (z or BN output)
    Tensor2 h;        // activation output
    Tensor2 mask;     // dropout multiplier per element; empty when inactive
    Tensor2 out;      // layer output
};

struct ForwardCache {
    Mode mode = Mode::eval;
    std::vector<LayerCache> layers;  // hidden layers then the output layer
};

class Network {
  public:
    explicit Network(const NetworkSpec& spec);

    const NetworkSpec& spec() const { return spec_; }

    // Weight/bias (and gamma/beta for BN layers) in a fixed order:
    // per hidden layer w, b[, gamma, beta], then output w, b.
    std::vector<Tensor2*> params();
    std::vector<const Tensor2*> params() const;

    Tensor2 forward(const Tensor2& x, Mode mode, Rng& rng, ForwardCache* cache = nullptr);

    // Gradients aligned one to one with params(). Requires the cache of the
    // forward pass that produced the logits dlogits differentiates.
    std::vector<Tensor2> backward(const ForwardCache& cache, const Tensor2& dlogits);

    struct DenseLayer {
        Tensor2 w;  // fan_in x width
        Tensor2 b;  // 1 x width
        Activation activation{};
        double dropout_rate = 0.0;
        bool has_bn = false;
        BatchNormState bn;
    };

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

  private:
    NetworkSpec spec_;
    std::vector<DenseLayer> layers_;  // hidden layers + output layer
};

struct SoftmaxCeResult {
    double loss = 0.0;
    Tensor2 dlogits;
};

// Mean negative log softmax probability of the labels, log-sum-exp stabilized.
SoftmaxCeResult loss_softmax_ce(const Tensor2& logits, const std::vector<int>& labels);

std::vector<const Tensor2*> grad_ptrs(const std::vector<Tensor2>& grads);

}  // namespace serf
