#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "serf/tensor.hpp"

namespace serf {

enum class OptimTag { sgd, adam, adagrad };

struct OptimizerConfig {
    OptimTag tag = OptimTag::sgd;
    double lr = 0.01;
    double momentum = 0.0;  // sgd
    double beta1 = 0.9;     // adam
    double beta2 = 0.999;   // adam
    double eps = 1e-8;      // adam / adagrad
};

OptimizerConfig make_sgd(double lr, double momentum = 0.0);
OptimizerConfig make_adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
OptimizerConfig make_adagrad(double lr, double eps = 1e-10);

const char* optim_name(OptimTag tag);
std::optional<OptimTag> parse_optim_tag(std::string_view name);

// Holds per-parameter slot state. Slots are bound to parameter shapes on the
// first step; later steps reject any shape change.
class Optimizer {
  public:
    explicit Optimizer(const OptimizerConfig& config);

    // Applies one in-place update to every parameter from its gradient.
    // params and grads must pair up one to one with matching shapes.
    void step(const std::vector<Tensor2*>& params, const std::vector<const Tensor2*>& grads);

    const OptimizerConfig& config() const { return config_; }
    std::uint64_t steps_taken() const { return t_; }

  private:
    OptimizerConfig config_;
    std::uint64_t t_ = 0;
    double beta1_pow_ = 1.0;  // beta1^t, kept by running product
    double beta2_pow_ = 1.0;
    std::vector<Tensor2> slot_a_;  // sgd velocity / adam m / adagrad accumulator
    std::vector<Tensor2> slot_b_;  // adam v
};

}  // namespace serf
